#include "sis/kernels.hpp"

#include <cmath>

namespace sis::kernels::scalar {

namespace {
constexpr double kPi = 3.14159265358979323846;

inline double sinc_sq_one(double x) {
    const double ax = std::fabs(x);
    if (ax < 1e-8) {
        const double t = kPi * x;
        return 1.0 - t * t / 3.0;
    }
    const double r = x - std::nearbyint(x);
    const double s = std::sin(kPi * r);
    const double d = kPi * x;
    return (s * s) / (d * d);
}

inline double sin_pi_sq_one(double x) {
    const double r = x - std::nearbyint(x);
    const double s = std::sin(kPi * r);
    return s * s;
}
}  // namespace

void scale(const double* x, std::size_t n, double s, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = s * x[i];
}

void divide(const double* x, std::size_t n, double d, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] / d;
}

void affine2(const double* x, const double* y, std::size_t n, const double m[4], double* ox, double* oy) {
    for (std::size_t i = 0; i < n; ++i) {
        const double a = m[0] * x[i];
        const double b = m[1] * y[i];
        const double c = m[2] * x[i];
        const double d = m[3] * y[i];
        ox[i] = a + b;
        oy[i] = c + d;
    }
}

void sinc_sq(const double* x, std::size_t n, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = sinc_sq_one(x[i]);
}

void sin_pi_sq(const double* x, std::size_t n, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = sin_pi_sq_one(x[i]);
}

double sum(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

void minmax(const double* x, std::size_t n, double& mn, double& mx) {
    if (n == 0) {
        mn = 0.0;
        mx = 0.0;
        return;
    }
    double lo = x[0], hi = x[0];
    for (std::size_t i = 1; i < n; ++i) {
        if (x[i] < lo) lo = x[i];
        if (x[i] > hi) hi = x[i];
    }
    mn = lo;
    mx = hi;
}

std::size_t count_in_interval(const double* x, std::size_t n, double lo, double hi) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += (x[i] >= lo && x[i] < hi) ? 1 : 0;
    return c;
}

std::size_t count_abs_dev_ge(const double* x, std::size_t n, double center, double eps) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += (std::fabs(x[i] - center) >= eps) ? 1 : 0;
    return c;
}

std::size_t count_le(const double* x, std::size_t n, double thr) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += (x[i] <= thr) ? 1 : 0;
    return c;
}

void select_in_interval(const double* x, std::size_t n, double lo, double hi, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (x[i] >= lo && x[i] < hi) ? 1.0 : 0.0;
}

}  // namespace sis::kernels::scalar
