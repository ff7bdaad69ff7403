#include "sis/kernels.hpp"

#include <cstdlib>
#include <string>

namespace sis::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(SIS_HAVE_AVX2_BUILD) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend pick_initial() {
    if (const char* env = std::getenv("SIS_KERNELS")) {
        const std::string v(env);
        if (v == "scalar") return Backend::scalar;
        if (v == "avx2" && cpu_has_avx2()) return Backend::avx2;
    }
    return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

Backend& current() {
    static Backend b = pick_initial();
    return b;
}

}  // namespace

Backend active_backend() { return current(); }

bool backend_available(Backend b) {
    if (b == Backend::scalar) return true;
    return cpu_has_avx2();
}

bool set_backend(Backend b) {
    if (!backend_available(b)) return false;
    current() = b;
    return true;
}

std::string_view backend_name() {
    return current() == Backend::avx2 ? "avx2" : "scalar";
}

#if defined(SIS_HAVE_AVX2_BUILD)
#define SIS_DISPATCH(fn, ...) \
    return current() == Backend::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__)
#else
#define SIS_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

void scale(const double* x, std::size_t n, double s, double* out) { SIS_DISPATCH(scale, x, n, s, out); }
void divide(const double* x, std::size_t n, double d, double* out) { SIS_DISPATCH(divide, x, n, d, out); }
void affine2(const double* x, const double* y, std::size_t n, const double m[4], double* ox, double* oy) {
    SIS_DISPATCH(affine2, x, y, n, m, ox, oy);
}
void sinc_sq(const double* x, std::size_t n, double* out) { SIS_DISPATCH(sinc_sq, x, n, out); }
void sin_pi_sq(const double* x, std::size_t n, double* out) { SIS_DISPATCH(sin_pi_sq, x, n, out); }
double sum(const double* x, std::size_t n) { SIS_DISPATCH(sum, x, n); }
void minmax(const double* x, std::size_t n, double& mn, double& mx) { SIS_DISPATCH(minmax, x, n, mn, mx); }
std::size_t count_in_interval(const double* x, std::size_t n, double lo, double hi) {
    SIS_DISPATCH(count_in_interval, x, n, lo, hi);
}
std::size_t count_abs_dev_ge(const double* x, std::size_t n, double center, double eps) {
    SIS_DISPATCH(count_abs_dev_ge, x, n, center, eps);
}
std::size_t count_le(const double* x, std::size_t n, double thr) { SIS_DISPATCH(count_le, x, n, thr); }
void select_in_interval(const double* x, std::size_t n, double lo, double hi, double* out) {
    SIS_DISPATCH(select_in_interval, x, n, lo, hi, out);
}

#undef SIS_DISPATCH

}  // namespace sis::kernels
