#include "sis/kernels.hpp"

#if defined(SIS_HAVE_AVX2_BUILD)

#include <immintrin.h>

#include <bit>
#include <cmath>

// AVX2 variants of the batch kernels. The transcendental kernels reduce the
// argument with round-to-nearest (sin^2(pi x) is invariant under integer
// shifts of x, so no parity fixup is needed) and evaluate an odd Taylor
// polynomial for sin(y)/y on |y| <= pi/2; truncation error < 2e-18.

namespace sis::kernels::avx2 {

namespace {

constexpr double kPi = 3.14159265358979323846;

// sin(y)/y = sum_k c[k] y^(2k), coefficients (-1)^k / (2k+1)!
constexpr double kSinCoeff[11] = {
    1.0,
    -1.0 / 6.0,
    1.0 / 120.0,
    -1.0 / 5040.0,
    1.0 / 362880.0,
    -1.0 / 39916800.0,
    1.0 / 6227020800.0,
    -1.0 / 1307674368000.0,
    1.0 / 355687428096000.0,
    -1.0 / 121645100408832000.0,
    1.0 / 51090942171709440000.0,
};

inline __m256d sin_over_y(__m256d y2) {
    __m256d p = _mm256_set1_pd(kSinCoeff[10]);
    for (int k = 9; k >= 0; --k)
        p = _mm256_add_pd(_mm256_mul_pd(p, y2), _mm256_set1_pd(kSinCoeff[k]));
    return p;
}

inline __m256d abs_pd(__m256d v) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    return _mm256_and_pd(v, mask);
}

}  // namespace

void scale(const double* x, std::size_t n, double s, double* out) {
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_mul_pd(vs, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) out[i] = s * x[i];
}

void divide(const double* x, std::size_t n, double d, double* out) {
    const __m256d vd = _mm256_set1_pd(d);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_loadu_pd(x + i), vd));
    for (; i < n; ++i) out[i] = x[i] / d;
}

void affine2(const double* x, const double* y, std::size_t n, const double m[4], double* ox, double* oy) {
    const __m256d m00 = _mm256_set1_pd(m[0]);
    const __m256d m01 = _mm256_set1_pd(m[1]);
    const __m256d m10 = _mm256_set1_pd(m[2]);
    const __m256d m11 = _mm256_set1_pd(m[3]);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        const __m256d vy = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(ox + i, _mm256_add_pd(_mm256_mul_pd(m00, vx), _mm256_mul_pd(m01, vy)));
        _mm256_storeu_pd(oy + i, _mm256_add_pd(_mm256_mul_pd(m10, vx), _mm256_mul_pd(m11, vy)));
    }
    for (; i < n; ++i) {
        const double a = m[0] * x[i];
        const double b = m[1] * y[i];
        const double c = m[2] * x[i];
        const double d = m[3] * y[i];
        ox[i] = a + b;
        oy[i] = c + d;
    }
}

void sinc_sq(const double* x, std::size_t n, double* out) {
    const __m256d vpi = _mm256_set1_pd(kPi);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d third = _mm256_set1_pd(1.0 / 3.0);
    const __m256d small = _mm256_set1_pd(1e-8);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        const __m256d r = _mm256_sub_pd(vx, _mm256_round_pd(vx, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC));
        const __m256d y = _mm256_mul_pd(vpi, r);
        const __m256d y2 = _mm256_mul_pd(y, y);
        const __m256d s = _mm256_mul_pd(y, sin_over_y(y2));
        const __m256d d = _mm256_mul_pd(vpi, vx);
        const __m256d main = _mm256_div_pd(_mm256_mul_pd(s, s), _mm256_mul_pd(d, d));
        // Taylor branch near zero: 1 - (pi x)^2 / 3
        const __m256d t = _mm256_mul_pd(vpi, vx);
        const __m256d taylor = _mm256_sub_pd(one, _mm256_mul_pd(third, _mm256_mul_pd(t, t)));
        const __m256d is_small = _mm256_cmp_pd(abs_pd(vx), small, _CMP_LT_OQ);
        _mm256_storeu_pd(out + i, _mm256_blendv_pd(main, taylor, is_small));
    }
    for (; i < n; ++i) {
        const double ax = std::fabs(x[i]);
        if (ax < 1e-8) {
            const double t = kPi * x[i];
            out[i] = 1.0 - t * t / 3.0;
        } else {
            const double r = x[i] - std::nearbyint(x[i]);
            const double y = kPi * r;
            const double y2 = y * y;
            double p = kSinCoeff[10];
            for (int k = 9; k >= 0; --k) p = p * y2 + kSinCoeff[k];
            const double s = y * p;
            const double d = kPi * x[i];
            out[i] = (s * s) / (d * d);
        }
    }
}

void sin_pi_sq(const double* x, std::size_t n, double* out) {
    const __m256d vpi = _mm256_set1_pd(kPi);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        const __m256d r = _mm256_sub_pd(vx, _mm256_round_pd(vx, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC));
        const __m256d y = _mm256_mul_pd(vpi, r);
        const __m256d y2 = _mm256_mul_pd(y, y);
        const __m256d s = _mm256_mul_pd(y, sin_over_y(y2));
        _mm256_storeu_pd(out + i, _mm256_mul_pd(s, s));
    }
    for (; i < n; ++i) {
        const double r = x[i] - std::nearbyint(x[i]);
        const double y = kPi * r;
        const double y2 = y * y;
        double p = kSinCoeff[10];
        for (int k = 9; k >= 0; --k) p = p * y2 + kSinCoeff[k];
        const double s = y * p;
        out[i] = s * s;
    }
}

double sum(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) total += x[i];
    return total;
}

void minmax(const double* x, std::size_t n, double& mn, double& mx) {
    if (n == 0) {
        mn = 0.0;
        mx = 0.0;
        return;
    }
    double lo = x[0], hi = x[0];
    std::size_t i = 0;
    if (n >= 4) {
        __m256d vlo = _mm256_loadu_pd(x);
        __m256d vhi = vlo;
        for (i = 4; i + 4 <= n; i += 4) {
            const __m256d v = _mm256_loadu_pd(x + i);
            vlo = _mm256_min_pd(vlo, v);
            vhi = _mm256_max_pd(vhi, v);
        }
        alignas(32) double a[4], b[4];
        _mm256_store_pd(a, vlo);
        _mm256_store_pd(b, vhi);
        lo = a[0];
        hi = b[0];
        for (int k = 1; k < 4; ++k) {
            if (a[k] < lo) lo = a[k];
            if (b[k] > hi) hi = b[k];
        }
    }
    for (; i < n; ++i) {
        if (x[i] < lo) lo = x[i];
        if (x[i] > hi) hi = x[i];
    }
    mn = lo;
    mx = hi;
}

std::size_t count_in_interval(const double* x, std::size_t n, double lo, double hi) {
    const __m256d vlo = _mm256_set1_pd(lo);
    const __m256d vhi = _mm256_set1_pd(hi);
    std::size_t c = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        const __m256d m = _mm256_and_pd(_mm256_cmp_pd(v, vlo, _CMP_GE_OQ), _mm256_cmp_pd(v, vhi, _CMP_LT_OQ));
        c += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(_mm256_movemask_pd(m))));
    }
    for (; i < n; ++i) c += (x[i] >= lo && x[i] < hi) ? 1 : 0;
    return c;
}

std::size_t count_abs_dev_ge(const double* x, std::size_t n, double center, double eps) {
    const __m256d vc = _mm256_set1_pd(center);
    const __m256d ve = _mm256_set1_pd(eps);
    std::size_t c = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d dev = abs_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), vc));
        const __m256d m = _mm256_cmp_pd(dev, ve, _CMP_GE_OQ);
        c += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(_mm256_movemask_pd(m))));
    }
    for (; i < n; ++i) c += (std::fabs(x[i] - center) >= eps) ? 1 : 0;
    return c;
}

std::size_t count_le(const double* x, std::size_t n, double thr) {
    const __m256d vt = _mm256_set1_pd(thr);
    std::size_t c = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d m = _mm256_cmp_pd(_mm256_loadu_pd(x + i), vt, _CMP_LE_OQ);
        c += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(_mm256_movemask_pd(m))));
    }
    for (; i < n; ++i) c += (x[i] <= thr) ? 1 : 0;
    return c;
}

void select_in_interval(const double* x, std::size_t n, double lo, double hi, double* out) {
    const __m256d vlo = _mm256_set1_pd(lo);
    const __m256d vhi = _mm256_set1_pd(hi);
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        const __m256d m = _mm256_and_pd(_mm256_cmp_pd(v, vlo, _CMP_GE_OQ), _mm256_cmp_pd(v, vhi, _CMP_LT_OQ));
        _mm256_storeu_pd(out + i, _mm256_and_pd(m, one));
    }
    for (; i < n; ++i) out[i] = (x[i] >= lo && x[i] < hi) ? 1.0 : 0.0;
}

}  // namespace sis::kernels::avx2

#endif  // SIS_HAVE_AVX2_BUILD
