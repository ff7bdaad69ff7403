#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Batch arithmetic kernels used by the sampling and spectral-evaluation inner
// loops. Every operation has a scalar reference implementation; an AVX2
// variant is selected at runtime when the host supports it. The two backends
// are equivalence-tested: counting/selection/linear kernels must agree
// bit-exactly, transcendental ones to ~1e-13 absolute.

namespace sis::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend();
bool backend_available(Backend b);
// Returns false (and leaves the backend unchanged) when b is unavailable.
bool set_backend(Backend b);
std::string_view backend_name();

// out[i] = s * x[i]
void scale(const double* x, std::size_t n, double s, double* out);
// out[i] = x[i] / d
void divide(const double* x, std::size_t n, double d, double* out);
// row-major 2x2 matrix applied to column pairs; out may not alias input
void affine2(const double* x, const double* y, std::size_t n, const double m[4], double* ox, double* oy);
// out[i] = sin^2(pi x) / (pi x)^2, continued with 1 at x = 0
void sinc_sq(const double* x, std::size_t n, double* out);
// out[i] = sin^2(pi x)
void sin_pi_sq(const double* x, std::size_t n, double* out);
double sum(const double* x, std::size_t n);
void minmax(const double* x, std::size_t n, double& mn, double& mx);
// #{ i : lo <= x[i] < hi }
std::size_t count_in_interval(const double* x, std::size_t n, double lo, double hi);
// #{ i : |x[i] - center| >= eps }
std::size_t count_abs_dev_ge(const double* x, std::size_t n, double center, double eps);
// #{ i : x[i] <= thr }
std::size_t count_le(const double* x, std::size_t n, double thr);
// out[i] = 1.0 when lo <= x[i] < hi, else 0.0
void select_in_interval(const double* x, std::size_t n, double lo, double hi, double* out);

namespace scalar {
void scale(const double* x, std::size_t n, double s, double* out);
void divide(const double* x, std::size_t n, double d, double* out);
void affine2(const double* x, const double* y, std::size_t n, const double m[4], double* ox, double* oy);
void sinc_sq(const double* x, std::size_t n, double* out);
void sin_pi_sq(const double* x, std::size_t n, double* out);
double sum(const double* x, std::size_t n);
void minmax(const double* x, std::size_t n, double& mn, double& mx);
std::size_t count_in_interval(const double* x, std::size_t n, double lo, double hi);
std::size_t count_abs_dev_ge(const double* x, std::size_t n, double center, double eps);
std::size_t count_le(const double* x, std::size_t n, double thr);
void select_in_interval(const double* x, std::size_t n, double lo, double hi, double* out);
}  // namespace scalar

#if defined(SIS_HAVE_AVX2_BUILD)
namespace avx2 {
void scale(const double* x, std::size_t n, double s, double* out);
void divide(const double* x, std::size_t n, double d, double* out);
void affine2(const double* x, const double* y, std::size_t n, const double m[4], double* ox, double* oy);
void sinc_sq(const double* x, std::size_t n, double* out);
void sin_pi_sq(const double* x, std::size_t n, double* out);
double sum(const double* x, std::size_t n);
void minmax(const double* x, std::size_t n, double& mn, double& mx);
std::size_t count_in_interval(const double* x, std::size_t n, double lo, double hi);
std::size_t count_abs_dev_ge(const double* x, std::size_t n, double center, double eps);
std::size_t count_le(const double* x, std::size_t n, double thr);
void select_in_interval(const double* x, std::size_t n, double lo, double hi, double* out);
}  // namespace avx2
#endif

}  // namespace sis::kernels
