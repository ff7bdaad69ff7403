#include "sis/registry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "sis/errors.hpp"
#include "sis/kernels.hpp"
#include "sis/region.hpp"

namespace sis::registry {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sinc(double x) {
    if (std::fabs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

FourierFunction haar_hat() {
    FourierFunction f(
        1,
        [](std::span<const double> x) {
            const double xi = x[0];
            const double s = sinc(kPi * xi);
            return s * std::polar(1.0, -kPi * xi);
        },
        "haar");
    f.with_batch_abs_sq([](const Block& pts, double* out) { kernels::sinc_sq(pts.col(0), pts.n, out); });
    f.with_decay(Decay{2.0, 1.0});
    return f;
}

FourierFunction haar_wavelet_hat() {
    FourierFunction f(
        1,
        [](std::span<const double> x) -> std::complex<double> {
            const double xi = x[0];
            if (xi == 0.0) return {0.0, 0.0};
            const double h = kPi * xi / 2.0;
            const double s = std::sin(h);
            const double mag = s * s / h;
            return std::complex<double>(0.0, mag) * std::polar(1.0, -kPi * xi);
        },
        "haar-wavelet");
    f.with_batch_abs_sq([](const Block& pts, double* out) {
        // |psi^(xi)|^2 = sin^2(pi xi/2) * sinc^2(pi xi/2)
        std::vector<double> half(pts.n), s2(pts.n);
        kernels::scale(pts.col(0), pts.n, 0.5, half.data());
        kernels::sin_pi_sq(half.data(), pts.n, s2.data());
        kernels::sinc_sq(half.data(), pts.n, out);
        for (std::size_t i = 0; i < pts.n; ++i) out[i] *= s2[i];
    });
    f.with_decay(Decay{1.5, 1.0});
    return f;
}

// Normalized B-spline generator: phi^ = (e^{-i pi xi} sinc(pi xi))^n / sqrt(b_n)
// with b_n the closed-form bracket (a cosine polynomial from the 2n-order
// spline autocorrelation).
struct BsplineBracket {
    std::vector<double> a;  // a[k] = <B_n, B_n(.-k)> = B_2n(n + k), k = 0..n-1

    double operator()(double xi) const {
        double b = a[0];
        for (std::size_t k = 1; k < a.size(); ++k)
            b += 2.0 * a[k] * std::cos(2.0 * kPi * static_cast<double>(k) * xi);
        return b;
    }
};

FourierFunction bspline_hat(int n) {
    BsplineBracket bracket;
    for (int k = 0; k < n; ++k) bracket.a.push_back(bspline_value(2 * n, static_cast<double>(n + k)));

    FourierFunction f(
        1,
        [n, bracket](std::span<const double> x) {
            const double xi = x[0];
            const double s = std::pow(sinc(kPi * xi), n);
            return (s / std::sqrt(bracket(xi))) * std::polar(1.0, -kPi * xi * static_cast<double>(n));
        },
        "bspline:" + std::to_string(n));
    f.with_batch_abs_sq([n, bracket](const Block& pts, double* out) {
        const std::size_t m = pts.n;
        std::vector<double> s2(m);
        kernels::sinc_sq(pts.col(0), m, s2.data());
        const double* xs = pts.col(0);
        for (std::size_t i = 0; i < m; ++i) {
            double v = s2[i];
            for (int r = 1; r < n; ++r) v *= s2[i];
            out[i] = v / bracket(xs[i]);
        }
    });
    // |phi^| <= 2^n / sqrt(min b); the bracket of a tight generator is 1 on
    // its support but the closed-form lower bound keeps the certificate cheap
    double bmin = 1.0;
    for (int i = 0; i <= 4096; ++i) bmin = std::min(bmin, bracket(static_cast<double>(i) / 4096.0));
    f.with_decay(Decay{std::pow(2.0, n) / std::sqrt(std::max(bmin, 1e-6)), static_cast<double>(n)});
    return f;
}

DilationMatrix dyadic() { return DilationMatrix::validate_expansive({{2}}); }

DilationMatrix quincunx() { return DilationMatrix::validate_expansive({{1, 1}, {1, -1}}); }

}  // namespace

double bspline_value(int m, double x) {
    if (m < 1) throw ConfigError("spline order must be positive");
    if (m == 1) return (x >= 0.0 && x < 1.0) ? 1.0 : 0.0;
    if (x <= 0.0 || x >= static_cast<double>(m)) return 0.0;
    return (x * bspline_value(m - 1, x) + (static_cast<double>(m) - x) * bspline_value(m - 1, x - 1.0)) /
           static_cast<double>(m - 1);
}

bool is_generator_key(const std::string& key) {
    if (key == "haar" || key == "shannon" || key == "hardy-shannon" || key == "quincunx-shannon") return true;
    return key.rfind("bspline:", 0) == 0;
}

bool is_wavelet_key(const std::string& key) {
    return key == "haar-wavelet" || key == "shannon-wavelet" || key == "journe" ||
           key == "shannon-wavelet-perturbed";
}

GeneratorEntry make_generator(const std::string& key) {
    GeneratorEntry e;
    e.key = key;
    if (key == "haar") {
        e.system = {{haar_hat()}, dyadic(), true, "haar"};
        e.completeness = {{"all", true}};
        e.default_G = "all";
        return e;
    }
    if (key == "shannon") {
        e.system = {{FourierFunction::indicator_1d({{Interval{-0.5, 0.5, false, true}}}, "shannon")},
                    dyadic(),
                    true,
                    "shannon"};
        e.completeness = {{"all", true}};
        e.default_G = "all";
        return e;
    }
    if (key == "hardy-shannon") {
        e.system = {{FourierFunction::indicator_1d({{Interval{0.0, 0.5, true, false}}}, "hardy-shannon")},
                    dyadic(),
                    true,
                    "hardy-shannon"};
        e.completeness = {{"halfspace(0,0)", true}, {"all", false}};
        e.default_G = "halfspace(0,0)";
        return e;
    }
    if (key == "quincunx-shannon") {
        e.system = {{FourierFunction::indicator_box({{-0.5, -0.5}, {0.5, 0.5}}, "quincunx-shannon")},
                    quincunx(),
                    true,
                    "quincunx-shannon"};
        e.completeness = {{"all", true}};
        e.default_G = "all";
        return e;
    }
    if (key.rfind("bspline:", 0) == 0) {
        int n = 0;
        try {
            n = std::stoi(key.substr(8));
        } catch (...) {
            throw ConfigError("bad spline order in '" + key + "'");
        }
        if (n < 1 || n > 10) throw ConfigError("spline order must be in [1, 10]");
        e.system = {{bspline_hat(n)}, dyadic(), true, key};
        e.completeness = {{"all", true}};
        e.default_G = "all";
        return e;
    }
    throw ConfigError("unknown generator key '" + key + "'");
}

WaveletEntry make_wavelet(const std::string& key) {
    WaveletEntry e;
    e.key = key;
    if (key == "haar-wavelet") {
        e.system = {{haar_wavelet_hat()}, dyadic(), Region::all(1), true, "haar-wavelet"};
        e.core_key = "haar";
        return e;
    }
    if (key == "shannon-wavelet") {
        e.system = {{FourierFunction::indicator_1d(
                        {{Interval{-1.0, -0.5, false, true}, Interval{0.5, 1.0, false, true}}},
                        "shannon-wavelet")},
                    dyadic(),
                    Region::all(1),
                    true,
                    "shannon-wavelet"};
        e.core_key = "shannon";
        return e;
    }
    if (key == "journe") {
        const double a = 16.0 / 7.0;
        const double b = 2.0 / 7.0;
        e.system = {{FourierFunction::indicator_1d({{Interval{-a, -2.0, false, true},
                                                     Interval{-0.5, -b, false, true},
                                                     Interval{b, 0.5, false, true},
                                                     Interval{2.0, a, false, true}}},
                                                   "journe")},
                    dyadic(),
                    Region::all(1),
                    true,
                    "journe"};
        return e;
    }
    if (key == "shannon-wavelet-perturbed") {
        e.system = {{FourierFunction::indicator_1d({{Interval{-1.0, -0.5, false, true},
                                                     Interval{-0.05, 0.05, false, true},
                                                     Interval{0.5, 1.0, false, true}}},
                                                   "shannon-wavelet-perturbed")},
                    dyadic(),
                    Region::all(1),
                    true,
                    "shannon-wavelet-perturbed"};
        e.expect_calderon_pass = false;
        return e;
    }
    throw ConfigError("unknown wavelet key '" + key + "'");
}

std::vector<std::string> generator_keys() {
    return {"haar", "shannon", "bspline:2", "bspline:3", "hardy-shannon", "quincunx-shannon"};
}

std::vector<std::string> wavelet_keys() {
    return {"haar-wavelet", "shannon-wavelet", "journe", "shannon-wavelet-perturbed"};
}

}  // namespace sis::registry
