#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sis {

struct QuadConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_intervals = 20000;
};

/// Adaptive Gauss-Kronrod (G7/K15) integration over [a, b]. Bisects the
/// interval with the largest error estimate until the total estimate meets
/// the tolerance; throws QuadratureNonConvergent past the interval budget.
double integrate(const std::function<double(double)>& f, double a, double b, const QuadConfig& cfg = {});

/// Iterated 1D integration over an axis-aligned box (d <= 2).
double integrate_box(const std::function<double(std::span<const double>)>& f,
                     std::span<const double> lo, std::span<const double> hi, const QuadConfig& cfg = {});

}  // namespace sis
