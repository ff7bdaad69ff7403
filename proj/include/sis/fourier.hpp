#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sis/block.hpp"
#include "sis/interval.hpp"

namespace sis {

struct BoxRegion {
    std::vector<double> lo, hi;
    int dim() const { return static_cast<int>(lo.size()); }
    bool contains(std::span<const double> x) const {
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (!(x[i] >= lo[i] && x[i] < hi[i])) return false;
        return true;
    }
    double volume() const {
        double v = 1.0;
        for (std::size_t i = 0; i < lo.size(); ++i) v *= (hi[i] - lo[i]);
        return v;
    }
};

// Polynomial decay certificate: |f(xi)| <= coeff * (1 + |xi|)^(-exponent).
struct Decay {
    double coeff = 1.0;
    double exponent = 1.0;
};

/// Real-valued function on R^d with an optional batch evaluator and optional
/// distance-to-discontinuity hint (used to flag boundary samples of
/// indicator-type functions).
class RealFunction {
public:
    using Eval = std::function<double(std::span<const double>)>;
    using BatchEval = std::function<void(const Block&, double*)>;
    using EdgeDist = std::function<double(std::span<const double>)>;

    RealFunction() = default;
    RealFunction(int dim, Eval eval, std::string label = {})
        : dim_(dim), eval_(std::move(eval)), label_(std::move(label)) {}

    RealFunction& with_batch(BatchEval b) { batch_ = std::move(b); return *this; }
    RealFunction& with_edge_distance(EdgeDist e) { edge_ = std::move(e); return *this; }

    int dim() const { return dim_; }
    const std::string& label() const { return label_; }

    double operator()(std::span<const double> x) const { return eval_(x); }
    double at1(double x) const { return eval_(std::span<const double>(&x, 1)); }

    void eval_batch(const Block& pts, double* out) const {
        if (batch_) {
            batch_(pts, out);
            return;
        }
        double p[kMaxDim];
        for (std::size_t i = 0; i < pts.n; ++i) {
            pts.point(i, std::span<double>(p, static_cast<std::size_t>(pts.dim)));
            out[i] = eval_(std::span<const double>(p, static_cast<std::size_t>(pts.dim)));
        }
    }

    bool has_edge_hint() const { return static_cast<bool>(edge_); }
    double edge_distance(std::span<const double> x) const;

private:
    int dim_ = 1;
    Eval eval_;
    BatchEval batch_;
    EdgeDist edge_;
    std::string label_;
};

/// Fourier-side function xi -> f^(xi), either closed-form or backed by a
/// gridded sample table (piecewise-constant inside its box, zero outside).
/// Tail control for lattice sums comes from either a finite support box or a
/// polynomial decay certificate.
class FourierFunction {
public:
    using Eval = std::function<std::complex<double>(std::span<const double>)>;
    using BatchAbsSq = std::function<void(const Block&, double*)>;
    using EdgeDist = std::function<double(std::span<const double>)>;

    FourierFunction() = default;
    FourierFunction(int dim, Eval eval, std::string label = {})
        : dim_(dim), eval_(std::move(eval)), label_(std::move(label)) {}

    FourierFunction& with_decay(Decay d) { decay_ = d; return *this; }
    FourierFunction& with_support(BoxRegion b) { support_ = std::move(b); return *this; }
    FourierFunction& with_batch_abs_sq(BatchAbsSq b) { batch_abs_sq_ = std::move(b); return *this; }
    FourierFunction& with_edge_distance(EdgeDist e) { edge_ = std::move(e); return *this; }

    int dim() const { return dim_; }
    const std::string& label() const { return label_; }
    const std::optional<Decay>& decay() const { return decay_; }
    const std::optional<BoxRegion>& support() const { return support_; }
    bool has_tail_control() const { return support_.has_value() || decay_.has_value(); }

    std::complex<double> operator()(std::span<const double> x) const { return eval_(x); }
    std::complex<double> at1(double x) const { return eval_(std::span<const double>(&x, 1)); }

    double abs_sq(std::span<const double> x) const { return std::norm(eval_(x)); }
    void abs_sq_batch(const Block& pts, double* out) const;

    bool has_edge_hint() const { return static_cast<bool>(edge_); }
    double edge_distance(std::span<const double> x) const;

    /// |f| as a real function (batch path squares through abs_sq).
    RealFunction abs() const;

    /// Indicator of a finite interval union (d = 1); exact values in {0, 1}.
    static FourierFunction indicator_1d(IntervalSet set, std::string label = {});
    /// Indicator of an axis-aligned half-open box.
    static FourierFunction indicator_box(BoxRegion box, std::string label = {});

    /// Piecewise-constant gridded table. cells[i] covers
    /// [lo + i*h, lo + (i+1)*h) per axis, row-major for d = 2.
    static FourierFunction from_grid(BoxRegion box, std::vector<std::size_t> resolution,
                                     std::vector<std::complex<double>> cells, std::string label = {});

    static FourierFunction load_grid_csv(const std::string& path);
    static FourierFunction load_grid_binary(const std::string& path);
    static void save_grid_binary(const std::string& path, const BoxRegion& box,
                                 const std::vector<std::size_t>& resolution,
                                 const std::vector<std::complex<double>>& cells);

private:
    int dim_ = 1;
    Eval eval_;
    BatchAbsSq batch_abs_sq_;
    EdgeDist edge_;
    std::optional<Decay> decay_;
    std::optional<BoxRegion> support_;
    std::string label_;
};

}  // namespace sis
