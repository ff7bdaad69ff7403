#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sis/defaults.hpp"
#include "sis/dilation.hpp"
#include "sis/fourier.hpp"

namespace sis {

struct BracketResult {
    double value = 0.0;
    double tail_bound = 0.0;  // bound on the dropped lattice tail
};

/// Lattice periodization sum_{|k|_inf <= K} |f(xi + k)|^2 plus a tail bound.
/// Functions with a finite support box have exact (zero) tails; closed forms
/// need a decay certificate, otherwise TailUnbounded is thrown.
BracketResult bracket_product(const FourierFunction& f, std::span<const double> xi, int K);

inline int default_bracket_K(int dim) { return dim <= 1 ? defaults::bracket_K_1d : defaults::bracket_K_nd; }

/// Divides f pointwise by the square root of its bracket where the bracket
/// exceeds tau_supp and returns zero elsewhere; the result has bracket values
/// in {0} union [1 - tol, 1 + tol].
FourierFunction normalize_generator(const FourierFunction& f, int K);

struct GeneratorSystem {
    std::vector<FourierFunction> generators;
    DilationMatrix dilation;
    bool claimed_tight_frame = false;
    std::string label;

    int dim() const { return dilation.dim(); }
};

/// sigma_V = sum_alpha |phi^alpha^|^2 with a lazily enforced [0, 1 + tol]
/// range check (NotNormalized on violation, never clipped).
class SpectralFunction {
public:
    SpectralFunction() = default;

    double operator()(std::span<const double> x) const;
    double at1(double x) const { return (*this)(std::span<const double>(&x, 1)); }
    void eval_batch(const Block& pts, double* out) const;

    int dim() const { return fn_.dim(); }
    const DilationMatrix& dilation() const { return dilation_; }
    const RealFunction& raw() const { return fn_; }
    /// RealFunction view that keeps the range check on every evaluation.
    RealFunction as_real() const;
    const std::string& label() const { return fn_.label(); }
    bool has_edge_hint() const { return fn_.has_edge_hint(); }
    double edge_distance(std::span<const double> x) const { return fn_.edge_distance(x); }

    /// Wraps an explicit evaluator without the tight-frame provenance; range
    /// checking still applies unless check = false (synthetic test inputs).
    static SpectralFunction unchecked(RealFunction fn, DilationMatrix dilation, bool check = true);

private:
    friend SpectralFunction spectral_function(const GeneratorSystem&);
    RealFunction fn_;
    DilationMatrix dilation_;
    bool check_ = true;
    void enforce(double v, std::span<const double> x) const;
};

/// Builds sigma_V from a generator system. The system must either claim the
/// tight-frame property or be principal (one generator), in which case the
/// generator is normalized first.
SpectralFunction spectral_function(const GeneratorSystem& S);

struct FilterDiagnostics {
    double max_abs = 0.0;               // max |m| over defined samples
    double max_periodicity_dev = 0.0;   // max |m(xi+k) - m(xi)| over sampled congruent pairs
    double inconsistent_fraction = 0.0; // fraction with phi^(xi) = 0 but phi^(A* xi) != 0
    double max_residual = 0.0;          // max |phi^(A* xi) - m(xi) phi^(xi)| with m = 0 off the mask
    std::size_t samples = 0;
    std::size_t defined_samples = 0;
};

struct LowPassFilter {
    std::function<std::complex<double>(std::span<const double>)> eval;
    std::function<bool(std::span<const double>)> defined;
    FilterDiagnostics diagnostics;
};

/// Ratio estimate m(xi) = phi^(A* xi) / phi^(xi) on {|phi^| > sqrt(tau_supp)}
/// for a principal system, validated on a sampled box: throws FilterUnbounded
/// when |m| exceeds 1 + tol, FilterInconsistent when the support of
/// phi^(A* .) escapes the support of phi^ on a non-negligible sample fraction.
LowPassFilter estimate_filter(const GeneratorSystem& S, std::size_t samples = 4096,
                              std::uint64_t seed = defaults::probe_seed, double tol = defaults::filter_tol,
                              double box_radius = defaults::probe_box_radius);

struct RefinabilityReport {
    bool refinable = false;
    double worst_violation = 0.0;  // max of sigma(xi) - sigma(A*^-1 xi); <= tol when refinable
    std::vector<double> worst_location;
    std::size_t samples = 0;
};

/// Samples sigma(A*^-1 xi) >= sigma(xi) - tol over a box; the dilation comes
/// from the spectral function's source system.
RefinabilityReport check_refinable(const SpectralFunction& sigma, std::size_t samples, double tol,
                                   std::uint64_t seed = defaults::probe_seed,
                                   double box_radius = defaults::probe_box_radius);

}  // namespace sis
