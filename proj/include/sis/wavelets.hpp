#pragma once

#include <utility>
#include <vector>

#include "sis/genspace.hpp"
#include "sis/geometry.hpp"

namespace sis {

/// Finite affine wavelet family on the Fourier side.
struct WaveletSystem {
    std::vector<FourierFunction> psis;
    DilationMatrix dilation;
    Region G;
    bool semiorthogonal_claimed = false;
    std::string label;

    int dim() const { return dilation.dim(); }
};

struct CalderonSample {
    double value = 0.0;
    bool boundary_flag = false;  // xi within boundary_h of a support edge
};

/// sum_alpha sum_{|j| <= j_range} |psi^alpha^(A*^j xi)|^2. For a tight frame
/// of H^2_G this equals chi_G(xi) at interior points.
CalderonSample calderon_sum(const WaveletSystem& W, std::span<const double> xi,
                            int j_range = defaults::calderon_j_range);

struct CalderonCheck {
    Verdict verdict = Verdict::INCONCLUSIVE;
    double max_abs_dev = 0.0;  // max |sum - chi_G| over interior samples
    std::size_t samples = 0;
    std::size_t boundary_skipped = 0;
};

/// Sampled Calderon condition over the probe box, boundary samples excluded
/// from the statistics and counted separately.
CalderonCheck calderon_check(const WaveletSystem& W, std::size_t samples, std::uint64_t seed,
                             int j_range = defaults::calderon_j_range, double tol = 1e-6,
                             double box_radius = defaults::probe_box_radius);

/// Spectral function of the complement space: xi -> sigma(A*^-1 xi) - sigma(xi).
/// Throws NegativeSpectral on evaluation when the difference dips below -tol
/// (a refinability inconsistency).
RealFunction sigma_from_core(const SpectralFunction& core, double tol = defaults::spectral_diff_tol);

/// Per-generator origin test: the origin must be a point of A*-approximate
/// continuity of |psi^alpha| with the value 0 (full-space test).
std::vector<std::pair<int, VerdictTrace>> wavelet_origin_test(const WaveletSystem& W,
                                                              const DensityProbe& probe);

struct SemiOrthOptions {
    int j_small = defaults::semiorth_j_small;
    int lattice_K = 4096;
    std::size_t samples = 256;
    std::uint64_t seed = defaults::probe_seed;
    double tol = 1e-4;
    // t_j is Z^d-periodic; sampling the fundamental cell suffices
    double box_radius = 0.5;
};

/// Fourier-side shift-orthogonality of dilation levels: for j = 1..j_small
/// t_j(xi) = sum_alpha sum_k psi^(A*^j (xi+k)) conj(psi^(xi+k)) must vanish.
VerdictTrace semiorthogonality_check(const WaveletSystem& W, const SemiOrthOptions& opt = {});

}  // namespace sis
