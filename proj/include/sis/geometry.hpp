#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sis/dilation.hpp"
#include "sis/fourier.hpp"
#include "sis/region.hpp"
#include "sis/sampler.hpp"

namespace sis {

enum class Verdict { PASS, FAIL, INCONCLUSIVE };
const char* to_string(Verdict v);

// Decision rule shared by all estimators: scores at or above the threshold
// pass; scores more than three standard errors below it fail decisively;
// anything straddling the threshold within sampling error is inconclusive.
Verdict decide_ge(double threshold, double score, double se);

// One diagnostic row: a per-level (or per-bucket) statistic.
struct LevelStat {
    int j = 0;
    double value = 0.0;
    double se = 0.0;
    std::size_t denom = 0;
    double eps = -1.0;  // ladder level when applicable, else -1
};

struct VerdictTrace {
    Verdict verdict = Verdict::INCONCLUSIVE;
    double score = 0.0;
    std::vector<LevelStat> trace;
    std::string note;
};

struct MeasureEstimate {
    double ratio = 0.0;
    double se = 0.0;
    std::size_t hits_g = 0;
    std::size_t n = 0;
};

// All estimators below sample the FIXED reference set (a ball or box) and
// pull points back through A^-j, instead of sampling the shrinking sets
// A^-j B_r directly: |A^-j S| = d_A^-j |S| makes the pulled-back ratio equal
// to the target ratio while keeping uniform sample density at every level.

/// |E cap G cap A^-j B_r| / |G cap A^-j B_r| with a binomial standard error.
MeasureEstimate relative_measure(const Region& E, const Region& G, const DilationMatrix& A, int j, double r,
                                 const DensityProbe& probe);

/// Origin as a point of (G, A)-density for E: the ratio must reach 1 - eps on
/// a terminal window of levels and for radii r in {1/2, 1, 2}.
VerdictTrace is_density_point(const Region& E, const Region& G, const DilationMatrix& A,
                              const DensityProbe& probe);

/// Epsilon-ladder rendering of approximate continuity at the origin: for each
/// eps in {1e-1, 1e-2, 1e-3} some j0 <= j_max must make the fraction of
/// G cap A^-j B_1 where |f - f0| >= eps stay below eps for all j in
/// [j0, j_max].
VerdictTrace is_approx_continuity_point(const RealFunction& f, double f0, const Region& G,
                                        const DilationMatrix& A, const DensityProbe& probe);

/// Zero-set fraction of f over G cap A^-j B_1 must fall below eps on the
/// terminal window (zero test |f| <= tau_supp).
VerdictTrace is_locally_nonzero(const RealFunction& f, const Region& G, const DilationMatrix& A,
                                const DensityProbe& probe);

/// A^-1-absorbing in G: almost every sampled xi in G has a finite j0 with
/// A^-j xi in E for all j0 <= j <= j_max. The trace holds the j0 histogram.
VerdictTrace is_absorbing(const Region& E, const Region& G, const DilationMatrix& A,
                          const DensityProbe& probe);

/// Membership of G is preserved by xi -> A xi on >= 1 - eps of box samples.
VerdictTrace check_invariant_set(const Region& G, const DilationMatrix& A, const DensityProbe& probe);

/// Tail values of f(A^-j xi) over the terminal window for sampled xi in G.
struct SubsequenceResult {
    Block samples;                       // the G-conditioned sample points
    std::vector<double> tails;           // f(A^-j_max xi)
    std::vector<unsigned char> converged;  // tail oscillation < tol (or monotone)
    std::size_t non_convergent = 0;
    std::vector<LevelStat> trace;        // per-level mean over samples
};
SubsequenceResult subsequence_limit(const RealFunction& f, const Region& G, const DilationMatrix& A,
                                    const DensityProbe& probe);

/// Uniform samples from a region: exact for interval unions and boxes,
/// rejection from [-fallback_radius, fallback_radius]^d otherwise.
Block sample_region(const Region& E, int dim, std::size_t n, std::uint64_t seed, double fallback_radius);

inline constexpr double kApproxContLadder[3] = {1e-1, 1e-2, 1e-3};

}  // namespace sis
