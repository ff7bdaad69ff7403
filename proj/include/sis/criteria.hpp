#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sis/genspace.hpp"
#include "sis/geometry.hpp"
#include "sis/quadrature.hpp"

namespace sis {

// Computable completeness characterizations. Every criterion probes the local
// behaviour of the spectral function at the origin under iterated inverse
// adjoint dilation; on a refinable system with Supp(sigma) inside an
// A*-invariant G they are all equivalent, which run_suite() exploits as a
// cross-check (consensus).
enum class CriterionId {
    C2_support_union,
    C3_cesaro,
    C4_absorbing,
    C5_limit_positive,
    C6_limit_one,
    C7_locally_nonzero,
    C8_approx_continuity,
    P_projection_norm,
};
const char* to_string(CriterionId id);

struct CriterionReport {
    CriterionId id = CriterionId::C2_support_union;
    Verdict verdict = Verdict::INCONCLUSIVE;
    double score = 0.0;
    double tolerance = 0.0;
    std::vector<LevelStat> trace;
    std::string note;
};

/// Union of A*^j (Supp sigma) over j in [-j_max, j_max] must cover G: sampled
/// xi in G must have sigma(A*^-j xi) > tau_supp for some j (both directions).
CriterionReport c2_support_union(const SpectralFunction& sigma, const Region& G, const DensityProbe& probe);

/// Cesaro-type averages: mean of sigma(A*^-j x) over x uniform in E tends
/// to 1 (pull-back form of the normalized integral over A*^-j E).
CriterionReport c3_cesaro(const SpectralFunction& sigma, const Region& E, const DensityProbe& probe);

/// Supp(sigma) is A*^-1-absorbing in G.
CriterionReport c4_absorbing(const SpectralFunction& sigma, const Region& G, const DensityProbe& probe);

/// lim_j sigma(A*^-j xi) > 0 for almost every xi in G.
CriterionReport c5_limit_positive(const SpectralFunction& sigma, const Region& G, const DensityProbe& probe);

/// lim_j sigma(A*^-j xi) = 1 for almost every xi in G.
CriterionReport c6_limit_one(const SpectralFunction& sigma, const Region& G, const DensityProbe& probe,
                             double eps_val = defaults::eps_val);

/// sigma is (G, A*)-locally nonzero at the origin.
CriterionReport c7_locally_nonzero(const SpectralFunction& sigma, const Region& G, const DensityProbe& probe);

/// The origin is a point of (G, A*)-approximate continuity of sigma with
/// sigma(0) = 1.
CriterionReport c8_approx_continuity(const SpectralFunction& sigma, const Region& G, const DensityProbe& probe);

/// d_A^j * integral of sigma over A*^-j E, computed as the pull-back
/// quadrature integral of sigma(A*^-j x) over E. E needs exact geometry
/// (interval union or box). Converges to |E| exactly when the suite passes.
double projection_norm_sq(const SpectralFunction& sigma, const Region& E, int j, const QuadConfig& quad = {});

/// Scale monotonicity sigma(A*^-(j+1) xi) >= sigma(A*^-j xi) - tol over box
/// samples, for j in [0, j_hi).
struct MonotonicityReport {
    bool ok = true;
    double worst_violation = 0.0;
    int worst_j = 0;
    std::size_t samples = 0;
};
MonotonicityReport check_monotonicity(const SpectralFunction& sigma, int j_hi, std::size_t samples,
                                      double tol = defaults::mono_tol,
                                      std::uint64_t seed = defaults::probe_seed,
                                      double box_radius = defaults::probe_box_radius);

enum class Consensus { PASS, FAIL, SPLIT };
const char* to_string(Consensus c);

struct HypothesisReport {
    bool refinable = false;
    double refinability_violation = 0.0;
    bool support_in_G = false;
    double support_escape_fraction = 0.0;
    bool G_invariant = false;
};

struct SuiteConfig {
    DensityProbe probe;
    QuadConfig quad;
    double eps_val = defaults::eps_val;
    std::optional<bool> ground_truth_complete;  // declared label, never inferred
    bool with_projection_diagnostic = true;
};

struct SuiteResult {
    std::vector<CriterionReport> reports;  // C2..C8 in id order
    std::optional<CriterionReport> projection;  // diagnostic, outside the consensus
    Consensus consensus = Consensus::SPLIT;
    HypothesisReport hypothesis;
    std::optional<bool> ground_truth;
    std::optional<bool> matches_ground_truth;
};

/// Runs the full criteria suite. Throws HypothesisViolated when the system is
/// not refinable, Supp(sigma) escapes G, or G is not A*-invariant.
SuiteResult run_suite(const GeneratorSystem& S, const Region& G, const SuiteConfig& cfg);

}  // namespace sis
