#include "sis/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>

#include "sis/defaults.hpp"
#include "sis/errors.hpp"
#include "sis/kernels.hpp"

namespace sis {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::PASS: return "PASS";
        case Verdict::FAIL: return "FAIL";
        default: return "INCONCLUSIVE";
    }
}

Verdict decide_ge(double threshold, double score, double se) {
    if (score >= threshold) return Verdict::PASS;
    if (score + 3.0 * se < threshold) return Verdict::FAIL;
    return Verdict::INCONCLUSIVE;
}

namespace {

double binom_se(double p, std::size_t n) {
    if (n == 0) return 0.0;
    return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

std::uint64_t bits_of(double v) { return std::bit_cast<std::uint64_t>(v); }

// Sampled reference points pulled back through A^-j, restricted to G.
struct PulledLevel {
    Block points;       // in G, already mapped by A^-j
    std::size_t total;  // reference samples before the G restriction
};

PulledLevel pull_level(const Region& G, const DilationMatrix& A, int j, double r, std::size_t n,
                       std::uint64_t seed) {
    Block base = sample_ball(A.dim(), r, n, seed);
    A.apply_power_block(-j, base);
    PulledLevel out;
    out.total = n;
    if (G.is_all()) {
        out.points = std::move(base);
        return out;
    }
    std::vector<unsigned char> keep(n);
    G.mask(base, keep.data());
    out.points = base.compact(keep);
    return out;
}

}  // namespace

MeasureEstimate relative_measure(const Region& E, const Region& G, const DilationMatrix& A, int j, double r,
                                 const DensityProbe& probe) {
    const std::uint64_t seed =
        derive_seed(probe.seed, {seedtag::density, static_cast<std::uint64_t>(j), bits_of(r)});
    PulledLevel lvl = pull_level(G, A, j, r, probe.samples_per_level, seed);
    if (lvl.points.n == 0)
        throw EmptyDenominator("no samples of G in A^-" + std::to_string(j) + " B_" + std::to_string(r) +
                               "; G is negligible near the origin at this scale");
    std::vector<unsigned char> inE(lvl.points.n);
    E.mask(lvl.points, inE.data());
    std::size_t hits = 0;
    for (auto b : inE) hits += b;
    MeasureEstimate est;
    est.hits_g = lvl.points.n;
    est.n = lvl.total;
    est.ratio = static_cast<double>(hits) / static_cast<double>(lvl.points.n);
    est.se = binom_se(est.ratio, lvl.points.n);
    return est;
}

VerdictTrace is_density_point(const Region& E, const Region& G, const DilationMatrix& A,
                              const DensityProbe& probe) {
    VerdictTrace out;
    const double threshold = 1.0 - probe.epsilon;
    const int j_from = std::max(1, probe.j_max - probe.window);
    double min_ratio = std::numeric_limits<double>::infinity();
    double min_se = 0.0;

    // full per-level trace at r = 1, terminal window only for the other radii
    for (int j = 1; j <= probe.j_max; ++j) {
        const MeasureEstimate est = relative_measure(E, G, A, j, 1.0, probe);
        out.trace.push_back({j, est.ratio, est.se, est.hits_g, -1.0});
        if (j >= j_from && est.ratio < min_ratio) {
            min_ratio = est.ratio;
            min_se = est.se;
        }
    }
    for (const double r : {0.5, 2.0}) {
        for (int j = j_from; j <= probe.j_max; ++j) {
            const MeasureEstimate est = relative_measure(E, G, A, j, r, probe);
            if (est.ratio < min_ratio) {
                min_ratio = est.ratio;
                min_se = est.se;
            }
        }
    }
    out.score = min_ratio;
    out.verdict = decide_ge(threshold, min_ratio, min_se);
    if (out.verdict == Verdict::INCONCLUSIVE)
        out.note = "terminal ratios straddle 1 - epsilon within sampling error";
    return out;
}

VerdictTrace is_approx_continuity_point(const RealFunction& f, double f0, const Region& G,
                                        const DilationMatrix& A, const DensityProbe& probe) {
    VerdictTrace out;
    constexpr int n_eps = 3;
    const int j_from = std::max(1, probe.j_max - probe.window);

    std::vector<std::vector<double>> frac(n_eps);  // [eps][j-1]
    std::vector<std::vector<double>> se(n_eps);
    for (int e = 0; e < n_eps; ++e) {
        frac[static_cast<std::size_t>(e)].resize(static_cast<std::size_t>(probe.j_max), 1.0);
        se[static_cast<std::size_t>(e)].resize(static_cast<std::size_t>(probe.j_max), 0.0);
    }

    for (int j = 1; j <= probe.j_max; ++j) {
        const std::uint64_t seed =
            derive_seed(probe.seed, {seedtag::approx_cont, static_cast<std::uint64_t>(j)});
        PulledLevel lvl = pull_level(G, A, j, 1.0, probe.samples_per_level, seed);
        if (lvl.points.n == 0)
            throw EmptyDenominator("no samples of G in A^-" + std::to_string(j) + " B_1");
        std::vector<double> fv(lvl.points.n);
        f.eval_batch(lvl.points, fv.data());
        for (int e = 0; e < n_eps; ++e) {
            const double eps = kApproxContLadder[e];
            const std::size_t bad = kernels::count_abs_dev_ge(fv.data(), lvl.points.n, f0, eps);
            const double p = static_cast<double>(bad) / static_cast<double>(lvl.points.n);
            const double s = binom_se(p, lvl.points.n);
            frac[static_cast<std::size_t>(e)][static_cast<std::size_t>(j - 1)] = p;
            se[static_cast<std::size_t>(e)][static_cast<std::size_t>(j - 1)] = s;
            out.trace.push_back({j, p, s, lvl.points.n, eps});
        }
    }

    double worst_rel = 0.0;  // max over the ladder of terminal frac / eps
    double deepest_pass = -1.0;
    bool any_fail = false;
    bool all_pass = true;
    std::string note;
    for (int e = 0; e < n_eps; ++e) {
        const double eps = kApproxContLadder[e];
        const auto& fr = frac[static_cast<std::size_t>(e)];
        // smallest j0 with frac < eps for every j in [j0, j_max]
        int j0 = probe.j_max + 1;
        for (int j = probe.j_max; j >= 1; --j) {
            if (fr[static_cast<std::size_t>(j - 1)] < eps)
                j0 = j;
            else
                break;
        }
        double term_max = 0.0;
        for (int j = j_from; j <= probe.j_max; ++j)
            term_max = std::max(term_max, fr[static_cast<std::size_t>(j - 1)]);
        worst_rel = std::max(worst_rel, term_max / eps);

        if (j0 <= probe.j_max) {
            deepest_pass = eps;
            note += (note.empty() ? "" : "; ") + std::string("eps=") + std::to_string(eps) +
                    ": j0=" + std::to_string(j0);
        } else {
            all_pass = false;
            // decisive failure: the terminal fraction clearly exceeds eps
            bool decisive = true;
            for (int j = j_from; j <= probe.j_max; ++j) {
                const double p = fr[static_cast<std::size_t>(j - 1)];
                const double s = se[static_cast<std::size_t>(e)][static_cast<std::size_t>(j - 1)];
                if (!(p - 3.0 * s >= eps)) {
                    decisive = false;
                    break;
                }
            }
            if (decisive) any_fail = true;
            note += (note.empty() ? "" : "; ") + std::string("eps=") + std::to_string(eps) +
                    (decisive ? ": failure fraction stays above eps" : ": undecided at j_max");
            break;  // finer levels cannot decide once a coarser one is open
        }
    }

    out.score = worst_rel;
    if (all_pass) {
        out.verdict = Verdict::PASS;
    } else if (any_fail) {
        out.verdict = Verdict::FAIL;
    } else {
        out.verdict = Verdict::INCONCLUSIVE;
        note += "; deepest eps achieved: " +
                (deepest_pass > 0 ? std::to_string(deepest_pass) : std::string("none"));
    }
    out.note = note;
    return out;
}

VerdictTrace is_locally_nonzero(const RealFunction& f, const Region& G, const DilationMatrix& A,
                                const DensityProbe& probe) {
    VerdictTrace out;
    const int j_from = std::max(1, probe.j_max - probe.window);
    double term_zero = 0.0, term_se = 0.0;
    for (int j = 1; j <= probe.j_max; ++j) {
        const std::uint64_t seed =
            derive_seed(probe.seed, {seedtag::locally_nonzero, static_cast<std::uint64_t>(j)});
        PulledLevel lvl = pull_level(G, A, j, 1.0, probe.samples_per_level, seed);
        if (lvl.points.n == 0)
            throw EmptyDenominator("no samples of G in A^-" + std::to_string(j) + " B_1");
        std::vector<double> fv(lvl.points.n);
        f.eval_batch(lvl.points, fv.data());
        const std::size_t nonzero =
            kernels::count_abs_dev_ge(fv.data(), lvl.points.n, 0.0, defaults::tau_supp);
        const double zero_frac =
            static_cast<double>(lvl.points.n - nonzero) / static_cast<double>(lvl.points.n);
        const double s = binom_se(zero_frac, lvl.points.n);
        out.trace.push_back({j, zero_frac, s, lvl.points.n, -1.0});
        if (j >= j_from && zero_frac >= term_zero) {
            term_zero = zero_frac;
            term_se = s;
        }
    }
    out.score = term_zero;
    out.verdict = decide_ge(1.0 - probe.epsilon, 1.0 - term_zero, term_se);
    if (out.verdict == Verdict::INCONCLUSIVE)
        out.note = "zero fraction straddles epsilon within sampling error";
    return out;
}

VerdictTrace is_absorbing(const Region& E, const Region& G, const DilationMatrix& A,
                          const DensityProbe& probe) {
    VerdictTrace out;
    const int d = A.dim();
    Block base = sample_box(d, probe.box_radius, probe.samples_per_level,
                            derive_seed(probe.seed, {seedtag::absorbing}));
    if (!G.is_all()) {
        std::vector<unsigned char> keep(base.n);
        G.mask(base, keep.data());
        base = base.compact(keep);
    }
    if (base.n == 0) throw EmptyDenominator("no samples of G in the probe box");

    const std::size_t m = base.n;
    std::vector<int> last_out(m, 0);
    std::vector<unsigned char> inE(m);
    for (int j = 1; j <= probe.j_max; ++j) {
        Block mapped = base;
        A.apply_power_block(-j, mapped);
        E.mask(mapped, inE.data());
        for (std::size_t i = 0; i < m; ++i)
            if (!inE[i]) last_out[i] = j;
    }

    std::map<int, std::size_t> hist;
    std::size_t absorbed = 0;
    std::size_t entered_in_window = 0;
    const int j_from = std::max(1, probe.j_max - probe.window);
    for (std::size_t i = 0; i < m; ++i) {
        if (last_out[i] < probe.j_max) {
            ++absorbed;
            const int j0 = last_out[i] + 1;
            ++hist[j0];
            if (j0 > j_from) ++entered_in_window;
        }
    }
    for (const auto& [j0, count] : hist)
        out.trace.push_back({j0, static_cast<double>(count), 0.0, m, -1.0});

    const double p = static_cast<double>(absorbed) / static_cast<double>(m);
    const double s = binom_se(p, m);
    out.score = p;
    if (p >= 1.0 - probe.epsilon) {
        out.verdict = Verdict::PASS;
    } else if (entered_in_window > 0) {
        out.verdict = Verdict::INCONCLUSIVE;
        out.note = std::to_string(entered_in_window) + " samples still entering E near j_max";
    } else {
        out.verdict = (p + 3.0 * s < 1.0 - probe.epsilon) ? Verdict::FAIL : Verdict::INCONCLUSIVE;
        if (out.verdict == Verdict::INCONCLUSIVE) out.note = "absorbed fraction straddles 1 - epsilon";
    }
    return out;
}

VerdictTrace check_invariant_set(const Region& G, const DilationMatrix& A, const DensityProbe& probe) {
    VerdictTrace out;
    const int d = A.dim();
    Block base = sample_box(d, probe.box_radius, probe.samples_per_level,
                            derive_seed(probe.seed, {seedtag::invariant}));
    Block mapped = base;
    A.apply_power_block(1, mapped);
    std::vector<unsigned char> a(base.n), b(base.n);
    G.mask(base, a.data());
    G.mask(mapped, b.data());
    std::size_t agree = 0;
    for (std::size_t i = 0; i < base.n; ++i) agree += (a[i] == b[i]) ? 1 : 0;
    const double p = static_cast<double>(agree) / static_cast<double>(base.n);
    out.score = p;
    out.verdict = (p >= 1.0 - probe.epsilon) ? Verdict::PASS : Verdict::FAIL;
    out.trace.push_back({0, p, binom_se(p, base.n), base.n, -1.0});
    return out;
}

SubsequenceResult subsequence_limit(const RealFunction& f, const Region& G, const DilationMatrix& A,
                                    const DensityProbe& probe) {
    SubsequenceResult out;
    const int d = A.dim();
    Block base = sample_box(d, probe.box_radius, probe.samples_per_level,
                            derive_seed(probe.seed, {seedtag::subsequence}));
    if (!G.is_all()) {
        std::vector<unsigned char> keep(base.n);
        G.mask(base, keep.data());
        base = base.compact(keep);
    }
    if (base.n == 0) throw EmptyDenominator("no samples of G in the probe box");
    const std::size_t m = base.n;

    const int j_from = std::max(1, probe.j_max - probe.window);
    std::vector<double> mn(m, std::numeric_limits<double>::infinity());
    std::vector<double> mx(m, -std::numeric_limits<double>::infinity());
    std::vector<double> last(m, 0.0);
    std::vector<double> prev(m, 0.0);
    bool monotone = true;
    std::vector<double> fv(m);
    for (int j = j_from; j <= probe.j_max; ++j) {
        Block mapped = base;
        A.apply_power_block(-j, mapped);
        f.eval_batch(mapped, fv.data());
        const double mean = kernels::sum(fv.data(), m) / static_cast<double>(m);
        out.trace.push_back({j, mean, 0.0, m, -1.0});
        for (std::size_t i = 0; i < m; ++i) {
            if (j > j_from && fv[i] < prev[i] - 1e-12) monotone = false;
            mn[i] = std::min(mn[i], fv[i]);
            mx[i] = std::max(mx[i], fv[i]);
            prev[i] = fv[i];
            if (j == probe.j_max) last[i] = fv[i];
        }
    }

    out.samples = std::move(base);
    out.tails = std::move(last);
    out.converged.resize(m);
    out.non_convergent = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const bool conv = monotone || (mx[i] - mn[i] < defaults::tail_osc_tol);
        out.converged[i] = conv ? 1 : 0;
        if (!conv) ++out.non_convergent;
    }
    return out;
}

Block sample_region(const Region& E, int dim, std::size_t n, std::uint64_t seed, double fallback_radius) {
    if (const IntervalSet* set = E.interval_geometry(); set && set->finite() && set->length() > 0.0) {
        // length-weighted inverse-CDF sampling over the parts
        Rng rng(derive_seed(seed, {seedtag::box, 0x77}));
        Block out(1, n);
        double* xs = out.col(0);
        const double total = set->length();
        for (std::size_t i = 0; i < n; ++i) {
            double u = rng.uniform01() * total;
            double x = set->parts.back().hi;
            for (const auto& p : set->parts) {
                if (u <= p.length()) {
                    x = p.lo + u;
                    break;
                }
                u -= p.length();
            }
            xs[i] = x;
        }
        return out;
    }
    if (const BoxRegion* b = E.box_geometry()) {
        Rng rng(derive_seed(seed, {seedtag::box, 0x78}));
        Block out(b->dim(), n);
        for (std::size_t i = 0; i < n; ++i)
            for (int k = 0; k < b->dim(); ++k)
                out.col(k)[i] =
                    rng.uniform(b->lo[static_cast<std::size_t>(k)], b->hi[static_cast<std::size_t>(k)]);
        return out;
    }
    // rejection from the fallback cube
    Rng rng(derive_seed(seed, {seedtag::box, 0x79}));
    Block out(dim, n);
    double p[kMaxDim];
    const std::size_t max_attempts = 256 * n + 1024;
    std::size_t attempts = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (;;) {
            if (++attempts > max_attempts)
                throw EmptyDenominator("rejection sampling found too few points of the region " + E.expr());
            for (int k = 0; k < dim; ++k) p[k] = rng.uniform(-fallback_radius, fallback_radius);
            if (E.contains(std::span<const double>(p, static_cast<std::size_t>(dim)))) break;
        }
        for (int k = 0; k < dim; ++k) out.col(k)[i] = p[k];
    }
    return out;
}

}  // namespace sis
