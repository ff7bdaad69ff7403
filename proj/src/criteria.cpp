#include "sis/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sis/errors.hpp"
#include "sis/kernels.hpp"

namespace sis {

const char* to_string(CriterionId id) {
    switch (id) {
        case CriterionId::C2_support_union: return "C2_support_union";
        case CriterionId::C3_cesaro: return "C3_cesaro";
        case CriterionId::C4_absorbing: return "C4_absorbing";
        case CriterionId::C5_limit_positive: return "C5_limit_positive";
        case CriterionId::C6_limit_one: return "C6_limit_one";
        case CriterionId::C7_locally_nonzero: return "C7_locally_nonzero";
        case CriterionId::C8_approx_continuity: return "C8_approx_continuity";
        default: return "P_projection_norm";
    }
}

const char* to_string(Consensus c) {
    switch (c) {
        case Consensus::PASS: return "PASS";
        case Consensus::FAIL: return "FAIL";
        default: return "SPLIT";
    }
}

namespace {

void validate_probe(const DensityProbe& probe) {
    if (probe.samples_per_level < 1000) throw ConfigError("probe needs at least 1000 samples per level");
    if (probe.j_max < 2) throw ConfigError("probe needs j_max >= 2");
}

DensityProbe with_seed(DensityProbe p, std::uint64_t tag) {
    p.seed = derive_seed(p.seed, {tag});
    return p;
}

double binom_se(double p, std::size_t n) {
    if (n == 0) return 0.0;
    return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

CriterionReport from_trace(CriterionId id, VerdictTrace&& t, double tolerance) {
    CriterionReport rep;
    rep.id = id;
    rep.verdict = t.verdict;
    rep.score = t.score;
    rep.tolerance = tolerance;
    rep.trace = std::move(t.trace);
    rep.note = std::move(t.note);
    return rep;
}

}  // namespace

CriterionReport c2_support_union(const SpectralFunction& sigma, const Region& G, const DensityProbe& probe) {
    validate_probe(probe);
    const int d = sigma.dim();
    const DilationMatrix Astar = sigma.dilation().adjoint();
    const DensityProbe p = with_seed(probe, seedtag::c2);

    Block base = sample_box(d, p.box_radius, p.samples_per_level, p.seed);
    if (!G.is_all()) {
        std::vector<unsigned char> keep(base.n);
        G.mask(base, keep.data());
        base = base.compact(keep);
    }
    if (base.n == 0) throw EmptyDenominator("no samples of G in the probe box");
    const std::size_t m = base.n;

    std::vector<unsigned char> hit(m, 0);
    std::size_t hits = 0;

    CriterionReport rep;
    rep.id = CriterionId::C2_support_union;
    rep.tolerance = 1.0 - p.epsilon;

    // search order 0, 1, -1, 2, -2, ... (the union runs over all of Z)
    std::vector<int> order;
    order.push_back(0);
    for (int j = 1; j <= p.j_max; ++j) {
        order.push_back(j);
        order.push_back(-j);
    }
    std::vector<std::size_t> alive(m);
    for (std::size_t i = 0; i < m; ++i) alive[i] = i;

    for (int j : order) {
        if (alive.empty()) break;
        Block pts(d, alive.size());
        for (int k = 0; k < d; ++k) {
            const double* src = base.col(k);
            double* dst = pts.col(k);
            for (std::size_t i = 0; i < alive.size(); ++i) dst[i] = src[alive[i]];
        }
        Astar.apply_power_block(-j, pts);
        std::vector<double> sv(pts.n);
        sigma.eval_batch(pts, sv.data());
        std::vector<std::size_t> next;
        next.reserve(alive.size());
        for (std::size_t i = 0; i < alive.size(); ++i) {
            if (sv[i] > defaults::tau_supp) {
                hit[alive[i]] = 1;
                ++hits;
            } else {
                next.push_back(alive[i]);
            }
        }
        alive = std::move(next);
        rep.trace.push_back({j, static_cast<double>(hits) / static_cast<double>(m), 0.0, m, -1.0});
    }

    const double score = static_cast<double>(hits) / static_cast<double>(m);
    rep.score = score;
    rep.verdict = decide_ge(1.0 - p.epsilon, score, binom_se(score, m));
    if (rep.verdict == Verdict::INCONCLUSIVE)
        rep.note = "hit fraction straddles 1 - epsilon; deeper |j| might still cover G";
    return rep;
}

CriterionReport c3_cesaro(const SpectralFunction& sigma, const Region& E, const DensityProbe& probe) {
    validate_probe(probe);
    const int d = sigma.dim();
    const DilationMatrix Astar = sigma.dilation().adjoint();
    const DensityProbe p = with_seed(probe, seedtag::c3);

    CriterionReport rep;
    rep.id = CriterionId::C3_cesaro;
    rep.tolerance = 1.0 - p.epsilon;

    const int j_from = std::max(0, p.j_max - p.window);
    double window_sum = 0.0, window_se_sum = 0.0;
    int window_count = 0;
    for (int j = 0; j <= p.j_max; ++j) {
        Block pts = sample_region(E, d, p.samples_per_level,
                                  derive_seed(p.seed, {seedtag::c3, static_cast<std::uint64_t>(j)}),
                                  p.box_radius);
        Astar.apply_power_block(-j, pts);
        std::vector<double> sv(pts.n);
        sigma.eval_batch(pts, sv.data());
        const double mean = kernels::sum(sv.data(), pts.n) / static_cast<double>(pts.n);
        double sq = 0.0;
        for (std::size_t i = 0; i < pts.n; ++i) sq += (sv[i] - mean) * (sv[i] - mean);
        const double se = std::sqrt(sq / static_cast<double>(pts.n)) / std::sqrt(static_cast<double>(pts.n));
        rep.trace.push_back({j, mean, se, pts.n, -1.0});
        if (j >= j_from) {
            window_sum += mean;
            window_se_sum += se;
            ++window_count;
        }
    }
    const double score = window_sum / window_count;
    const double se = window_se_sum / window_count;
    rep.score = score;
    rep.verdict = decide_ge(1.0 - p.epsilon, score, se);
    rep.note = "E = " + E.expr();
    if (rep.verdict == Verdict::INCONCLUSIVE)
        rep.note += "; terminal averages straddle 1 - epsilon";
    return rep;
}

CriterionReport c4_absorbing(const SpectralFunction& sigma, const Region& G, const DensityProbe& probe) {
    validate_probe(probe);
    const Region supp = Region::support_of(sigma.as_real(), defaults::tau_supp);
    VerdictTrace t = is_absorbing(supp, G, sigma.dilation().adjoint(), with_seed(probe, seedtag::c4));
    return from_trace(CriterionId::C4_absorbing, std::move(t), 1.0 - probe.epsilon);
}

CriterionReport c5_limit_positive(const SpectralFunction& sigma, const Region& G, const DensityProbe& probe) {
    validate_probe(probe);
    const DensityProbe p = with_seed(probe, seedtag::c5);
    SubsequenceResult sub = subsequence_limit(sigma.as_real(), G, sigma.dilation().adjoint(), p);
    const std::size_t m = sub.tails.size();
    const std::size_t positive =
        kernels::count_abs_dev_ge(sub.tails.data(), m, 0.0, defaults::tau_supp);
    const double score = static_cast<double>(positive) / static_cast<double>(m);

    CriterionReport rep;
    rep.id = CriterionId::C5_limit_positive;
    rep.score = score;
    rep.tolerance = 1.0 - p.epsilon;
    rep.trace = std::move(sub.trace);
    rep.verdict = decide_ge(1.0 - p.epsilon, score, binom_se(score, m));
    if (sub.non_convergent > 0) {
        const double ncf = static_cast<double>(sub.non_convergent) / static_cast<double>(m);
        rep.note = std::to_string(sub.non_convergent) + " tails unconverged";
        if (ncf > p.epsilon && rep.verdict == Verdict::PASS) rep.verdict = Verdict::INCONCLUSIVE;
    }
    return rep;
}

CriterionReport c6_limit_one(const SpectralFunction& sigma, const Region& G, const DensityProbe& probe,
                             double eps_val) {
    validate_probe(probe);
    const DensityProbe p = with_seed(probe, seedtag::c6);
    SubsequenceResult sub = subsequence_limit(sigma.as_real(), G, sigma.dilation().adjoint(), p);
    const std::size_t m = sub.tails.size();
    const std::size_t in_band = kernels::count_in_interval(
        sub.tails.data(), m, 1.0 - eps_val, 1.0 + 2.0 * defaults::tight_tol);
    const double score = static_cast<double>(in_band) / static_cast<double>(m);

    CriterionReport rep;
    rep.id = CriterionId::C6_limit_one;
    rep.score = score;
    rep.tolerance = 1.0 - p.epsilon;
    rep.trace = std::move(sub.trace);
    rep.verdict = decide_ge(1.0 - p.epsilon, score, binom_se(score, m));
    if (sub.non_convergent > 0) {
        const double ncf = static_cast<double>(sub.non_convergent) / static_cast<double>(m);
        rep.note = std::to_string(sub.non_convergent) + " tails unconverged";
        if (ncf > p.epsilon && rep.verdict != Verdict::FAIL) rep.verdict = Verdict::INCONCLUSIVE;
    }
    return rep;
}

CriterionReport c7_locally_nonzero(const SpectralFunction& sigma, const Region& G, const DensityProbe& probe) {
    validate_probe(probe);
    VerdictTrace t =
        is_locally_nonzero(sigma.as_real(), G, sigma.dilation().adjoint(), with_seed(probe, seedtag::c7));
    return from_trace(CriterionId::C7_locally_nonzero, std::move(t), probe.epsilon);
}

CriterionReport c8_approx_continuity(const SpectralFunction& sigma, const Region& G,
                                     const DensityProbe& probe) {
    validate_probe(probe);
    VerdictTrace t = is_approx_continuity_point(sigma.as_real(), 1.0, G, sigma.dilation().adjoint(),
                                                with_seed(probe, seedtag::c8));
    return from_trace(CriterionId::C8_approx_continuity, std::move(t), 1.0);
}

double projection_norm_sq(const SpectralFunction& sigma, const Region& E, int j, const QuadConfig& quad) {
    const DilationMatrix Astar = sigma.dilation().adjoint();
    const int d = sigma.dim();
    const auto M = Astar.power_matrix(-j);

    if (d == 1) {
        const IntervalSet* set = E.interval_geometry();
        if (!set) throw ConfigError("projection norm needs exact interval geometry for E");
        const double scale = M[0];
        double total = 0.0;
        for (const auto& part : set->parts) {
            if (part.length() <= 0.0) continue;
            if (!part.finite()) throw ConfigError("projection norm needs a bounded E");
            total += integrate([&](double x) { return sigma.at1(scale * x); }, part.lo, part.hi, quad);
        }
        return total;
    }
    if (d == 2) {
        const BoxRegion* box = E.box_geometry();
        if (!box) throw ConfigError("projection norm needs box geometry for E in d = 2");
        return integrate_box(
            [&](std::span<const double> x) {
                const double u = M[0] * x[0] + M[1] * x[1];
                const double v = M[2] * x[0] + M[3] * x[1];
                const double q[2] = {u, v};
                return sigma(std::span<const double>(q, 2));
            },
            box->lo, box->hi, quad);
    }
    throw ConfigError("projection norm supports d <= 2");
}

MonotonicityReport check_monotonicity(const SpectralFunction& sigma, int j_hi, std::size_t samples,
                                      double tol, std::uint64_t seed, double box_radius) {
    const int d = sigma.dim();
    const DilationMatrix Astar = sigma.dilation().adjoint();
    Block base = sample_box(d, box_radius, samples, derive_seed(seed, {seedtag::monotone}));

    MonotonicityReport rep;
    rep.samples = samples;
    rep.worst_violation = -std::numeric_limits<double>::infinity();
    std::vector<double> prev(samples), cur(samples);
    {
        Block pts = base;
        sigma.eval_batch(pts, prev.data());  // j = 0
    }
    for (int j = 1; j <= j_hi; ++j) {
        Block pts = base;
        Astar.apply_power_block(-j, pts);
        sigma.eval_batch(pts, cur.data());
        for (std::size_t i = 0; i < samples; ++i) {
            const double viol = prev[i] - cur[i];  // positive = violation
            if (viol > rep.worst_violation) {
                rep.worst_violation = viol;
                rep.worst_j = j;
            }
        }
        std::swap(prev, cur);
    }
    rep.ok = rep.worst_violation <= tol;
    return rep;
}

SuiteResult run_suite(const GeneratorSystem& S, const Region& G, const SuiteConfig& cfg) {
    validate_probe(cfg.probe);
    const SpectralFunction sigma = spectral_function(S);
    const int d = S.dim();
    const DilationMatrix Astar = S.dilation.adjoint();

    SuiteResult out;

    // hypothesis: refinability
    const RefinabilityReport refin = check_refinable(
        sigma, std::min<std::size_t>(cfg.probe.samples_per_level, 20000), defaults::mono_tol,
        derive_seed(cfg.probe.seed, {seedtag::hypothesis, 1}), cfg.probe.box_radius);
    out.hypothesis.refinable = refin.refinable;
    out.hypothesis.refinability_violation = refin.worst_violation;
    if (!refin.refinable)
        throw HypothesisViolated("system is not refinable: sigma(A*^-1 xi) < sigma(xi) by " +
                                 std::to_string(refin.worst_violation));

    // hypothesis: Supp(sigma) inside G
    if (G.is_all()) {
        out.hypothesis.support_in_G = true;
    } else {
        Block pts = sample_box(d, cfg.probe.box_radius, cfg.probe.samples_per_level,
                               derive_seed(cfg.probe.seed, {seedtag::hypothesis, 2}));
        std::vector<double> sv(pts.n);
        sigma.eval_batch(pts, sv.data());
        std::vector<unsigned char> inG(pts.n);
        G.mask(pts, inG.data());
        std::size_t escape = 0;
        for (std::size_t i = 0; i < pts.n; ++i)
            if (sv[i] > defaults::tau_supp && !inG[i]) ++escape;
        out.hypothesis.support_escape_fraction =
            static_cast<double>(escape) / static_cast<double>(pts.n);
        out.hypothesis.support_in_G = out.hypothesis.support_escape_fraction <= cfg.probe.epsilon;
        if (!out.hypothesis.support_in_G)
            throw HypothesisViolated("Supp(sigma) escapes G on a fraction " +
                                     std::to_string(out.hypothesis.support_escape_fraction) +
                                     " of samples; the completeness criteria are only equivalent when Supp(sigma) lies inside G");
    }

    // hypothesis: G is A*-invariant
    {
        DensityProbe p = cfg.probe;
        p.seed = derive_seed(cfg.probe.seed, {seedtag::hypothesis, 3});
        const VerdictTrace inv = check_invariant_set(G, Astar, p);
        out.hypothesis.G_invariant = inv.verdict == Verdict::PASS;
        if (!out.hypothesis.G_invariant)
            throw HypothesisViolated("G is not A*-invariant (agreement fraction " +
                                     std::to_string(inv.score) + ")");
    }

    out.reports.push_back(c2_support_union(sigma, G, cfg.probe));

    // C3 runs over a small family of bounded E's; the report keeps the worst
    {
        std::vector<Region> family;
        if (G.is_all()) {
            family.push_back(Region::ball(d, 1.0));
            BoxRegion shifted;
            for (int k = 0; k < d; ++k) {
                shifted.lo.push_back(0.3);
                shifted.hi.push_back(1.3);
            }
            family.push_back(Region::box(shifted));
        } else {
            family.push_back(Region::intersect(Region::ball(d, 1.0), G));
            BoxRegion shifted;
            for (int k = 0; k < d; ++k) {
                shifted.lo.push_back(0.3);
                shifted.hi.push_back(1.3);
            }
            family.push_back(Region::intersect(Region::box(shifted), G));
        }
        std::optional<CriterionReport> worst;
        std::string scores;
        for (const auto& E : family) {
            CriterionReport r = c3_cesaro(sigma, E, cfg.probe);
            scores += (scores.empty() ? "" : "; ") + E.expr() + ": " + std::to_string(r.score);
            const auto rank = [](Verdict v) { return v == Verdict::FAIL ? 2 : (v == Verdict::INCONCLUSIVE ? 1 : 0); };
            if (!worst || rank(r.verdict) > rank(worst->verdict) || (rank(r.verdict) == rank(worst->verdict) && r.score < worst->score))
                worst = std::move(r);
        }
        worst->note = "family of " + std::to_string(family.size()) + " sets (" + scores + ")";
        out.reports.push_back(std::move(*worst));
    }

    out.reports.push_back(c4_absorbing(sigma, G, cfg.probe));
    out.reports.push_back(c5_limit_positive(sigma, G, cfg.probe));
    out.reports.push_back(c6_limit_one(sigma, G, cfg.probe, cfg.eps_val));
    out.reports.push_back(c7_locally_nonzero(sigma, G, cfg.probe));
    out.reports.push_back(c8_approx_continuity(sigma, G, cfg.probe));

    // consensus over the decisive verdicts
    std::size_t pass = 0, fail = 0, decisive = 0;
    for (const auto& r : out.reports) {
        if (r.verdict == Verdict::PASS) ++pass;
        if (r.verdict == Verdict::FAIL) ++fail;
    }
    decisive = pass + fail;
    if (decisive > 0 && fail == 0)
        out.consensus = Consensus::PASS;
    else if (decisive > 0 && pass == 0)
        out.consensus = Consensus::FAIL;
    else
        out.consensus = Consensus::SPLIT;

    // projection-norm identity as an out-of-consensus diagnostic (1D)
    if (cfg.with_projection_diagnostic && d == 1) {
        IntervalSet ball1{{Interval{-1.0, 1.0, true, true}}};
        const IntervalSet* g_geom = G.is_all() ? nullptr : G.interval_geometry();
        IntervalSet Ep = G.is_all() ? ball1 : (g_geom ? intersect_interval_sets(ball1, *g_geom) : IntervalSet{});
        if (Ep.length() > 0.0) {
            CriterionReport rep;
            rep.id = CriterionId::P_projection_norm;
            rep.tolerance = 1e-3;
            const Region Er = Region::intervals(Ep);
            const double target = Ep.length();
            const int j_hi = std::min(20, cfg.probe.j_max);
            bool nondecreasing = true;
            double prev = -std::numeric_limits<double>::infinity();
            double last = 0.0;
            for (int j = 0; j <= j_hi; ++j) {
                last = projection_norm_sq(sigma, Er, j, cfg.quad);
                if (last < prev - 1e-9) nondecreasing = false;
                rep.trace.push_back({j, last, 0.0, 0, -1.0});
                prev = last;
            }
            rep.score = last / target;
            const bool limit_ok = std::fabs(rep.score - 1.0) <= rep.tolerance;
            if (out.consensus == Consensus::PASS)
                rep.verdict = (nondecreasing && limit_ok) ? Verdict::PASS : Verdict::FAIL;
            else
                rep.verdict = nondecreasing ? Verdict::PASS : Verdict::FAIL;
            rep.note = "diagnostic, not part of the consensus; |E| = " + std::to_string(target);
            out.projection = std::move(rep);
        }
    }

    out.ground_truth = cfg.ground_truth_complete;
    if (out.ground_truth) {
        if (out.consensus == Consensus::SPLIT)
            out.matches_ground_truth = false;
        else
            out.matches_ground_truth = (*out.ground_truth == (out.consensus == Consensus::PASS));
    }
    return out;
}

}  // namespace sis
