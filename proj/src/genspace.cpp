#include "sis/genspace.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <map>
#include <mutex>
#include <limits>
#include <memory>
#include <sstream>
#include <utility>

#include "sis/errors.hpp"
#include "sis/kernels.hpp"
#include "sis/sampler.hpp"

namespace sis {

namespace {

std::string point_str(std::span<const double> x) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) os << ", ";
        os << x[i];
    }
    os << ")";
    return os.str();
}

double inf_norm(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::fabs(v));
    return m;
}

// Tail of sum_{|k|_inf > K} C^2 (1 + |xi + k|)^(-2p) where K_eff already
// absorbs |xi|_inf (terms sit at distance >= K_eff + 1 from the origin).
double decay_tail_bound(const Decay& decay, int dim, int K_eff) {
    const double p2 = 2.0 * decay.exponent;
    if (p2 <= static_cast<double>(dim)) return std::numeric_limits<double>::infinity();
    const double c2 = decay.coeff * decay.coeff;
    if (dim == 1) {
        // two one-sided tails, each <= integral of (1 + t)^(-2p) from K_eff
        return 2.0 * c2 * std::pow(1.0 + static_cast<double>(K_eff), 1.0 - p2) / (p2 - 1.0);
    }
    const double shell = 2.0 * dim * std::pow(3.0, dim - 1);
    const double expo = static_cast<double>(dim) - p2;  // < 0
    // shells at radius m hold <= 2d (2m+1)^(d-1) points at distance >= m / 2
    return c2 * shell * std::pow(2.0, p2) * std::pow(static_cast<double>(K_eff), expo) / (-expo);
}

}  // namespace

BracketResult bracket_product(const FourierFunction& f, std::span<const double> xi, int K) {
    if (K < 1) throw ConfigError("bracket truncation radius must be >= 1");
    const int d = f.dim();

    long long k_lo[kMaxDim], k_hi[kMaxDim];
    double tail = 0.0;
    if (f.support()) {
        const auto& box = *f.support();
        for (int i = 0; i < d; ++i) {
            const std::size_t u = static_cast<std::size_t>(i);
            k_lo[u] = static_cast<long long>(std::ceil(box.lo[u] - xi[u])) - 1;
            k_hi[u] = static_cast<long long>(std::floor(box.hi[u] - xi[u])) + 1;
        }
    } else if (f.decay()) {
        const int margin = K - static_cast<int>(std::ceil(inf_norm(xi)));
        if (margin < 1)
            throw TailUnbounded("bracket truncation radius too small for |xi| = " + std::to_string(inf_norm(xi)));
        tail = decay_tail_bound(*f.decay(), d, margin);
        if (!std::isfinite(tail))
            throw TailUnbounded("decay exponent too weak to bound the bracket tail");
        for (int i = 0; i < d; ++i) {
            k_lo[i] = -K;
            k_hi[i] = K;
        }
    } else {
        throw TailUnbounded("function has neither finite support nor a decay certificate");
    }

    // clamp to the requested window
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) {
        k_lo[i] = std::max<long long>(k_lo[i], -K);
        k_hi[i] = std::min<long long>(k_hi[i], K);
        if (k_hi[i] < k_lo[i]) return {0.0, tail};
        total *= static_cast<std::size_t>(k_hi[i] - k_lo[i] + 1);
    }

    Block pts(d, total);
    std::size_t idx = 0;
    long long k[kMaxDim];
    for (int i = 0; i < d; ++i) k[i] = k_lo[i];
    while (true) {
        for (int i = 0; i < d; ++i)
            pts.col(i)[idx] = xi[static_cast<std::size_t>(i)] + static_cast<double>(k[i]);
        ++idx;
        int axis = d - 1;
        while (axis >= 0) {
            if (++k[axis] <= k_hi[axis]) break;
            k[axis] = k_lo[axis];
            --axis;
        }
        if (axis < 0) break;
    }

    std::vector<double> vals(total);
    f.abs_sq_batch(pts, vals.data());
    return {kernels::sum(vals.data(), total), tail};
}

FourierFunction normalize_generator(const FourierFunction& f, int K) {
    if (!f.has_tail_control())
        throw TailUnbounded("cannot normalize: function has neither finite support nor a decay certificate");
    FourierFunction base = f;
    const int d = f.dim();
    // the bracket is Z^d-periodic, so it is constant along the lattice orbit
    // of x; memoize by the reduced point (keeps bracket-of-normalized tests
    // linear instead of quadratic in K)
    struct BracketMemo {
        std::mutex mu;
        std::map<std::array<double, kMaxDim>, double> values;
    };
    auto memo = std::make_shared<BracketMemo>();
    auto eval = [base, K, d, memo](std::span<const double> x) -> std::complex<double> {
        std::array<double, kMaxDim> reduced{};
        for (int i = 0; i < d; ++i)
            reduced[static_cast<std::size_t>(i)] =
                x[static_cast<std::size_t>(i)] - std::floor(x[static_cast<std::size_t>(i)] + 0.5);
        double bval = 0.0;
        {
            std::lock_guard<std::mutex> lock(memo->mu);
            if (auto it = memo->values.find(reduced); it != memo->values.end()) bval = it->second;
            else {
                bval = bracket_product(base, std::span<const double>(reduced.data(), static_cast<std::size_t>(d)), K)
                           .value;
                if (memo->values.size() > 65536) memo->values.clear();
                memo->values.emplace(reduced, bval);
            }
        }
        if (bval <= defaults::tau_supp) return {0.0, 0.0};
        return base(x) / std::sqrt(bval);
    };
    FourierFunction out(d, eval, f.label().empty() ? std::string() : f.label() + "/bracket^1/2");
    if (f.support()) out.with_support(*f.support());
    if (f.decay()) {
        // valid because the result vanishes wherever the bracket is <= tau_supp
        out.with_decay(Decay{f.decay()->coeff / std::sqrt(defaults::tau_supp), f.decay()->exponent});
    }
    if (f.has_edge_hint()) {
        FourierFunction src = f;
        out.with_edge_distance([src](std::span<const double> x) { return src.edge_distance(x); });
    }
    return out;
}

void SpectralFunction::enforce(double v, std::span<const double> x) const {
    if (!check_) return;
    if (v > 1.0 + defaults::tight_tol || v < -defaults::tight_tol)
        throw NotNormalized("spectral value " + std::to_string(v) + " out of [0, 1] at " + point_str(x) +
                            "; the generator system is not a tight frame generator");
}

double SpectralFunction::operator()(std::span<const double> x) const {
    const double v = fn_(x);
    enforce(v, x);
    return v;
}

void SpectralFunction::eval_batch(const Block& pts, double* out) const {
    fn_.eval_batch(pts, out);
    if (!check_ || pts.n == 0) return;
    double mn = 0.0, mx = 0.0;
    kernels::minmax(out, pts.n, mn, mx);
    if (mx > 1.0 + defaults::tight_tol || mn < -defaults::tight_tol) {
        for (std::size_t i = 0; i < pts.n; ++i) {
            double p[kMaxDim];
            pts.point(i, std::span<double>(p, static_cast<std::size_t>(pts.dim)));
            enforce(out[i], std::span<const double>(p, static_cast<std::size_t>(pts.dim)));
        }
    }
}

RealFunction SpectralFunction::as_real() const {
    SpectralFunction self = *this;
    RealFunction out(dim(), [self](std::span<const double> x) { return self(x); }, fn_.label());
    out.with_batch([self](const Block& pts, double* o) { self.eval_batch(pts, o); });
    if (fn_.has_edge_hint()) {
        RealFunction src = fn_;
        out.with_edge_distance([src](std::span<const double> x) { return src.edge_distance(x); });
    }
    return out;
}

SpectralFunction SpectralFunction::unchecked(RealFunction fn, DilationMatrix dilation, bool check) {
    SpectralFunction s;
    s.fn_ = std::move(fn);
    s.dilation_ = std::move(dilation);
    s.check_ = check;
    return s;
}

SpectralFunction spectral_function(const GeneratorSystem& S) {
    if (S.generators.empty()) throw ConfigError("generator system is empty");
    std::vector<FourierFunction> gens;
    if (S.claimed_tight_frame) {
        gens = S.generators;
    } else if (S.generators.size() == 1) {
        gens.push_back(normalize_generator(S.generators[0], default_bracket_K(S.dim())));
    } else {
        throw NotPrincipal("multi-generator system must claim the tight-frame property; "
                           "normalize each generator first");
    }

    const int d = S.dim();
    auto shared = std::make_shared<std::vector<FourierFunction>>(std::move(gens));
    RealFunction fn(
        d,
        [shared](std::span<const double> x) {
            double acc = 0.0;
            for (const auto& g : *shared) acc += g.abs_sq(x);
            return acc;
        },
        S.label.empty() ? std::string("sigma") : "sigma[" + S.label + "]");
    fn.with_batch([shared](const Block& pts, double* out) {
        std::vector<double> tmp(pts.n);
        (*shared)[0].abs_sq_batch(pts, out);
        for (std::size_t g = 1; g < shared->size(); ++g) {
            (*shared)[g].abs_sq_batch(pts, tmp.data());
            for (std::size_t i = 0; i < pts.n; ++i) out[i] += tmp[i];
        }
    });
    bool any_edge = false;
    for (const auto& g : *shared) any_edge = any_edge || g.has_edge_hint();
    if (any_edge) {
        fn.with_edge_distance([shared](std::span<const double> x) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& g : *shared) best = std::min(best, g.edge_distance(x));
            return best;
        });
    }

    SpectralFunction s;
    s.fn_ = std::move(fn);
    s.dilation_ = S.dilation;
    s.check_ = true;
    return s;
}

LowPassFilter estimate_filter(const GeneratorSystem& S, std::size_t samples, std::uint64_t seed, double tol,
                              double box_radius) {
    if (S.generators.size() != 1)
        throw NotPrincipal("the scaling-equation filter is defined for principal systems only");
    const int d = S.dim();
    FourierFunction g = S.claimed_tight_frame ? S.generators[0]
                                              : normalize_generator(S.generators[0], default_bracket_K(d));
    const DilationMatrix Astar = S.dilation.adjoint();
    const auto Am = Astar.power_matrix(1);

    auto apply_astar = [Am, d](std::span<const double> x, double* out) {
        for (int i = 0; i < d; ++i) {
            double acc = 0.0;
            for (int k = 0; k < d; ++k) acc += Am[static_cast<std::size_t>(i * d + k)] * x[static_cast<std::size_t>(k)];
            out[i] = acc;
        }
    };

    const double tau = defaults::tau_supp;
    FilterDiagnostics diag;
    diag.samples = samples;
    Block pts = sample_box(d, box_radius, samples, derive_seed(seed, {seedtag::filter}));
    std::size_t inconsistent = 0;

    std::vector<std::pair<std::vector<double>, std::complex<double>>> periodic_probe;
    double p[kMaxDim], q[kMaxDim];
    for (std::size_t i = 0; i < samples; ++i) {
        pts.point(i, std::span<double>(p, static_cast<std::size_t>(d)));
        apply_astar(std::span<const double>(p, static_cast<std::size_t>(d)), q);
        const std::complex<double> den = g(std::span<const double>(p, static_cast<std::size_t>(d)));
        const std::complex<double> num = g(std::span<const double>(q, static_cast<std::size_t>(d)));
        if (std::norm(den) > tau) {
            ++diag.defined_samples;
            const std::complex<double> m = num / den;
            const double am = std::abs(m);
            if (am > diag.max_abs) diag.max_abs = am;
            if (am > 1.0 + tol)
                throw FilterUnbounded("|m| = " + std::to_string(am) + " > 1 at " +
                                      point_str(std::span<const double>(p, static_cast<std::size_t>(d))) +
                                      "; system is not refinable as a tight frame");
            if (periodic_probe.size() < 512)
                periodic_probe.emplace_back(std::vector<double>(p, p + d), m);
        } else {
            // off the mask the filter is 0, so the residual is |phi^(A* xi)|
            diag.max_residual = std::max(diag.max_residual, std::abs(num));
            if (std::norm(num) > 100.0 * tau) ++inconsistent;
        }
    }
    diag.inconsistent_fraction =
        samples ? static_cast<double>(inconsistent) / static_cast<double>(samples) : 0.0;

    // periodicity: compare m at xi and xi + e_i where both are defined
    for (const auto& [base, m0] : periodic_probe) {
        for (int axis = 0; axis < d; ++axis) {
            std::vector<double> shifted = base;
            shifted[static_cast<std::size_t>(axis)] += 1.0;
            const std::complex<double> den = g(shifted);
            if (std::norm(den) <= tau) continue;
            apply_astar(shifted, q);
            const std::complex<double> num = g(std::span<const double>(q, static_cast<std::size_t>(d)));
            diag.max_periodicity_dev = std::max(diag.max_periodicity_dev, std::abs(num / den - m0));
        }
    }

    if (diag.inconsistent_fraction > 1e-3)
        throw FilterInconsistent(
            "phi^(A* xi) is nonzero on " + std::to_string(diag.inconsistent_fraction * 100.0) +
            "% of samples where phi^(xi) = 0; no periodic filter can satisfy the scaling equation");

    auto eval = [g, apply_astar, d, tau](std::span<const double> x) -> std::complex<double> {
        double ax[kMaxDim];
        const std::complex<double> den = g(x);
        if (std::norm(den) <= tau) return {0.0, 0.0};
        apply_astar(x, ax);
        return g(std::span<const double>(ax, static_cast<std::size_t>(d))) / den;
    };
    auto defined = [g, tau](std::span<const double> x) { return g.abs_sq(x) > tau; };
    return LowPassFilter{std::move(eval), std::move(defined), diag};
}

RefinabilityReport check_refinable(const SpectralFunction& sigma, std::size_t samples, double tol,
                                   std::uint64_t seed, double box_radius) {
    const int d = sigma.dim();
    Block pts = sample_box(d, box_radius, samples, derive_seed(seed, {seedtag::refinable}));
    Block mapped = pts;
    sigma.dilation().adjoint().apply_power_block(-1, mapped);

    std::vector<double> here(samples), coarser(samples);
    sigma.eval_batch(pts, here.data());
    sigma.eval_batch(mapped, coarser.data());

    RefinabilityReport rep;
    rep.samples = samples;
    rep.worst_violation = -std::numeric_limits<double>::infinity();
    std::size_t worst_i = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double viol = here[i] - coarser[i];
        if (viol > rep.worst_violation) {
            rep.worst_violation = viol;
            worst_i = i;
        }
    }
    rep.refinable = rep.worst_violation <= tol;
    rep.worst_location.resize(static_cast<std::size_t>(d));
    pts.point(worst_i, rep.worst_location);
    return rep;
}

}  // namespace sis
