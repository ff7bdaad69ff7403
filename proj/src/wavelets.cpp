#include "sis/wavelets.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "sis/errors.hpp"
#include "sis/kernels.hpp"

namespace sis {

namespace {

double inf_norm_vec(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::fabs(v));
    return m;
}

// infinity operator norm of a row-major d x d matrix
double inf_norm_mat(const std::vector<double>& m, int d) {
    double best = 0.0;
    for (int i = 0; i < d; ++i) {
        double row = 0.0;
        for (int j = 0; j < d; ++j) row += std::fabs(m[static_cast<std::size_t>(i * d + j)]);
        best = std::max(best, row);
    }
    return best;
}

}  // namespace

CalderonSample calderon_sum(const WaveletSystem& W, std::span<const double> xi, int j_range) {
    const int d = W.dim();
    const DilationMatrix Astar = W.dilation.adjoint();
    CalderonSample out;
    double p[kMaxDim];
    for (int j = -j_range; j <= j_range; ++j) {
        const auto M = Astar.power_matrix(j);
        for (int i = 0; i < d; ++i) {
            double acc = 0.0;
            for (int k = 0; k < d; ++k)
                acc += M[static_cast<std::size_t>(i * d + k)] * xi[static_cast<std::size_t>(k)];
            p[i] = acc;
        }
        const std::span<const double> pt(p, static_cast<std::size_t>(d));
        for (const auto& psi : W.psis) {
            out.value += psi.abs_sq(pt);
            if (psi.has_edge_hint() && psi.edge_distance(pt) < defaults::boundary_h) out.boundary_flag = true;
        }
    }
    return out;
}

CalderonCheck calderon_check(const WaveletSystem& W, std::size_t samples, std::uint64_t seed, int j_range,
                             double tol, double box_radius) {
    const int d = W.dim();
    Block pts = sample_box(d, box_radius, samples, derive_seed(seed, {seedtag::calderon}));
    CalderonCheck out;
    out.samples = samples;
    double p[kMaxDim];
    for (std::size_t i = 0; i < samples; ++i) {
        pts.point(i, std::span<double>(p, static_cast<std::size_t>(d)));
        const std::span<const double> pt(p, static_cast<std::size_t>(d));
        const CalderonSample s = calderon_sum(W, pt, j_range);
        if (s.boundary_flag) {
            ++out.boundary_skipped;
            continue;
        }
        const double target = W.G.contains(pt) ? 1.0 : 0.0;
        out.max_abs_dev = std::max(out.max_abs_dev, std::fabs(s.value - target));
    }
    out.verdict = out.max_abs_dev <= tol ? Verdict::PASS : Verdict::FAIL;
    return out;
}

RealFunction sigma_from_core(const SpectralFunction& core, double tol) {
    const SpectralFunction sigma = core;
    const DilationMatrix Astar = core.dilation().adjoint();
    const int d = core.dim();

    auto check = [tol](double v, std::span<const double> x) {
        if (v < -tol) {
            std::string loc;
            for (std::size_t i = 0; i < x.size(); ++i) loc += (i ? "," : "") + std::to_string(x[i]);
            throw NegativeSpectral("sigma(A*^-1 xi) - sigma(xi) = " + std::to_string(v) + " < 0 at (" + loc +
                                   "); core space is not refinable");
        }
    };

    RealFunction out(
        d,
        [sigma, Astar, d, check](std::span<const double> x) {
            const auto up = Astar.apply_power(-1, x);
            const double v = sigma(std::span<const double>(up.data(), static_cast<std::size_t>(d))) - sigma(x);
            check(v, x);
            return v;
        },
        core.label().empty() ? std::string("sigma_W") : "sigma_W[" + core.label() + "]");
    out.with_batch([sigma, Astar, check](const Block& pts, double* o) {
        Block mapped = pts;
        Astar.apply_power_block(-1, mapped);
        std::vector<double> base(pts.n);
        sigma.eval_batch(pts, base.data());
        sigma.eval_batch(mapped, o);
        for (std::size_t i = 0; i < pts.n; ++i) o[i] -= base[i];
        double p[kMaxDim];
        for (std::size_t i = 0; i < pts.n; ++i) {
            if (o[i] < 0.0) {
                pts.point(i, std::span<double>(p, static_cast<std::size_t>(pts.dim)));
                check(o[i], std::span<const double>(p, static_cast<std::size_t>(pts.dim)));
            }
        }
    });
    return out;
}

std::vector<std::pair<int, VerdictTrace>> wavelet_origin_test(const WaveletSystem& W,
                                                              const DensityProbe& probe) {
    if (!W.semiorthogonal_claimed)
        throw HypothesisViolated("wavelet origin theorem assumes a semiorthogonal tight frame");
    const DilationMatrix Astar = W.dilation.adjoint();
    const Region full = Region::all(W.dim());
    std::vector<std::pair<int, VerdictTrace>> out;
    for (std::size_t a = 0; a < W.psis.size(); ++a) {
        DensityProbe p = probe;
        p.seed = derive_seed(probe.seed, {seedtag::origin, static_cast<std::uint64_t>(a)});
        out.emplace_back(static_cast<int>(a),
                         is_approx_continuity_point(W.psis[a].abs(), 0.0, full, Astar, p));
    }
    return out;
}

VerdictTrace semiorthogonality_check(const WaveletSystem& W, const SemiOrthOptions& opt) {
    const int d = W.dim();
    for (const auto& psi : W.psis)
        if (!psi.has_tail_control())
            throw TailUnbounded("semiorthogonality check needs finite support or decay for every generator");

    const DilationMatrix Astar = W.dilation.adjoint();
    Block pts = sample_box(d, opt.box_radius, opt.samples, derive_seed(opt.seed, {seedtag::semiorth}));

    VerdictTrace out;
    double worst = 0.0;
    double worst_tail = 0.0;
    double p[kMaxDim], q[kMaxDim];

    for (int j = 1; j <= opt.j_small; ++j) {
        const auto M = Astar.power_matrix(j);
        // |A*^j u| >= |u| / ||A*^-j||, used in the decay tail bound
        const double contraction = 1.0 / inf_norm_mat(Astar.power_matrix(-j), d);
        double level_max = 0.0;
        double level_tail = 0.0;

        for (std::size_t s = 0; s < pts.n; ++s) {
            pts.point(s, std::span<double>(p, static_cast<std::size_t>(d)));
            std::complex<double> t = 0.0;
            double tail = 0.0;
            for (const auto& psi : W.psis) {
                long long k_lo[kMaxDim], k_hi[kMaxDim];
                if (psi.support()) {
                    const auto& box = *psi.support();
                    for (int i = 0; i < d; ++i) {
                        const std::size_t u = static_cast<std::size_t>(i);
                        k_lo[u] = std::max<long long>(static_cast<long long>(std::ceil(box.lo[u] - p[i])) - 1,
                                                      -opt.lattice_K);
                        k_hi[u] = std::min<long long>(static_cast<long long>(std::floor(box.hi[u] - p[i])) + 1,
                                                      opt.lattice_K);
                    }
                } else {
                    for (int i = 0; i < d; ++i) {
                        k_lo[i] = -opt.lattice_K;
                        k_hi[i] = opt.lattice_K;
                    }
                    // two-factor decay tail: |psi(A*^j u)| |psi(u)| <=
                    // C^2 (1 + c|u|)^-p (1 + |u|)^-p with c = contraction
                    const auto& dec = *psi.decay();
                    const double p2 = 2.0 * dec.exponent;
                    if (p2 <= static_cast<double>(d))
                        throw TailUnbounded("decay exponent too weak for the orthogonality lattice sum");
                    const double keff = static_cast<double>(opt.lattice_K) - inf_norm_vec(
                        std::span<const double>(p, static_cast<std::size_t>(d)));
                    const double shell = 2.0 * d * std::pow(3.0, d - 1);
                    tail += dec.coeff * dec.coeff * std::pow(std::min(1.0, contraction), -dec.exponent) *
                            shell * std::pow(2.0, p2) * std::pow(keff, static_cast<double>(d) - p2) /
                            (p2 - static_cast<double>(d));
                }

                long long k[kMaxDim];
                for (int i = 0; i < d; ++i) k[i] = k_lo[i];
                if (k_hi[0] < k_lo[0]) continue;
                for (;;) {
                    for (int i = 0; i < d; ++i) q[i] = p[i] + static_cast<double>(k[i]);
                    const std::span<const double> u(q, static_cast<std::size_t>(d));
                    const std::complex<double> base = psi(u);
                    if (std::norm(base) > 0.0) {
                        double r[kMaxDim];
                        for (int i = 0; i < d; ++i) {
                            double acc = 0.0;
                            for (int c = 0; c < d; ++c)
                                acc += M[static_cast<std::size_t>(i * d + c)] * q[c];
                            r[i] = acc;
                        }
                        t += psi(std::span<const double>(r, static_cast<std::size_t>(d))) * std::conj(base);
                    }
                    int axis = d - 1;
                    while (axis >= 0) {
                        if (++k[axis] <= k_hi[axis]) break;
                        k[axis] = k_lo[axis];
                        --axis;
                    }
                    if (axis < 0) break;
                }
            }
            level_max = std::max(level_max, std::abs(t));
            level_tail = std::max(level_tail, tail);
        }
        out.trace.push_back({j, level_max, level_tail, pts.n, -1.0});
        worst = std::max(worst, level_max);
        worst_tail = std::max(worst_tail, level_tail);
    }

    out.score = worst;
    if (worst > std::max(opt.tol, worst_tail)) {
        out.verdict = Verdict::FAIL;
    } else if (worst <= opt.tol) {
        out.verdict = Verdict::PASS;
        if (worst_tail > opt.tol)
            out.note = "truncated sum vanishes; residual certified only to the tail bound " +
                       std::to_string(worst_tail);
    } else {
        out.verdict = Verdict::INCONCLUSIVE;
        out.note = "truncated sum within the tail bound " + std::to_string(worst_tail) +
                   "; raise lattice_K to decide";
    }
    return out;
}

}  // namespace sis
