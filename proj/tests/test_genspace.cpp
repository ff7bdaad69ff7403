#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <cstdio>

#include "sis/errors.hpp"
#include "sis/genspace.hpp"
#include "sis/registry.hpp"
#include "sis/sampler.hpp"
#include "test_support.hpp"

using namespace sis;

namespace {

FourierFunction shannon_hat() {
    return FourierFunction::indicator_1d({{Interval{-0.5, 0.5, false, true}}}, "shannon");
}

FourierFunction haar_hat() { return registry::make_generator("haar").system.generators[0]; }

double eval_sigma(const SpectralFunction& s, double x) { return s.at1(x); }

}  // namespace

TEST_CASE("bracket of an indicator is its lattice covering count") {
    const auto f = shannon_hat();
    const double xi = 0.25;
    const auto b = bracket_product(f, std::span<const double>(&xi, 1), 16);
    CHECK(b.value == 1.0);  // single surviving term
    CHECK(b.tail_bound == 0.0);

    // empty indicator
    const auto z = FourierFunction::indicator_1d({{Interval{0.0, 0.0, false, true}}});
    const double x2 = 0.3;
    CHECK(bracket_product(z, std::span<const double>(&x2, 1), 16).value == 0.0);
}

TEST_CASE("bracket of the box scaling transform is 1 (orthonormal shifts)") {
    const auto f = haar_hat();
    Rng rng(2024);
    for (int i = 0; i < 25; ++i) {
        const double xi = rng.uniform(-3.0, 3.0);
        const auto b = bracket_product(f, std::span<const double>(&xi, 1), 10000);
        CHECK(std::fabs(b.value - 1.0) <= 1e-4);
        CHECK(b.tail_bound <= 1e-3);

        // independent truncated-summation oracle
        double direct = 0.0;
        for (long long k = -10000; k <= 10000; ++k) {
            const double u = xi + static_cast<double>(k);
            const double s = (u == 0.0) ? 1.0 : std::sin(M_PI * u) / (M_PI * u);
            direct += s * s;
        }
        CHECK(b.value == doctest::Approx(direct).epsilon(1e-10));
    }
}

TEST_CASE("bracket needs tail control") {
    FourierFunction bare(1, [](std::span<const double>) { return std::complex<double>(1.0, 0.0); });
    const double xi = 0.0;
    CHECK_THROWS_AS(bracket_product(bare, std::span<const double>(&xi, 1), 100), TailUnbounded);
    // too-small truncation radius for the requested point
    const auto f = haar_hat();
    const double big = 150.0;
    CHECK_THROWS_AS(bracket_product(f, std::span<const double>(&big, 1), 100), TailUnbounded);
}

TEST_CASE("normalize_generator: already-normalized and scaled indicators") {
    const auto sh = shannon_hat();
    const auto n1 = normalize_generator(sh, 16);
    for (double xi : {-0.49, -0.1, 0.0, 0.3, 0.499})
        CHECK(std::abs(n1.at1(xi) - sh.at1(xi)) <= 1e-12);
    for (double xi : {0.5, 0.7, -3.0}) CHECK(std::abs(n1.at1(xi)) == 0.0);

    FourierFunction doubled(
        1,
        [](std::span<const double> x) {
            return std::complex<double>((x[0] >= -0.5 && x[0] < 0.5) ? 2.0 : 0.0, 0.0);
        });
    doubled.with_support(BoxRegion{{-0.5}, {0.5}});
    const auto n2 = normalize_generator(doubled, 16);
    for (double xi : {-0.3, 0.0, 0.44}) CHECK(std::abs(n2.at1(xi) - 1.0) <= 1e-12);
}

TEST_CASE("normalize_generator: box scaling function has unit bracket afterwards") {
    const auto g = normalize_generator(haar_hat(), 10000);
    Rng rng(55);
    for (int i = 0; i < 100; ++i) {
        const double xi = rng.uniform(-2.0, 2.0);
        const auto b = bracket_product(g, std::span<const double>(&xi, 1), 10000);
        CHECK(std::fabs(b.value - 1.0) <= 1e-4);
    }
}

TEST_CASE("spectral function: indicator and box scaling values") {
    const auto shannon = registry::make_generator("shannon").system;
    const auto s1 = spectral_function(shannon);
    CHECK(eval_sigma(s1, 0.3) == 1.0);
    CHECK(eval_sigma(s1, 0.7) == 0.0);

    const auto haar = registry::make_generator("haar").system;
    const auto s2 = spectral_function(haar);
    const double want = (2.0 / M_PI) * (2.0 / M_PI);
    CHECK(std::fabs(eval_sigma(s2, 0.5) - want) <= 1e-12);
    // independent Fourier-integral oracle
    CHECK(std::fabs(eval_sigma(s2, 0.5) - oracle::box_ft_abs_sq(0.5)) <= 1e-6);
    for (double xi : {0.1, 0.25, 1.3, 2.7})
        CHECK(std::fabs(eval_sigma(s2, xi) - oracle::box_ft_abs_sq(xi)) <= 1e-6);
}

TEST_CASE("spectral function of the truncated reducing-space family is chi_G") {
    // phi^m = chi_([0,1)+m cap (0,inf)), m = -M..M
    const int M = 6;
    std::vector<FourierFunction> gens;
    for (int m = -M; m <= M; ++m) {
        const double lo = std::max(0.0, static_cast<double>(m));
        const double hi = static_cast<double>(m) + 1.0;
        if (hi <= lo) continue;
        gens.push_back(FourierFunction::indicator_1d({{Interval{lo, hi, lo == 0.0, true}}}));
    }
    GeneratorSystem S{std::move(gens), DilationMatrix::validate_expansive({{2}}), true, "hardy-family"};
    const auto sigma = spectral_function(S);
    Rng rng(77);
    for (int i = 0; i < 200; ++i) {
        const double xi = rng.uniform(-static_cast<double>(M), static_cast<double>(M));
        const double want = xi > 0.0 ? 1.0 : 0.0;
        CHECK(eval_sigma(sigma, xi) == want);
    }
}

TEST_CASE("generator independence for the reducing space (two families)") {
    const int M = 4;
    std::vector<FourierFunction> whole, halves;
    for (int m = -M; m <= M; ++m) {
        const double lo = std::max(0.0, static_cast<double>(m));
        const double hi = static_cast<double>(m) + 1.0;
        if (hi > lo) whole.push_back(FourierFunction::indicator_1d({{Interval{lo, hi, lo == 0.0, true}}}));
    }
    for (int m = -2 * M; m <= 2 * M; ++m) {
        const double lo = std::max(0.0, 0.5 * static_cast<double>(m));
        const double hi = 0.5 * (static_cast<double>(m) + 1.0);
        if (hi > lo) halves.push_back(FourierFunction::indicator_1d({{Interval{lo, hi, lo == 0.0, true}}}));
    }
    const auto A = DilationMatrix::validate_expansive({{2}});
    const auto s1 = spectral_function({std::move(whole), A, true, "family-a"});
    const auto s2 = spectral_function({std::move(halves), A, true, "family-b"});
    Rng rng(31);
    for (int i = 0; i < 200; ++i) {
        const double xi = rng.uniform(-static_cast<double>(M) + 0.01, static_cast<double>(M) - 0.01);
        CHECK(eval_sigma(s1, xi) == eval_sigma(s2, xi));
    }
}

TEST_CASE("spectral function enforces the unit bound instead of clipping") {
    GeneratorSystem bad{{shannon_hat(), shannon_hat()},
                        DilationMatrix::validate_expansive({{2}}),
                        true,
                        "doubled"};
    const auto sigma = spectral_function(bad);
    CHECK_THROWS_AS(eval_sigma(sigma, 0.25), NotNormalized);
    // batch path reports too
    Block pts(1, 8);
    for (std::size_t i = 0; i < pts.n; ++i) pts.col(0)[i] = 0.1 * static_cast<double>(i);
    std::vector<double> out(pts.n);
    CHECK_THROWS_AS(sigma.eval_batch(pts, out.data()), NotNormalized);
}

TEST_CASE("unclaimed multi-generator systems are rejected") {
    GeneratorSystem S{{shannon_hat(), haar_hat()}, DilationMatrix::validate_expansive({{2}}), false, "x"};
    CHECK_THROWS_AS(spectral_function(S), NotPrincipal);
}

TEST_CASE("unclaimed principal systems are normalized automatically") {
    FourierFunction doubled(
        1,
        [](std::span<const double> x) {
            return std::complex<double>((x[0] >= -0.5 && x[0] < 0.5) ? 2.0 : 0.0, 0.0);
        });
    doubled.with_support(BoxRegion{{-0.5}, {0.5}});
    GeneratorSystem S{{doubled}, DilationMatrix::validate_expansive({{2}}), false, "scaled"};
    const auto sigma = spectral_function(S);
    CHECK(eval_sigma(sigma, 0.25) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eval_sigma(sigma, 0.75) == 0.0);
}

TEST_CASE("low-pass filter of the box scaling function is |cos(pi xi)|") {
    const auto haar = registry::make_generator("haar").system;
    const auto filter = estimate_filter(haar, 2048, 7);
    Rng rng(12);
    for (int i = 0; i < 64; ++i) {
        const double xi = rng.uniform(-2.0, 2.0);
        if (!filter.defined(std::span<const double>(&xi, 1))) continue;
        const auto m = filter.eval(std::span<const double>(&xi, 1));
        CHECK(std::fabs(std::abs(m) - std::fabs(std::cos(M_PI * xi))) <= 1e-6);
    }
    CHECK(filter.diagnostics.max_abs <= 1.0 + 1e-9);
    CHECK(filter.diagnostics.max_periodicity_dev <= 1e-9);
    CHECK(filter.diagnostics.inconsistent_fraction == 0.0);
    CHECK(filter.diagnostics.max_residual <= 1e-6);
}

TEST_CASE("low-pass filter of the band-limited scaling function is the half-band indicator") {
    const auto shannon = registry::make_generator("shannon").system;
    const auto filter = estimate_filter(shannon, 2048, 7);
    for (double xi : {-0.45, -0.3, -0.26, 0.1, 0.2, 0.24, 0.26, 0.4}) {
        if (!filter.defined(std::span<const double>(&xi, 1))) continue;
        const double want = (xi >= -0.25 && xi < 0.25) ? 1.0 : 0.0;
        CHECK(std::abs(filter.eval(std::span<const double>(&xi, 1)) -
                       std::complex<double>(want, 0.0)) <= 1e-12);
    }
}

TEST_CASE("non-refinable indicator fails the filter estimate") {
    GeneratorSystem S{{FourierFunction::indicator_1d({{Interval{1.0, 2.0, false, false}}})},
                      DilationMatrix::validate_expansive({{2}}),
                      true,
                      "chi_[1,2]"};
    bool threw = false;
    try {
        estimate_filter(S, 4096, 7);
    } catch (const FilterUnbounded&) {
        threw = true;
    } catch (const FilterInconsistent&) {
        threw = true;
    }
    CHECK(threw);
}

TEST_CASE("filter estimate requires a principal system") {
    GeneratorSystem S{{shannon_hat(), haar_hat()}, DilationMatrix::validate_expansive({{2}}), true, "x"};
    CHECK_THROWS_AS(estimate_filter(S, 512, 7), NotPrincipal);
}

TEST_CASE("refinability check") {
    const auto haar = spectral_function(registry::make_generator("haar").system);
    CHECK(check_refinable(haar, 4000, 1e-9).refinable);
    const auto shannon = spectral_function(registry::make_generator("shannon").system);
    CHECK(check_refinable(shannon, 4000, 1e-9).refinable);

    GeneratorSystem bad{{FourierFunction::indicator_1d({{Interval{1.0, 2.0, false, false}}})},
                        DilationMatrix::validate_expansive({{2}}),
                        true,
                        "chi_[1,2]"};
    const auto rep = check_refinable(spectral_function(bad), 4000, 1e-9);
    CHECK_FALSE(rep.refinable);
    CHECK(rep.worst_violation == doctest::Approx(1.0));
    CHECK(rep.worst_location[0] > 1.0);
    CHECK(rep.worst_location[0] <= 2.0);
}

TEST_CASE("additivity over disjoint-support unions") {
    const auto left = FourierFunction::indicator_1d({{Interval{-0.5, 0.0, false, true}}});
    const auto right = FourierFunction::indicator_1d({{Interval{0.0, 0.5, false, true}}});
    const auto A = DilationMatrix::validate_expansive({{2}});
    const auto s_union = spectral_function({{left, right}, A, true, "split"});
    const auto s_left = spectral_function({{left}, A, true, "l"});
    const auto s_right = spectral_function({{right}, A, true, "r"});
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const double xi = rng.uniform(-1.0, 1.0);
        CHECK(eval_sigma(s_union, xi) == eval_sigma(s_left, xi) + eval_sigma(s_right, xi));
    }
}

TEST_CASE("dilation covariance via digit-coset completion") {
    // a tight frame generator of the dilated space consists of the dilated
    // digit translates; its spectral function must be sigma(A*^-1 xi)
    for (const char* key : {"haar", "shannon"}) {
        const auto entry = registry::make_generator(key);
        const auto& A = entry.system.dilation;
        const auto Astar = A.adjoint();
        const auto sigma = spectral_function(entry.system);
        const double dA = static_cast<double>(A.det_abs());

        std::vector<FourierFunction> dil_gens;
        for (const auto& q : A.digit_set()) {
            for (const auto& g : entry.system.generators) {
                const double qv = static_cast<double>(q[0]);
                FourierFunction gg = g;
                dil_gens.emplace_back(1, [gg, qv, dA, Astar](std::span<const double> x) {
                    const auto down = Astar.apply_power(-1, x);
                    const std::complex<double> phase =
                        std::polar(1.0, -2.0 * M_PI * qv * down[0]);
                    return gg(std::span<const double>(down.data(), 1)) * phase / std::sqrt(dA);
                });
            }
        }
        const auto sigma_dilated = spectral_function({std::move(dil_gens), A, true, "dilated"});
        Rng rng(9);
        for (int i = 0; i < 100; ++i) {
            const double xi = rng.uniform(-2.0, 2.0);
            const auto down = Astar.apply_power(-1, std::span<const double>(&xi, 1));
            CHECK(std::fabs(eval_sigma(sigma_dilated, xi) - sigma.at1(down[0])) <= 1e-8);
        }
    }
}

TEST_CASE("support of sigma is the union of generator supports") {
    const auto entry = registry::make_generator("hardy-shannon");
    const auto sigma = spectral_function(entry.system);
    Rng rng(44);
    for (int i = 0; i < 300; ++i) {
        const double xi = rng.uniform(-2.0, 2.0);
        const double edge = sigma.edge_distance(std::span<const double>(&xi, 1));
        if (edge < 1e-6) continue;  // boundary samples excluded
        bool in_union = false;
        for (const auto& g : entry.system.generators)
            if (g.abs_sq(std::span<const double>(&xi, 1)) > 1e-12) in_union = true;
        CHECK((sigma.at1(xi) > 1e-12) == in_union);
    }
}

TEST_CASE("reducing-space membership: sigma <= chi_G") {
    const auto sigma = spectral_function(registry::make_generator("hardy-shannon").system);
    Rng rng(13);
    int violations_pos = 0, violations_neg = 0;
    for (int i = 0; i < 400; ++i) {
        const double xi = rng.uniform(-3.0, 3.0);
        const double v = sigma.at1(xi);
        if (v > (xi > 0.0 ? 1.0 : 0.0) + 1e-12) ++violations_pos;   // G = (0, inf)
        if (v > (xi < 0.0 ? 1.0 : 0.0) + 1e-12) ++violations_neg;   // wrong G
    }
    CHECK(violations_pos == 0);
    CHECK(violations_neg > 0);
}

TEST_CASE("grid functions interpolate piecewise-constantly and vanish outside") {
    std::vector<std::complex<double>> cells = {{1.0, 0.0}, {2.0, 0.0}, {3.0, 0.0}, {4.0, 0.0}};
    const auto g = FourierFunction::from_grid(BoxRegion{{0.0}, {2.0}}, {4}, cells);
    CHECK(g.at1(0.0).real() == 1.0);
    CHECK(g.at1(0.49).real() == 1.0);
    CHECK(g.at1(0.5).real() == 2.0);
    CHECK(g.at1(1.999).real() == 4.0);
    CHECK(std::abs(g.at1(2.0)) == 0.0);
    CHECK(std::abs(g.at1(-0.01)) == 0.0);
}

TEST_CASE("grid binary round trip") {
    std::vector<std::complex<double>> cells;
    for (int i = 0; i < 10; ++i) cells.emplace_back(0.1 * i, -0.05 * i);
    const std::string path = "/tmp/sis_test_grid.bin";
    FourierFunction::save_grid_binary(path, BoxRegion{{-1.0}, {1.0}}, {10}, cells);
    const auto g = FourierFunction::load_grid_binary(path);
    for (double xi : {-0.99, -0.5, 0.0, 0.77}) {
        const auto idx = static_cast<std::size_t>((xi + 1.0) / 0.2);
        CHECK(g.at1(xi) == cells[idx]);
    }
}

TEST_CASE("grid CSV loader") {
    const std::string path = "/tmp/sis_test_grid.csv";
    {
        std::FILE* f = std::fopen(path.c_str(), "w");
        REQUIRE(f);
        for (int i = 0; i < 8; ++i)
            std::fprintf(f, "%g,%g,%g\n", -1.0 + 0.25 * i, 1.0 * i, -0.5 * i);
        std::fclose(f);
    }
    const auto g = FourierFunction::load_grid_csv(path);
    CHECK(g.at1(-1.0) == std::complex<double>(0.0, 0.0));
    CHECK(g.at1(-0.74) == std::complex<double>(1.0, -0.5));
    CHECK(g.at1(0.76) == std::complex<double>(7.0, -3.5));
    CHECK(std::abs(g.at1(1.1)) == 0.0);
}
