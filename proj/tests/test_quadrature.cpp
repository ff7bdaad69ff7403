#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sis/errors.hpp"
#include "sis/quadrature.hpp"

using namespace sis;

TEST_CASE("polynomials and classics") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return std::exp(x); }, 0.0, 1.0) ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
    CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
    // orientation
    CHECK(integrate([](double x) { return x; }, 1.0, 0.0) == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("oscillatory integrand") {
    CHECK(integrate([](double x) { return std::cos(40.0 * M_PI * x); }, 0.0, 1.0) ==
          doctest::Approx(0.0).epsilon(1e-9));
    CHECK(integrate([](double x) { return std::cos(40.0 * M_PI * x); }, 0.0, 0.25) ==
          doctest::Approx(std::sin(10.0 * M_PI) / (40.0 * M_PI)).epsilon(1e-9));
}

TEST_CASE("discontinuous indicator converges by adaptive bisection") {
    const auto f = [](double x) { return (x >= 0.0 && x < 0.5) ? 1.0 : 0.0; };
    QuadConfig cfg;
    cfg.rel_tol = 1e-10;
    CHECK(std::fabs(integrate(f, -1.0, 1.0, cfg) - 0.5) <= 1e-9);
}

TEST_CASE("budget exhaustion raises") {
    QuadConfig cfg;
    cfg.max_intervals = 4;
    cfg.rel_tol = 1e-14;
    cfg.abs_tol = 0.0;
    const auto nasty = [](double x) { return (x > 0.123456 && x < 0.2) ? std::sin(1000.0 * x) : 0.0; };
    CHECK_THROWS_AS(integrate(nasty, 0.0, 1.0, cfg), QuadratureNonConvergent);
}

TEST_CASE("2D box integration") {
    const double lo[2] = {0.0, 0.0};
    const double hi[2] = {1.0, 2.0};
    CHECK(integrate_box([](std::span<const double>) { return 1.0; }, std::span<const double>(lo, 2),
                        std::span<const double>(hi, 2)) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(integrate_box([](std::span<const double> p) { return p[0] * p[1]; },
                        std::span<const double>(lo, 2), std::span<const double>(hi, 2)) ==
          doctest::Approx(1.0).epsilon(1e-10));
}
