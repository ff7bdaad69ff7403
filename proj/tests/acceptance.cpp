// Acceptance suite: exercises the full toolkit at production defaults
// (seed 42, 100000 samples per level, j_max 40, epsilon 1e-3) and prints one
// PASS/FAIL line per criterion. Returns the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "sis/criteria.hpp"
#include "sis/errors.hpp"
#include "sis/registry.hpp"
#include "sis/wavelets.hpp"
#include "test_support.hpp"

using namespace sis;

namespace {

#ifndef SIS_CLI_PATH
#define SIS_CLI_PATH "sistool"
#endif

int g_failures = 0;

void section(int num, const std::string& name, const std::function<void(std::string&)>& body) {
    std::string detail;
    bool ok = true;
    try {
        body(detail);
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    if (!detail.empty() && detail[0] != ' ') detail = " - " + detail;
    if (ok) {
        std::printf("[PASS] %d. %s%s\n", num, name.c_str(), detail.c_str());
    } else {
        std::printf("[FAIL] %d. %s%s\n", num, name.c_str(), detail.c_str());
        ++g_failures;
    }
    std::fflush(stdout);
}

void require(bool cond, const std::string& what) {
    if (!cond) throw std::runtime_error(what);
}

DensityProbe default_probe() {
    DensityProbe p;  // j_max 40, 100000 samples, eps 1e-3, seed 42
    return p;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main() {
    std::printf("acceptance suite (seed=42, samples/level=100000, j_max=40, epsilon=1e-3)\n");

    // 1. criteria consensus across the registered examples
    section(1, "criteria consensus on registered examples", [](std::string& detail) {
        struct Case {
            const char* key;
            const char* g;
            bool expect_complete;
        };
        const Case cases[] = {{"haar", "all", true},
                              {"shannon", "all", true},
                              {"bspline:2", "all", true},
                              {"hardy-shannon", "halfspace(0,0)", true},
                              {"hardy-shannon", "all", false}};
        std::ostringstream note;
        for (const auto& c : cases) {
            const auto t0 = std::chrono::steady_clock::now();
            SuiteConfig cfg;
            cfg.probe = default_probe();
            cfg.ground_truth_complete = c.expect_complete;
            const auto entry = registry::make_generator(c.key);
            const Region G = parse_region(c.g, entry.system.dim());
            const SuiteResult res = run_suite(entry.system, G, cfg);
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

            require(res.consensus != Consensus::SPLIT,
                    std::string(c.key) + "/" + c.g + ": SPLIT consensus");
            const Verdict want = c.expect_complete ? Verdict::PASS : Verdict::FAIL;
            std::size_t decisive = 0;
            for (const auto& r : res.reports) {
                if (r.verdict == Verdict::INCONCLUSIVE) continue;
                ++decisive;
                require(r.verdict == want, std::string(c.key) + "/" + c.g + ": " + to_string(r.id) +
                                               " = " + to_string(r.verdict));
            }
            require(decisive == 7, std::string(c.key) + "/" + c.g + ": only " +
                                       std::to_string(decisive) + " decisive verdicts");
            require(res.matches_ground_truth.value_or(false),
                    std::string(c.key) + "/" + c.g + ": ground-truth mismatch");
            require(secs <= 60.0, std::string(c.key) + ": runtime " + std::to_string(secs) + "s > 60s");
            note << c.key << "/" << c.g << " " << to_string(res.consensus) << " ("
                 << std::round(secs * 100.0) / 100.0 << "s); ";
        }
        detail = " - " + note.str();
    });

    // 2. box-family spectral values against the independent Fourier oracle
    section(2, "box-family spectral value and raw bracket", [](std::string& detail) {
        const auto entry = registry::make_generator("haar");
        const auto sigma = spectral_function(entry.system);
        const double v = sigma.at1(0.5);
        const double closed = (2.0 / M_PI) * (2.0 / M_PI);
        const double numeric = oracle::box_ft_abs_sq(0.5);
        require(std::fabs(v - numeric) <= 1e-6,
                "sigma(0.5) vs numeric oracle: " + std::to_string(std::fabs(v - numeric)));
        require(std::fabs(v - closed) <= 1e-6, "sigma(0.5) vs (2/pi)^2");

        Rng rng(42);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double xi = rng.uniform(-3.0, 3.0);
            const auto b = bracket_product(entry.system.generators[0],
                                           std::span<const double>(&xi, 1), 10000);
            worst = std::max(worst, std::fabs(b.value - 1.0));
        }
        require(worst <= 1e-4, "bracket deviation " + std::to_string(worst));
        detail = "sigma(0.5)=" + std::to_string(v) + ", worst |bracket-1|=" + std::to_string(worst);
    });

    // 3. projection-norm identity
    section(3, "projection-norm identity", [](std::string& detail) {
        const auto shannon = spectral_function(registry::make_generator("shannon").system);
        const Region E1 = Region::interval(-0.25, 0.25);
        for (int j = 0; j <= 20; ++j) {
            const double v = projection_norm_sq(shannon, E1, j);
            require(std::fabs(v - 0.5) <= 1e-9,
                    "shannon j=" + std::to_string(j) + ": " + std::to_string(v));
        }
        const auto haar = spectral_function(registry::make_generator("haar").system);
        const Region E2 = Region::interval(-0.5, 0.5);
        double prev = -1.0, last = 0.0;
        for (int j = 0; j <= 20; ++j) {
            last = projection_norm_sq(haar, E2, j);
            require(last >= prev - 1e-9, "haar sequence not nondecreasing at j=" + std::to_string(j));
            prev = last;
        }
        require(std::fabs(last - 1.0) <= 1e-3, "haar limit " + std::to_string(last));
        detail = "haar P(20)=" + std::to_string(last);
    });

    // 4. scale monotonicity across every registered refinable example
    section(4, "scale monotonicity of registered examples", [](std::string& detail) {
        double worst = -1.0;
        for (const auto& key : registry::generator_keys()) {
            const auto sigma = spectral_function(registry::make_generator(key).system);
            const auto rep = check_monotonicity(sigma, 39, 10000, 1e-9, 42);
            require(rep.ok, key + ": violation " + std::to_string(rep.worst_violation) + " at j=" +
                                std::to_string(rep.worst_j));
            worst = std::max(worst, rep.worst_violation);
        }
        detail = "worst signed violation " + std::to_string(worst);
    });

    // 5. wavelet origin theorem plus the Calderon negative control
    section(5, "wavelet origin theorem", [](std::string& detail) {
        for (const char* key : {"shannon-wavelet", "haar-wavelet", "journe"}) {
            const auto res = wavelet_origin_test(registry::make_wavelet(key).system, default_probe());
            for (const auto& [alpha, t] : res)
                require(t.verdict == Verdict::PASS,
                        std::string(key) + " alpha=" + std::to_string(alpha) + ": " + to_string(t.verdict));
        }
        const auto bad = registry::make_wavelet("shannon-wavelet-perturbed").system;
        const double xi = 0.03;
        const double sum = calderon_sum(bad, std::span<const double>(&xi, 1)).value;
        require(sum >= 2.0 - 1e-9, "perturbed Calderon sum " + std::to_string(sum));
        detail = "perturbed control sum(0.03)=" + std::to_string(sum);
    });

    // 6. core-space decomposition identity
    section(6, "spectral decomposition of the complement space", [](std::string& detail) {
        const auto shannon = spectral_function(registry::make_generator("shannon").system);
        const auto sw = sigma_from_core(shannon);
        Rng rng(42);
        for (int i = 0; i < 2000; ++i) {
            const double xi = rng.uniform(-2.0, 2.0);
            double edge = 2.0;
            for (double e : {-1.0, -0.5, 0.5, 1.0}) edge = std::min(edge, std::fabs(xi - e));
            if (edge < 1e-9) continue;
            const double want = (std::fabs(xi) >= 0.5 && std::fabs(xi) < 1.0) ? 1.0 : 0.0;
            require(sw.at1(xi) == want, "shannon sigma_W mismatch at xi=" + std::to_string(xi));
        }
        const auto haar = spectral_function(registry::make_generator("haar").system);
        const auto hw = sigma_from_core(haar);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double xi = rng.uniform(-6.0, 6.0);
            worst = std::max(worst, std::fabs(hw.at1(xi) - oracle::step_wavelet_ft_abs_sq(xi)));
        }
        require(worst <= 1e-6, "haar sigma_W vs numeric oracle: " + std::to_string(worst));
        detail = "haar max deviation " + std::to_string(worst);
    });

    // 7. measure-ratio estimates against exact interval arithmetic
    section(7, "pull-back measure ratios vs interval arithmetic", [](std::string& detail) {
        const auto A = DilationMatrix::validate_expansive({{2}});
        DensityProbe probe = default_probe();
        const double delta = 0.1;
        const Region E1 = Region::unite(
            {Region::interval(-0.5, -delta, false, false), Region::interval(delta, 0.5, true, true)});
        const std::vector<std::pair<double, double>> parts = {{-0.5, -delta}, {delta, 0.5}};
        double worst_sigma = 0.0;
        for (int j : {0, 5, 10, 20}) {
            const double scale = std::pow(2.0, -j);
            const double want = oracle::overlap_set(parts, -scale, scale) / (2.0 * scale);
            const auto est = relative_measure(E1, Region::all(1), A, j, 1.0, probe);
            const double dev = std::fabs(est.ratio - want);
            require(dev <= 3.0 * est.se + 1e-12,
                    "j=" + std::to_string(j) + ": dev " + std::to_string(dev) + " > 3se");
            if (est.se > 0.0) worst_sigma = std::max(worst_sigma, dev / est.se);
        }
        for (int j : {0, 5, 10, 20}) {
            const auto est = relative_measure(Region::halfspace(1, 0, 0.0), Region::all(1), A, j, 1.0, probe);
            require(std::fabs(est.ratio - 0.5) <= 3.0 * est.se, "half-line ratio at j=" + std::to_string(j));
        }
        detail = "worst deviation " + std::to_string(worst_sigma) + " standard errors";
    });

    // 8. dilation module
    section(8, "dilation validation, digits, quincunx square", [](std::string& detail) {
        const auto Q = DilationMatrix::validate_expansive({{1, 1}, {1, -1}});
        require(Q.det_abs() == 2, "quincunx determinant");
        require(Q.digit_set().size() == 2, "quincunx digit count");
        bool rejected = false;
        try {
            DilationMatrix::validate_expansive({{2, 0}, {0, 1}});
        } catch (const NotExpansive&) {
            rejected = true;
        }
        require(rejected, "[[2,0],[0,1]] must be rejected");
        Rng rng(42);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double p[2] = {rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)};
            const auto v = Q.apply_power(2, std::span<const double>(p, 2));
            worst = std::max({worst, std::fabs(v[0] - 2.0 * p[0]), std::fabs(v[1] - 2.0 * p[1])});
        }
        require(worst <= 1e-12, "A^2 = 2I deviation " + std::to_string(worst));
        detail = "A^2 deviation " + std::to_string(worst);
    });

    // 9. byte-identical reports through the CLI
    section(9, "report determinism through the CLI", [](std::string& detail) {
        const std::string cfg_path = "/tmp/sis_acc_det.cfg";
        {
            std::ofstream cfg(cfg_path);
            cfg << "example = haar\nG = all\nseed = 42\ndeterministic = true\n";
        }
        const std::string cmd_a = std::string(SIS_CLI_PATH) + " criteria -c " + cfg_path +
                                  " --out /tmp/sis_acc_a.json > /dev/null 2>&1";
        const std::string cmd_b = std::string(SIS_CLI_PATH) + " criteria -c " + cfg_path +
                                  " --out /tmp/sis_acc_b.json > /dev/null 2>&1";
        require(std::system(cmd_a.c_str()) == 0, "first CLI run failed");
        require(std::system(cmd_b.c_str()) == 0, "second CLI run failed");
        const std::string a = slurp("/tmp/sis_acc_a.json");
        const std::string b = slurp("/tmp/sis_acc_b.json");
        require(!a.empty(), "empty report");
        require(a == b, "reports differ between identical runs");
        detail = std::to_string(a.size()) + " bytes, byte-identical";
    });

    std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                g_failures);
    return g_failures;
}
