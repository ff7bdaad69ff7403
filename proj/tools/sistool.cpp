// Command-line front end: dilation checks, spectral-function tabulation,
// the completeness-criteria suite, and wavelet checks over the built-in
// example registry or custom gridded functions.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sis/criteria.hpp"
#include "sis/errors.hpp"
#include "sis/kernels.hpp"
#include "sis/registry.hpp"
#include "sis/report.hpp"
#include "sis/runconfig.hpp"

namespace {

using namespace sis;

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << text;
}

std::string stem_of(const std::string& path) {
    const std::size_t dot = path.rfind('.');
    const std::size_t slash = path.rfind('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
    return path.substr(0, dot);
}

struct LoadedExample {
    GeneratorSystem system;
    std::string default_G = "all";
    std::optional<bool> label;  // resolved ground truth for the chosen G
};

LoadedExample load_generator_example(const RunConfig& cfg, const std::string& g_expr) {
    LoadedExample out;
    if (cfg.example == "custom") {
        if (!cfg.custom_file) throw ConfigError("custom example needs custom.file");
        const std::string fmt = cfg.custom_format.value_or("grid-csv");
        FourierFunction f = (fmt == "grid-bin") ? FourierFunction::load_grid_binary(*cfg.custom_file)
                                                : FourierFunction::load_grid_csv(*cfg.custom_file);
        if (cfg.custom_decay_coeff && cfg.custom_decay_exponent)
            f.with_decay(Decay{*cfg.custom_decay_coeff, *cfg.custom_decay_exponent});
        DilationMatrix A = cfg.dilation ? DilationMatrix::validate_expansive(*cfg.dilation)
                                        : DilationMatrix();
        out.system = {{std::move(f)}, std::move(A), cfg.custom_claimed_tight.value_or(false), "custom"};
    } else {
        registry::GeneratorEntry entry = registry::make_generator(cfg.example);
        if (cfg.dilation) entry.system.dilation = DilationMatrix::validate_expansive(*cfg.dilation);
        out.system = std::move(entry.system);
        out.default_G = entry.default_G;
        out.label = entry.label_for(g_expr);
    }
    if (cfg.label_complete) out.label = cfg.label_complete;  // explicit label wins
    return out;
}

int cmd_dilation(const std::string& matrix_text, const RunConfig& cfg) {
    ReportMeta meta;
    meta.example = "dilation";
    meta.seed = cfg.seed;
    meta.deterministic = cfg.deterministic;
    DilationReportData data;
    IntMatrix m;
    try {
        RunConfig tmp = RunConfig::parse("example = x\ndilation = " + matrix_text);
        m = *tmp.dilation;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    meta.dilation = m;
    try {
        const DilationMatrix A = DilationMatrix::validate_expansive(m);
        data.accepted = true;
        data.dim = A.dim();
        data.det_abs = A.det_abs();
        data.digits = A.digit_set();
        std::cout << "accepted: dim=" << data.dim << " d_A=" << data.det_abs << " digits={";
        for (std::size_t i = 0; i < data.digits.size(); ++i) {
            if (i) std::cout << ", ";
            std::cout << "(";
            for (std::size_t k = 0; k < data.digits[i].size(); ++k) {
                if (k) std::cout << ",";
                std::cout << data.digits[i][k];
            }
            std::cout << ")";
        }
        std::cout << "}\n";
    } catch (const Error& e) {
        data.accepted = false;
        data.error = e.what();
        std::cout << "rejected: " << e.what() << "\n";
    }
    if (!cfg.out.empty()) write_text(cfg.out, dilation_report_json(data, meta));
    return data.accepted ? 0 : 1;
}

int cmd_spectral(const RunConfig& cfg, bool plot_script) {
    const double lo = cfg.grid_min.value_or(-4.0);
    const double hi = cfg.grid_max.value_or(4.0);
    const double step = cfg.grid_step.value_or(1e-3);
    if (!(hi > lo) || !(step > 0)) throw ConfigError("bad grid range");

    RealFunction fn;
    int dim = 1;
    if (registry::is_wavelet_key(cfg.example)) {
        registry::WaveletEntry entry = registry::make_wavelet(cfg.example);
        dim = entry.system.dim();
        std::vector<FourierFunction> psis = entry.system.psis;
        fn = RealFunction(dim, [psis](std::span<const double> x) {
            double acc = 0.0;
            for (const auto& p : psis) acc += p.abs_sq(x);
            return acc;
        });
    } else {
        LoadedExample ex = load_generator_example(cfg, "all");
        dim = ex.system.dim();
        fn = spectral_function(ex.system).as_real();
    }
    if (dim > 2) throw ConfigError("spectral tabulation supports d <= 2");

    std::ostringstream os;
    char buf[64];
    const auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    const std::size_t n = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5)) + 1;
    if (dim == 1) {
        os << "xi,sigma\n";
        for (std::size_t i = 0; i < n; ++i) {
            const double x = lo + static_cast<double>(i) * step;
            os << num(x) << "," << num(fn.at1(x)) << "\n";
        }
    } else {
        os << "x,y,sigma\n";
        for (std::size_t iy = 0; iy < n; ++iy)
            for (std::size_t ix = 0; ix < n; ++ix) {
                const double p[2] = {lo + static_cast<double>(ix) * step, lo + static_cast<double>(iy) * step};
                os << num(p[0]) << "," << num(p[1]) << "," << num(fn(std::span<const double>(p, 2))) << "\n";
            }
    }
    write_text(cfg.out, os.str());
    if (plot_script && !cfg.out.empty()) {
        const std::string py = "import csv, sys\nimport matplotlib.pyplot as plt\n"
                               "rows = list(csv.reader(open('" + cfg.out + "')))[1:]\n"
                               "xs = [float(r[0]) for r in rows]\nys = [float(r[-1]) for r in rows]\n"
                               "plt.plot(xs, ys, lw=0.8)\nplt.xlabel('xi')\nplt.ylabel('sigma')\n"
                               "plt.savefig('" + stem_of(cfg.out) + ".png', dpi=160)\n";
        write_text(stem_of(cfg.out) + "_plot.py", py);
    }
    return 0;
}

int cmd_criteria(const RunConfig& cfg) {
    const std::string g_expr_raw = cfg.G.value_or("");
    LoadedExample ex = load_generator_example(cfg, g_expr_raw.empty() ? "" : g_expr_raw);
    const int dim = ex.system.dim();

    // canonicalize G through the parser so registry labels match
    const std::string g_text = g_expr_raw.empty() ? ex.default_G : g_expr_raw;
    SpectralFunction sigma_for_support = spectral_function(ex.system);
    RealFunction sigma_real = sigma_for_support.as_real();
    Region G = parse_region(g_text, dim, &sigma_real, defaults::tau_supp);
    if (cfg.example != "custom" && !cfg.label_complete) {
        registry::GeneratorEntry entry = registry::make_generator(cfg.example);
        ex.label = entry.label_for(G.expr());
    }

    SuiteConfig sc;
    sc.probe = cfg.resolve_probe(dim);
    sc.quad = cfg.resolve_quad();
    sc.ground_truth_complete = ex.label;

    ReportMeta meta;
    meta.example = cfg.example;
    meta.G_expr = G.expr();
    meta.dilation = ex.system.dilation.entries();
    meta.seed = cfg.seed;
    meta.config_hash = cfg.hash_hex();
    meta.deterministic = cfg.deterministic;

    SuiteResult result;
    try {
        result = run_suite(ex.system, G, sc);
    } catch (const HypothesisViolated& e) {
        std::cerr << "hypothesis violated: " << e.what() << "\n";
        return 2;
    }

    const std::string json = criteria_report_json(result, meta, sc.probe);
    write_text(cfg.out, json);
    if (cfg.format == "csv" && !cfg.out.empty()) {
        for (const auto& rep : result.reports)
            write_text(stem_of(cfg.out) + "." + to_string(rep.id) + ".csv", criterion_trace_csv(rep));
        if (result.projection)
            write_text(stem_of(cfg.out) + "." + to_string(result.projection->id) + ".csv",
                       criterion_trace_csv(*result.projection));
    }

    std::cout << "consensus: " << to_string(result.consensus);
    if (result.ground_truth)
        std::cout << " (ground truth: " << (*result.ground_truth ? "complete" : "incomplete") << ")";
    std::cout << "\n";

    std::size_t decisive = 0;
    for (const auto& r : result.reports)
        if (r.verdict != Verdict::INCONCLUSIVE) ++decisive;
    if (result.consensus == Consensus::SPLIT) return decisive == 0 ? 3 : 1;
    if (result.matches_ground_truth && !*result.matches_ground_truth) return 1;
    return 0;
}

int cmd_wavelet(const RunConfig& cfg) {
    if (!registry::is_wavelet_key(cfg.example))
        throw ConfigError("wavelet check needs a registered wavelet key, got '" + cfg.example + "'");
    registry::WaveletEntry entry = registry::make_wavelet(cfg.example);
    const WaveletSystem& W = entry.system;
    const DensityProbe probe = cfg.resolve_probe(W.dim());

    WaveletReportData data;
    data.calderon_expected_pass = entry.expect_calderon_pass;
    data.calderon = calderon_check(W, std::max<std::size_t>(probe.samples_per_level / 16, 1024), cfg.seed,
                                   cfg.wavelet_jrange.value_or(defaults::calderon_j_range));
    SemiOrthOptions so;
    so.seed = cfg.seed;
    data.semiorth = semiorthogonality_check(W, so);
    data.origin = wavelet_origin_test(W, probe);

    if (entry.core_key) {
        const SpectralFunction core = spectral_function(registry::make_generator(*entry.core_key).system);
        const RealFunction sigma_w = sigma_from_core(core);
        Block pts = sample_box(W.dim(), probe.box_radius, 4096, derive_seed(cfg.seed, {0x99}));
        std::vector<double> lhs(pts.n), rhs(pts.n), tmp(pts.n);
        sigma_w.eval_batch(pts, lhs.data());
        std::fill(rhs.begin(), rhs.end(), 0.0);
        for (const auto& psi : W.psis) {
            psi.abs_sq_batch(pts, tmp.data());
            for (std::size_t i = 0; i < pts.n; ++i) rhs[i] += tmp[i];
        }
        double dev = 0.0;
        for (std::size_t i = 0; i < pts.n; ++i) dev = std::max(dev, std::fabs(lhs[i] - rhs[i]));
        data.decomposition_max_dev = dev;
    }

    ReportMeta meta;
    meta.example = cfg.example;
    meta.G_expr = W.G.expr();
    meta.dilation = W.dilation.entries();
    meta.seed = cfg.seed;
    meta.config_hash = cfg.hash_hex();
    meta.deterministic = cfg.deterministic;
    write_text(cfg.out, wavelet_report_json(data, meta));

    const bool calderon_ok = (data.calderon.verdict == Verdict::PASS) == entry.expect_calderon_pass;
    bool origin_ok = true;
    for (const auto& [alpha, t] : data.origin)
        if (entry.expect_calderon_pass && t.verdict != Verdict::PASS) origin_ok = false;
    const bool semi_ok = !entry.expect_calderon_pass || data.semiorth.verdict != Verdict::FAIL;
    const bool decomp_ok =
        !data.decomposition_max_dev || *data.decomposition_max_dev <= data.decomposition_tol;
    return (calderon_ok && origin_ok && semi_ok && decomp_ok) ? 0 : 1;
}

int cmd_registry_list() {
    for (const auto& k : registry::generator_keys()) std::cout << k << "  (generator system)\n";
    for (const auto& k : registry::wavelet_keys()) std::cout << k << "  (wavelet system)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral-function toolkit for shift-invariant spaces under expansive dilations"};
    app.require_subcommand(1);

    std::string config_path;
    std::string kernels_choice;
    std::optional<std::uint64_t> seed_flag;
    std::optional<int> jmax_flag;
    std::optional<std::uint64_t> samples_flag;
    std::optional<double> epsilon_flag;
    std::string out_flag;
    std::string format_flag;
    bool deterministic_flag = false;

    app.add_option("--kernels", kernels_choice, "force kernel backend: scalar|avx2");

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* opt = sub->add_option("-c,--config", config_path, "run configuration file");
        if (needs_config) opt->required();
        sub->add_option("--seed", seed_flag, "override seed");
        sub->add_option("--jmax", jmax_flag, "override probe.jmax");
        sub->add_option("--samples", samples_flag, "override probe.samples");
        sub->add_option("--epsilon", epsilon_flag, "override probe.epsilon");
        sub->add_option("--out", out_flag, "override output path");
        sub->add_option("--format", format_flag, "override output format: json|csv");
        sub->add_flag("--deterministic", deterministic_flag, "omit wall-clock fields from reports");
    };

    auto* dil = app.add_subcommand("dilation", "validate an integer dilation matrix");
    std::string matrix_text;
    dil->add_option("--matrix", matrix_text, "row-major integer matrix, e.g. [[1,1],[1,-1]]");
    add_common(dil, false);

    auto* spec = app.add_subcommand("spectral", "tabulate the spectral function on a grid (CSV)");
    bool plot_script = false;
    spec->add_flag("--plot-script", plot_script, "emit a plotting script next to the CSV");
    add_common(spec, true);

    auto* crit = app.add_subcommand("criteria", "run the completeness-criteria suite");
    add_common(crit, true);

    auto* wav = app.add_subcommand("wavelet", "run wavelet checks (Calderon sum, level orthogonality, origin)");
    add_common(wav, true);

    auto* reg = app.add_subcommand("registry", "registry utilities");
    auto* reg_list = reg->add_subcommand("list", "list built-in example keys");

    CLI11_PARSE(app, argc, argv);

    if (!kernels_choice.empty()) {
        using sis::kernels::Backend;
        const Backend b = kernels_choice == "avx2" ? Backend::avx2 : Backend::scalar;
        if (kernels_choice != "avx2" && kernels_choice != "scalar") {
            std::cerr << "error: unknown kernel backend '" << kernels_choice << "'\n";
            return 1;
        }
        if (!sis::kernels::set_backend(b)) {
            std::cerr << "error: kernel backend '" << kernels_choice << "' unavailable on this host\n";
            return 1;
        }
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) cfg = RunConfig::parse_file(config_path);
        if (seed_flag) cfg.seed = *seed_flag;
        if (jmax_flag) cfg.probe_jmax = *jmax_flag;
        if (samples_flag) cfg.probe_samples = *samples_flag;
        if (epsilon_flag) cfg.probe_epsilon = *epsilon_flag;
        if (!out_flag.empty()) cfg.out = out_flag;
        if (!format_flag.empty()) cfg.format = format_flag;
        if (deterministic_flag) cfg.deterministic = true;

        if (dil->parsed()) {
            if (matrix_text.empty() && cfg.dilation) {
                std::string s = "[";
                for (std::size_t i = 0; i < cfg.dilation->size(); ++i) {
                    if (i) s += ",";
                    s += "[";
                    for (std::size_t j = 0; j < (*cfg.dilation)[i].size(); ++j) {
                        if (j) s += ",";
                        s += std::to_string((*cfg.dilation)[i][j]);
                    }
                    s += "]";
                }
                matrix_text = s + "]";
            }
            if (matrix_text.empty()) {
                std::cerr << "error: dilation needs --matrix or a config with a dilation key\n";
                return 1;
            }
            return cmd_dilation(matrix_text, cfg);
        }
        if (spec->parsed()) return cmd_spectral(cfg, plot_script);
        if (crit->parsed()) return cmd_criteria(cfg);
        if (wav->parsed()) return cmd_wavelet(cfg);
        if (reg->parsed() && reg_list->parsed()) return cmd_registry_list();
        std::cerr << "error: no subcommand\n";
        return 1;
    } catch (const sis::HypothesisViolated& e) {
        std::cerr << "hypothesis violated: " << e.what() << "\n";
        return 2;
    } catch (const sis::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
