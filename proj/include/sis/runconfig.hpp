#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sis/dilation.hpp"
#include "sis/quadrature.hpp"
#include "sis/sampler.hpp"

namespace sis {

/// Parsed run configuration: a flat "key = value" file with dotted keys.
/// Unset optionals fall back to built-in defaults at resolve time, so a
/// serialized config round-trips exactly (parse(serialize(c)) == c).
struct RunConfig {
    std::string example = "haar";
    std::optional<IntMatrix> dilation;
    std::optional<std::string> G;
    std::optional<bool> label_complete;
    std::uint64_t seed = defaults::probe_seed;

    std::optional<int> probe_jmax;
    std::optional<std::uint64_t> probe_samples;
    std::optional<double> probe_epsilon;
    std::optional<int> probe_window;
    std::optional<double> probe_box_radius;

    std::optional<double> quad_rel_tol;
    std::optional<double> quad_abs_tol;
    std::optional<int> quad_max_intervals;

    std::optional<double> grid_min;
    std::optional<double> grid_max;
    std::optional<double> grid_step;

    std::optional<int> wavelet_jrange;

    std::optional<std::string> custom_file;
    std::optional<std::string> custom_format;  // grid-csv | grid-bin
    std::optional<bool> custom_claimed_tight;
    std::optional<double> custom_decay_coeff;
    std::optional<double> custom_decay_exponent;

    std::string out;
    std::string format = "json";  // json | csv (csv adds per-criterion trace files)
    bool deterministic = false;

    bool operator==(const RunConfig&) const = default;

    static RunConfig parse(const std::string& text);
    static RunConfig parse_file(const std::string& path);

    /// Canonical text form: fixed key order, shortest round-trip numbers.
    /// semantic_only drops fields that cannot affect computed results
    /// (out, format, deterministic).
    std::string serialize(bool semantic_only = false) const;

    /// FNV-1a over the semantic canonical form, embedded in reports.
    std::string hash_hex() const;

    DensityProbe resolve_probe(int dim) const;
    QuadConfig resolve_quad() const;
};

}  // namespace sis
