#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sis/genspace.hpp"
#include "sis/wavelets.hpp"

namespace sis::registry {

/// Built-in generator system plus its declared ground-truth completeness
/// labels per reducing set G (canonical region expression -> complete?).
/// Labels come from closed-form analysis and are inputs, never inferred.
struct GeneratorEntry {
    std::string key;
    GeneratorSystem system;
    std::vector<std::pair<std::string, bool>> completeness;
    std::string default_G;

    std::optional<bool> label_for(const std::string& g_expr) const {
        for (const auto& [expr, complete] : completeness)
            if (expr == g_expr) return complete;
        return std::nullopt;
    }
};

struct WaveletEntry {
    std::string key;
    WaveletSystem system;
    std::optional<std::string> core_key;  // matching refinable core, when registered
    bool expect_calderon_pass = true;
};

bool is_generator_key(const std::string& key);
bool is_wavelet_key(const std::string& key);

/// Keys: haar, shannon, bspline:n (n = 1..10), hardy-shannon, quincunx-shannon.
GeneratorEntry make_generator(const std::string& key);

/// Keys: haar-wavelet, shannon-wavelet, journe, shannon-wavelet-perturbed.
WaveletEntry make_wavelet(const std::string& key);

std::vector<std::string> generator_keys();
std::vector<std::string> wavelet_keys();

/// Value of the cardinal B-spline of order m (support [0, m]) at x.
double bspline_value(int m, double x);

}  // namespace sis::registry
