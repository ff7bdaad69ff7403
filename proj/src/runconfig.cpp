#include "sis/runconfig.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sis/errors.hpp"

namespace sis {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    if (std::strtod(buf, nullptr) != v) std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw ConfigError("");
        return x;
    } catch (...) {
        throw ConfigError("bad numeric value for '" + key + "': " + v);
    }
}

long long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const long long x = std::stoll(v, &used);
        if (used != v.size()) throw ConfigError("");
        return x;
    } catch (...) {
        throw ConfigError("bad integer value for '" + key + "': " + v);
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("bad boolean value for '" + key + "': " + v);
}

IntMatrix parse_matrix(const std::string& text) {
    IntMatrix m;
    std::vector<long long> row;
    std::string tok;
    int depth = 0;
    auto flush_tok = [&]() {
        const std::string t = trim(tok);
        tok.clear();
        if (t.empty()) return;
        for (char c : t)
            if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+'))
                throw NonInteger("dilation matrix entries must be integers, got '" + t + "'");
        row.push_back(parse_int("dilation", t));
    };
    for (char c : text) {
        if (c == '[') {
            ++depth;
        } else if (c == ']') {
            flush_tok();
            if (depth == 2 && !row.empty()) {
                m.push_back(row);
                row.clear();
            }
            --depth;
        } else if (c == ',') {
            if (depth == 2) flush_tok();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            tok += c;
        }
    }
    if (depth != 0 || m.empty()) throw ConfigError("bad matrix literal: " + text);
    return m;
}

std::string matrix_str(const IntMatrix& m) {
    std::string s = "[";
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i) s += ",";
        s += "[";
        for (std::size_t j = 0; j < m[i].size(); ++j) {
            if (j) s += ",";
            s += std::to_string(m[i][j]);
        }
        s += "]";
    }
    return s + "]";
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line without '=': " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) throw ConfigError("empty key or value: " + line);

        if (key == "example") c.example = val;
        else if (key == "dilation") c.dilation = parse_matrix(val);
        else if (key == "G") c.G = val;
        else if (key == "label") c.label_complete = (val == "complete") ? true
                                   : (val == "incomplete") ? false
                                   : throw ConfigError("label must be complete|incomplete");
        else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_int(key, val));
        else if (key == "probe.jmax") c.probe_jmax = static_cast<int>(parse_int(key, val));
        else if (key == "probe.samples") c.probe_samples = static_cast<std::uint64_t>(parse_int(key, val));
        else if (key == "probe.epsilon") c.probe_epsilon = parse_double(key, val);
        else if (key == "probe.window") c.probe_window = static_cast<int>(parse_int(key, val));
        else if (key == "probe.box_radius") c.probe_box_radius = parse_double(key, val);
        else if (key == "quad.rel_tol") c.quad_rel_tol = parse_double(key, val);
        else if (key == "quad.abs_tol") c.quad_abs_tol = parse_double(key, val);
        else if (key == "quad.max_intervals") c.quad_max_intervals = static_cast<int>(parse_int(key, val));
        else if (key == "grid.min") c.grid_min = parse_double(key, val);
        else if (key == "grid.max") c.grid_max = parse_double(key, val);
        else if (key == "grid.step") c.grid_step = parse_double(key, val);
        else if (key == "wavelet.jrange") c.wavelet_jrange = static_cast<int>(parse_int(key, val));
        else if (key == "custom.file") c.custom_file = val;
        else if (key == "custom.format") c.custom_format = val;
        else if (key == "custom.claimed_tight") c.custom_claimed_tight = parse_bool(key, val);
        else if (key == "custom.decay_coeff") c.custom_decay_coeff = parse_double(key, val);
        else if (key == "custom.decay_exponent") c.custom_decay_exponent = parse_double(key, val);
        else if (key == "out") c.out = val;
        else if (key == "format") c.format = val;
        else if (key == "deterministic") c.deterministic = parse_bool(key, val);
        else throw ConfigError("unknown config key '" + key + "'");
    }
    if (c.format != "json" && c.format != "csv") throw ConfigError("format must be json|csv");
    return c;
}

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string RunConfig::serialize(bool semantic_only) const {
    std::ostringstream os;
    os << "example = " << example << "\n";
    if (dilation) os << "dilation = " << matrix_str(*dilation) << "\n";
    if (G) os << "G = " << *G << "\n";
    if (label_complete) os << "label = " << (*label_complete ? "complete" : "incomplete") << "\n";
    os << "seed = " << seed << "\n";
    if (probe_jmax) os << "probe.jmax = " << *probe_jmax << "\n";
    if (probe_samples) os << "probe.samples = " << *probe_samples << "\n";
    if (probe_epsilon) os << "probe.epsilon = " << fmt_num(*probe_epsilon) << "\n";
    if (probe_window) os << "probe.window = " << *probe_window << "\n";
    if (probe_box_radius) os << "probe.box_radius = " << fmt_num(*probe_box_radius) << "\n";
    if (quad_rel_tol) os << "quad.rel_tol = " << fmt_num(*quad_rel_tol) << "\n";
    if (quad_abs_tol) os << "quad.abs_tol = " << fmt_num(*quad_abs_tol) << "\n";
    if (quad_max_intervals) os << "quad.max_intervals = " << *quad_max_intervals << "\n";
    if (grid_min) os << "grid.min = " << fmt_num(*grid_min) << "\n";
    if (grid_max) os << "grid.max = " << fmt_num(*grid_max) << "\n";
    if (grid_step) os << "grid.step = " << fmt_num(*grid_step) << "\n";
    if (wavelet_jrange) os << "wavelet.jrange = " << *wavelet_jrange << "\n";
    if (custom_file) os << "custom.file = " << *custom_file << "\n";
    if (custom_format) os << "custom.format = " << *custom_format << "\n";
    if (custom_claimed_tight) os << "custom.claimed_tight = " << (*custom_claimed_tight ? "true" : "false") << "\n";
    if (custom_decay_coeff) os << "custom.decay_coeff = " << fmt_num(*custom_decay_coeff) << "\n";
    if (custom_decay_exponent) os << "custom.decay_exponent = " << fmt_num(*custom_decay_exponent) << "\n";
    if (!semantic_only) {
        if (!out.empty()) os << "out = " << out << "\n";
        os << "format = " << format << "\n";
        os << "deterministic = " << (deterministic ? "true" : "false") << "\n";
    }
    return os.str();
}

std::string RunConfig::hash_hex() const {
    const std::string s = serialize(true);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

DensityProbe RunConfig::resolve_probe(int dim) const {
    DensityProbe p = DensityProbe::defaults_for(dim);
    p.seed = seed;
    if (probe_jmax) p.j_max = *probe_jmax;
    if (probe_samples) p.samples_per_level = *probe_samples;
    if (probe_epsilon) p.epsilon = *probe_epsilon;
    if (probe_window) p.window = *probe_window;
    if (probe_box_radius) p.box_radius = *probe_box_radius;
    return p;
}

QuadConfig RunConfig::resolve_quad() const {
    QuadConfig q;
    if (quad_rel_tol) q.rel_tol = *quad_rel_tol;
    if (quad_abs_tol) q.abs_tol = *quad_abs_tol;
    if (quad_max_intervals) q.max_intervals = *quad_max_intervals;
    return q;
}

}  // namespace sis
