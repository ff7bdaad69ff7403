#include "sis/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include "sis/errors.hpp"
#include "sis/kernels.hpp"

namespace sis {

double RealFunction::edge_distance(std::span<const double> x) const {
    return edge_ ? edge_(x) : std::numeric_limits<double>::infinity();
}

double FourierFunction::edge_distance(std::span<const double> x) const {
    return edge_ ? edge_(x) : std::numeric_limits<double>::infinity();
}

void FourierFunction::abs_sq_batch(const Block& pts, double* out) const {
    if (batch_abs_sq_) {
        batch_abs_sq_(pts, out);
        return;
    }
    double p[kMaxDim];
    for (std::size_t i = 0; i < pts.n; ++i) {
        pts.point(i, std::span<double>(p, static_cast<std::size_t>(pts.dim)));
        out[i] = std::norm(eval_(std::span<const double>(p, static_cast<std::size_t>(pts.dim))));
    }
}

RealFunction FourierFunction::abs() const {
    FourierFunction self = *this;
    RealFunction out(dim_, [self](std::span<const double> x) { return std::sqrt(self.abs_sq(x)); },
                     label_.empty() ? std::string() : "|" + label_ + "|");
    out.with_batch([self](const Block& pts, double* o) {
        self.abs_sq_batch(pts, o);
        for (std::size_t i = 0; i < pts.n; ++i) o[i] = std::sqrt(o[i]);
    });
    if (edge_) out.with_edge_distance(edge_);
    return out;
}

FourierFunction FourierFunction::indicator_1d(IntervalSet set, std::string label) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& p : set.parts) {
        lo = std::min(lo, p.lo);
        hi = std::max(hi, p.hi);
    }
    FourierFunction f(
        1,
        [set](std::span<const double> x) {
            return std::complex<double>(set.contains(x[0]) ? 1.0 : 0.0, 0.0);
        },
        std::move(label));
    // batch path: disjoint parts sum to the union indicator
    IntervalSet parts_copy = set;
    f.with_batch_abs_sq([parts_copy](const Block& pts, double* out) {
        const double* xs = pts.col(0);
        std::vector<double> tmp(pts.n);
        for (std::size_t i = 0; i < pts.n; ++i) out[i] = 0.0;
        for (const auto& p : parts_copy.parts) {
            // kernel convention is half-open [lo, hi); endpoint openness
            // differs only on a null set, fix the stragglers afterwards
            kernels::select_in_interval(xs, pts.n, p.lo, p.hi, tmp.data());
            for (std::size_t i = 0; i < pts.n; ++i) out[i] += tmp[i];
            if (p.lo_open || !p.hi_open) {
                for (std::size_t i = 0; i < pts.n; ++i) {
                    if (p.lo_open && xs[i] == p.lo) out[i] -= 1.0;
                    if (!p.hi_open && xs[i] == p.hi) out[i] += 1.0;
                }
            }
        }
    });
    f.with_edge_distance([parts_copy](std::span<const double> x) { return parts_copy.edge_distance(x[0]); });
    if (set.finite()) f.with_support(BoxRegion{{lo}, {hi}});
    return f;
}

FourierFunction FourierFunction::indicator_box(BoxRegion box, std::string label) {
    BoxRegion b = box;
    FourierFunction f(
        b.dim(),
        [b](std::span<const double> x) { return std::complex<double>(b.contains(x) ? 1.0 : 0.0, 0.0); },
        std::move(label));
    f.with_edge_distance([b](std::span<const double> x) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < b.lo.size(); ++i) {
            best = std::min(best, std::fabs(x[i] - b.lo[i]));
            best = std::min(best, std::fabs(x[i] - b.hi[i]));
        }
        return best;
    });
    f.with_support(box);
    return f;
}

FourierFunction FourierFunction::from_grid(BoxRegion box, std::vector<std::size_t> resolution,
                                           std::vector<std::complex<double>> cells, std::string label) {
    const int d = box.dim();
    if (d < 1 || d > 2) throw ConfigError("grid functions support d <= 2");
    if (resolution.size() != static_cast<std::size_t>(d)) throw ConfigError("grid resolution rank mismatch");
    std::size_t expect = 1;
    for (auto r : resolution) {
        if (r == 0) throw ConfigError("grid resolution must be positive");
        expect *= r;
    }
    if (cells.size() != expect) throw ConfigError("grid cell count mismatch");

    struct GridData {
        BoxRegion box;
        std::vector<std::size_t> res;
        std::vector<std::complex<double>> cells;
        std::vector<double> h;
    };
    auto g = std::make_shared<GridData>();
    g->box = box;
    g->res = resolution;
    g->cells = std::move(cells);
    g->h.resize(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
        g->h[static_cast<std::size_t>(i)] =
            (box.hi[static_cast<std::size_t>(i)] - box.lo[static_cast<std::size_t>(i)]) /
            static_cast<double>(resolution[static_cast<std::size_t>(i)]);

    FourierFunction f(
        d,
        [g, d](std::span<const double> x) -> std::complex<double> {
            std::size_t idx = 0;
            for (int i = 0; i < d; ++i) {
                const std::size_t ui = static_cast<std::size_t>(i);
                const double t = x[ui];
                if (t < g->box.lo[ui] || t >= g->box.hi[ui]) return {0.0, 0.0};
                auto c = static_cast<std::size_t>((t - g->box.lo[ui]) / g->h[ui]);
                if (c >= g->res[ui]) c = g->res[ui] - 1;  // hi-edge rounding guard
                idx = idx * g->res[ui] + c;
            }
            return g->cells[idx];
        },
        std::move(label));
    f.with_support(box);
    return f;
}

FourierFunction FourierFunction::load_grid_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open grid file: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> vals;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
        if (vals.size() != 3 && vals.size() != 4) throw ConfigError("grid CSV rows need d coords + re + im");
        rows.push_back(std::move(vals));
    }
    if (rows.empty()) throw ConfigError("grid CSV is empty");
    const int d = static_cast<int>(rows[0].size()) - 2;
    for (const auto& r : rows)
        if (static_cast<int>(r.size()) - 2 != d) throw ConfigError("grid CSV has inconsistent row widths");

    if (d == 1) {
        std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a[0] < b[0]; });
        const std::size_t n = rows.size();
        if (n < 2) throw ConfigError("grid CSV needs at least two rows");
        const double h = rows[1][0] - rows[0][0];
        if (h <= 0) throw ConfigError("grid CSV coordinates must be strictly increasing");
        for (std::size_t i = 1; i < n; ++i)
            if (std::fabs((rows[i][0] - rows[i - 1][0]) - h) > 1e-9 * std::max(1.0, std::fabs(h)))
                throw ConfigError("grid CSV coordinates are not uniform");
        std::vector<std::complex<double>> cells(n);
        for (std::size_t i = 0; i < n; ++i) cells[i] = {rows[i][1], rows[i][2]};
        BoxRegion box{{rows[0][0]}, {rows[0][0] + h * static_cast<double>(n)}};
        return from_grid(box, {n}, std::move(cells), path);
    }
    // d == 2: expect a complete row-major uniform grid
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a[1] != b[1]) return a[1] < b[1];
        return a[0] < b[0];
    });
    std::vector<double> xs, ys;
    for (const auto& r : rows) {
        if (xs.empty() || r[0] > xs.back() + 1e-12) {
            if (r[1] == rows[0][1]) xs.push_back(r[0]);
        }
        if (ys.empty() || r[1] > ys.back() + 1e-12) ys.push_back(r[1]);
    }
    const std::size_t nx = xs.size(), ny = ys.size();
    if (nx < 2 || ny < 2 || nx * ny != rows.size()) throw ConfigError("grid CSV is not a complete 2D grid");
    const double hx = xs[1] - xs[0], hy = ys[1] - ys[0];
    std::vector<std::complex<double>> cells(nx * ny);
    for (std::size_t iy = 0; iy < ny; ++iy)
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const auto& r = rows[iy * nx + ix];
            cells[ix * ny + iy] = {r[2], r[3]};
        }
    BoxRegion box{{xs[0], ys[0]}, {xs[0] + hx * static_cast<double>(nx), ys[0] + hy * static_cast<double>(ny)}};
    return from_grid(box, {nx, ny}, std::move(cells), path);
}

namespace {
constexpr char kGridMagic[4] = {'S', 'I', 'S', 'G'};
}

void FourierFunction::save_grid_binary(const std::string& path, const BoxRegion& box,
                                       const std::vector<std::size_t>& resolution,
                                       const std::vector<std::complex<double>>& cells) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write grid file: " + path);
    out.write(kGridMagic, 4);
    const std::uint32_t d = static_cast<std::uint32_t>(box.dim());
    out.write(reinterpret_cast<const char*>(&d), sizeof d);
    for (std::uint32_t i = 0; i < d; ++i) {
        const std::uint64_t r = resolution[i];
        out.write(reinterpret_cast<const char*>(&r), sizeof r);
        out.write(reinterpret_cast<const char*>(&box.lo[i]), sizeof(double));
        out.write(reinterpret_cast<const char*>(&box.hi[i]), sizeof(double));
    }
    for (const auto& c : cells) {
        const double re = c.real(), im = c.imag();
        out.write(reinterpret_cast<const char*>(&re), sizeof re);
        out.write(reinterpret_cast<const char*>(&im), sizeof im);
    }
}

FourierFunction FourierFunction::load_grid_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open grid file: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kGridMagic, 4) != 0) throw ConfigError("bad grid file magic");
    std::uint32_t d = 0;
    in.read(reinterpret_cast<char*>(&d), sizeof d);
    if (!in || d < 1 || d > 2) throw ConfigError("bad grid file rank");
    BoxRegion box;
    std::vector<std::size_t> res;
    std::size_t total = 1;
    for (std::uint32_t i = 0; i < d; ++i) {
        std::uint64_t r = 0;
        double lo = 0, hi = 0;
        in.read(reinterpret_cast<char*>(&r), sizeof r);
        in.read(reinterpret_cast<char*>(&lo), sizeof lo);
        in.read(reinterpret_cast<char*>(&hi), sizeof hi);
        if (!in || r == 0 || !(hi > lo)) throw ConfigError("bad grid file header");
        res.push_back(static_cast<std::size_t>(r));
        box.lo.push_back(lo);
        box.hi.push_back(hi);
        total *= static_cast<std::size_t>(r);
    }
    std::vector<std::complex<double>> cells(total);
    for (auto& c : cells) {
        double re = 0, im = 0;
        in.read(reinterpret_cast<char*>(&re), sizeof re);
        in.read(reinterpret_cast<char*>(&im), sizeof im);
        if (!in) throw ConfigError("grid file truncated");
        c = {re, im};
    }
    return from_grid(box, res, std::move(cells), path);
}

}  // namespace sis
