#pragma once

#include <array>
#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace sis {

// Highest point dimension the sampling machinery handles.
inline constexpr int kMaxDim = 8;

// Structure-of-arrays batch of d-dimensional points.
struct Block {
    int dim = 1;
    std::size_t n = 0;
    std::vector<std::vector<double>> cols;

    Block() = default;
    Block(int d, std::size_t count) : dim(d), n(count), cols(static_cast<std::size_t>(d)) {
        for (auto& c : cols) c.resize(count);
    }

    double* col(int i) { return cols[static_cast<std::size_t>(i)].data(); }
    const double* col(int i) const { return cols[static_cast<std::size_t>(i)].data(); }

    void point(std::size_t i, std::span<double> out) const {
        for (int k = 0; k < dim; ++k) out[static_cast<std::size_t>(k)] = cols[static_cast<std::size_t>(k)][i];
    }

    // Keeps only the points whose mask byte is nonzero.
    Block compact(std::span<const unsigned char> keep) const {
        assert(keep.size() == n);
        std::size_t m = 0;
        for (auto b : keep) m += b ? 1 : 0;
        Block out(dim, m);
        for (int k = 0; k < dim; ++k) {
            const double* src = col(k);
            double* dst = out.col(k);
            std::size_t w = 0;
            for (std::size_t i = 0; i < n; ++i)
                if (keep[i]) dst[w++] = src[i];
        }
        return out;
    }
};

}  // namespace sis
