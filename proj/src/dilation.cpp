#include "sis/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <string>

#include "sis/errors.hpp"
#include "sis/kernels.hpp"

namespace sis {

namespace {

constexpr long long kEntryCap = 100000;  // keeps exact integer arithmetic in range

long long det_bareiss(IntMatrix m) {
    const int d = static_cast<int>(m.size());
    if (d == 1) return m[0][0];
    if (d == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    __int128 prev = 1;
    long long sign = 1;
    std::vector<std::vector<__int128>> a(d, std::vector<__int128>(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a[i][j] = m[i][j];
    for (int k = 0; k < d - 1; ++k) {
        if (a[k][k] == 0) {
            int p = -1;
            for (int i = k + 1; i < d; ++i)
                if (a[i][k] != 0) { p = i; break; }
            if (p < 0) return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (int i = k + 1; i < d; ++i)
            for (int j = k + 1; j < d; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * static_cast<long long>(a[d - 1][d - 1]);
}

// Cofactor expansion; d is small so cost is irrelevant.
long long minor_det(const IntMatrix& m, int skip_row, int skip_col) {
    const int d = static_cast<int>(m.size());
    IntMatrix sub;
    sub.reserve(static_cast<std::size_t>(d - 1));
    for (int i = 0; i < d; ++i) {
        if (i == skip_row) continue;
        std::vector<long long> row;
        row.reserve(static_cast<std::size_t>(d - 1));
        for (int j = 0; j < d; ++j) {
            if (j == skip_col) continue;
            row.push_back(m[i][j]);
        }
        sub.push_back(std::move(row));
    }
    return det_bareiss(std::move(sub));
}

IntMatrix adjugate_of(const IntMatrix& m) {
    const int d = static_cast<int>(m.size());
    IntMatrix adj(d, std::vector<long long>(d));
    if (d == 1) {
        adj[0][0] = 1;
        return adj;
    }
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const long long c = minor_det(m, j, i);
            adj[i][j] = (((i + j) % 2) == 0) ? c : -c;
        }
    return adj;
}

// Compares sqrt(delta) with the integer m; delta >= 0. Returns -1, 0, +1.
int cmp_sqrt(long long delta, long long m) {
    if (m < 0) return 1;  // sqrt(delta) >= 0 > m
    const __int128 m2 = static_cast<__int128>(m) * m;
    if (delta > m2) return 1;
    if (delta < m2) return -1;
    return 0;
}

// Exact test for a 2x2 integer matrix: both roots of z^2 - t z + D have
// modulus strictly greater than one.
bool expansive_2x2(long long t, long long D) {
    const long long delta = t * t - 4 * D;
    if (delta < 0) return std::llabs(D) > 1;  // complex pair, |lambda|^2 = D
    // real roots (t +- sqrt(delta)) / 2
    // root+ > 1  <=>  sqrt(delta) > 2 - t ; root+ < -1 <=> sqrt(delta) < -2 - t
    const bool rp = cmp_sqrt(delta, 2 - t) > 0 || cmp_sqrt(delta, -2 - t) < 0;
    // root- > 1  <=>  sqrt(delta) < t - 2 ; root- < -1 <=> sqrt(delta) > t + 2
    const bool rm = cmp_sqrt(delta, t - 2) < 0 || cmp_sqrt(delta, t + 2) > 0;
    return rp && rm;
}

double inf_norm(const std::vector<double>& m, int d) {
    double best = 0.0;
    for (int i = 0; i < d; ++i) {
        double row = 0.0;
        for (int j = 0; j < d; ++j) row += std::fabs(m[static_cast<std::size_t>(i * d + j)]);
        best = std::max(best, row);
    }
    return best;
}

std::vector<double> mat_mul(const std::vector<double>& a, const std::vector<double>& b, int d) {
    std::vector<double> out(static_cast<std::size_t>(d * d), 0.0);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            const double aik = a[static_cast<std::size_t>(i * d + k)];
            for (int j = 0; j < d; ++j)
                out[static_cast<std::size_t>(i * d + j)] += aik * b[static_cast<std::size_t>(k * d + j)];
        }
    return out;
}

// Norm-decay certificate for d >= 3: ||A^-n||^(1/n) must fall below 1 - delta.
bool expansive_certificate(const IntMatrix& entries, const IntMatrix& adj, long long det, int d) {
    constexpr int n_iter = 64;
    constexpr double delta = 1e-6;
    (void)entries;
    std::vector<double> inv(static_cast<std::size_t>(d * d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            inv[static_cast<std::size_t>(i * d + j)] =
                static_cast<double>(adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) / static_cast<double>(det);
    std::vector<double> p = inv;
    for (int n = 1; n < n_iter; ++n) p = mat_mul(p, inv, d);
    const double norm = inf_norm(p, d);
    if (!std::isfinite(norm) || norm <= 0.0) return std::isfinite(norm) ? true : false;
    return std::pow(norm, 1.0 / n_iter) <= 1.0 - delta;
}

}  // namespace

DilationMatrix DilationMatrix::validate_expansive(const IntMatrix& entries, int power_limit) {
    const int d = static_cast<int>(entries.size());
    if (d < 1) throw NotSquare("empty matrix");
    for (const auto& row : entries) {
        if (static_cast<int>(row.size()) != d) throw NotSquare("matrix is not square");
        for (long long v : row)
            if (std::llabs(v) > kEntryCap) throw ConfigError("matrix entry exceeds supported magnitude");
    }
    if (d > kMaxDim) throw ConfigError("matrix dimension exceeds supported maximum");

    const long long det = det_bareiss(entries);
    if (det == 0) throw Singular("matrix is singular");

    bool ok = false;
    if (d == 1) {
        ok = std::llabs(entries[0][0]) >= 2;
    } else if (d == 2) {
        ok = expansive_2x2(entries[0][0] + entries[1][1], det);
    } else {
        if (std::llabs(det) < 2) throw NotExpansive("determinant modulus below 2");
        ok = expansive_certificate(entries, adjugate_of(entries), det, d);
    }
    if (!ok) throw NotExpansive("some eigenvalue modulus <= 1");

    DilationMatrix m{Raw{}};
    m.dim_ = d;
    m.det_ = det;
    m.power_limit_ = power_limit;
    m.entries_ = entries;
    m.adjugate_ = adjugate_of(entries);
    return m;
}

DilationMatrix DilationMatrix::adjoint() const {
    DilationMatrix m{Raw{}};
    m.dim_ = dim_;
    m.det_ = det_;  // transpose preserves the determinant and the spectrum
    m.power_limit_ = power_limit_;
    m.entries_.assign(static_cast<std::size_t>(dim_), std::vector<long long>(static_cast<std::size_t>(dim_)));
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            m.entries_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                entries_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    m.adjugate_ = adjugate_of(m.entries_);
    return m;
}

std::vector<double> DilationMatrix::power_matrix(int j) const {
    if (std::abs(j) > power_limit_)
        throw PowerRangeExceeded("|j| = " + std::to_string(std::abs(j)) + " exceeds power limit " +
                                 std::to_string(power_limit_));
    const int d = dim_;
    std::vector<double> m(static_cast<std::size_t>(d * d), 0.0);
    for (int i = 0; i < d; ++i) m[static_cast<std::size_t>(i * d + i)] = 1.0;
    if (j == 0) return m;

    std::vector<double> step(static_cast<std::size_t>(d * d));
    const IntMatrix& src = (j > 0) ? entries_ : adjugate_;
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            step[static_cast<std::size_t>(i * d + k)] =
                static_cast<double>(src[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);

    const int reps = std::abs(j);
    const double det = static_cast<double>(det_);
    for (int r = 0; r < reps; ++r) {
        m = mat_mul(step, m, d);
        if (j < 0)
            for (auto& v : m) v /= det;
    }
    return m;
}

std::vector<double> DilationMatrix::apply_power(int j, std::span<const double> x) const {
    const auto m = power_matrix(j);
    const int d = dim_;
    std::vector<double> out(static_cast<std::size_t>(d), 0.0);
    for (int i = 0; i < d; ++i) {
        double acc = 0.0;
        for (int k = 0; k < d; ++k) acc += m[static_cast<std::size_t>(i * d + k)] * x[static_cast<std::size_t>(k)];
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

void DilationMatrix::apply_power_block(int j, Block& pts) const {
    const auto m = power_matrix(j);
    const int d = dim_;
    if (d == 1) {
        kernels::scale(pts.col(0), pts.n, m[0], pts.col(0));
        return;
    }
    if (d == 2) {
        std::vector<double> ox(pts.n), oy(pts.n);
        kernels::affine2(pts.col(0), pts.col(1), pts.n, m.data(), ox.data(), oy.data());
        pts.cols[0] = std::move(ox);
        pts.cols[1] = std::move(oy);
        return;
    }
    std::vector<std::vector<double>> out(static_cast<std::size_t>(d), std::vector<double>(pts.n, 0.0));
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            const double mik = m[static_cast<std::size_t>(i * d + k)];
            const double* src = pts.col(k);
            double* dst = out[static_cast<std::size_t>(i)].data();
            for (std::size_t s = 0; s < pts.n; ++s) dst[s] += mik * src[s];
        }
    pts.cols = std::move(out);
}

bool DilationMatrix::congruent(std::span<const long long> v, std::span<const long long> w) const {
    const long long dA = det_abs();
    for (int i = 0; i < dim_; ++i) {
        long long acc = 0;
        for (int k = 0; k < dim_; ++k)
            acc += adjugate_[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
                   (v[static_cast<std::size_t>(k)] - w[static_cast<std::size_t>(k)]);
        if (((acc % dA) + dA) % dA != 0) return false;
    }
    return true;
}

std::vector<std::vector<long long>> DilationMatrix::digit_set() const {
    const int d = dim_;
    const long long dA = det_abs();
    if (dA > 1000000) throw SearchExhausted("determinant too large for digit enumeration");

    long long norm_inf = 0;
    for (const auto& row : entries_) {
        long long s = 0;
        for (long long v : row) s += std::llabs(v);
        norm_inf = std::max(norm_inf, s);
    }

    for (long long radius = std::max<long long>(norm_inf, 1);; radius *= 2) {
        if (radius > 4096) throw SearchExhausted("digit search box exhausted");
        // candidate coordinate order 0, 1, ..., radius, -1, ..., -radius keeps
        // canonical small non-negative representatives first
        std::vector<long long> coord_order;
        for (long long v = 0; v <= radius; ++v) coord_order.push_back(v);
        for (long long v = -1; v >= -radius; --v) coord_order.push_back(v);

        std::map<std::vector<long long>, std::vector<long long>> classes;  // key -> representative
        std::vector<std::size_t> odo(static_cast<std::size_t>(d), 0);
        std::vector<long long> v(static_cast<std::size_t>(d));
        const std::size_t per_axis = coord_order.size();
        bool done = false;
        while (!done) {
            for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i)] = coord_order[odo[static_cast<std::size_t>(i)]];
            std::vector<long long> key(static_cast<std::size_t>(d));
            for (int i = 0; i < d; ++i) {
                long long acc = 0;
                for (int k = 0; k < d; ++k)
                    acc += adjugate_[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] * v[static_cast<std::size_t>(k)];
                key[static_cast<std::size_t>(i)] = ((acc % dA) + dA) % dA;
            }
            classes.emplace(std::move(key), v);
            if (static_cast<long long>(classes.size()) == dA) {
                std::vector<std::vector<long long>> digits;
                digits.reserve(static_cast<std::size_t>(dA));
                for (auto& [k, rep] : classes) digits.push_back(rep);
                std::sort(digits.begin(), digits.end());
                return digits;
            }
            // odometer increment, least-significant axis last so (0,...,0),
            // (0,...,1), ... come first
            int axis = d - 1;
            while (axis >= 0) {
                if (++odo[static_cast<std::size_t>(axis)] < per_axis) break;
                odo[static_cast<std::size_t>(axis)] = 0;
                --axis;
            }
            done = axis < 0;
        }
    }
}

}  // namespace sis
