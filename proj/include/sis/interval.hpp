#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace sis {

// One-dimensional interval with independent open/closed endpoints.
// Infinite endpoints are allowed.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_open = false;
    bool hi_open = true;  // default half-open [lo, hi)

    bool contains(double x) const {
        if (lo_open ? !(x > lo) : !(x >= lo)) return false;
        if (hi_open ? !(x < hi) : !(x <= hi)) return false;
        return true;
    }
    double length() const { return std::max(0.0, hi - lo); }
    bool finite() const { return std::isfinite(lo) && std::isfinite(hi); }
};

// Finite union of intervals. Callers keep the pieces disjoint; length() and
// edge_distance() assume it.
struct IntervalSet {
    std::vector<Interval> parts;

    bool contains(double x) const {
        for (const auto& p : parts)
            if (p.contains(x)) return true;
        return false;
    }
    double length() const {
        double s = 0.0;
        for (const auto& p : parts) s += p.length();
        return s;
    }
    bool finite() const {
        for (const auto& p : parts)
            if (!p.finite()) return false;
        return true;
    }
    double edge_distance(double x) const {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : parts) {
            if (std::isfinite(p.lo)) best = std::min(best, std::fabs(x - p.lo));
            if (std::isfinite(p.hi)) best = std::min(best, std::fabs(x - p.hi));
        }
        return best;
    }
};

// Pairwise intersection of two disjoint unions (openness taken from the
// binding endpoint).
inline IntervalSet intersect_interval_sets(const IntervalSet& a, const IntervalSet& b) {
    IntervalSet out;
    for (const auto& p : a.parts)
        for (const auto& q : b.parts) {
            Interval r;
            if (p.lo > q.lo || (p.lo == q.lo && p.lo_open)) {
                r.lo = p.lo;
                r.lo_open = p.lo_open;
            } else {
                r.lo = q.lo;
                r.lo_open = q.lo_open;
            }
            if (p.hi < q.hi || (p.hi == q.hi && p.hi_open)) {
                r.hi = p.hi;
                r.hi_open = p.hi_open;
            } else {
                r.hi = q.hi;
                r.hi_open = q.hi_open;
            }
            if (r.lo < r.hi) out.parts.push_back(r);
        }
    return out;
}

}  // namespace sis
