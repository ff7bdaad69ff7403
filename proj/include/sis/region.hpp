#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sis/block.hpp"
#include "sis/fourier.hpp"
#include "sis/interval.hpp"

namespace sis {

/// Measurable set represented by a membership predicate, with a canonical
/// expression string (the config grammar) and, when the set is a finite
/// interval union or a box, exact geometry usable by quadrature.
class Region {
public:
    using Contains = std::function<bool(std::span<const double>)>;

    Region() = default;

    static Region all(int dim);
    static Region ball(int dim, double r);
    static Region interval(double lo, double hi, bool lo_open = false, bool hi_open = true);
    static Region intervals(IntervalSet set);
    static Region box(BoxRegion b);
    /// Half-space { x : x_axis > c }.
    static Region halfspace(int dim, int axis, double c);
    static Region complement(Region r);
    static Region intersect(Region a, Region b);
    static Region unite(std::vector<Region> rs);
    static Region support_of(RealFunction f, double tau);

    int dim() const { return dim_; }
    const std::string& expr() const { return expr_; }
    bool is_all() const { return all_; }

    bool contains(std::span<const double> x) const { return contains_(x); }
    bool contains1(double x) const { return contains_(std::span<const double>(&x, 1)); }
    void mask(const Block& pts, unsigned char* out) const;

    /// Exact 1D geometry when the set is a finite interval union; null otherwise.
    const IntervalSet* interval_geometry() const { return intervals_ ? &*intervals_ : nullptr; }
    const BoxRegion* box_geometry() const { return box_ ? &*box_ : nullptr; }

private:
    int dim_ = 0;  // 0 = dimension-agnostic (all of R^d)
    bool all_ = false;
    Contains contains_;
    std::string expr_;
    std::optional<IntervalSet> intervals_;
    std::optional<BoxRegion> box_;
};

/// Parses the prefix grammar used in config files:
///   all | ball(r) | interval(a,b) | box(a1,b1;a2,b2) | halfspace(axis,c)
///   | union(e1,e2,...) | intersect(e1,e2) | complement(e) | support(sigma)
/// Numbers accept inf/-inf. support(sigma) resolves against the supplied
/// function (the current example's spectral function).
Region parse_region(const std::string& text, int dim, const RealFunction* sigma = nullptr,
                    double tau = 1e-12);

}  // namespace sis
