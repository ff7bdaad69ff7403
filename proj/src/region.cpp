#include "sis/region.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <memory>

#include "sis/defaults.hpp"
#include "sis/errors.hpp"

namespace sis {

namespace {

std::string fmt_num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    if (std::strtod(buf, nullptr) != v) std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

}  // namespace

void Region::mask(const Block& pts, unsigned char* out) const {
    double p[kMaxDim];
    for (std::size_t i = 0; i < pts.n; ++i) {
        pts.point(i, std::span<double>(p, static_cast<std::size_t>(pts.dim)));
        out[i] = contains_(std::span<const double>(p, static_cast<std::size_t>(pts.dim))) ? 1 : 0;
    }
}

Region Region::all(int dim) {
    Region r;
    r.dim_ = dim;
    r.all_ = true;
    r.contains_ = [](std::span<const double>) { return true; };
    r.expr_ = "all";
    return r;
}

Region Region::ball(int dim, double rad) {
    Region r;
    r.dim_ = dim;
    r.contains_ = [rad](std::span<const double> x) { return norm2(x) < rad; };
    r.expr_ = "ball(" + fmt_num(rad) + ")";
    if (dim == 1) r.intervals_ = IntervalSet{{Interval{-rad, rad, true, true}}};
    return r;
}

Region Region::interval(double lo, double hi, bool lo_open, bool hi_open) {
    return intervals(IntervalSet{{Interval{lo, hi, lo_open, hi_open}}});
}

Region Region::intervals(IntervalSet set) {
    Region r;
    r.dim_ = 1;
    IntervalSet copy = set;
    r.contains_ = [copy](std::span<const double> x) { return copy.contains(x[0]); };
    if (set.parts.size() == 1) {
        r.expr_ = "interval(" + fmt_num(set.parts[0].lo) + "," + fmt_num(set.parts[0].hi) + ")";
    } else {
        r.expr_ = "union(";
        for (std::size_t i = 0; i < set.parts.size(); ++i) {
            if (i) r.expr_ += ",";
            r.expr_ += "interval(" + fmt_num(set.parts[i].lo) + "," + fmt_num(set.parts[i].hi) + ")";
        }
        r.expr_ += ")";
    }
    r.intervals_ = std::move(set);
    return r;
}

Region Region::box(BoxRegion b) {
    Region r;
    r.dim_ = b.dim();
    BoxRegion copy = b;
    r.contains_ = [copy](std::span<const double> x) { return copy.contains(x); };
    r.expr_ = "box(";
    for (int i = 0; i < b.dim(); ++i) {
        if (i) r.expr_ += ";";
        r.expr_ += fmt_num(b.lo[static_cast<std::size_t>(i)]) + "," + fmt_num(b.hi[static_cast<std::size_t>(i)]);
    }
    r.expr_ += ")";
    if (b.dim() == 1) r.intervals_ = IntervalSet{{Interval{b.lo[0], b.hi[0], false, true}}};
    r.box_ = std::move(b);
    return r;
}

Region Region::halfspace(int dim, int axis, double c) {
    if (axis < 0 || axis >= dim) throw ConfigError("halfspace axis out of range");
    Region r;
    r.dim_ = dim;
    r.contains_ = [axis, c](std::span<const double> x) { return x[static_cast<std::size_t>(axis)] > c; };
    r.expr_ = "halfspace(" + std::to_string(axis) + "," + fmt_num(c) + ")";
    if (dim == 1)
        r.intervals_ = IntervalSet{{Interval{c, std::numeric_limits<double>::infinity(), true, true}}};
    return r;
}

Region Region::complement(Region inner) {
    Region r;
    r.dim_ = inner.dim_;
    auto f = inner.contains_;
    r.contains_ = [f](std::span<const double> x) { return !f(x); };
    r.expr_ = "complement(" + inner.expr_ + ")";
    return r;
}

Region Region::intersect(Region a, Region b) {
    Region r;
    r.dim_ = a.dim_ ? a.dim_ : b.dim_;
    auto fa = a.contains_;
    auto fb = b.contains_;
    r.contains_ = [fa, fb](std::span<const double> x) { return fa(x) && fb(x); };
    r.expr_ = "intersect(" + a.expr_ + "," + b.expr_ + ")";
    return r;
}

Region Region::unite(std::vector<Region> rs) {
    if (rs.empty()) throw ConfigError("union needs at least one operand");
    Region r;
    r.dim_ = rs[0].dim_;
    // flatten to one shared predicate list
    auto preds = std::make_shared<std::vector<Contains>>();
    bool all_intervals = true;
    IntervalSet merged;
    std::string expr = "union(";
    for (std::size_t i = 0; i < rs.size(); ++i) {
        preds->push_back(rs[i].contains_);
        if (i) expr += ",";
        expr += rs[i].expr_;
        if (rs[i].intervals_)
            for (const auto& p : rs[i].intervals_->parts) merged.parts.push_back(p);
        else
            all_intervals = false;
    }
    expr += ")";
    r.contains_ = [preds](std::span<const double> x) {
        for (const auto& f : *preds)
            if (f(x)) return true;
        return false;
    };
    r.expr_ = std::move(expr);
    if (all_intervals) r.intervals_ = std::move(merged);
    return r;
}

Region Region::support_of(RealFunction f, double tau) {
    Region r;
    r.dim_ = f.dim();
    RealFunction copy = f;
    r.contains_ = [copy, tau](std::span<const double> x) { return copy(x) > tau; };
    r.expr_ = "support(sigma)";
    return r;
}

// ---------------------------------------------------------------------------
// parser

namespace {

struct Parser {
    const std::string& s;
    std::size_t pos = 0;
    int dim;
    const RealFunction* sigma;
    double tau;

    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }

    bool consume(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!consume(c))
            throw ConfigError("region parse error at position " + std::to_string(pos) + ": expected '" +
                              std::string(1, c) + "' in '" + s + "'");
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
        if (start == pos) throw ConfigError("region parse error: expected name in '" + s + "'");
        return s.substr(start, pos - start);
    }

    double number() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '+' ||
                                  s[pos] == '-' || s[pos] == '.'))
            ++pos;
        std::string tok = s.substr(start, pos - start);
        if (tok == "inf" || tok == "+inf") return std::numeric_limits<double>::infinity();
        if (tok == "-inf") return -std::numeric_limits<double>::infinity();
        try {
            std::size_t used = 0;
            double v = std::stod(tok, &used);
            if (used != tok.size()) throw ConfigError("");
            return v;
        } catch (...) {
            throw ConfigError("region parse error: bad number '" + tok + "' in '" + s + "'");
        }
    }

    Region parse() {
        const std::string name = ident();
        if (name == "all") return Region::all(dim);
        if (name == "R" || name == "Rd") return Region::all(dim);
        if (name == "ball") {
            expect('(');
            const double r = number();
            expect(')');
            return Region::ball(dim, r);
        }
        if (name == "interval") {
            expect('(');
            const double a = number();
            expect(',');
            const double b = number();
            expect(')');
            return Region::interval(a, b);
        }
        if (name == "box") {
            expect('(');
            BoxRegion b;
            for (;;) {
                b.lo.push_back(number());
                expect(',');
                b.hi.push_back(number());
                if (!consume(';')) break;
            }
            expect(')');
            return Region::box(std::move(b));
        }
        if (name == "halfspace") {
            expect('(');
            const double axis = number();
            expect(',');
            const double c = number();
            expect(')');
            return Region::halfspace(dim, static_cast<int>(axis), c);
        }
        if (name == "complement") {
            expect('(');
            Region inner = parse();
            expect(')');
            return Region::complement(std::move(inner));
        }
        if (name == "intersect") {
            expect('(');
            Region a = parse();
            expect(',');
            Region b = parse();
            expect(')');
            return Region::intersect(std::move(a), std::move(b));
        }
        if (name == "union") {
            expect('(');
            std::vector<Region> rs;
            rs.push_back(parse());
            while (consume(',')) rs.push_back(parse());
            expect(')');
            return Region::unite(std::move(rs));
        }
        if (name == "support") {
            expect('(');
            ident();  // "sigma"
            expect(')');
            if (!sigma) throw ConfigError("support(sigma) used without a spectral function in scope");
            return Region::support_of(*sigma, tau);
        }
        throw ConfigError("region parse error: unknown primitive '" + name + "'");
    }
};

}  // namespace

Region parse_region(const std::string& text, int dim, const RealFunction* sigma, double tau) {
    Parser p{text, 0, dim, sigma, tau};
    Region r = p.parse();
    p.skip_ws();
    if (p.pos != text.size())
        throw ConfigError("region parse error: trailing characters in '" + text + "'");
    return r;
}

}  // namespace sis
