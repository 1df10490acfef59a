#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "thompson/errors.hpp"
#include "thompson/pl_map.hpp"
#include "thompson/rational.hpp"

namespace thompson {

struct Interval {
    Rational lo;
    Rational hi;

    Rational length() const { return hi - lo; }
    bool degenerate() const { return lo == hi; }
    bool contains(const Rational& x) const { return lo <= x && x <= hi; }
    friend bool operator==(const Interval& a, const Interval& b) {
        return a.lo == b.lo && a.hi == b.hi;
    }
};

// Increasing PL homeomorphism between closed subintervals of [0,1].  The
// domain may be a nondegenerate interval, a single point, or empty.  Stored
// as a canonical breakpoint list spanning the domain (one point when
// degenerate, none when empty).
class PartialPLMap {
public:
    PartialPLMap() = default;  // empty map

    static PartialPLMap empty_map() { return PartialPLMap(); }

    static PartialPLMap degenerate_map(Rational x, Rational y) {
        check_unit_range(x);
        check_unit_range(y);
        PartialPLMap m;
        m.pts_ = {{std::move(x), std::move(y)}};
        return m;
    }

    // Validates and canonicalizes an explicit breakpoint list.  Zero points
    // give the empty map, one point a degenerate map.
    static PartialPLMap from_points(std::vector<Point> pts) {
        for (const Point& p : pts) {
            check_unit_range(p.x);
            check_unit_range(p.y);
        }
        detail::require_strictly_increasing(pts);
        PartialPLMap m;
        m.pts_ = detail::canonicalize(std::move(pts));
        return m;
    }

    // f restricted to [lo, hi] ⊆ [0,1].
    static PartialPLMap restriction(const PLMap& f, const Rational& lo, const Rational& hi) {
        if (lo > hi) throw invalid_parameters("restriction interval has lo > hi");
        check_unit_range(lo);
        check_unit_range(hi);
        std::vector<Point> pts;
        pts.push_back({lo, f.eval(lo)});
        if (hi > lo) {
            for (const Point& p : f.breakpoints()) {
                if (lo < p.x && p.x < hi) pts.push_back(p);
            }
            pts.push_back({hi, f.eval(hi)});
        }
        PartialPLMap m;
        m.pts_ = detail::canonicalize(std::move(pts));
        return m;
    }

    bool is_empty() const { return pts_.empty(); }
    bool is_degenerate() const { return pts_.size() == 1; }

    Interval domain() const {
        require_nonempty();
        return {pts_.front().x, pts_.back().x};
    }
    Interval range() const {
        require_nonempty();
        return {pts_.front().y, pts_.back().y};
    }

    const std::vector<Point>& breakpoints() const { return pts_; }
    std::size_t piece_count() const { return pts_.size() < 2 ? 0 : pts_.size() - 1; }
    Rational piece_slope(std::size_t i) const {
        return detail::slope_between(pts_[i], pts_[i + 1]);
    }

    Rational eval(const Rational& x) const {
        require_nonempty();
        if (x < pts_.front().x || x > pts_.back().x) {
            throw out_of_domain("point " + x.str() + " lies outside the domain [" +
                                pts_.front().x.str() + ", " + pts_.back().x.str() + "]");
        }
        if (pts_.size() == 1) return pts_.front().y;
        return detail::eval_on(pts_, x);
    }

    friend bool operator==(const PartialPLMap& a, const PartialPLMap& b) {
        return a.pts_ == b.pts_;
    }

    friend PartialPLMap inverse(const PartialPLMap& f) {
        PartialPLMap m;
        m.pts_.reserve(f.pts_.size());
        for (const Point& p : f.pts_) m.pts_.push_back({p.y, p.x});
        return m;
    }

    friend PartialPLMap partial_compose(const PartialPLMap& f, const PartialPLMap& g);

private:
    static void check_unit_range(const Rational& v) {
        if (v < Rational(0) || v > Rational(1)) {
            throw invalid_parameters("coordinate " + v.str() + " lies outside [0,1]");
        }
    }
    void require_nonempty() const {
        if (pts_.empty()) throw out_of_domain("empty partial map");
    }

    std::vector<Point> pts_;
};

inline PartialPLMap to_partial(const PLMap& f) {
    return PartialPLMap::restriction(f, Rational(0), Rational(1));
}

// f ∘ g on the largest legal domain {x ∈ dom g : g(x) ∈ dom f}; the result
// may be empty or degenerate.
inline PartialPLMap partial_compose(const PartialPLMap& f, const PartialPLMap& g) {
    if (f.is_empty() || g.is_empty()) return PartialPLMap::empty_map();
    const Interval fd = f.domain();
    const Interval gr = g.range();
    const Rational jlo = std::max(fd.lo, gr.lo);
    const Rational jhi = std::min(fd.hi, gr.hi);
    if (jlo > jhi) return PartialPLMap::empty_map();
    const PartialPLMap gi = inverse(g);
    if (jlo == jhi) return PartialPLMap::degenerate_map(gi.eval(jlo), f.eval(jlo));
    const Rational dlo = gi.eval(jlo);
    const Rational dhi = gi.eval(jhi);
    std::vector<Rational> xs{dlo, dhi};
    for (const Point& p : g.breakpoints()) {
        if (dlo < p.x && p.x < dhi) xs.push_back(p.x);
    }
    for (const Point& p : f.breakpoints()) {
        if (jlo < p.x && p.x < jhi) xs.push_back(gi.eval(p.x));
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<Point> pts;
    pts.reserve(xs.size());
    for (const Rational& x : xs) pts.push_back({x, f.eval(g.eval(x))});
    PartialPLMap m;
    m.pts_ = detail::canonicalize(std::move(pts));
    return m;
}

// Exact fixed-point set of a partial PL map: finitely many isolated points
// plus finitely many nondegenerate intervals, disjoint and sorted.
struct FixedPointSet {
    std::vector<Rational> isolated_points;
    std::vector<Interval> intervals;

    bool empty() const { return isolated_points.empty() && intervals.empty(); }
    bool has_interval() const { return !intervals.empty(); }
    bool contains(const Rational& x) const {
        for (const Interval& iv : intervals) {
            if (iv.contains(x)) return true;
        }
        return std::find(isolated_points.begin(), isolated_points.end(), x) !=
               isolated_points.end();
    }
};

inline FixedPointSet fixed_points(const PartialPLMap& f) {
    FixedPointSet out;
    if (f.is_empty()) return out;
    const auto& pts = f.breakpoints();
    if (f.is_degenerate()) {
        if (pts.front().x == pts.front().y) out.isolated_points.push_back(pts.front().x);
        return out;
    }
    std::vector<Rational> iso;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const Point& a = pts[i];
        const Point& b = pts[i + 1];
        const Rational s = detail::slope_between(a, b);
        if (s == Rational(1)) {
            if (a.y == a.x) out.intervals.push_back({a.x, b.x});
        } else {
            // a.y + s (x - a.x) = x  =>  x = (a.y - s a.x) / (1 - s)
            const Rational x = (a.y - s * a.x) / (Rational(1) - s);
            if (a.x <= x && x <= b.x) iso.push_back(x);
        }
    }
    std::sort(iso.begin(), iso.end());
    iso.erase(std::unique(iso.begin(), iso.end()), iso.end());
    for (const Rational& x : iso) {
        bool covered = false;
        for (const Interval& iv : out.intervals) {
            if (iv.contains(x)) {
                covered = true;
                break;
            }
        }
        if (!covered) out.isolated_points.push_back(x);
    }
    return out;
}

inline FixedPointSet fixed_points(const PLMap& f) { return fixed_points(to_partial(f)); }

} // namespace thompson
