#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "thompson/errors.hpp"
#include "thompson/nadic.hpp"
#include "thompson/rational.hpp"

namespace thompson {

struct Point {
    Rational x;
    Rational y;
    friend bool operator==(const Point& a, const Point& b) {
        return a.x == b.x && a.y == b.y;
    }
};

enum class Side { left, right, two_sided };

namespace detail {

inline Rational slope_between(const Point& a, const Point& b) {
    return (b.y - a.y) / (b.x - a.x);
}

// Drops interior points where the left and right slopes agree.  Input must
// be strictly increasing in x.
inline std::vector<Point> canonicalize(std::vector<Point> pts) {
    if (pts.size() <= 2) return pts;
    std::vector<Point> out;
    out.reserve(pts.size());
    out.push_back(pts.front());
    for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
        const Point& a = out.back();
        const Point& b = pts[k];
        const Point& c = pts[k + 1];
        // collinear iff (b.y-a.y)(c.x-b.x) == (c.y-b.y)(b.x-a.x)
        if ((b.y - a.y) * (c.x - b.x) != (c.y - b.y) * (b.x - a.x)) out.push_back(b);
    }
    out.push_back(pts.back());
    return out;
}

inline void require_strictly_increasing(const std::vector<Point>& pts) {
    for (std::size_t k = 1; k < pts.size(); ++k) {
        if (!(pts[k - 1].x < pts[k].x)) {
            throw not_monotone("breakpoint x-coordinates must be strictly increasing near x = " +
                               pts[k].x.str());
        }
        if (!(pts[k - 1].y < pts[k].y)) {
            throw not_monotone("breakpoint y-coordinates must be strictly increasing near x = " +
                               pts[k].x.str());
        }
    }
}

// Index of the piece [pts[i].x, pts[i+1].x] containing x; pts.size() >= 2
// and pts.front().x <= x <= pts.back().x are the caller's responsibility.
inline std::size_t piece_index(const std::vector<Point>& pts, const Rational& x) {
    std::size_t lo = 0, hi = pts.size() - 1;
    while (hi - lo > 1) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (pts[mid].x <= x)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

inline Rational eval_on(const std::vector<Point>& pts, const Rational& x) {
    std::size_t i = piece_index(pts, x);
    const Point& a = pts[i];
    const Point& b = pts[i + 1];
    return a.y + slope_between(a, b) * (x - a.x);
}

} // namespace detail

// Increasing piecewise-linear self-homeomorphism of [0,1], stored as the
// canonical breakpoint list: (0,0) first, (1,1) last, strictly increasing in
// both coordinates, no collinear interior point.  Canonical form makes
// structural equality coincide with equality as functions.
class PLMap {
public:
    static PLMap identity() {
        return PLMap({{Rational(0), Rational(0)}, {Rational(1), Rational(1)}});
    }

    const std::vector<Point>& breakpoints() const { return pts_; }
    std::size_t piece_count() const { return pts_.size() - 1; }

    Rational eval(const Rational& x) const {
        if (x < Rational(0) || x > Rational(1)) {
            throw out_of_domain("point " + x.str() + " lies outside [0,1]");
        }
        return detail::eval_on(pts_, x);
    }

    Rational piece_slope(std::size_t i) const {
        return detail::slope_between(pts_[i], pts_[i + 1]);
    }

    // One-sided or two-sided derivative at x.  side=left needs x > 0,
    // side=right needs x < 1; two_sided throws non_differentiable at corners
    // and falls back to the available one-sided slope at 0 and 1.
    Rational slope_at(const Rational& x, Side side) const {
        if (x < Rational(0) || x > Rational(1)) {
            throw out_of_domain("point " + x.str() + " lies outside [0,1]");
        }
        const auto left = [&]() -> Rational {
            if (x == Rational(0)) throw out_of_domain("no left slope at 0");
            std::size_t i = detail::piece_index(pts_, x);
            if (pts_[i].x == x) i -= 1;  // x is the right end of piece i-1
            return piece_slope(i);
        };
        const auto right = [&]() -> Rational {
            if (x == Rational(1)) throw out_of_domain("no right slope at 1");
            return piece_slope(detail::piece_index(pts_, x));
        };
        switch (side) {
            case Side::left: return left();
            case Side::right: return right();
            case Side::two_sided: {
                if (x == Rational(0)) return right();
                if (x == Rational(1)) return left();
                Rational l = left(), r = right();
                if (l != r) {
                    throw non_differentiable("corner at " + x.str() + ": left slope " + l.str() +
                                             ", right slope " + r.str());
                }
                return l;
            }
        }
        throw invalid_parameters("bad slope side");
    }

    friend bool operator==(const PLMap& a, const PLMap& b) { return a.pts_ == b.pts_; }

    friend PLMap make_plmap(std::vector<Point> pts);
    friend PLMap inverse(const PLMap& f);

private:
    explicit PLMap(std::vector<Point> pts) : pts_(std::move(pts)) {}
    std::vector<Point> pts_;
};

inline PLMap make_plmap(std::vector<Point> pts) {
    if (pts.size() < 2 || !(pts.front() == Point{Rational(0), Rational(0)}) ||
        !(pts.back() == Point{Rational(1), Rational(1)})) {
        throw bad_endpoints("breakpoints must run from (0,0) to (1,1)");
    }
    detail::require_strictly_increasing(pts);
    return PLMap(detail::canonicalize(std::move(pts)));
}

inline PLMap inverse(const PLMap& f) {
    std::vector<Point> pts;
    pts.reserve(f.breakpoints().size());
    for (const Point& p : f.breakpoints()) pts.push_back({p.y, p.x});
    return PLMap(std::move(pts));  // swap of a canonical list is canonical
}

// f ∘ g: apply g first.
inline PLMap compose(const PLMap& f, const PLMap& g) {
    const PLMap gi = inverse(g);
    std::vector<Rational> xs;
    xs.reserve(f.breakpoints().size() + g.breakpoints().size());
    for (const Point& p : g.breakpoints()) xs.push_back(p.x);
    for (const Point& p : f.breakpoints()) xs.push_back(gi.eval(p.x));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<Point> pts;
    pts.reserve(xs.size());
    for (const Rational& x : xs) pts.push_back({x, f.eval(g.eval(x))});
    return make_plmap(std::move(pts));
}

inline PLMap power(const PLMap& f, int k) {
    if (k < 0) return power(inverse(f), -k);
    PLMap acc = PLMap::identity();
    for (int i = 0; i < k; ++i) acc = compose(f, acc);
    return acc;
}

// Witness that a map does (or does not) belong to F(n): every breakpoint on
// an n-adic grid and every slope an integer power of n.
struct MembershipCertificate {
    int n = 0;
    bool verdict = false;
    std::vector<int> slope_exponents;    // per piece, complete when verdict holds
    std::vector<int> breakpoint_levels;  // per breakpoint, complete when verdict holds
    std::string failure_reason;          // empty when verdict holds
};

inline MembershipCertificate check_membership(const PLMap& f, int n) {
    require_base(n);
    MembershipCertificate cert;
    cert.n = n;
    for (const Point& p : f.breakpoints()) {
        if (!is_nadic(p.x, n) || !is_nadic(p.y, n)) {
            cert.failure_reason = "breakpoint (" + p.x.str() + ", " + p.y.str() +
                                  ") is not on an n-adic grid for n = " + std::to_string(n);
            return cert;
        }
        cert.breakpoint_levels.push_back(std::max(nadic_level(p.x, n), nadic_level(p.y, n)));
    }
    for (std::size_t i = 0; i < f.piece_count(); ++i) {
        const Rational s = f.piece_slope(i);
        auto e = power_of_n_exponent(s, n);
        if (!e) {
            cert.failure_reason = "piece " + std::to_string(i) + " slope " + s.str() +
                                  " is not a power of " + std::to_string(n);
            return cert;
        }
        cert.slope_exponents.push_back(*e);
    }
    cert.verdict = true;
    return cert;
}

} // namespace thompson
