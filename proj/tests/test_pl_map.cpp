#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "thompson/partial_pl_map.hpp"
#include "thompson/pl_map.hpp"

using thompson::check_membership;
using thompson::compose;
using thompson::fixed_points;
using thompson::Interval;
using thompson::inverse;
using thompson::make_plmap;
using thompson::PartialPLMap;
using thompson::PLMap;
using thompson::Point;
using thompson::power;
using thompson::Rational;
using thompson::Side;
using thompson::to_partial;

namespace {

Rational Q(long long n, long long d = 1) { return Rational(n, d); }

PLMap map_A() {
    return make_plmap({{Q(0), Q(0)}, {Q(1, 2), Q(1, 4)}, {Q(3, 4), Q(1, 2)}, {Q(1), Q(1)}});
}

PLMap map_B() {
    return make_plmap(
        {{Q(0), Q(0)}, {Q(1, 2), Q(1, 2)}, {Q(3, 4), Q(5, 8)}, {Q(7, 8), Q(3, 4)}, {Q(1), Q(1)}});
}

PLMap random_word(std::mt19937_64& rng, int max_len) {
    const PLMap A = map_A(), B = map_B();
    const PLMap letters[4] = {A, inverse(A), B, inverse(B)};
    PLMap acc = PLMap::identity();
    const int len = 1 + static_cast<int>(rng() % max_len);
    for (int i = 0; i < len; ++i) acc = compose(letters[rng() % 4], acc);
    return acc;
}

Rational random_unit_rational(std::mt19937_64& rng, long long max_den) {
    long long d = 1 + static_cast<long long>(rng() % max_den);
    long long n = static_cast<long long>(rng() % (d + 1));
    return Rational(n, d);
}

} // namespace

TEST_CASE("make_plmap canonicalizes and validates", "[pl_map]") {
    PLMap id = make_plmap({{Q(0), Q(0)}, {Q(1, 2), Q(1, 2)}, {Q(1), Q(1)}});
    CHECK(id == PLMap::identity());
    CHECK(id.breakpoints().size() == 2);

    PLMap a = map_A();
    CHECK(a.breakpoints().size() == 4);
    CHECK(make_plmap(a.breakpoints()) == a);  // canonicalization is idempotent

    CHECK_THROWS_AS(make_plmap({{Q(0), Q(0)}, {Q(1, 2), Q(3, 4)}}), thompson::bad_endpoints);
    CHECK_THROWS_AS(make_plmap({{Q(0), Q(0)}}), thompson::bad_endpoints);
    CHECK_THROWS_AS(
        make_plmap({{Q(0), Q(0)}, {Q(1, 2), Q(1, 4)}, {Q(1, 2), Q(1, 2)}, {Q(1), Q(1)}}),
        thompson::not_monotone);
    CHECK_THROWS_AS(
        make_plmap({{Q(0), Q(0)}, {Q(1, 2), Q(1, 4)}, {Q(3, 4), Q(1, 8)}, {Q(1), Q(1)}}),
        thompson::not_monotone);
}

TEST_CASE("eval", "[pl_map]") {
    const PLMap A = map_A(), B = map_B();
    CHECK(A.eval(Q(1, 2)) == Q(1, 4));
    CHECK(A.eval(Q(3, 4)) == Q(1, 2));
    CHECK(A.eval(Q(1, 3)) == Q(1, 6));
    CHECK(A.eval(Q(5, 6)) == Q(2, 3));
    CHECK(B.eval(Q(3, 4)) == Q(5, 8));
    CHECK(B.eval(Q(1, 3)) == Q(1, 3));
    CHECK(B.eval(Q(15, 16)) == Q(7, 8));
    CHECK(PLMap::identity().eval(Q(2, 7)) == Q(2, 7));
    CHECK_THROWS_AS(A.eval(Q(3, 2)), thompson::out_of_domain);
    CHECK_THROWS_AS(A.eval(Q(-1, 2)), thompson::out_of_domain);
}

TEST_CASE("compose and inverse", "[pl_map]") {
    const PLMap A = map_A(), B = map_B();
    CHECK(compose(A, inverse(A)) == PLMap::identity());
    CHECK(compose(inverse(A), A) == PLMap::identity());
    CHECK(compose(A, B).eval(Q(7, 8)) == Q(1, 2));
    CHECK(compose(PLMap::identity(), B) == B);
    CHECK(compose(B, PLMap::identity()) == B);
    CHECK(inverse(A).eval(Q(1, 4)) == Q(1, 2));
    CHECK(inverse(inverse(B)) == B);
    CHECK(inverse(PLMap::identity()) == PLMap::identity());

    std::mt19937_64 rng(42);
    for (int i = 0; i < 120; ++i) {
        const PLMap f = random_word(rng, 6), g = random_word(rng, 6), h = random_word(rng, 4);
        CHECK(compose(f, inverse(f)) == PLMap::identity());
        CHECK(compose(compose(f, g), h) == compose(f, compose(g, h)));
        const PLMap fg = compose(f, g);
        for (const Point& p : g.breakpoints()) {
            CHECK(fg.eval(p.x) == f.eval(g.eval(p.x)));
        }
        for (int k = 0; k < 20; ++k) {
            const Rational x = random_unit_rational(rng, 4096);
            CHECK(fg.eval(x) == f.eval(g.eval(x)));
        }
    }
}

TEST_CASE("power", "[pl_map]") {
    const PLMap A = map_A();
    CHECK(power(A, 0) == PLMap::identity());
    CHECK(power(A, 1) == A);
    CHECK(power(A, 3) == compose(A, compose(A, A)));
    CHECK(power(A, -2) == inverse(compose(A, A)));
    CHECK(compose(power(A, 5), power(A, -5)) == PLMap::identity());
}

TEST_CASE("slope_at", "[pl_map]") {
    const PLMap A = map_A();
    CHECK(A.slope_at(Q(1, 3), Side::two_sided) == Q(1, 2));
    CHECK(A.slope_at(Q(1, 2), Side::left) == Q(1, 2));
    CHECK(A.slope_at(Q(1, 2), Side::right) == Q(1));
    CHECK_THROWS_AS(A.slope_at(Q(1, 2), Side::two_sided), thompson::non_differentiable);
    CHECK(A.slope_at(Q(0), Side::two_sided) == Q(1, 2));
    CHECK(A.slope_at(Q(1), Side::two_sided) == Q(2));
    CHECK_THROWS_AS(A.slope_at(Q(0), Side::left), thompson::out_of_domain);
    CHECK_THROWS_AS(A.slope_at(Q(1), Side::right), thompson::out_of_domain);
    CHECK_THROWS_AS(A.slope_at(Q(2), Side::two_sided), thompson::out_of_domain);
    CHECK(A.slope_at(Q(7, 8), Side::two_sided) == Q(2));
}

TEST_CASE("check_membership", "[pl_map]") {
    const PLMap A = map_A();
    auto cert = check_membership(A, 2);
    CHECK(cert.verdict);
    CHECK(cert.slope_exponents == std::vector<int>{-1, 0, 1});
    CHECK(cert.breakpoint_levels == std::vector<int>{0, 2, 2, 0});
    CHECK(cert.failure_reason.empty());

    auto cert3 = check_membership(A, 3);
    CHECK_FALSE(cert3.verdict);
    CHECK_FALSE(cert3.failure_reason.empty());

    // Slopes 1/3 then 4/3: the second is not a power of 3.
    const PLMap g = make_plmap({{Q(0), Q(0)}, {Q(1, 3), Q(1, 9)}, {Q(1), Q(1)}});
    auto certg = check_membership(g, 3);
    CHECK_FALSE(certg.verdict);
    CHECK(certg.failure_reason.find("4/3") != std::string::npos);

    CHECK(check_membership(PLMap::identity(), 2).verdict);
    CHECK(check_membership(PLMap::identity(), 7).verdict);
    CHECK_THROWS_AS(check_membership(A, 1), thompson::invalid_parameters);

    // F(2) membership is closed under composition and inverse.
    std::mt19937_64 rng(7);
    for (int i = 0; i < 60; ++i) {
        const PLMap f = random_word(rng, 8);
        CHECK(check_membership(f, 2).verdict);
        CHECK(check_membership(inverse(f), 2).verdict);
    }
}

TEST_CASE("restriction and partial evaluation", "[partial]") {
    const PLMap A = map_A(), B = map_B();
    const PartialPLMap phi1 = PartialPLMap::restriction(inverse(A), Q(0), Q(1, 2));
    const PartialPLMap phi2 = PartialPLMap::restriction(inverse(B), Q(1, 2), Q(3, 4));
    const PartialPLMap phi3 = PartialPLMap::restriction(A, Q(3, 4), Q(1));

    CHECK(phi1.domain() == Interval{Q(0), Q(1, 2)});
    CHECK(phi1.range() == Interval{Q(0), Q(3, 4)});
    CHECK(phi2.range() == Interval{Q(1, 2), Q(7, 8)});
    CHECK(phi3.range() == Interval{Q(1, 2), Q(1)});
    CHECK(phi1.eval(Q(1, 4)) == Q(1, 2));
    CHECK(phi2.eval(Q(5, 8)) == Q(3, 4));
    CHECK(phi3.eval(Q(3, 4)) == Q(1, 2));
    CHECK_THROWS_AS(phi3.eval(Q(1, 2)), thompson::out_of_domain);

    const PartialPLMap whole = to_partial(B);
    CHECK(whole.domain() == Interval{Q(0), Q(1)});
    for (const Point& p : B.breakpoints()) CHECK(whole.eval(p.x) == B.eval(p.x));

    const PartialPLMap deg = PartialPLMap::restriction(A, Q(1, 2), Q(1, 2));
    CHECK(deg.is_degenerate());
    CHECK(deg.eval(Q(1, 2)) == Q(1, 4));
    CHECK_THROWS_AS(deg.eval(Q(1, 4)), thompson::out_of_domain);

    const PartialPLMap empty = PartialPLMap::empty_map();
    CHECK(empty.is_empty());
    CHECK_THROWS_AS(empty.eval(Q(0)), thompson::out_of_domain);
    CHECK_THROWS_AS(empty.domain(), thompson::out_of_domain);

    CHECK_THROWS_AS(PartialPLMap::restriction(A, Q(1, 2), Q(1, 4)), thompson::invalid_parameters);
    CHECK_THROWS_AS(PartialPLMap::from_points({{Q(0), Q(0)}, {Q(2), Q(3)}}),
                    thompson::invalid_parameters);
    CHECK_THROWS_AS(PartialPLMap::from_points({{Q(0), Q(1, 2)}, {Q(1, 2), Q(1, 4)}}),
                    thompson::not_monotone);
}

TEST_CASE("partial_compose", "[partial]") {
    const PLMap A = map_A(), B = map_B();
    const PartialPLMap phi1 = PartialPLMap::restriction(inverse(A), Q(0), Q(1, 2));
    const PartialPLMap phi2 = PartialPLMap::restriction(inverse(B), Q(1, 2), Q(3, 4));
    const PartialPLMap phi3 = PartialPLMap::restriction(A, Q(3, 4), Q(1));

    // range(phi3) ∩ dom(phi1) = {1/2}: a single point whose phi3-preimage is 3/4.
    const PartialPLMap c13 = partial_compose(phi1, phi3);
    CHECK(c13.is_degenerate());
    CHECK(c13.domain() == Interval{Q(3, 4), Q(3, 4)});
    CHECK(c13.eval(Q(3, 4)) == Q(3, 4));

    const PartialPLMap c22 = partial_compose(phi2, phi2);
    CHECK(c22.domain() == Interval{Q(1, 2), Q(5, 8)});
    CHECK(c22.range() == Interval{Q(1, 2), Q(7, 8)});
    CHECK(c22.eval(Q(5, 8)) == Q(7, 8));

    const PartialPLMap c33 = partial_compose(phi3, phi3);
    CHECK(c33.domain() == Interval{Q(7, 8), Q(1)});

    // dom(phi3) ∩ range(inverse(phi1)) = [3/4,1] ∩ [0,1/2] = ∅.
    CHECK(partial_compose(phi3, inverse(phi1)).is_empty());
    CHECK(partial_compose(phi1, PartialPLMap::empty_map()).is_empty());
    CHECK(partial_compose(PartialPLMap::empty_map(), phi1).is_empty());

    // Composition with an inverse restricts to the identity on the domain.
    const PartialPLMap round = partial_compose(inverse(phi2), phi2);
    CHECK(round.domain() == phi2.domain());
    CHECK(round.eval(Q(1, 2)) == Q(1, 2));
    CHECK(round.eval(Q(17, 24)) == Q(17, 24));

    // Partial composition of whole-interval restrictions matches total composition.
    std::mt19937_64 rng(3);
    for (int i = 0; i < 60; ++i) {
        const PLMap f = random_word(rng, 5), g = random_word(rng, 5);
        const PartialPLMap pc = partial_compose(to_partial(f), to_partial(g));
        CHECK(pc == to_partial(compose(f, g)));
    }

    // Degenerate-through composition.
    const PartialPLMap deg = PartialPLMap::degenerate_map(Q(1, 2), Q(1, 4));
    const PartialPLMap after = partial_compose(to_partial(A), deg);
    CHECK(after.is_degenerate());
    CHECK(after.eval(Q(1, 2)) == A.eval(Q(1, 4)));
}

TEST_CASE("fixed_points", "[partial]") {
    const PLMap A = map_A(), B = map_B();
    const PartialPLMap phi1 = PartialPLMap::restriction(inverse(A), Q(0), Q(1, 2));
    const PartialPLMap phi2 = PartialPLMap::restriction(inverse(B), Q(1, 2), Q(3, 4));
    const PartialPLMap phi3 = PartialPLMap::restriction(A, Q(3, 4), Q(1));

    auto f1 = fixed_points(phi1);
    CHECK(f1.isolated_points == std::vector<Rational>{Q(0)});
    CHECK(f1.intervals.empty());
    auto f2 = fixed_points(phi2);
    CHECK(f2.isolated_points == std::vector<Rational>{Q(1, 2)});
    auto f3 = fixed_points(phi3);
    CHECK(f3.isolated_points == std::vector<Rational>{Q(1)});

    auto fid = fixed_points(PLMap::identity());
    CHECK(fid.isolated_points.empty());
    CHECK(fid.intervals == std::vector<Interval>{{Q(0), Q(1)}});
    CHECK(fid.has_interval());

    // B is the identity on [0,1/2]; the slope-1/2 piece's crossing at 1/2 is
    // absorbed into the interval, and the last piece crosses at 1.
    auto fb = fixed_points(B);
    CHECK(fb.intervals == std::vector<Interval>{{Q(0), Q(1, 2)}});
    CHECK(fb.isolated_points == std::vector<Rational>{Q(1)});

    auto fa = fixed_points(A);
    CHECK(fa.isolated_points == std::vector<Rational>{Q(0), Q(1)});
    CHECK(fa.intervals.empty());

    // Degenerate maps: fixed iff the single point maps to itself.
    CHECK(fixed_points(PartialPLMap::degenerate_map(Q(3, 4), Q(3, 4))).isolated_points ==
          std::vector<Rational>{Q(3, 4)});
    CHECK(fixed_points(PartialPLMap::degenerate_map(Q(3, 4), Q(1, 2))).empty());
    CHECK(fixed_points(PartialPLMap::empty_map()).empty());

    // Dense-grid sanity: eval(f, x) == x iff x is in the reported set.
    for (const PLMap& f : {A, B, compose(A, B), compose(inverse(B), A)}) {
        auto fs = fixed_points(f);
        for (long long k = 0; k <= 1000; ++k) {
            const Rational x(k, 1000);
            CHECK((f.eval(x) == x) == fs.contains(x));
        }
    }
}
