#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "thompson/dynamics.hpp"

using namespace thompson;

namespace {

Rational Q(long long n, long long d = 1) { return Rational(Int(n), Int(d)); }

Alphabet ab_alphabet() { return {{"A", gen_A()}, {"B", gen_B()}}; }

const OrbitNode* find_node(const OrbitResult& r, const Rational& v) {
    for (const OrbitNode& node : r.nodes) {
        if (node.value == v) return &node;
    }
    return nullptr;
}

} // namespace

TEST_CASE("orbit of 1/2 under the classical generators") {
    const Alphabet ab = ab_alphabet();

    const OrbitResult depth1 = orbit_bfs(Q(1, 2), ab, 2, 1);
    REQUIRE(depth1.nodes.size() == 3);
    CHECK(depth1.nodes[0].value == Q(1, 2));
    CHECK(depth1.nodes[0].depth == 0);
    CHECK(depth1.nodes[0].witness.empty());
    CHECK(depth1.nodes[1].value == Q(1, 4));
    CHECK(depth1.nodes[1].witness.str() == "A");
    CHECK(depth1.nodes[2].value == Q(3, 4));
    CHECK(depth1.nodes[2].witness.str() == "A^-1");
    CHECK(!depth1.truncated);

    const OrbitResult depth2 = orbit_bfs(Q(1, 2), ab, 2, 2);
    REQUIRE(depth2.nodes.size() == 6);
    const OrbitNode* eighth = find_node(depth2, Q(1, 8));
    REQUIRE(eighth != nullptr);
    CHECK(eighth->depth == 2);
    CHECK(eighth->witness.str() == "A A");
    const OrbitNode* five8 = find_node(depth2, Q(5, 8));
    REQUIRE(five8 != nullptr);
    CHECK(five8->witness.str() == "B A^-1");
    // 7/8 is reachable both as A^-1 A^-1 and B^-1 A^-1; the witness is the
    // lexicographically smaller one.
    const OrbitNode* seven8 = find_node(depth2, Q(7, 8));
    REQUIRE(seven8 != nullptr);
    CHECK(seven8->witness.str() == "A^-1 A^-1");

    // Witnesses replay to their values.
    for (const OrbitNode& node : depth2.nodes) {
        CHECK(evaluate(node.witness, ab).eval(Q(1, 2)) == node.value);
    }

    // Nodes come sorted by depth then value.
    for (std::size_t i = 1; i < depth2.nodes.size(); ++i) {
        const OrbitNode& a = depth2.nodes[i - 1];
        const OrbitNode& b = depth2.nodes[i];
        CHECK((a.depth < b.depth || (a.depth == b.depth && a.value < b.value)));
    }
}

TEST_CASE("orbit edge cases") {
    const Alphabet ab = ab_alphabet();

    // 0 is fixed by everything.
    const OrbitResult zero = orbit_bfs(Q(0), ab, 2, 10);
    CHECK(zero.nodes.size() == 1);
    CHECK(!zero.truncated);

    // Point cap truncates.
    const OrbitResult capped = orbit_bfs(Q(1, 2), ab, 2, 2, 4);
    CHECK(capped.truncated);
    CHECK(capped.nodes.size() == 4);

    CHECK_THROWS_AS(orbit_bfs(Q(3, 2), ab, 2, 1), out_of_domain);
    CHECK_THROWS_AS(orbit_bfs(Q(1, 2), ab, 2, -1), invalid_parameters);

    // Alphabet maps must pass membership for the stated base.
    const Alphabet bad = {{"T", make_plmap({{Q(0), Q(0)}, {Q(1, 3), Q(1, 9)}, {Q(1), Q(1)}})}};
    CHECK_THROWS_AS(orbit_bfs(Q(1, 2), bad, 2, 1), precondition_violated);
    CHECK_THROWS_AS(orbit_bfs(Q(1, 2), ab, 3, 1), precondition_violated);
}

TEST_CASE("cocycle values are reciprocal slopes") {
    const Alphabet ab = ab_alphabet();

    const CocycleValue c1 = rn_cocycle(GenWord::parse("A"), ab, 2, Q(1, 3));
    CHECK(c1.value == Q(2));
    CHECK(c1.exponent == 1);

    const CocycleValue c2 = rn_cocycle(GenWord::parse("A A"), ab, 2, Q(1, 5));
    CHECK(c2.value == Q(4));
    CHECK(c2.exponent == 2);

    const CocycleValue c0 = rn_cocycle(GenWord(), ab, 2, Q(1, 3));
    CHECK(c0.value == Q(1));
    CHECK(c0.exponent == 0);

    // A^-1 steepens where A flattens: slope 2 on [0,1/4].
    const CocycleValue cinv = rn_cocycle(GenWord::parse("A^-1"), ab, 2, Q(1, 5));
    CHECK(cinv.value == Q(1, 2));
    CHECK(cinv.exponent == -1);

    // Breakpoint corners have no two-sided slope.
    CHECK_THROWS_AS(rn_cocycle(GenWord::parse("A"), ab, 2, Q(1, 2)), non_differentiable);
}

TEST_CASE("cocycle chain rule") {
    const Alphabet ab = ab_alphabet();

    const CocycleChainCheck ex =
        cocycle_chain_check(GenWord::parse("A"), GenWord::parse("A"), ab, 2, Q(1, 5));
    CHECK(ex.inner.value == Q(2));
    CHECK(ex.outer.value == Q(2));
    CHECK(ex.composite.value == Q(4));
    CHECK(ex.pass);

    // Random words at odd-denominator points (never breakpoints of any word
    // in A and B, whose breakpoints all have power-of-two denominators).
    std::mt19937 rng(4242);
    std::uniform_int_distribution<int> pick(0, 3);
    std::uniform_int_distribution<long long> num(1, 100);
    const Letter letters[4] = {{"A", 1}, {"A", -1}, {"B", 1}, {"B", -1}};
    for (int trial = 0; trial < 100; ++trial) {
        GenWord u, v;
        const int lu = 1 + static_cast<int>(rng() % 4);
        const int lv = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < lu; ++i) u.push_back(letters[pick(rng)]);
        for (int i = 0; i < lv; ++i) v.push_back(letters[pick(rng)]);
        const Rational x = Q(num(rng), 101);
        const CocycleChainCheck chain = cocycle_chain_check(u, v, ab, 2, x);
        REQUIRE(chain.pass);
        REQUIRE(chain.composite.value == pow_n(2, chain.composite.exponent));
    }
}

TEST_CASE("slope-one step displacement") {
    // The middle piece of the (1/4, 2) map has slope one.
    const PLMap f = gen_Adp(2, Q(1, 4), 2);
    const std::optional<Rational> step = sn_step_check(f, 2, Q(1, 2));
    REQUIRE(step.has_value());
    CHECK(*step == Q(-3, 16));

    // Slope 1/2 at 1/3 under A: no slope-one step.
    CHECK(!sn_step_check(gen_A(), 2, Q(1, 3)).has_value());
    // Corner of A at 1/2: no step either.
    CHECK(!sn_step_check(gen_A(), 2, Q(1, 2)).has_value());
    // A itself has a slope-one piece.
    const std::optional<Rational> mid = sn_step_check(gen_A(), 2, Q(5, 8));
    REQUIRE(mid.has_value());
    CHECK(*mid == Q(-1, 4));
    // Identity steps by zero.
    CHECK(sn_step_check(PLMap::identity(), 2, Q(1, 3)) == Q(0));

    CHECK_THROWS_AS(sn_step_check(gen_A(), 3, Q(1, 3)), precondition_violated);
}

TEST_CASE("slope-one orbit points are distinct across p") {
    const std::vector<int> ps = {2, 3, 4, 5, 6};
    const std::vector<SnOrbitPoint> pts = sn_orbit_points(2, Q(1, 4), Q(1, 3), ps);
    REQUIRE(pts.size() == 5);
    std::set<Rational> images;
    for (const SnOrbitPoint& pt : pts) {
        // image = x - d + d/2^p, step = image - x.
        CHECK(pt.image == Q(1, 3) - Q(1, 4) + Q(1, 4) * pow_n(2, -pt.p));
        CHECK(pt.step == pt.image - Q(1, 3));
        CHECK(is_nadic(pt.step, 2));
        images.insert(pt.image);
    }
    CHECK(images.size() == pts.size());

    // x must sit strictly inside the slope-one piece.
    CHECK_THROWS_AS(sn_orbit_points(2, Q(1, 4), Q(1, 5), {2}), invalid_parameters);
    CHECK_THROWS_AS(sn_orbit_points(2, Q(1, 4), Q(1, 4), {2}), invalid_parameters);
}

TEST_CASE("slope exponents on the uniform grid") {
    const SlopeSumDecomposition a2 = slope_sum_decomposition(gen_A(), 2, 2);
    CHECK(a2.exponents == std::vector<int>{-1, -1, 0, 1});

    const SlopeSumDecomposition b3 = slope_sum_decomposition(gen_B(), 2, 3);
    CHECK(b3.exponents == std::vector<int>{0, 0, 0, 0, -1, -1, 0, 1});

    const SlopeSumDecomposition m32 = slope_sum_decomposition(gen_Adp(3, Q(1, 3), 1), 3, 2);
    CHECK(m32.exponents == std::vector<int>{-1, -1, -1, 0, 0, 0, 0, 0, 1});

    // Partial sums reconstruct the map on every grid point.
    for (int r = 2; r <= 4; ++r) {
        const SlopeSumDecomposition dec = slope_sum_decomposition(gen_A(), 2, r);
        for (std::size_t k = 0; k <= dec.exponents.size(); ++k) {
            REQUIRE(slope_partial_sum(dec, k) ==
                    gen_A().eval(Q(static_cast<long long>(k)) * pow_n(2, -r)));
        }
    }

    // Breakpoint 3/4 does not sit on the half-integer grid.
    CHECK_THROWS_AS(slope_sum_decomposition(gen_A(), 2, 1), level_too_low);
    // Grid size guard.
    CHECK_THROWS_AS(slope_sum_decomposition(gen_A(), 2, 40), invalid_parameters);
    // Maps outside the group are rejected.
    const PLMap bad = make_plmap({{Q(0), Q(0)}, {Q(1, 3), Q(1, 9)}, {Q(1), Q(1)}});
    CHECK_THROWS_AS(slope_sum_decomposition(bad, 2, 2), precondition_violated);
    CHECK_THROWS_AS(slope_partial_sum(a2, 5), invalid_parameters);
}

TEST_CASE("parity certificate for the basic three-piece map") {
    const PLMap f = gen_Adp(3, Q(1, 3), 1);
    const ParityCertificate cert = parity_certificate(f, 3, Q(1, 3), 1, 1);

    CHECK(cert.level == 1);
    CHECK(cert.a == 1);
    CHECK(cert.b == 2);
    CHECK(cert.shift == 1);
    CHECK(cert.sum == 1);
    CHECK(cert.image == Q(1, 9));
    CHECK(cert.target == Q(2, 3));
    CHECK(cert.parity_differs);
    CHECK(cert.value_differs);
    CHECK(cert.sum_matches);
    CHECK(cert.parity_argument_ok);
    CHECK(cert.holds);

    // The identity is certified too: it moves 1/3 to 1/3, not to 2/3.
    CHECK(parity_certificate(PLMap::identity(), 3, Q(1, 3), 1, 1).holds);

    // d = 0 works; every map fixes 0, so it cannot reach 1/3.
    CHECK(parity_certificate(f, 3, Q(0), 1, 1).holds);

    CHECK_THROWS_AS(parity_certificate(f, 2, Q(1, 4), 1, 1), precondition_violated); // even base
    CHECK_THROWS_AS(parity_certificate(f, 3, Q(1, 3), 2, 1), precondition_violated); // even k
    CHECK_THROWS_AS(parity_certificate(f, 3, Q(1, 3), 1, 0), invalid_parameters);
    CHECK_THROWS_AS(parity_certificate(f, 3, Q(1, 2), 1, 1), invalid_parameters); // d not 3-adic
    CHECK_THROWS_AS(parity_certificate(gen_A(), 3, Q(1, 3), 1, 1), precondition_violated);
}

TEST_CASE("parity search certifies every short word") {
    const Alphabet ab = {{"X", gen_Adp(3, Q(1, 3), 1)},
                         {"Y", gen_Adp(3, Q(2, 3), 1)},
                         {"Z", gen_Adp(3, Q(1, 9), 2)}};

    const ParityReport report = parity_search(ab, 3, Q(1, 3), 1, 1, 2);
    CHECK(report.words_checked == 1 + 6 + 30);
    CHECK(report.witnesses.empty());
    CHECK(report.certificates_holding == report.words_checked);
    CHECK(report.obstruction_confirmed());

    // Length zero checks only the identity.
    const ParityReport only_id = parity_search(ab, 3, Q(1, 3), 1, 1, 0);
    CHECK(only_id.words_checked == 1);
    CHECK(only_id.obstruction_confirmed());

    CHECK_THROWS_AS(parity_search(ab, 2, Q(1, 4), 1, 1, 1), precondition_violated);
}

TEST_CASE("even bases admit value witnesses") {
    const Alphabet ab = ab_alphabet();

    // 1/4 -> 1/2 = 1/4 + 1/4: reachable over base 2, by A^-1 already.
    const ValueWitness hit = value_witness_search(ab, Q(1, 4), Q(1, 2), 3);
    CHECK(hit.found);
    CHECK(hit.word.str() == "A^-1");
    CHECK(hit.image == Q(1, 2));
    CHECK(hit.words_checked == 3); // identity, A, A^-1

    // 1/3 has an odd factor in its denominator that no word over A and B can
    // remove, so 1/2 is unreachable.
    const ValueWitness miss = value_witness_search(ab, Q(1, 3), Q(1, 2), 3);
    CHECK(!miss.found);
    CHECK(miss.words_checked == 1 + 4 + 12 + 36);

    CHECK_THROWS_AS(value_witness_search(ab, Q(-1, 2), Q(1, 2), 2), out_of_domain);
}
