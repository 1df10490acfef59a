#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "thompson/errors.hpp"
#include "thompson/generators.hpp"
#include "thompson/nadic.hpp"
#include "thompson/pl_map.hpp"
#include "thompson/words.hpp"

namespace thompson {

namespace detail {

inline void require_member_alphabet(const Alphabet& alphabet, int n) {
    for (const auto& [name, m] : alphabet) {
        const MembershipCertificate cert = check_membership(m, n);
        if (!cert.verdict) {
            throw precondition_violated("alphabet map \"" + name + "\" fails membership for base " +
                                        std::to_string(n) + ": " + cert.failure_reason);
        }
    }
}

inline void require_member(const PLMap& f, int n) {
    const MembershipCertificate cert = check_membership(f, n);
    if (!cert.verdict) {
        throw precondition_violated("map fails membership for base " + std::to_string(n) + ": " +
                                    cert.failure_reason);
    }
}

inline bool is_odd(const Int& v) { return v % 2 != 0; }

} // namespace detail

// ---------------------------------------------------------------------------
// Orbit exploration
// ---------------------------------------------------------------------------

struct OrbitNode {
    Rational value;
    int depth = 0;
    GenWord witness; // witness applied to the start point gives value
};

struct OrbitResult {
    int n = 0;
    Rational start;
    int max_depth = 0;
    bool truncated = false;
    std::vector<OrbitNode> nodes; // sorted by depth, then value
};

// Breadth-first closure of {start} under the alphabet maps and their
// inverses.  Each distinct point is recorded once, at its first depth, with
// the lexicographically least witness among that depth's discoveries.
inline OrbitResult orbit_bfs(const Rational& start, const Alphabet& alphabet, int n, int max_depth,
                             std::size_t max_points = 100000) {
    require_base(n);
    detail::require_member_alphabet(alphabet, n);
    if (start < Rational(0) || start > Rational(1)) {
        throw out_of_domain("orbit start " + start.str() + " lies outside [0,1]");
    }
    if (max_depth < 0) throw invalid_parameters("max_depth must be >= 0");
    if (max_points < 1) throw invalid_parameters("max_points must be >= 1");

    std::vector<std::pair<Letter, PLMap>> letters;
    for (const auto& [name, m] : alphabet) {
        letters.emplace_back(Letter{name, 1}, m);
        letters.emplace_back(Letter{name, -1}, inverse(m));
    }

    OrbitResult result;
    result.n = n;
    result.start = start;
    result.max_depth = max_depth;

    std::map<Rational, std::size_t> index; // value -> position in nodes
    result.nodes.push_back({start, 0, GenWord()});
    index.emplace(start, 0);

    std::vector<std::size_t> frontier{0};
    for (int depth = 1; depth <= max_depth && !frontier.empty(); ++depth) {
        // Collect every candidate first so equal-depth duplicates can be
        // resolved to the lexicographically least witness.
        std::map<Rational, GenWord> candidates;
        for (std::size_t node_idx : frontier) {
            const OrbitNode node = result.nodes[node_idx];
            for (const auto& [letter, m] : letters) {
                const Rational value = m.eval(node.value);
                if (index.count(value)) continue;
                GenWord witness = GenWord({letter}) + node.witness;
                auto it = candidates.find(value);
                if (it == candidates.end()) {
                    candidates.emplace(value, std::move(witness));
                } else if (lex_less(witness, it->second)) {
                    it->second = std::move(witness);
                }
            }
        }
        std::vector<std::size_t> next;
        for (auto& [value, witness] : candidates) {
            if (result.nodes.size() >= max_points) {
                result.truncated = true;
                break;
            }
            index.emplace(value, result.nodes.size());
            next.push_back(result.nodes.size());
            result.nodes.push_back({value, depth, std::move(witness)});
        }
        if (result.truncated) break;
        frontier = std::move(next);
    }

    std::sort(result.nodes.begin(), result.nodes.end(), [](const OrbitNode& a, const OrbitNode& b) {
        if (a.depth != b.depth) return a.depth < b.depth;
        return a.value < b.value;
    });
    return result;
}

// ---------------------------------------------------------------------------
// The derivative cocycle
// ---------------------------------------------------------------------------

struct CocycleValue {
    Rational value;   // 1 / (slope of the realized map at x)
    int exponent = 0; // value == n^exponent
};

// The measure-theoretic density of the move x -> w(x): the reciprocal of the
// realized map's (two-sided) slope at x, which membership forces to be an
// integer power of n.  Throws non_differentiable at breakpoint corners.
inline CocycleValue rn_cocycle(const GenWord& word, const Alphabet& alphabet, int n,
                               const Rational& x) {
    require_base(n);
    detail::require_member_alphabet(alphabet, n);
    const PLMap f = evaluate(word, alphabet);
    const Rational slope = f.slope_at(x, Side::two_sided);
    const Rational value = Rational(1) / slope;
    const std::optional<int> e = power_of_n_exponent(value, n);
    if (!e) {
        throw internal_error("cocycle value " + value.str() + " is not a power of " +
                             std::to_string(n));
    }
    return {value, *e};
}

struct CocycleChainCheck {
    CocycleValue inner;     // word u at x
    CocycleValue outer;     // word v at u(x)
    CocycleValue composite; // word v u at x
    bool pass = false;      // composite == inner * outer, exactly
};

// Verifies the cocycle identity for the composition "v u" (u acts first).
inline CocycleChainCheck cocycle_chain_check(const GenWord& u, const GenWord& v,
                                             const Alphabet& alphabet, int n, const Rational& x) {
    CocycleChainCheck check;
    check.inner = rn_cocycle(u, alphabet, n, x);
    const Rational ux = evaluate(u, alphabet).eval(x);
    check.outer = rn_cocycle(v, alphabet, n, ux);
    check.composite = rn_cocycle(v + u, alphabet, n, x);
    check.pass = check.composite.value == check.inner.value * check.outer.value &&
                 check.composite.exponent == check.inner.exponent + check.outer.exponent;
    return check;
}

// ---------------------------------------------------------------------------
// Slope-one steps
// ---------------------------------------------------------------------------

// If f has two-sided slope 1 at x, the displacement f(x) - x, which is then
// necessarily n-adic; otherwise (slope != 1, or a corner) nothing.
inline std::optional<Rational> sn_step_check(const PLMap& f, int n, const Rational& x) {
    detail::require_member(f, n);
    Rational slope;
    try {
        slope = f.slope_at(x, Side::two_sided);
    } catch (const non_differentiable&) {
        return std::nullopt;
    }
    if (slope != Rational(1)) return std::nullopt;
    const Rational step = f.eval(x) - x;
    if (!is_nadic(step, n)) {
        throw internal_error("slope-one displacement " + step.str() + " is not " +
                             std::to_string(n) + "-adic");
    }
    return step;
}

struct SnOrbitPoint {
    int p = 0;
    Rational image; // value of the three-piece map at x
    Rational step;  // image - x
};

// Moves x by the slope-one middle piece of the three-piece map with
// parameters (d, p), for each requested p.  The images x - d + d/n^p are
// pairwise distinct across p.
inline std::vector<SnOrbitPoint> sn_orbit_points(int n, const Rational& d, const Rational& x,
                                                 const std::vector<int>& ps) {
    std::vector<SnOrbitPoint> out;
    out.reserve(ps.size());
    for (int p : ps) {
        const PLMap f = gen_Adp(n, d, p);
        const Rational hi = Rational(1) - d * pow_n(n, -p);
        if (!(d < x && x < hi)) {
            throw invalid_parameters("point " + x.str() +
                                     " is not strictly inside the slope-one piece (" + d.str() +
                                     ", " + hi.str() + ") for p = " + std::to_string(p));
        }
        const std::optional<Rational> step = sn_step_check(f, n, x);
        if (!step) throw internal_error("interior of the middle piece must have slope 1");
        out.push_back({p, f.eval(x), *step});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Slope exponents on a uniform grid
// ---------------------------------------------------------------------------

struct SlopeSumDecomposition {
    int n = 0;
    int r = 0;
    std::vector<int> exponents; // exponents[i]: slope on [i/n^r, (i+1)/n^r] is n^exponents[i]
};

// Per-cell slope exponents of f on the uniform n^-r grid.  Every breakpoint
// of f must lie on that grid.
inline SlopeSumDecomposition slope_sum_decomposition(const PLMap& f, int n, int r) {
    require_base(n);
    if (r < 0) throw invalid_parameters("grid level must be >= 0");
    long long cells = 1;
    for (int i = 0; i < r; ++i) {
        cells *= n;
        if (cells > 1000000) {
            throw invalid_parameters("grid has more than 1000000 cells");
        }
    }
    detail::require_member(f, n);

    SlopeSumDecomposition dec;
    dec.n = n;
    dec.r = r;
    dec.exponents.assign(static_cast<std::size_t>(cells), 0);
    const auto& pts = f.breakpoints();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        // Throws when a breakpoint needs a finer grid than n^-r.
        const Int lo = numerator_at_level(pts[i].x, n, r);
        const Int hi = numerator_at_level(pts[i + 1].x, n, r);
        const std::optional<int> e = power_of_n_exponent(f.piece_slope(i), n);
        if (!e) {
            throw precondition_violated("slope " + f.piece_slope(i).str() + " is not a power of " +
                                        std::to_string(n));
        }
        for (Int c = lo; c < hi; ++c) {
            dec.exponents[static_cast<std::size_t>(c)] = *e;
        }
    }
    return dec;
}

// Exact value f(k/n^r) reconstructed from the decomposition: the sum of the
// first k cell increments n^(exponents[i]) / n^r.
inline Rational slope_partial_sum(const SlopeSumDecomposition& dec, std::size_t k) {
    if (k > dec.exponents.size()) {
        throw invalid_parameters("partial sum index exceeds the cell count");
    }
    Rational acc(0);
    for (std::size_t i = 0; i < k; ++i) acc += pow_n(dec.n, dec.exponents[i]);
    return acc * pow_n(dec.n, -dec.r);
}

// ---------------------------------------------------------------------------
// The parity obstruction for odd bases
// ---------------------------------------------------------------------------

// Arithmetic certificate that f(d) != d + k/n^p, for odd n and odd k.  Writing
// d = a/n^R on a grid fine enough that f is affine on every cell below d,
//     n^(R+shift) * f(d) = sum over those cells of n^(shift + cell exponent),
// a sum of exactly `a` odd terms, hence congruent to a mod 2.  The target
// numerator b = a + k*n^(R-p) has the opposite parity, so the values differ.
struct ParityCertificate {
    int n = 0;
    Rational d;
    int k = 0;
    int p = 0;
    int level = 0;   // R: the grid level used
    Int a;           // d = a / n^level
    Int b;           // d + k/n^p = b / n^level
    int shift = 0;   // nonnegative exponent offset making all terms integers
    Int sum;         // n^(level+shift) * f(d), computed piece by piece
    Rational image;  // f(d)
    Rational target; // d + k/n^p
    bool parity_differs = false;     // a and b have opposite parity
    bool value_differs = false;      // f(d) != target
    bool sum_matches = false;        // sum == f(d) * n^(level+shift)
    bool parity_argument_ok = false; // sum == a mod 2, sum != b*n^shift mod 2
    bool holds = false;              // all of the above
};

inline ParityCertificate parity_certificate(const PLMap& f, int n, const Rational& d, int k,
                                            int p) {
    require_base(n);
    if (n % 2 == 0) throw precondition_violated("parity certificates need an odd base");
    if (k % 2 == 0) throw precondition_violated("parity certificates need an odd numerator k");
    if (p < 1) throw invalid_parameters("parameter p must be >= 1");
    if (d < Rational(0) || d > Rational(1)) {
        throw invalid_parameters("point d must lie in [0,1], got " + d.str());
    }
    if (!is_nadic(d, n)) {
        throw invalid_parameters("point d = " + d.str() + " is not " + std::to_string(n) +
                                 "-adic");
    }
    detail::require_member(f, n);

    ParityCertificate cert;
    cert.n = n;
    cert.d = d;
    cert.k = k;
    cert.p = p;

    // Grid level: fine enough for d, for the target denominator, and for
    // every breakpoint at or below d (cells beyond d contribute nothing).
    int level = std::max({nadic_level(d, n), p, 1});
    const auto& pts = f.breakpoints();
    for (const Point& pt : pts) {
        if (pt.x <= d) level = std::max(level, nadic_level(pt.x, n));
    }
    cert.level = level;
    cert.a = numerator_at_level(d, n, level);
    cert.b = cert.a + Int(k) * pow_n(n, level - p).num();
    cert.image = f.eval(d);
    cert.target = d + Rational(Int(k)) * pow_n(n, -p);

    // Cell counts and slope exponents for the pieces meeting [0, d).
    std::vector<std::pair<Int, int>> terms; // (cell count, slope exponent)
    int min_exponent = 0;
    for (std::size_t i = 0; i + 1 < pts.size() && pts[i].x < d; ++i) {
        const Int lo = numerator_at_level(pts[i].x, n, level);
        const Rational right = std::min(pts[i + 1].x, d);
        const Int hi = numerator_at_level(right, n, level);
        if (hi <= lo) continue;
        const std::optional<int> e = power_of_n_exponent(f.piece_slope(i), n);
        if (!e) throw internal_error("membership holds but a slope is not a power of n");
        terms.emplace_back(hi - lo, *e);
        min_exponent = std::min(min_exponent, *e);
    }
    cert.shift = -min_exponent;
    cert.sum = 0;
    for (const auto& [count, e] : terms) {
        cert.sum += count * pow_n(n, cert.shift + e).num();
    }

    const Int b_scaled = cert.b * pow_n(n, cert.shift).num();
    cert.parity_differs = detail::is_odd(cert.a - cert.b);
    cert.value_differs = cert.image != cert.target;
    cert.sum_matches = Rational(cert.sum) == cert.image * pow_n(n, level + cert.shift);
    cert.parity_argument_ok =
        !detail::is_odd(cert.sum - cert.a) && detail::is_odd(cert.sum - b_scaled);
    cert.holds =
        cert.parity_differs && cert.value_differs && cert.sum_matches && cert.parity_argument_ok;
    return cert;
}

struct ParityReport {
    int n = 0;
    Rational d;
    int k = 0;
    int p = 0;
    int max_len = 0;
    std::uint64_t words_checked = 0;       // includes the empty word
    std::uint64_t certificates_holding = 0;
    std::vector<GenWord> witnesses;        // words moving d exactly to the target
    double elapsed_seconds = 0.0;

    bool obstruction_confirmed() const {
        return witnesses.empty() && certificates_holding == words_checked;
    }
};

// Realizes every reduced word of length <= max_len (the empty word included)
// over the alphabet and certifies, word by word, that it does not move d to
// d + k/n^p.  For odd n and odd k the witness list must stay empty.
inline ParityReport parity_search(const Alphabet& alphabet, int n, const Rational& d, int k, int p,
                                  int max_len) {
    if (max_len < 0) throw invalid_parameters("max_len must be >= 0");
    detail::require_member_alphabet(alphabet, n);
    const auto t0 = std::chrono::steady_clock::now();

    ParityReport report;
    report.n = n;
    report.d = d;
    report.k = k;
    report.p = p;
    report.max_len = max_len;
    const Rational target = d + Rational(Int(k)) * pow_n(n, -p);

    std::vector<std::pair<Letter, PLMap>> letters;
    for (const auto& [name, m] : alphabet) {
        letters.emplace_back(Letter{name, 1}, m);
        letters.emplace_back(Letter{name, -1}, inverse(m));
    }

    GenWord word;
    auto visit = [&](const PLMap& realized, const auto& self) -> void {
        report.words_checked += 1;
        const ParityCertificate cert = parity_certificate(realized, n, d, k, p);
        if (cert.holds) report.certificates_holding += 1;
        if (realized.eval(d) == target) report.witnesses.push_back(word);
        if (static_cast<int>(word.size()) >= max_len) return;
        for (const auto& [letter, m] : letters) {
            if (!word.empty()) {
                const Letter& last = word[word.size() - 1];
                if (last.gen == letter.gen && last.exp == -letter.exp) continue;
            }
            word.push_back(letter);
            self(compose(realized, m), self);
            word.pop_back();
        }
    };
    visit(PLMap::identity(), visit);

    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

struct ValueWitness {
    bool found = false;
    GenWord word;
    Rational image;
    std::uint64_t words_checked = 0;
};

// Searches reduced words (shortest first, then lexicographic) for one whose
// realized map sends `from` to `to`.  Even bases admit such witnesses in
// situations where odd bases provably do not.
inline ValueWitness value_witness_search(const Alphabet& alphabet, const Rational& from,
                                         const Rational& to, int max_len) {
    if (max_len < 0) throw invalid_parameters("max_len must be >= 0");
    if (from < Rational(0) || from > Rational(1) || to < Rational(0) || to > Rational(1)) {
        throw out_of_domain("witness search endpoints must lie in [0,1]");
    }

    std::vector<std::pair<Letter, PLMap>> letters;
    for (const auto& [name, m] : alphabet) {
        letters.emplace_back(Letter{name, 1}, m);
        letters.emplace_back(Letter{name, -1}, inverse(m));
    }

    ValueWitness result;
    GenWord word;
    // Iterative deepening keeps the first hit shortest-then-lexicographic.
    auto dfs = [&](const PLMap& realized, int target_len, const auto& self) -> bool {
        if (static_cast<int>(word.size()) == target_len) {
            result.words_checked += 1;
            if (realized.eval(from) == to) {
                result.found = true;
                result.word = word;
                result.image = realized.eval(from);
                return true;
            }
            return false;
        }
        for (const auto& [letter, m] : letters) {
            if (!word.empty()) {
                const Letter& last = word[word.size() - 1];
                if (last.gen == letter.gen && last.exp == -letter.exp) continue;
            }
            word.push_back(letter);
            if (self(compose(realized, m), target_len, self)) return true;
            word.pop_back();
        }
        return false;
    };
    for (int len = 0; len <= max_len; ++len) {
        if (dfs(PLMap::identity(), len, dfs)) break;
    }
    return result;
}

} // namespace thompson
