#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "thompson/errors.hpp"
#include "thompson/generators.hpp"
#include "thompson/nadic.hpp"
#include "thompson/partial_pl_map.hpp"
#include "thompson/words.hpp"

namespace thompson {

// One named partial isomorphism of a graphing.
struct GraphingPart {
    std::string name;
    PartialPLMap map;
};

// A finite list of named partial PL isomorphisms of [0,1], each with n-adic
// breakpoints and slopes that are powers of n.
class Graphing {
public:
    static Graphing make(int n, std::vector<GraphingPart> parts) {
        require_base(n);
        for (std::size_t i = 0; i < parts.size(); ++i) {
            const std::string& name = parts[i].name;
            if (name.empty()) throw invalid_parameters("graphing part names must be non-empty");
            for (char c : name) {
                if (c == ' ' || c == '\t' || c == '^') {
                    throw invalid_parameters("graphing part name \"" + name +
                                             "\" contains whitespace or '^'");
                }
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (parts[j].name == name) {
                    throw invalid_parameters("duplicate graphing part name \"" + name + "\"");
                }
            }
            if (parts[i].map.is_empty()) {
                throw invalid_parameters("graphing part \"" + name + "\" has empty domain");
            }
            validate_part(n, parts[i]);
        }
        Graphing g;
        g.n_ = n;
        g.parts_ = std::move(parts);
        return g;
    }

    int n() const { return n_; }
    const std::vector<GraphingPart>& parts() const { return parts_; }

    const GraphingPart& part(const std::string& name) const {
        for (const GraphingPart& p : parts_) {
            if (p.name == name) return p;
        }
        throw unbound_letter("no graphing part named \"" + name + "\"");
    }

    PartialAlphabet alphabet() const {
        PartialAlphabet out;
        for (const GraphingPart& p : parts_) out.emplace(p.name, p.map);
        return out;
    }

private:
    Graphing() = default;

    // Every breakpoint coordinate must be n-adic and every slope a power of n.
    static void validate_part(int n, const GraphingPart& part) {
        for (const Point& p : part.map.breakpoints()) {
            if (!is_nadic(p.x, n) || !is_nadic(p.y, n)) {
                throw precondition_violated("graphing part \"" + part.name + "\" has breakpoint (" +
                                            p.x.str() + ", " + p.y.str() + ") that is not " +
                                            std::to_string(n) + "-adic");
            }
        }
        if (!part.map.is_degenerate()) {
            const std::size_t pieces = part.map.breakpoints().size() - 1;
            for (std::size_t i = 0; i < pieces; ++i) {
                if (!power_of_n_exponent(part.map.piece_slope(i), n)) {
                    throw precondition_violated("graphing part \"" + part.name + "\" has slope " +
                                                part.map.piece_slope(i).str() +
                                                " that is not a power of " + std::to_string(n));
                }
            }
        }
    }

    int n_ = 0;
    std::vector<GraphingPart> parts_;
};

// Total Lebesgue measure of the part domains.
inline Rational cost(const Graphing& g) {
    Rational total(0);
    for (const GraphingPart& p : g.parts()) total += p.map.domain().length();
    return total;
}

// The three-part graphing that generates the orbit equivalence relation of
// F(2) acting on [0,1]:
//   phi1 = A^-1 on [0,1/2]  -> [0,3/4]
//   phi2 = B^-1 on [1/2,3/4] -> [1/2,7/8]
//   phi3 = A    on [3/4,1]  -> [1/2,1]
inline Graphing phi_R2() {
    const PLMap A = gen_A();
    const PLMap B = gen_B();
    Graphing g = Graphing::make(
        2, {{"phi1", PartialPLMap::restriction(inverse(A), Rational(0), Rational(1, 2))},
            {"phi2", PartialPLMap::restriction(inverse(B), Rational(1, 2), Rational(3, 4))},
            {"phi3", PartialPLMap::restriction(A, Rational(3, 4), Rational(1))}});
    return g;
}

namespace detail {

inline const PartialAlphabet& phi_alphabet() {
    static const PartialAlphabet alphabet = phi_R2().alphabet();
    return alphabet;
}

inline const Alphabet& ab_alphabet() {
    static const Alphabet alphabet = {{"A", gen_A()}, {"B", gen_B()}};
    return alphabet;
}

} // namespace detail

// Rewrites the action of a single letter of {A^±1, B^±1} at the point x as a
// word of length <= 1 in the parts of phi_R2, valid in a neighborhood of x.
// The case split keys on the point where the positive letter acts: for A or B
// that is x itself; for an inverse letter it is the preimage.  Ties at case
// boundaries resolve to the lower-numbered part.
inline GenWord express_step(const Rational& x, const Letter& letter) {
    if (letter.exp != 1 && letter.exp != -1) {
        throw invalid_parameters("letter exponent must be +1 or -1");
    }
    if (letter.gen != "A" && letter.gen != "B") {
        throw unbound_letter("express_step handles letters A and B, got \"" + letter.gen + "\"");
    }
    if (x < Rational(0) || x > Rational(1)) {
        throw out_of_domain("point " + x.str() + " lies outside [0,1]");
    }
    const Alphabet& ab = detail::ab_alphabet();
    const PLMap& f = ab.at(letter.gen);

    // Source of the positive-letter application, and the witness for that
    // positive letter at the source.
    const Rational source = letter.exp == 1 ? x : inverse(f).eval(x);
    GenWord direct;
    if (letter.gen == "A") {
        // A agrees with phi1^-1 on [0,3/4] and with phi3 on [3/4,1].
        direct = source <= Rational(3, 4) ? GenWord::parse("phi1^-1") : GenWord::parse("phi3");
    } else {
        // B is the identity on [0,1/2], agrees with phi2^-1 on [1/2,7/8] and
        // with phi3 on [7/8,1].
        if (source <= Rational(1, 2)) {
            direct = GenWord();
        } else if (source <= Rational(7, 8)) {
            direct = GenWord::parse("phi2^-1");
        } else {
            direct = GenWord::parse("phi3");
        }
    }
    const GenWord witness = letter.exp == 1 ? direct : direct.inverse_word();

    // The rewrite is exact by construction; verify anyway.
    const PartialPLMap realized = evaluate_partial(witness, detail::phi_alphabet());
    const Rational expected = letter.exp == 1 ? f.eval(x) : inverse(f).eval(x);
    if (realized.is_empty() || !realized.domain().contains(x) || realized.eval(x) != expected) {
        throw internal_error("express_step witness failed verification at x = " + x.str() +
                             " for letter " + GenWord({letter}).str());
    }
    return witness;
}

// Rewrites the action of a whole {A,B}-word at x as a reduced word in the
// parts of phi_R2.  Letters are expressed one at a time along the trajectory
// of x (rightmost letter first) and the witnesses concatenated in place.
inline GenWord express_word(const Rational& x, const GenWord& word) {
    const Alphabet& ab = detail::ab_alphabet();
    std::vector<GenWord> pieces(word.size());
    Rational cur = x;
    for (std::size_t i = word.size(); i-- > 0;) {
        pieces[i] = express_step(cur, word[i]);
        const PLMap& f = ab.at(word[i].gen);
        cur = word[i].exp == 1 ? f.eval(cur) : inverse(f).eval(cur);
    }
    GenWord out;
    for (const GenWord& p : pieces) out = out + p;
    out = reduce(out);

    const Rational expected = evaluate(word, ab).eval(x);
    if (out.empty()) {
        if (expected != x) {
            throw internal_error("express_word produced the empty word but the input moves x");
        }
        return out;
    }
    const PartialPLMap realized = evaluate_partial(out, detail::phi_alphabet());
    if (realized.is_empty() || !realized.domain().contains(x) || realized.eval(x) != expected) {
        throw internal_error("express_word witness failed verification at x = " + x.str());
    }
    return out;
}

// A word whose realized partial map fixes a whole interval pointwise.
struct TreeingViolation {
    GenWord word;
    Interval interval;
};

struct TreeingLengthStats {
    int length = 0;
    std::uint64_t words = 0;
    std::uint64_t empty_domain = 0;
    std::uint64_t isolated_fixed = 0;  // nonempty fixed set, all points isolated
    std::uint64_t interval_fixed = 0;  // fixed set contains an interval
};

struct TreeingReport {
    int max_len = 0;
    int jobs = 1;
    std::uint64_t words_checked = 0;
    std::uint64_t empty_domain_words = 0;
    std::vector<TreeingLengthStats> per_length;
    std::vector<TreeingViolation> violations;
    double elapsed_seconds = 0.0;

    // The sweep is a treeing certificate when no word fixes an interval.
    bool is_treeing() const { return violations.empty(); }

    // Internal bookkeeping must line up with the closed-form word counts.
    bool consistent(std::size_t alphabet_size) const {
        std::uint64_t words = 0, empties = 0;
        for (const TreeingLengthStats& s : per_length) {
            words += s.words;
            empties += s.empty_domain;
            if (s.words != reduced_word_count_exact(static_cast<int>(alphabet_size), s.length)) {
                return false;
            }
        }
        return words == words_checked && empties == empty_domain_words &&
               words_checked ==
                   reduced_word_count(static_cast<int>(alphabet_size), max_len);
    }
};

namespace detail {

struct SweepLetter {
    Letter letter;
    PartialPLMap map;
};

struct SweepAccumulator {
    std::vector<TreeingLengthStats> per_length;
    std::vector<TreeingViolation> violations;

    explicit SweepAccumulator(int max_len) : per_length(static_cast<std::size_t>(max_len)) {
        for (int k = 1; k <= max_len; ++k) per_length[static_cast<std::size_t>(k - 1)].length = k;
    }

    TreeingLengthStats& at(int len) { return per_length[static_cast<std::size_t>(len - 1)]; }

    void merge(const SweepAccumulator& other) {
        for (std::size_t i = 0; i < per_length.size(); ++i) {
            per_length[i].words += other.per_length[i].words;
            per_length[i].empty_domain += other.per_length[i].empty_domain;
            per_length[i].isolated_fixed += other.per_length[i].isolated_fixed;
            per_length[i].interval_fixed += other.per_length[i].interval_fixed;
        }
        violations.insert(violations.end(), other.violations.begin(), other.violations.end());
    }
};

// Counts one realized word and decides whether its subtree needs visiting.
inline bool sweep_count(const GenWord& word, const PartialPLMap& realized, int max_len,
                        std::size_t alphabet_size, SweepAccumulator& acc) {
    const int len = static_cast<int>(word.size());
    TreeingLengthStats& stats = acc.at(len);
    stats.words += 1;
    if (realized.is_empty()) {
        stats.empty_domain += 1;
        // Every reduced extension is empty too; account for the whole
        // subtree without walking it.
        std::uint64_t branch = 1;
        for (int deeper = len + 1; deeper <= max_len; ++deeper) {
            branch *= 2 * static_cast<std::uint64_t>(alphabet_size) - 1;
            acc.at(deeper).words += branch;
            acc.at(deeper).empty_domain += branch;
        }
        return false;
    }
    const FixedPointSet fixed = fixed_points(realized);
    if (fixed.has_interval()) {
        stats.interval_fixed += 1;
        acc.violations.push_back({word, fixed.intervals.front()});
    } else if (!fixed.empty()) {
        stats.isolated_fixed += 1;
    }
    return len < max_len;
}

inline void sweep_dfs(GenWord& word, const PartialPLMap& realized,
                      const std::vector<SweepLetter>& letters, int max_len,
                      SweepAccumulator& acc) {
    for (const SweepLetter& sl : letters) {
        if (!word.empty()) {
            const Letter& last = word[word.size() - 1];
            if (last.gen == sl.letter.gen && last.exp == -sl.letter.exp) continue;
        }
        word.push_back(sl.letter);
        // Appending a letter on the right composes it on the inside: the new
        // letter acts first.
        const PartialPLMap next = partial_compose(realized, sl.map);
        if (sweep_count(word, next, max_len, letters.size() / 2, acc)) {
            sweep_dfs(word, next, letters, max_len, acc);
        }
        word.pop_back();
    }
}

} // namespace detail

// Exhaustively realizes every nonempty reduced word of length <= max_len in
// the parts of g and their inverses, recording domain and fixed-point
// statistics and every word that fixes an interval.  With jobs > 1 the
// subtrees below the length-2 words run on worker threads; the report is
// byte-identical to the serial one.
inline TreeingReport treeing_sweep(const Graphing& g, int max_len, int jobs = 1,
                                   std::ostream* progress = nullptr) {
    if (max_len < 1) throw invalid_parameters("max_len must be at least 1");
    if (jobs < 1) throw invalid_parameters("jobs must be at least 1");
    const auto t0 = std::chrono::steady_clock::now();

    // The 2s letters in enumeration order: names ascending, +1 before -1.
    std::vector<detail::SweepLetter> letters;
    {
        std::vector<std::string> names;
        for (const GraphingPart& p : g.parts()) names.push_back(p.name);
        std::sort(names.begin(), names.end());
        for (const std::string& name : names) {
            const PartialPLMap& m = g.part(name).map;
            letters.push_back({{name, 1}, m});
            letters.push_back({{name, -1}, inverse(m)});
        }
    }
    const std::size_t s = g.parts().size();

    detail::SweepAccumulator acc(max_len);

    // Length-1 pass, collecting the roots of the parallel subtrees.
    struct Task {
        GenWord word;
        PartialPLMap realized;
    };
    std::vector<Task> tasks;
    for (const detail::SweepLetter& first : letters) {
        GenWord w({std::vector<Letter>{first.letter}});
        const PartialPLMap m1 = first.map;
        if (!detail::sweep_count(w, m1, max_len, s, acc)) continue;
        for (const detail::SweepLetter& second : letters) {
            if (second.letter.gen == first.letter.gen && second.letter.exp == -first.letter.exp) {
                continue;
            }
            Task t;
            t.word = w + GenWord({std::vector<Letter>{second.letter}});
            t.realized = partial_compose(m1, second.map);
            tasks.push_back(std::move(t));
        }
    }

    // Each task owns one length-2 word and its whole subtree.  Results are
    // merged in task order, so thread scheduling cannot change the report.
    std::vector<detail::SweepAccumulator> results(tasks.size(),
                                                  detail::SweepAccumulator(max_len));
    const int workers =
        std::min<int>(jobs, std::max<std::size_t>(tasks.size(), std::size_t{1}));
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;
    auto run_tasks = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            Task& t = tasks[i];
            if (detail::sweep_count(t.word, t.realized, max_len, s, results[i])) {
                detail::sweep_dfs(t.word, t.realized, letters, max_len, results[i]);
            }
            const std::size_t finished = done.fetch_add(1) + 1;
            if (progress != nullptr) {
                std::lock_guard<std::mutex> lock(progress_mutex);
                *progress << "treeing sweep: subtree " << finished << "/" << tasks.size()
                          << " done\n";
            }
        }
    };
    if (workers <= 1) {
        run_tasks();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(run_tasks);
        for (std::thread& th : pool) th.join();
    }
    for (const detail::SweepAccumulator& r : results) acc.merge(r);

    TreeingReport report;
    report.max_len = max_len;
    report.jobs = jobs;
    report.per_length = std::move(acc.per_length);
    report.violations = std::move(acc.violations);
    for (const TreeingLengthStats& stats : report.per_length) {
        report.words_checked += stats.words;
        report.empty_domain_words += stats.empty_domain;
    }
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

} // namespace thompson
