#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thompson/errors.hpp"
#include "thompson/partial_pl_map.hpp"
#include "thompson/pl_map.hpp"

namespace thompson {

// One word letter: a named generator with exponent +1 or -1.
struct Letter {
    std::string gen;
    int exp = 1;

    friend bool operator==(const Letter& a, const Letter& b) {
        return a.gen == b.gen && a.exp == b.exp;
    }
};

// Letter order used everywhere enumeration or tie-breaking needs one:
// generator name ascending, then +1 before -1.
inline bool letter_less(const Letter& a, const Letter& b) {
    if (a.gen != b.gen) return a.gen < b.gen;
    return a.exp > b.exp;
}

// A word in named generators, read as function composition in written
// order: the rightmost letter acts first.
class GenWord {
public:
    GenWord() = default;
    explicit GenWord(std::vector<Letter> letters) : letters_(std::move(letters)) {}

    // Text syntax: whitespace-separated letters, each "name" or "name^k"
    // with integer k; |k| > 1 expands into repeated letters.  Names must not
    // contain whitespace or '^'.
    static GenWord parse(std::string_view text) {
        GenWord w;
        std::size_t i = 0;
        while (i < text.size()) {
            while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
            if (i >= text.size()) break;
            const std::size_t start = i;
            while (i < text.size() && text[i] != ' ' && text[i] != '\t' && text[i] != '^') ++i;
            if (i == start) {
                throw parse_error("bad word \"" + std::string(text) + "\": empty letter name at position " +
                                  std::to_string(start));
            }
            std::string name(text.substr(start, i - start));
            long long e = 1;
            if (i < text.size() && text[i] == '^') {
                ++i;
                const std::size_t es = i;
                if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
                while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
                if (i == es || (i == es + 1 && !(text[es] >= '0' && text[es] <= '9'))) {
                    throw parse_error("bad word \"" + std::string(text) +
                                      "\": expected integer exponent at position " + std::to_string(es));
                }
                e = std::stoll(std::string(text.substr(es, i - es)));
            }
            if (e == 0) continue;
            const int sign = e < 0 ? -1 : 1;
            for (long long k = 0; k < (e < 0 ? -e : e); ++k) w.letters_.push_back({name, sign});
        }
        return w;
    }

    std::string str() const {
        std::string out;
        for (const Letter& l : letters_) {
            if (!out.empty()) out += ' ';
            out += l.gen;
            if (l.exp == -1) out += "^-1";
        }
        return out;
    }

    bool empty() const { return letters_.empty(); }
    std::size_t size() const { return letters_.size(); }
    const Letter& operator[](std::size_t i) const { return letters_[i]; }
    const std::vector<Letter>& letters() const { return letters_; }
    auto begin() const { return letters_.begin(); }
    auto end() const { return letters_.end(); }

    void push_back(Letter l) { letters_.push_back(std::move(l)); }
    void pop_back() { letters_.pop_back(); }

    GenWord inverse_word() const {
        GenWord w;
        w.letters_.reserve(letters_.size());
        for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
            w.letters_.push_back({it->gen, -it->exp});
        }
        return w;
    }

    friend GenWord operator+(const GenWord& a, const GenWord& b) {
        GenWord w = a;
        w.letters_.insert(w.letters_.end(), b.letters_.begin(), b.letters_.end());
        return w;
    }

    friend bool operator==(const GenWord& a, const GenWord& b) {
        return a.letters_ == b.letters_;
    }

    // Lexicographic order by letter_less, shorter prefix first.
    friend bool lex_less(const GenWord& a, const GenWord& b) {
        const std::size_t n = std::min(a.size(), b.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (!(a[i] == b[i])) return letter_less(a[i], b[i]);
        }
        return a.size() < b.size();
    }

private:
    std::vector<Letter> letters_;
};

// Free reduction: cancel adjacent inverse pairs until none remain.
inline GenWord reduce(const GenWord& w) {
    std::vector<Letter> stack;
    for (const Letter& l : w) {
        if (l.exp != 1 && l.exp != -1) {
            throw invalid_parameters("letter exponent must be +1 or -1, got " +
                                     std::to_string(l.exp));
        }
        if (!stack.empty() && stack.back().gen == l.gen && stack.back().exp == -l.exp) {
            stack.pop_back();
        } else {
            stack.push_back(l);
        }
    }
    return GenWord(std::move(stack));
}

inline bool is_reduced(const GenWord& w) {
    for (std::size_t i = 1; i < w.size(); ++i) {
        if (w[i].gen == w[i - 1].gen && w[i].exp == -w[i - 1].exp) return false;
    }
    return true;
}

using Alphabet = std::map<std::string, PLMap>;
using PartialAlphabet = std::map<std::string, PartialPLMap>;

namespace detail {

inline const PLMap& bound_map(const Alphabet& alphabet, const std::string& name) {
    auto it = alphabet.find(name);
    if (it == alphabet.end()) throw unbound_letter("no generator named \"" + name + "\"");
    return it->second;
}

inline const PartialPLMap& bound_partial(const PartialAlphabet& alphabet,
                                         const std::string& name) {
    auto it = alphabet.find(name);
    if (it == alphabet.end()) throw unbound_letter("no generator named \"" + name + "\"");
    return it->second;
}

} // namespace detail

// Composition of the letter maps in written order (rightmost acts first);
// the empty word is the identity.
inline PLMap evaluate(const GenWord& w, const Alphabet& alphabet) {
    PLMap acc = PLMap::identity();
    for (auto it = w.end(); it != w.begin();) {
        --it;
        if (it->exp != 1 && it->exp != -1) {
            throw invalid_parameters("letter exponent must be +1 or -1");
        }
        const PLMap& m = detail::bound_map(alphabet, it->gen);
        acc = it->exp == 1 ? compose(m, acc) : compose(inverse(m), acc);
    }
    return acc;
}

// Same, over partial maps: the result's domain is the largest set on which
// every intermediate letter is defined; it may be empty.
inline PartialPLMap evaluate_partial(const GenWord& w, const PartialAlphabet& alphabet) {
    PartialPLMap acc = to_partial(PLMap::identity());
    for (auto it = w.end(); it != w.begin();) {
        --it;
        if (it->exp != 1 && it->exp != -1) {
            throw invalid_parameters("letter exponent must be +1 or -1");
        }
        const PartialPLMap& m = detail::bound_partial(alphabet, it->gen);
        acc = it->exp == 1 ? partial_compose(m, acc) : partial_compose(inverse(m), acc);
    }
    return acc;
}

// Number of freely reduced words of length exactly k over s generators.
inline std::uint64_t reduced_word_count_exact(int alphabet_size, int k) {
    if (k <= 0) return k == 0 ? 1 : 0;
    std::uint64_t c = 2 * static_cast<std::uint64_t>(alphabet_size);
    for (int i = 1; i < k; ++i) c *= 2 * static_cast<std::uint64_t>(alphabet_size) - 1;
    return c;
}

// Number of nonempty freely reduced words of length <= max_len.
inline std::uint64_t reduced_word_count(int alphabet_size, int max_len) {
    std::uint64_t total = 0;
    for (int k = 1; k <= max_len; ++k) total += reduced_word_count_exact(alphabet_size, k);
    return total;
}

namespace detail {

template <typename Sink>
void enumerate_reduced_rec(std::span<const std::string> names, int max_len, GenWord& word,
                           Sink& sink) {
    if (static_cast<int>(word.size()) >= max_len) return;
    for (const std::string& name : names) {
        for (int exp : {1, -1}) {
            if (!word.empty()) {
                const Letter& last = word[word.size() - 1];
                if (last.gen == name && last.exp == -exp) continue;
            }
            word.push_back({name, exp});
            sink(const_cast<const GenWord&>(word));
            enumerate_reduced_rec(names, max_len, word, sink);
            word.pop_back();
        }
    }
}

} // namespace detail

// Visits every nonempty freely reduced word of length <= max_len in
// depth-first lexicographic order (names in the given order, +1 before -1).
template <typename Sink>
void enumerate_reduced(std::span<const std::string> names, int max_len, Sink&& sink) {
    GenWord word;
    detail::enumerate_reduced_rec(names, max_len, word, sink);
}

// Visits every reduced extension of `prefix` (itself excluded) up to total
// length max_len, in the same order the full enumeration would reach them.
template <typename Sink>
void enumerate_reduced_extensions(std::span<const std::string> names, const GenWord& prefix,
                                  int max_len, Sink&& sink) {
    GenWord word = prefix;
    detail::enumerate_reduced_rec(names, max_len, word, sink);
}

// Convenience overload with generator names "g1".."gs".
inline std::vector<GenWord> enumerate_reduced(int alphabet_size, int max_len) {
    if (alphabet_size < 1) throw invalid_parameters("alphabet size must be >= 1");
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(alphabet_size));
    for (int i = 1; i <= alphabet_size; ++i) names.push_back("g" + std::to_string(i));
    std::vector<GenWord> out;
    enumerate_reduced(names, max_len, [&](const GenWord& w) { out.push_back(w); });
    return out;
}

} // namespace thompson
