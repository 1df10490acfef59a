#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "thompson/dynamics.hpp"
#include "thompson/errors.hpp"
#include "thompson/generators.hpp"
#include "thompson/graphing.hpp"
#include "thompson/partial_pl_map.hpp"
#include "thompson/pl_map.hpp"
#include "thompson/rational.hpp"
#include "thompson/words.hpp"

// JSON forms used by the command-line tool and the sample inputs.  Rationals
// travel as exact strings ("3/4"), never as floating point.

namespace thompson {

using json = nlohmann::ordered_json;

// --------------------------------------------------------------- rationals

inline json to_json(const Rational& q) { return q.str(); }

inline Rational rational_from_json(const json& j) {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(Int(j.get<long long>()));
    throw parse_error("expected a rational as a string like \"3/4\" or an integer, got " +
                      j.dump());
}

// ------------------------------------------------------------------ points

inline json to_json(const Point& p) { return json::array({p.x.str(), p.y.str()}); }

inline Point point_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) {
        throw parse_error("expected a breakpoint as a two-element array, got " + j.dump());
    }
    return {rational_from_json(j[0]), rational_from_json(j[1])};
}

inline json to_json(const Interval& iv) { return json::array({iv.lo.str(), iv.hi.str()}); }

inline Interval interval_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) {
        throw parse_error("expected an interval as a two-element array, got " + j.dump());
    }
    return {rational_from_json(j[0]), rational_from_json(j[1])};
}

// -------------------------------------------------------------------- maps

inline json to_json(const PLMap& f) {
    json bps = json::array();
    for (const Point& p : f.breakpoints()) bps.push_back(to_json(p));
    return json{{"breakpoints", std::move(bps)}};
}

inline PLMap plmap_from_json(const json& j) {
    if (!j.is_object() || !j.contains("breakpoints") || !j["breakpoints"].is_array()) {
        throw parse_error("expected a map object with a \"breakpoints\" array, got " + j.dump());
    }
    std::vector<Point> pts;
    for (const json& p : j["breakpoints"]) pts.push_back(point_from_json(p));
    return make_plmap(std::move(pts)); // canonicalizes tolerant input
}

inline json to_json(const PartialPLMap& f) {
    json bps = json::array();
    for (const Point& p : f.breakpoints()) bps.push_back(to_json(p));
    json out{{"breakpoints", std::move(bps)}};
    out["domain"] = f.is_empty() ? json(nullptr) : to_json(f.domain());
    return out;
}

inline PartialPLMap partial_from_json(const json& j) {
    if (!j.is_object() || !j.contains("breakpoints") || !j["breakpoints"].is_array()) {
        throw parse_error("expected a partial map object with a \"breakpoints\" array, got " +
                          j.dump());
    }
    std::vector<Point> pts;
    for (const json& p : j["breakpoints"]) pts.push_back(point_from_json(p));
    PartialPLMap out = PartialPLMap::from_points(std::move(pts));
    if (j.contains("domain") && !j["domain"].is_null()) {
        const Interval declared = interval_from_json(j["domain"]);
        if (out.is_empty() || !(out.domain() == declared)) {
            throw parse_error("declared domain " + j["domain"].dump() +
                              " does not match the breakpoints");
        }
    }
    return out;
}

// --------------------------------------------------------------- graphings

inline json to_json(const Graphing& g) {
    json parts = json::array();
    for (const GraphingPart& p : g.parts()) {
        parts.push_back(json{{"name", p.name},
                             {"domain", to_json(p.map.domain())},
                             {"map", to_json(p.map)}});
    }
    return json{{"n", g.n()}, {"parts", std::move(parts)}};
}

inline Graphing graphing_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("parts") || !j["parts"].is_array()) {
        throw parse_error("expected a graphing object with \"n\" and \"parts\", got " + j.dump());
    }
    if (!j["n"].is_number_integer()) throw parse_error("graphing \"n\" must be an integer");
    std::vector<GraphingPart> parts;
    for (const json& p : j["parts"]) {
        if (!p.is_object() || !p.contains("name") || !p.contains("map") ||
            !p["name"].is_string()) {
            throw parse_error("expected a graphing part with \"name\" and \"map\", got " +
                              p.dump());
        }
        parts.push_back({p["name"].get<std::string>(), partial_from_json(p["map"])});
        if (p.contains("domain") && !p["domain"].is_null()) {
            const Interval declared = interval_from_json(p["domain"]);
            if (!(parts.back().map.domain() == declared)) {
                throw parse_error("part \"" + parts.back().name +
                                  "\" declares a domain that does not match its map");
            }
        }
    }
    return Graphing::make(j["n"].get<int>(), std::move(parts));
}

// ------------------------------------------------------------------- words

inline json to_json(const GenWord& w) {
    json out = json::array();
    for (const Letter& l : w) out.push_back(json::array({l.gen, l.exp}));
    return out;
}

inline GenWord word_from_json(const json& j) {
    if (!j.is_array()) throw parse_error("expected a word as an array of letters, got " + j.dump());
    std::vector<Letter> letters;
    for (const json& l : j) {
        if (!l.is_array() || l.size() != 2 || !l[0].is_string() || !l[1].is_number_integer()) {
            throw parse_error("expected a letter as [\"name\", exponent], got " + l.dump());
        }
        const int exp = l[1].get<int>();
        if (exp != 1 && exp != -1) {
            throw parse_error("letter exponent must be +1 or -1, got " + l[1].dump());
        }
        letters.push_back({l[0].get<std::string>(), exp});
    }
    return GenWord(std::move(letters));
}

// ------------------------------------------------------------------- seeds

struct SeedsFile {
    int n = 0;
    std::vector<PLMap> seeds;
};

inline json to_json(const SeedsFile& s) {
    json seeds = json::array();
    for (const PLMap& m : s.seeds) seeds.push_back(to_json(m));
    return json{{"n", s.n}, {"seeds", std::move(seeds)}};
}

inline SeedsFile seeds_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("seeds") || !j["seeds"].is_array() ||
        !j["n"].is_number_integer()) {
        throw parse_error("expected a seeds object with integer \"n\" and a \"seeds\" array");
    }
    SeedsFile out;
    out.n = j["n"].get<int>();
    for (const json& m : j["seeds"]) out.seeds.push_back(plmap_from_json(m));
    return out;
}

// ----------------------------------------------------------------- reports

inline json to_json(const MembershipCertificate& c) {
    return json{{"n", c.n},
                {"verdict", c.verdict},
                {"slope_exponents", c.slope_exponents},
                {"breakpoint_levels", c.breakpoint_levels},
                {"failure_reason", c.failure_reason}};
}

inline json to_json(const FixedPointSet& f) {
    json iso = json::array();
    for (const Rational& x : f.isolated_points) iso.push_back(x.str());
    json ivs = json::array();
    for (const Interval& iv : f.intervals) ivs.push_back(to_json(iv));
    return json{{"isolated_points", std::move(iso)}, {"intervals", std::move(ivs)}};
}

inline json to_json(const RelationCheck& c) {
    return json{{"i", c.i}, {"j", c.j}, {"pass", c.pass}};
}

inline json to_json(const PresentationReport& r) {
    json checks = json::array();
    for (const RelationCheck& c : r.checks) checks.push_back(to_json(c));
    return json{{"n", r.n},
                {"max_index", r.max_index},
                {"checks", std::move(checks)},
                {"all_pass", r.all_pass}};
}

inline json to_json(const TreeingLengthStats& s) {
    return json{{"length", s.length},
                {"words", s.words},
                {"empty_domain", s.empty_domain},
                {"isolated_fixed", s.isolated_fixed},
                {"interval_fixed", s.interval_fixed}};
}

inline json to_json(const TreeingReport& r) {
    json per_length = json::array();
    for (const TreeingLengthStats& s : r.per_length) per_length.push_back(to_json(s));
    json violations = json::array();
    for (const TreeingViolation& v : r.violations) {
        violations.push_back(json{{"word", to_json(v.word)}, {"interval", to_json(v.interval)}});
    }
    return json{{"max_len", r.max_len},
                {"jobs", r.jobs},
                {"words_checked", r.words_checked},
                {"empty_domain_words", r.empty_domain_words},
                {"per_length", std::move(per_length)},
                {"violations", std::move(violations)},
                {"is_treeing", r.is_treeing()},
                {"elapsed_seconds", r.elapsed_seconds}};
}

inline json to_json(const OrbitResult& r) {
    json nodes = json::array();
    for (const OrbitNode& node : r.nodes) {
        nodes.push_back(json{{"value", node.value.str()},
                             {"depth", node.depth},
                             {"witness", to_json(node.witness)}});
    }
    return json{{"n", r.n},
                {"start", r.start.str()},
                {"max_depth", r.max_depth},
                {"truncated", r.truncated},
                {"nodes", std::move(nodes)}};
}

inline json to_json(const CocycleValue& c) {
    return json{{"value", c.value.str()}, {"exponent", c.exponent}};
}

inline json to_json(const CocycleChainCheck& c) {
    return json{{"inner", to_json(c.inner)},
                {"outer", to_json(c.outer)},
                {"composite", to_json(c.composite)},
                {"pass", c.pass}};
}

inline json to_json(const SnOrbitPoint& p) {
    return json{{"p", p.p}, {"image", p.image.str()}, {"step", p.step.str()}};
}

inline json to_json(const SlopeSumDecomposition& d) {
    return json{{"n", d.n}, {"r", d.r}, {"exponents", d.exponents}};
}

inline json to_json(const ParityCertificate& c) {
    return json{{"n", c.n},
                {"d", c.d.str()},
                {"k", c.k},
                {"p", c.p},
                {"level", c.level},
                {"a", c.a.str()},
                {"b", c.b.str()},
                {"shift", c.shift},
                {"sum", c.sum.str()},
                {"image", c.image.str()},
                {"target", c.target.str()},
                {"parity_differs", c.parity_differs},
                {"value_differs", c.value_differs},
                {"sum_matches", c.sum_matches},
                {"parity_argument_ok", c.parity_argument_ok},
                {"holds", c.holds}};
}

inline json to_json(const ParityReport& r) {
    json witnesses = json::array();
    for (const GenWord& w : r.witnesses) witnesses.push_back(to_json(w));
    return json{{"n", r.n},
                {"d", r.d.str()},
                {"k", r.k},
                {"p", r.p},
                {"max_len", r.max_len},
                {"words_checked", r.words_checked},
                {"certificates_holding", r.certificates_holding},
                {"witnesses", std::move(witnesses)},
                {"obstruction_confirmed", r.obstruction_confirmed()},
                {"elapsed_seconds", r.elapsed_seconds}};
}

inline json to_json(const ValueWitness& w) {
    json out{{"found", w.found}, {"words_checked", w.words_checked}};
    if (w.found) {
        out["word"] = to_json(w.word);
        out["image"] = w.image.str();
    } else {
        out["word"] = nullptr;
        out["image"] = nullptr;
    }
    return out;
}

} // namespace thompson
