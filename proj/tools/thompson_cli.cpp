// Command-line interface for exact piecewise-linear interval maps: evaluate,
// compose, and invert maps; certify membership in the slope/breakpoint group
// for a base n; check the defining relations of the generator families; run
// graphing cost, rewriting, and treeing sweeps; explore orbits; and verify
// the derivative-cocycle and parity-obstruction computations.
//
// Every run prints one JSON report:
//   {"command", "inputs", "result", "verdicts", "elapsed_seconds"}
// Exit codes: 0 = success and all verdicts pass, 1 = a verdict failed,
// 2 = bad usage or a computation error.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thompson/json_io.hpp"

using namespace thompson;

namespace {

// ---------------------------------------------------------------- map specs

// A map spec is "A", "B", "id", "adp(N;D;P)" with N an integer base, D a
// rational, and P an integer, or "@file.json" holding a map object.
PLMap parse_map_spec(const std::string& spec) {
    if (spec == "A") return gen_A();
    if (spec == "B") return gen_B();
    if (spec == "id") return PLMap::identity();
    if (!spec.empty() && spec.front() == '@') {
        std::ifstream in(spec.substr(1));
        if (!in) throw parse_error("cannot open map file \"" + spec.substr(1) + "\"");
        json j;
        try {
            in >> j;
        } catch (const std::exception& e) {
            throw parse_error("bad JSON in \"" + spec.substr(1) + "\": " + e.what());
        }
        // Accept a report written by --out whose result carries a map.
        if (j.is_object() && !j.contains("breakpoints") && j.contains("result") &&
            j["result"].is_object() && j["result"].contains("map")) {
            return plmap_from_json(j["result"]["map"]);
        }
        return plmap_from_json(j);
    }
    if (spec.rfind("adp(", 0) == 0 && spec.back() == ')') {
        const std::string inner = spec.substr(4, spec.size() - 5);
        std::vector<std::string> fields;
        std::string cur;
        for (char c : inner) {
            if (c == ';') {
                fields.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        fields.push_back(cur);
        if (fields.size() != 3) {
            throw parse_error("expected adp(N;D;P) with three fields, got \"" + spec + "\"");
        }
        try {
            return gen_Adp(std::stoi(fields[0]), Rational::parse(fields[1]),
                           std::stoi(fields[2]));
        } catch (const std::invalid_argument&) {
            throw parse_error("bad integer in map spec \"" + spec + "\"");
        }
    }
    throw parse_error("unknown map spec \"" + spec +
                      "\" (expected A, B, id, adp(N;D;P), or @file.json)");
}

// Comma-separated map specs, each optionally prefixed "name=".  Bare "A",
// "B", and "id" name themselves; everything else needs an explicit name.
Alphabet parse_alphabet(const std::string& csv) {
    Alphabet out;
    std::string entry;
    std::stringstream stream(csv);
    while (std::getline(stream, entry, ',')) {
        if (entry.empty()) throw parse_error("empty alphabet entry in \"" + csv + "\"");
        std::string name, spec;
        const std::size_t eq = entry.find('=');
        if (eq != std::string::npos) {
            name = entry.substr(0, eq);
            spec = entry.substr(eq + 1);
        } else {
            spec = entry;
            if (spec != "A" && spec != "B" && spec != "id") {
                throw parse_error("alphabet entry \"" + entry + "\" needs a name= prefix");
            }
            name = spec;
        }
        if (name.empty() || name.find_first_of(" \t^") != std::string::npos) {
            throw parse_error("bad generator name \"" + name + "\"");
        }
        if (!out.emplace(name, parse_map_spec(spec)).second) {
            throw parse_error("duplicate generator name \"" + name + "\"");
        }
    }
    if (out.empty()) throw parse_error("alphabet \"" + csv + "\" is empty");
    return out;
}

Graphing load_graphing(const std::string& path) {
    if (path.empty()) return phi_R2();
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open graphing file \"" + path + "\"");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw parse_error("bad JSON in \"" + path + "\": " + e.what());
    }
    return graphing_from_json(j);
}

// ------------------------------------------------------------------ output

struct Emit {
    std::string out_path;

    int report(const std::string& command, const json& inputs, const json& result,
               const json& verdicts, double elapsed) const {
        json doc{{"command", command},
                 {"inputs", inputs},
                 {"result", result},
                 {"verdicts", verdicts},
                 {"elapsed_seconds", elapsed}};
        if (out_path.empty()) {
            std::cout << doc.dump(2) << "\n";
        } else {
            std::ofstream out(out_path);
            if (!out) throw parse_error("cannot write \"" + out_path + "\"");
            out << doc.dump(2) << "\n";
        }
        for (const auto& [key, value] : verdicts.items()) {
            if (value.is_boolean() && !value.get<bool>()) return 1;
        }
        return 0;
    }
};

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact piecewise-linear homeomorphisms of [0,1]: group membership, "
                 "relations, graphings, orbits, cocycles, and parity obstructions"};
    app.require_subcommand(1);

    bool decimal = false;
    app.add_flag("--decimal", decimal, "Include decimal approximations in the output");
    Emit emit;
    app.add_option("--out", emit.out_path, "Write the JSON report to this file instead of stdout");

    // eval -----------------------------------------------------------------
    auto* cmd_eval = app.add_subcommand("eval", "Evaluate a map at a rational point");
    std::string eval_map = "A", eval_x;
    cmd_eval->add_option("--map", eval_map, "Map spec: A, B, id, adp(N;D;P), or @file.json");
    cmd_eval->add_option("--x", eval_x, "Point in [0,1]")->required();

    // compose --------------------------------------------------------------
    auto* cmd_compose = app.add_subcommand("compose", "Realize a word as a single map");
    std::string compose_word, compose_alphabet = "A,B";
    cmd_compose->add_option("--word", compose_word, "Word, e.g. \"A B^-1 A\"")->required();
    cmd_compose->add_option("--alphabet", compose_alphabet,
                            "Comma-separated map specs, optionally name=spec");

    // invert ---------------------------------------------------------------
    auto* cmd_invert = app.add_subcommand("invert", "Invert a map");
    std::string invert_map;
    cmd_invert->add_option("--map", invert_map, "Map spec")->required();

    // member ---------------------------------------------------------------
    auto* cmd_member =
        app.add_subcommand("member", "Certify breakpoint/slope membership for a base");
    std::string member_map;
    int member_n = 2;
    cmd_member->add_option("--map", member_map, "Map spec")->required();
    cmd_member->add_option("--n", member_n, "Base (slopes must be its powers)")->required();

    // relations ------------------------------------------------------------
    auto* cmd_relations =
        app.add_subcommand("relations", "Check the defining relations of a generator family");
    int relations_n = 2;
    std::size_t relations_max_index = 6;
    std::string relations_seeds;
    cmd_relations->add_option("--n", relations_n, "Base (default 2, the classical family)");
    cmd_relations->add_option("--max-index", relations_max_index,
                              "Check x_j x_i = x_i x_{j+n-1} for all i < j <= this index");
    cmd_relations->add_option("--seeds", relations_seeds,
                              "Seeds JSON file ({\"n\", \"seeds\"}); required for n != 2");

    // graphing -------------------------------------------------------------
    auto* cmd_graphing = app.add_subcommand("graphing", "Graphing computations");
    cmd_graphing->require_subcommand(1);
    std::string graphing_file;
    cmd_graphing->add_option("--graphing", graphing_file,
                             "Graphing JSON file (default: the standard three-part graphing)");

    auto* cmd_cost = cmd_graphing->add_subcommand("cost", "Total measure of the part domains");

    auto* cmd_express = cmd_graphing->add_subcommand(
        "express", "Rewrite a word over A,B at a point as a word in the standard parts");
    std::string express_x, express_word_text;
    cmd_express->add_option("--x", express_x, "Point in [0,1]")->required();
    cmd_express->add_option("--word", express_word_text, "Word over A and B")->required();

    auto* cmd_treeing = cmd_graphing->add_subcommand(
        "treeing", "Sweep all reduced part words for interval-fixing violations");
    int treeing_max_len = 6, treeing_jobs = 1;
    bool treeing_progress = false;
    cmd_treeing->add_option("--max-len", treeing_max_len, "Maximum word length (default 6)");
    cmd_treeing->add_option("--jobs", treeing_jobs, "Worker threads (default 1)");
    cmd_treeing->add_flag("--progress", treeing_progress, "Report subtree progress on stderr");

    // orbit ------------------------------------------------------------------
    auto* cmd_orbit = app.add_subcommand("orbit", "Breadth-first orbit of a point");
    std::string orbit_x, orbit_alphabet = "A,B";
    int orbit_n = 2, orbit_depth = 3;
    std::size_t orbit_max_points = 100000;
    cmd_orbit->add_option("--x", orbit_x, "Start point in [0,1]")->required();
    cmd_orbit->add_option("--n", orbit_n, "Base for the membership precondition (default 2)");
    cmd_orbit->add_option("--depth", orbit_depth, "Maximum word length (default 3)");
    cmd_orbit->add_option("--alphabet", orbit_alphabet, "Comma-separated map specs");
    cmd_orbit->add_option("--max-points", orbit_max_points, "Truncate after this many points");

    // cocycle ----------------------------------------------------------------
    auto* cmd_cocycle =
        app.add_subcommand("cocycle", "Derivative cocycle of a word, or its chain rule");
    std::string cocycle_word, cocycle_u, cocycle_v, cocycle_x, cocycle_alphabet = "A,B";
    int cocycle_n = 2;
    auto* cocycle_word_opt = cmd_cocycle->add_option("--word", cocycle_word, "Single word");
    auto* cocycle_u_opt = cmd_cocycle->add_option("--u", cocycle_u, "Inner word (acts first)");
    auto* cocycle_v_opt = cmd_cocycle->add_option("--v", cocycle_v, "Outer word");
    cmd_cocycle->add_option("--x", cocycle_x, "Point in [0,1]")->required();
    cmd_cocycle->add_option("--n", cocycle_n, "Base (default 2)");
    cmd_cocycle->add_option("--alphabet", cocycle_alphabet, "Comma-separated map specs");
    cocycle_word_opt->excludes(cocycle_u_opt)->excludes(cocycle_v_opt);
    cocycle_u_opt->needs(cocycle_v_opt);
    cocycle_v_opt->needs(cocycle_u_opt);

    // sn ---------------------------------------------------------------------
    auto* cmd_sn = app.add_subcommand(
        "sn", "Slope-one step displacements: per-p orbit points, or one word's step");
    std::string sn_d, sn_x, sn_word, sn_alphabet = "A,B";
    int sn_n = 2;
    std::vector<int> sn_ps;
    cmd_sn->add_option("--n", sn_n, "Base (default 2)");
    cmd_sn->add_option("--d", sn_d, "Breakpoint parameter of the three-piece maps");
    cmd_sn->add_option("--x", sn_x, "Point in [0,1]")->required();
    auto* sn_p_opt =
        cmd_sn->add_option("--p-list", sn_ps, "Exponents p, comma-separated")->delimiter(',');
    auto* sn_word_opt =
        cmd_sn->add_option("--word", sn_word, "Word whose realized map to step-check");
    cmd_sn->add_option("--alphabet", sn_alphabet, "Alphabet for --word");
    sn_word_opt->excludes(sn_p_opt);

    // parity -----------------------------------------------------------------
    auto* cmd_parity = app.add_subcommand(
        "parity", "Odd bases: certify no word moves d to d + k/n^p; even bases: find one");
    int parity_n = 0, parity_k = 1, parity_p = 1, parity_max_len = 4;
    std::string parity_d, parity_alphabet;
    cmd_parity->add_option("--n", parity_n, "Base")->required();
    cmd_parity->add_option("--d", parity_d, "Start point (default 1/n)");
    cmd_parity->add_option("--k", parity_k, "Target numerator (default 1)");
    cmd_parity->add_option("--p", parity_p, "Target exponent (default 1)");
    cmd_parity->add_option("--max-len", parity_max_len, "Maximum word length (default 4)");
    cmd_parity->add_option("--alphabet", parity_alphabet,
                           "Comma-separated map specs (defaults depend on n)");

    // Let global options (--decimal, --out) appear after a subcommand name.
    for (CLI::App* sub : app.get_subcommands({})) {
        sub->fallthrough();
        for (CLI::App* nested : sub->get_subcommands({})) nested->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const auto t0 = std::chrono::steady_clock::now();

        if (cmd_eval->parsed()) {
            const PLMap f = parse_map_spec(eval_map);
            const Rational x = Rational::parse(eval_x);
            const Rational y = f.eval(x);
            json result{{"value", y.str()}};
            if (decimal) result["value_decimal"] = y.approx();
            return emit.report("eval", json{{"map", eval_map}, {"x", eval_x}}, result,
                               json::object(), seconds_since(t0));
        }

        if (cmd_compose->parsed()) {
            const GenWord w = GenWord::parse(compose_word);
            const PLMap f = evaluate(w, parse_alphabet(compose_alphabet));
            return emit.report(
                "compose", json{{"word", compose_word}, {"alphabet", compose_alphabet}},
                json{{"map", to_json(f)}, {"piece_count", f.piece_count()}}, json::object(),
                seconds_since(t0));
        }

        if (cmd_invert->parsed()) {
            const PLMap f = inverse(parse_map_spec(invert_map));
            return emit.report("invert", json{{"map", invert_map}}, json{{"map", to_json(f)}},
                               json::object(), seconds_since(t0));
        }

        if (cmd_member->parsed()) {
            const MembershipCertificate cert =
                check_membership(parse_map_spec(member_map), member_n);
            return emit.report("member", json{{"map", member_map}, {"n", member_n}},
                               json{{"certificate", to_json(cert)}},
                               json{{"member", cert.verdict}}, seconds_since(t0));
        }

        if (cmd_relations->parsed()) {
            const bool seeded = !relations_seeds.empty();
            GeneratorFamily fam = [&] {
                if (!seeded) {
                    if (relations_n != 2) {
                        throw parse_error("--seeds is required for n != 2");
                    }
                    return GeneratorFamily::standard_f2();
                }
                std::ifstream in(relations_seeds);
                if (!in) throw parse_error("cannot open seeds file \"" + relations_seeds + "\"");
                json j;
                in >> j;
                const SeedsFile seeds = seeds_from_json(j);
                if (cmd_relations->count("--n") && relations_n != seeds.n) {
                    throw parse_error("--n disagrees with the seeds file");
                }
                return GeneratorFamily::from_seeds(seeds.n, seeds.seeds);
            }();

            const PresentationReport presentation = check_presentation(fam, relations_max_index);
            json result{{"presentation", to_json(presentation)}};
            json verdicts{{"presentation", presentation.all_pass}};

            // The two commutator relations of the finite presentation, for
            // the classical two-generator family only.
            if (!seeded && fam.n() == 2) {
                const PLMap A = fam.x(0), B = fam.x(1);
                const PLMap c = compose(A, inverse(B));
                json commutators = json::array();
                bool all = true;
                for (int k : {1, 2}) {
                    const PLMap t = compose(inverse(power(A, k)), compose(B, power(A, k)));
                    const bool pass = compose(c, t) == compose(t, c);
                    commutators.push_back(json{{"conjugation_power", k}, {"pass", pass}});
                    all = all && pass;
                }
                result["commutators"] = std::move(commutators);
                verdicts["commutators"] = all;
            }

            // gamma = x_n x_1^-1 commutes with every x_m, m > n.
            const PLMap g = gamma(fam);
            json gamma_checks = json::array();
            bool gamma_all = true;
            for (std::size_t m = static_cast<std::size_t>(fam.n()) + 1;
                 m <= static_cast<std::size_t>(fam.n()) + 4; ++m) {
                const bool pass = compose(g, fam.x(m)) == compose(fam.x(m), g);
                gamma_checks.push_back(json{{"m", m}, {"pass", pass}});
                gamma_all = gamma_all && pass;
            }
            result["gamma_nontrivial"] = !(g == PLMap::identity());
            result["gamma_checks"] = std::move(gamma_checks);
            verdicts["gamma_commutes"] = gamma_all;

            return emit.report("relations",
                               json{{"n", fam.n()},
                                    {"max_index", relations_max_index},
                                    {"seeds", seeded ? json(relations_seeds) : json(nullptr)}},
                               result, verdicts, seconds_since(t0));
        }

        if (cmd_cost->parsed()) {
            const Graphing g = load_graphing(graphing_file);
            const Rational c = cost(g);
            json parts = json::array();
            for (const GraphingPart& p : g.parts()) {
                parts.push_back(json{{"name", p.name}, {"domain", to_json(p.map.domain())}});
            }
            json result{{"cost", c.str()}, {"parts", std::move(parts)}};
            if (decimal) result["cost_decimal"] = c.approx();
            return emit.report("graphing cost", json{{"graphing", graphing_file}}, result,
                               json::object(), seconds_since(t0));
        }

        if (cmd_express->parsed()) {
            const Rational x = Rational::parse(express_x);
            const GenWord w = GenWord::parse(express_word_text);
            const GenWord part_word = express_word(x, w);
            const Rational image = evaluate(w, Alphabet{{"A", gen_A()}, {"B", gen_B()}}).eval(x);
            return emit.report("graphing express",
                               json{{"x", express_x}, {"word", express_word_text}},
                               json{{"part_word", to_json(part_word)},
                                    {"part_word_text", part_word.str()},
                                    {"image", image.str()}},
                               json::object(), seconds_since(t0));
        }

        if (cmd_treeing->parsed()) {
            const Graphing g = load_graphing(graphing_file);
            const TreeingReport report = treeing_sweep(g, treeing_max_len, treeing_jobs,
                                                       treeing_progress ? &std::cerr : nullptr);
            return emit.report("graphing treeing",
                               json{{"graphing", graphing_file},
                                    {"max_len", treeing_max_len},
                                    {"jobs", treeing_jobs}},
                               to_json(report),
                               json{{"is_treeing", report.is_treeing()},
                                    {"counts_consistent", report.consistent(g.parts().size())}},
                               seconds_since(t0));
        }

        if (cmd_orbit->parsed()) {
            const OrbitResult orbit =
                orbit_bfs(Rational::parse(orbit_x), parse_alphabet(orbit_alphabet), orbit_n,
                          orbit_depth, orbit_max_points);
            return emit.report("orbit",
                               json{{"x", orbit_x},
                                    {"n", orbit_n},
                                    {"depth", orbit_depth},
                                    {"alphabet", orbit_alphabet},
                                    {"max_points", orbit_max_points}},
                               to_json(orbit), json::object(), seconds_since(t0));
        }

        if (cmd_cocycle->parsed()) {
            const Alphabet ab = parse_alphabet(cocycle_alphabet);
            const Rational x = Rational::parse(cocycle_x);
            if (!cocycle_u.empty()) {
                const CocycleChainCheck chain = cocycle_chain_check(
                    GenWord::parse(cocycle_u), GenWord::parse(cocycle_v), ab, cocycle_n, x);
                return emit.report("cocycle",
                                   json{{"u", cocycle_u},
                                        {"v", cocycle_v},
                                        {"x", cocycle_x},
                                        {"n", cocycle_n},
                                        {"alphabet", cocycle_alphabet}},
                                   json{{"chain", to_json(chain)}},
                                   json{{"chain_rule", chain.pass}}, seconds_since(t0));
            }
            const CocycleValue value =
                rn_cocycle(GenWord::parse(cocycle_word), ab, cocycle_n, x);
            return emit.report("cocycle",
                               json{{"word", cocycle_word},
                                    {"x", cocycle_x},
                                    {"n", cocycle_n},
                                    {"alphabet", cocycle_alphabet}},
                               json{{"cocycle", to_json(value)}}, json::object(),
                               seconds_since(t0));
        }

        if (cmd_sn->parsed()) {
            const Rational x = Rational::parse(sn_x);
            if (!sn_word.empty()) {
                const PLMap f = evaluate(GenWord::parse(sn_word), parse_alphabet(sn_alphabet));
                const std::optional<Rational> step = sn_step_check(f, sn_n, x);
                json result{{"engaged", step.has_value()},
                            {"step", step ? json(step->str()) : json(nullptr)},
                            {"image", f.eval(x).str()}};
                if (decimal && step) result["step_decimal"] = step->approx();
                return emit.report(
                    "sn",
                    json{{"word", sn_word}, {"x", sn_x}, {"n", sn_n}, {"alphabet", sn_alphabet}},
                    result, json::object(), seconds_since(t0));
            }
            if (sn_ps.empty() || sn_d.empty()) {
                throw parse_error("sn needs either --word or both --d and --p-list");
            }
            const std::vector<SnOrbitPoint> points =
                sn_orbit_points(sn_n, Rational::parse(sn_d), x, sn_ps);
            std::set<Rational> distinct;
            json jpoints = json::array();
            for (const SnOrbitPoint& p : points) {
                jpoints.push_back(to_json(p));
                distinct.insert(p.image);
            }
            return emit.report(
                "sn", json{{"d", sn_d}, {"x", sn_x}, {"n", sn_n}, {"p_list", sn_ps}},
                json{{"points", std::move(jpoints)}},
                json{{"images_distinct", distinct.size() == points.size()}}, seconds_since(t0));
        }

        if (cmd_parity->parsed()) {
            const Rational d =
                parity_d.empty() ? Rational(1, Int(parity_n)) : Rational::parse(parity_d);
            const bool odd = parity_n % 2 != 0;
            Alphabet ab;
            if (!parity_alphabet.empty()) {
                ab = parse_alphabet(parity_alphabet);
            } else if (odd) {
                // Three-piece maps with the smallest natural parameters.
                const std::string n_text = std::to_string(parity_n);
                ab = parse_alphabet("X1=adp(" + n_text + ";1/" + n_text + ";1),Y1=adp(" + n_text +
                                    ";" + std::to_string(parity_n - 1) + "/" + n_text +
                                    ";1),Z2=adp(" + n_text + ";1/" +
                                    std::to_string(parity_n * parity_n) + ";2)");
            } else if (parity_n == 2) {
                ab = parse_alphabet("A,B");
            } else {
                throw parse_error("--alphabet is required for even n != 2");
            }
            const json inputs{{"n", parity_n},       {"d", d.str()},
                              {"k", parity_k},       {"p", parity_p},
                              {"max_len", parity_max_len},
                              {"alphabet", parity_alphabet.empty() ? "(default)" : parity_alphabet}};
            if (odd) {
                const ParityReport report =
                    parity_search(ab, parity_n, d, parity_k, parity_p, parity_max_len);
                const ParityCertificate example =
                    parity_certificate(PLMap::identity(), parity_n, d, parity_k, parity_p);
                return emit.report("parity", inputs,
                                   json{{"report", to_json(report)},
                                        {"example_certificate", to_json(example)}},
                                   json{{"obstruction_confirmed", report.obstruction_confirmed()}},
                                   seconds_since(t0));
            }
            const Rational target = d + Rational(Int(parity_k)) * pow_n(parity_n, -parity_p);
            const ValueWitness control = value_witness_search(ab, d, target, parity_max_len);
            json control_json = to_json(control);
            if (control.found) control_json["word_text"] = control.word.str();
            return emit.report("parity", inputs,
                               json{{"control", std::move(control_json)}, {"target", target.str()}},
                               json{{"witness_found", control.found}}, seconds_since(t0));
        }

        std::cerr << "error: no subcommand selected\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
