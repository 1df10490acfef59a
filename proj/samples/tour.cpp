// A guided tour of the library: exact piecewise-linear maps, generator
// families and their relations, rewriting in the standard graphing, the
// derivative cocycle, and the base-parity search.  Everything is exact
// rational arithmetic; nothing here is approximate.

#include <cstdio>
#include <string>
#include <vector>

#include "thompson/dynamics.hpp"
#include "thompson/generators.hpp"
#include "thompson/graphing.hpp"
#include "thompson/words.hpp"

using namespace thompson;

namespace {

void heading(const char* text) { std::printf("\n== %s ==\n", text); }

std::string rat(const Rational& q) { return q.str(); }

// Identity on [0,a], then an affine copy of f : [0,1] -> [0,1] on [a,1].
PLMap id_then_copy(const PLMap& f, const Rational& a) {
    const Rational w = Rational(1) - a;
    std::vector<Point> pts = {{Rational(0), Rational(0)}};
    for (const Point& p : f.breakpoints()) pts.push_back({a + w * p.x, a + w * p.y});
    return make_plmap(pts);
}

} // namespace

int main() {
    heading("exact maps and words");
    const Alphabet ab = {{"A", gen_A()}, {"B", gen_B()}};
    const GenWord w = GenWord::parse("B A^-1 B^-1");
    const PLMap f = evaluate(w, ab);
    std::printf("f = %s acting on 1/3 gives %s (%zu pieces)\n", w.str().c_str(),
                rat(f.eval(Rational(1, 3))).c_str(), f.breakpoints().size() - 1);

    heading("the defining relations, base 2");
    GeneratorFamily fam = GeneratorFamily::standard_f2();
    const PresentationReport rep2 = check_presentation(fam, 6);
    std::printf("x_j x_i = x_i x_{j+1} for i < j <= 6: %zu checks, all %s\n", rep2.checks.size(),
                rep2.all_pass ? "pass" : "FAIL");
    std::printf("x_2 = A^-1 B A has %zu pieces\n", fam.x(2).breakpoints().size() - 1);

    heading("a base-3 family from three seed maps");
    const PLMap x0 = gen_Adp(3, Rational(2, 3), 1);
    GeneratorFamily fam3 = GeneratorFamily::from_seeds(
        3, {x0, id_then_copy(x0, Rational(1, 3)), id_then_copy(x0, Rational(2, 3))});
    const PresentationReport rep3 = check_presentation(fam3, 8);
    std::printf("x_j x_i = x_i x_{j+2} for i < j <= 8: %zu checks, all %s\n", rep3.checks.size(),
                rep3.all_pass ? "pass" : "FAIL");

    heading("rewriting over the three-part graphing");
    const Graphing g = phi_R2();
    std::printf("total domain measure of the parts: %s\n", rat(cost(g)).c_str());
    const GenWord word = GenWord::parse("B A");
    const Rational x(1, 3);
    const GenWord part_word = express_word(x, word);
    std::printf("%s sends %s to %s; as part moves: \"%s\"\n", word.str().c_str(), rat(x).c_str(),
                rat(evaluate(word, ab).eval(x)).c_str(), part_word.str().c_str());
    const TreeingReport sweep = treeing_sweep(g, 5);
    std::printf("sweep of %llu reduced part words up to length 5: %s\n",
                static_cast<unsigned long long>(sweep.words_checked),
                sweep.is_treeing() ? "no word fixes an interval" : "violation found");

    heading("the derivative cocycle");
    const CocycleValue c = rn_cocycle(GenWord::parse("A A"), ab, 2, Rational(1, 5));
    std::printf("D(1/5) under A A is %s = 2^%d\n", rat(c.value).c_str(), c.exponent);
    const CocycleChainCheck chain =
        cocycle_chain_check(GenWord::parse("A"), GenWord::parse("B"), ab, 2, Rational(1, 5));
    std::printf("chain rule D_{vu}(x) = D_u(x) D_v(u x): %s\n", chain.pass ? "holds" : "FAIL");

    heading("slope-one displacements");
    const auto step = sn_step_check(gen_Adp(2, Rational(1, 4), 2), 2, Rational(1, 2));
    if (step) std::printf("the map with d=1/4, p=2 shifts 1/2 by %s\n", rat(*step).c_str());

    heading("reaching 1/3 + 1/3 in base 3: impossible");
    const Alphabet odd = {{"X1", gen_Adp(3, Rational(1, 3), 1)},
                          {"X2", gen_Adp(3, Rational(2, 3), 1)},
                          {"X3", gen_Adp(3, Rational(1, 9), 2)}};
    const ParityReport parity = parity_search(odd, 3, Rational(1, 3), 1, 1, 3);
    std::printf("searched %llu words: %zu hit the target, %llu parity certificates hold\n",
                static_cast<unsigned long long>(parity.words_checked), parity.witnesses.size(),
                static_cast<unsigned long long>(parity.certificates_holding));

    heading("the same gap in base 2: easy");
    const ValueWitness witness = value_witness_search(ab, Rational(1, 4), Rational(1, 2), 3);
    if (witness.found)
        std::printf("\"%s\" already sends 1/4 to 1/2\n", witness.word.str().c_str());

    return 0;
}
