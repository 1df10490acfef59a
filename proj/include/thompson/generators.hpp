#pragma once

#include <string>
#include <vector>

#include "thompson/errors.hpp"
#include "thompson/nadic.hpp"
#include "thompson/pl_map.hpp"

namespace thompson {

// The two classical generators of F(2).
inline PLMap gen_A() {
    const Rational h(1, 2), q(1, 4), t(3, 4);
    return make_plmap({{Rational(0), Rational(0)}, {h, q}, {t, h}, {Rational(1), Rational(1)}});
}

inline PLMap gen_B() {
    return make_plmap({{Rational(0), Rational(0)},
                       {Rational(1, 2), Rational(1, 2)},
                       {Rational(3, 4), Rational(5, 8)},
                       {Rational(7, 8), Rational(3, 4)},
                       {Rational(1), Rational(1)}});
}

// Three-piece map with breakpoints (0,0), (d, d/n^p), (1-d/n^p, 1-d), (1,1).
// Requires d an n-adic rational in (0,1), p a nonzero integer, and
// d*(1 + n^-p) <= 1 so the middle piece is nonempty.
inline PLMap gen_Adp(int n, const Rational& d, int p) {
    require_base(n);
    if (p == 0) throw invalid_parameters("parameter p must be nonzero");
    if (!(Rational(0) < d && d < Rational(1))) {
        throw invalid_parameters("parameter d must lie strictly between 0 and 1, got " + d.str());
    }
    if (!is_nadic(d, n)) {
        throw invalid_parameters("parameter d = " + d.str() + " is not " + std::to_string(n) +
                                 "-adic");
    }
    const Rational scale = pow_n(n, -p); // n^-p
    if (d * (Rational(1) + scale) > Rational(1)) {
        throw invalid_parameters("parameters violate d*(1 + n^-p) <= 1: d = " + d.str() +
                                 ", n = " + std::to_string(n) + ", p = " + std::to_string(p));
    }
    const Point p0{Rational(0), Rational(0)};
    const Point p1{d, d * scale};
    const Point p2{Rational(1) - d * scale, Rational(1) - d};
    const Point p3{Rational(1), Rational(1)};
    // The two interior points coincide exactly when d*(1+n^-p) == 1; merge
    // them rather than hand make_plmap a duplicate.
    if (p1 == p2) return make_plmap({p0, p1, p3});
    return make_plmap({p0, p1, p2, p3});
}

// The infinite family x_0, x_1, x_2, ... attached to n seed maps, extended by
//     x_{m+n-1} = x_0^-1 ∘ x_m ∘ x_0   for m >= 1,
// so each batch of n-1 new maps is the previous batch conjugated by x_0.
class GeneratorFamily {
public:
    // F(2) with the classical seeds x_0 = A, x_1 = B.
    static GeneratorFamily standard_f2() {
        GeneratorFamily fam;
        fam.n_ = 2;
        fam.xs_ = {gen_A(), gen_B()};
        return fam;
    }

    // General n: caller supplies the n seed maps x_0..x_{n-1}, each of which
    // must have n-adic breakpoints and slopes that are powers of n.
    static GeneratorFamily from_seeds(int n, std::vector<PLMap> seeds) {
        require_base(n);
        if (static_cast<int>(seeds.size()) != n) {
            throw invalid_parameters("expected exactly " + std::to_string(n) + " seed maps, got " +
                                     std::to_string(seeds.size()));
        }
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            const MembershipCertificate cert = check_membership(seeds[i], n);
            if (!cert.verdict) {
                throw precondition_violated("seed x_" + std::to_string(i) +
                                            " fails membership for base " + std::to_string(n) +
                                            ": " + cert.failure_reason);
            }
        }
        GeneratorFamily fam;
        fam.n_ = n;
        fam.xs_ = std::move(seeds);
        return fam;
    }

    int n() const { return n_; }

    // x_m, extending the family on demand.
    const PLMap& x(std::size_t m) {
        extend_to(m);
        return xs_[m];
    }

    std::size_t materialized() const { return xs_.size(); }

    void extend_to(std::size_t m) {
        while (xs_.size() <= m) {
            const std::size_t i = xs_.size() - static_cast<std::size_t>(n_) + 1;
            xs_.push_back(compose(inverse(xs_[0]), compose(xs_[i], xs_[0])));
        }
    }

private:
    GeneratorFamily() = default;
    int n_ = 0;
    std::vector<PLMap> xs_;
};

inline GeneratorFamily extend_family(GeneratorFamily fam, std::size_t up_to) {
    fam.extend_to(up_to);
    return fam;
}

// One defining relation instance: for i < j the family must satisfy
//     x_j ∘ x_i == x_i ∘ x_{j+n-1}.
struct RelationCheck {
    std::size_t i = 0;
    std::size_t j = 0;
    bool pass = false;
};

struct PresentationReport {
    int n = 0;
    std::size_t max_index = 0;
    std::vector<RelationCheck> checks;
    bool all_pass = true;
};

// Verifies every relation instance with 1 <= i < j <= max_index.
inline PresentationReport check_presentation(GeneratorFamily& fam, std::size_t max_index) {
    if (max_index < 2) throw invalid_parameters("max_index must be at least 2");
    PresentationReport report;
    report.n = fam.n();
    report.max_index = max_index;
    const std::size_t shift = static_cast<std::size_t>(fam.n()) - 1;
    fam.extend_to(max_index + shift);
    for (std::size_t i = 1; i < max_index; ++i) {
        for (std::size_t j = i + 1; j <= max_index; ++j) {
            const bool ok = compose(fam.x(j), fam.x(i)) == compose(fam.x(i), fam.x(j + shift));
            report.checks.push_back({i, j, ok});
            report.all_pass = report.all_pass && ok;
        }
    }
    return report;
}

// The element x_n ∘ x_1^-1, which commutes with x_m for all m >= n+1.
inline PLMap gamma(GeneratorFamily& fam) {
    return compose(fam.x(static_cast<std::size_t>(fam.n())), inverse(fam.x(1)));
}

} // namespace thompson
