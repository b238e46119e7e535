#include "doctest.h"

#include <random>

#include "cspforge/polynomial.hpp"

using namespace cspforge;

namespace {

Polynomial random_poly(std::mt19937& rng, FieldSpec f, uint32_t nvars, int nterms, int maxdeg) {
    Polynomial p(f);
    for (int t = 0; t < nterms; ++t) {
        Monomial m;
        int d = rng() % (maxdeg + 1);
        for (int i = 0; i < d; ++i) m = m.times(Var{uint32_t(rng() % nvars), rng() % 2 == 0});
        p.add_term(m, int(rng() % 7) - 3);
    }
    return p;
}

}  // namespace

TEST_CASE("field arithmetic over GF(p)") {
    auto f = FieldSpec::gf(5);
    CHECK(f.reduce(BigRat(7)) == 2);
    CHECK(f.reduce(BigRat(-1)) == 4);
    CHECK(f.reduce(BigRat(1, 2)) == 3);  // 2^{-1} = 3 mod 5
    CHECK(f.is_zero(BigRat(10)));
    CHECK_THROWS_AS(FieldSpec::gf(6), Error);
    CHECK_THROWS_AS(f.reduce(BigRat(1, 5)), Error);
}

TEST_CASE("fraction strings round trip") {
    CHECK(fraction_to_string(parse_fraction("-7/3")) == "-7/3");
    CHECK(fraction_to_string(parse_fraction("42")) == "42");
    CHECK(parse_fraction("2/4") == BigRat(1, 2));
}

TEST_CASE("polynomial arithmetic is exact and cancels") {
    auto f = FieldSpec::rationals();
    Polynomial x = Polynomial::variable(f, mk_var(0));
    Polynomial y = Polynomial::variable(f, mk_var(1));
    Polynomial p = (x + y) * (x - y);
    Polynomial q = x * x - y * y;
    CHECK(p == q);
    CHECK((p - q).is_zero());
}

TEST_CASE("multilinearize: X^2 -> X") {
    auto f = FieldSpec::rationals();
    Polynomial x2 = Polynomial::monomial(f, Monomial(mk_var(0)).times(mk_var(0)));
    auto r = multilinearize(x2);
    CHECK(r.p_star == Polynomial::variable(f, mk_var(0)));
    REQUIRE(r.witnesses.size() == 1);
}

TEST_CASE("multilinearize: X^3 Y^2 -> XY") {
    auto f = FieldSpec::rationals();
    Monomial m = Monomial(mk_var(0)).times(mk_var(0), 2).times(mk_var(1), 2);
    auto r = multilinearize(Polynomial::monomial(f, m));
    CHECK(r.p_star == Polynomial::monomial(f, Monomial(mk_var(0)).times(mk_var(1))));
}

TEST_CASE("multilinearize identity holds symbolically on random polys") {
    std::mt19937 rng(1);
    for (int trial = 0; trial < 40; ++trial) {
        FieldSpec f = trial % 2 ? FieldSpec::rationals() : FieldSpec::gf(3);
        Polynomial p = random_poly(rng, f, 3, 5, 4);
        auto r = multilinearize(p);
        // p* multilinear
        for (auto& [m, c] : r.p_star.terms()) CHECK(m.multilinear());
        // identity P + sum Q_v (v^2 - v) = P* verified inside multilinearize;
        // also agreement on all raw 0/1 points (twins independent)
        auto vars = p.variables();
        for (uint64_t mask = 0; mask < (uint64_t(1) << vars.size()); ++mask) {
            std::map<Var, BigRat> asg;
            for (size_t i = 0; i < vars.size(); ++i) asg[vars[i]] = (mask >> i) & 1;
            CHECK(p.eval_raw(asg) == r.p_star.eval_raw(asg));
        }
    }
}

TEST_CASE("normal_form identifies twin-consistent equivalence") {
    auto f = FieldSpec::rationals();
    // X * X̄ vanishes on twin-consistent points
    Polynomial p = Polynomial::variable(f, mk_var(0)) * Polynomial::variable(f, mk_twin(0));
    CHECK(normal_form(p).is_zero());
    // X + X̄ - 1 vanishes as well
    Polynomial q(f);
    q.add_term(Monomial(mk_var(0)), 1);
    q.add_term(Monomial(mk_twin(0)), 1);
    q.add_term(Monomial::one(), -1);
    CHECK(normal_form(q).is_zero());
}

TEST_CASE("decompose_vanishing produces an exact axiom combination") {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 40; ++trial) {
        FieldSpec f = trial % 2 ? FieldSpec::rationals() : FieldSpec::gf(2);
        // build a random element of the axiom ideal
        Polynomial d(f);
        for (int i = 0; i < 3; ++i) {
            Polynomial cof = random_poly(rng, f, 3, 2, 2);
            AxiomEq kind = static_cast<AxiomEq>(rng() % 3);
            uint32_t id = rng() % 3;
            d = d + cof * axiom_eq_poly(f, kind, id);
        }
        auto comb = decompose_vanishing(d);
        Polynomial rebuilt(f);
        for (auto& t : comb.terms)
            rebuilt = rebuilt + axiom_eq_poly(f, t.axiom, t.var_id).times_monomial(t.monomial, t.coeff);
        CHECK(rebuilt == d);
    }
}

TEST_CASE("decompose_vanishing rejects non-vanishing polynomials") {
    auto f = FieldSpec::rationals();
    CHECK_THROWS_AS(decompose_vanishing(Polynomial::variable(f, mk_var(0))), Error);
}

TEST_CASE("substitution") {
    auto f = FieldSpec::rationals();
    Polynomial x = Polynomial::variable(f, mk_var(0));
    Polynomial y = Polynomial::variable(f, mk_var(1));
    std::map<Var, Polynomial> sigma;
    sigma[mk_var(0)] = y + Polynomial::constant(f, 1);
    Polynomial p = x * x;
    CHECK(p.substituted(sigma) == y * y + y.scaled(2) + Polynomial::constant(f, 1));
}
