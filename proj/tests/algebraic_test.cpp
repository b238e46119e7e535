#include "doctest.h"

#include <random>

#include "cspforge/dynamic_proof.hpp"
#include "cspforge/simulate.hpp"
#include "cspforge/structures.hpp"

using namespace cspforge;

namespace {

PolyEquationSystem eqs_of(FieldSpec f, std::vector<Polynomial> ps) {
    PolyEquationSystem sys;
    sys.field = f;
    sys.equations = std::move(ps);
    return sys;
}

bool has_consistent_solution(const PolyEquationSystem& sys) {
    return !brute_force_eq_solutions(sys).empty();
}

}  // namespace

TEST_CASE("NS refutation of {X=0, X-1=0} accepted at degree 1") {
    auto f = FieldSpec::rationals();
    Polynomial x = Polynomial::variable(f, mk_var(0));
    auto sys = eqs_of(f, {x, x - Polynomial::constant(f, 1)});
    StaticCertificate cert;
    cert.kind = StaticKind::NS;
    cert.rel = Relation::EqZero;
    cert.target = Polynomial::constant(f, -1);
    cert.terms.push_back({cert_source::HypEq{0}, -1, Monomial(), std::nullopt});
    cert.terms.push_back({cert_source::HypEq{1}, 1, Monomial(), std::nullopt});
    auto v = check_static(cert, sys, {}, f);
    CHECK(v.accepted);
    CHECK(v.degree == 1);
    CHECK(cert.is_refutation());
}

TEST_CASE("negative scalar on an inequality source is rejected") {
    auto f = FieldSpec::rationals();
    LinIneqSystem ineqs;
    ineqs.inequalities.push_back(Polynomial::variable(f, mk_var(0)));
    StaticCertificate cert;
    cert.kind = StaticKind::SA;
    cert.rel = Relation::GeqZero;
    cert.target = Polynomial::variable(f, mk_var(0)).scaled(-1);
    cert.terms.push_back({cert_source::HypIneq{0}, -1, Monomial(), std::nullopt});
    auto v = check_static(cert, {}, ineqs, f);
    CHECK_FALSE(v.accepted);
}

TEST_CASE("complete_ns round-trips through the checker") {
    for (FieldSpec f : {FieldSpec::rationals(), FieldSpec::gf(2), FieldSpec::gf(3)}) {
        Polynomial x = Polynomial::variable(f, mk_var(0));
        Polynomial y = Polynomial::variable(f, mk_var(1));
        // {XY = 0, X + Y - 1 = 0} implies X*Ybar... use goal XY = 0 trivially
        auto sys = eqs_of(f, {x * y, x + y - Polynomial::constant(f, 1)});
        // goal: X*X - X = 0 follows from nothing (axiom); from these hyps too
        auto cert = complete_ns(sys, x * x - x, f);
        auto v = check_static(cert, sys, {}, f);
        CHECK(v.accepted);

        // inconsistent pair: derive -1
        auto bad = eqs_of(f, {x, x - Polynomial::constant(f, 1)});
        auto cert2 = complete_ns(bad, Polynomial::constant(f, -1), f);
        auto v2 = check_static(cert2, bad, {}, f);
        CHECK(v2.accepted);
        CHECK(cert2.is_refutation());
    }
}

TEST_CASE("complete_ns with empty hypotheses proves axiom consequences") {
    auto f = FieldSpec::rationals();
    Polynomial x = Polynomial::variable(f, mk_var(0));
    auto cert = complete_ns(eqs_of(f, {}), x * x - x, f);
    auto v = check_static(cert, eqs_of(f, {}), {}, f);
    CHECK(v.accepted);
    for (auto& t : cert.terms) CHECK(std::holds_alternative<cert_source::Axiom>(t.source));
}

TEST_CASE("complete_ns rejects non-consequences") {
    auto f = FieldSpec::rationals();
    Polynomial x = Polynomial::variable(f, mk_var(0));
    CHECK_THROWS_AS(complete_ns(eqs_of(f, {}), x, f), Error);
}

TEST_CASE("complete_ns on EQ(C3,K2) refutes over Q and GF(2) with degree <= n+1") {
    for (FieldSpec f : {FieldSpec::rationals(), FieldSpec::gf(2)}) {
        auto sys = encode_eq(cycle(3), clique(2), f);
        REQUIRE_FALSE(has_consistent_solution(sys));
        auto cert = complete_ns(sys, Polynomial::constant(f, -1), f);
        auto v = check_static(cert, sys, {}, f);
        CHECK(v.accepted);
        CHECK(v.degree <= sys.vars.size() + 1);
    }
}

TEST_CASE("complete_sa proves implied inequalities") {
    auto f = FieldSpec::rationals();
    Polynomial x = Polynomial::variable(f, mk_var(0));
    Polynomial y = Polynomial::variable(f, mk_var(1));
    LinIneqSystem ineqs;
    ineqs.inequalities.push_back(x + y - Polynomial::constant(f, 1));  // x + y >= 1
    // goal: x + y >= 1/2 i.e. x + y - 1/2 >= 0
    Polynomial goal = x + y - Polynomial::constant(f, BigRat(1, 2));
    auto cert = complete_sa({}, ineqs, goal);
    auto v = check_static(cert, {}, ineqs, f);
    CHECK(v.accepted);
}

TEST_CASE("twin_bridge certificates") {
    auto f = FieldSpec::rationals();
    // K empty: the equation is 0 = 0, certificate empty
    auto c0 = twin_bridge(Polynomial::constant(f, 1), 1, {0}, {});
    CHECK(c0.terms.empty());
    CHECK(c0.target.is_zero());

    // p = 1, J empty, K = {1}: (1 - X1) - X̄1 = 0
    auto c1 = twin_bridge(Polynomial::constant(f, 1), 1, {}, {1});
    auto v1 = check_static(c1, {}, {}, f);
    CHECK(v1.accepted);

    // degree-2 p with l = 3
    Polynomial p = Polynomial::variable(f, mk_var(5)) * Polynomial::variable(f, mk_var(6)) +
                   Polynomial::variable(f, mk_var(5));
    auto c2 = twin_bridge(p, BigRat(3, 2), {0}, {1, 2});
    auto v2 = check_static(c2, {}, {}, f);
    CHECK(v2.accepted);
    CHECK(v2.degree <= 2 + 3);
}

TEST_CASE("check_dynamic: derive X*X̄ = 0 from the axioms") {
    auto f = FieldSpec::rationals();
    DynBuilder b(DynamicKind::PC, f);
    size_t ax_sum = b.axiom(AxiomEq::TwinSum, 0);       // X + X̄ - 1 = 0
    size_t lifted = b.var_mul(ax_sum, mk_var(0));       // X^2 + XX̄ - X = 0
    size_t ax_sq = b.axiom(AxiomEq::BoolSquare, 0);     // X^2 - X = 0
    size_t neg = b.scalar_mul(ax_sq, -1);
    b.add(lifted, neg);                                  // XX̄ = 0
    auto proof = b.take();
    auto v = check_dynamic(proof, {}, {}, f);
    CHECK(v.accepted);
    Polynomial expect = Polynomial::variable(f, mk_var(0)) * Polynomial::variable(f, mk_twin(0));
    CHECK(proof.lines.back().poly == expect);
}

TEST_CASE("PC line with degree-2 factor rejected; LS square only in LS+") {
    auto f = FieldSpec::rationals();
    // hand-build a bogus multiplication by X*Y in one step
    DynamicProof p;
    p.kind = DynamicKind::PC;
    Polynomial x = Polynomial::variable(f, mk_var(0));
    Polynomial y = Polynomial::variable(f, mk_var(1));
    p.lines.push_back({Relation::EqZero, axiom_eq_poly(f, AxiomEq::BoolSquare, 0),
                       dyn_rule::Axiom{AxiomEq::BoolSquare, 0}});
    p.lines.push_back({Relation::EqZero, axiom_eq_poly(f, AxiomEq::BoolSquare, 0) * x * y,
                       dyn_rule::VarMul{0, mk_var(0)}});
    CHECK_FALSE(check_dynamic(p, {}, {}, f).accepted);

    DynamicProof q;
    q.kind = DynamicKind::LS;
    q.lines.push_back({Relation::GeqZero, x * x, dyn_rule::Square{x}});
    CHECK_FALSE(check_dynamic(q, {}, {}, f).accepted);
    q.kind = DynamicKind::LSPlus;
    CHECK(check_dynamic(q, {}, {}, f).accepted);
}

TEST_CASE("LS rejects GF(p)") {
    DynamicProof p;
    p.kind = DynamicKind::LS;
    CHECK_FALSE(check_dynamic(p, {}, {}, FieldSpec::gf(2)).accepted);
}

TEST_CASE("resolution to PC and SA compilation round trip") {
    for (FieldSpec f : {FieldSpec::rationals(), FieldSpec::gf(2), FieldSpec::gf(3)}) {
        auto cnf = encode_cnf(cycle(3), clique(2));
        auto rp = search_resolution_width(cnf, 4);
        REQUIRE(rp.has_value());
        auto pc = compile_resolution_to_pc(*rp, cnf.clauses, f);
        auto sys = multiplicative_system(cnf.clauses, f);
        auto v = check_dynamic(pc, sys, {}, f);
        CHECK(v.accepted);
        CHECK(v.is_refutation);
        CHECK(v.degree <= rp->width() + 2);

        if (f.is_rational()) {
            auto sa = compile_resolution_to_sa(*rp, cnf.clauses);
            auto vs = check_static(sa, sys, {}, f);
            CHECK(vs.accepted);
            CHECK(sa.is_refutation());
            CHECK(vs.degree <= rp->width() + 2);
        }
    }
}

TEST_CASE("single resolution step compiles through the twin-sum lift") {
    auto f = FieldSpec::rationals();
    std::vector<LitClause> hyps = {LitClause{mk_var(0)}, LitClause{mk_twin(0)}};
    ResolutionProof rp;
    rp.lines.push_back({hyps[0], res_rule::Hypothesis{0}});
    rp.lines.push_back({hyps[1], res_rule::Hypothesis{1}});
    rp.lines.push_back({LitClause{}, res_rule::Resolve{0, 1, 0}});
    auto pc = compile_resolution_to_pc(rp, hyps, f);
    auto sys = multiplicative_system(hyps, f);
    CHECK(check_dynamic(pc, sys, {}, f).accepted);
    CHECK(pc.is_refutation());
}

TEST_CASE("weakening compiles to a single lift") {
    auto f = FieldSpec::gf(5);
    std::vector<LitClause> hyps = {LitClause{mk_var(0)}};
    ResolutionProof rp;
    rp.lines.push_back({hyps[0], res_rule::Hypothesis{0}});
    rp.lines.push_back({LitClause{mk_var(0), mk_twin(1)}, res_rule::Weaken{0}});
    auto pc = compile_resolution_to_pc(rp, hyps, f);
    auto sys = multiplicative_system(hyps, f);
    auto v = check_dynamic(pc, sys, {}, f);
    CHECK(v.accepted);
    // conclusion is M(clause) = X̄0 * X1
    Monomial expect = Monomial(mk_twin(0)).times(mk_var(1));
    CHECK(pc.lines.back().poly == Polynomial::monomial(f, expect, 1));
}

TEST_CASE("sa_plus_to_sos doubles degree at most") {
    auto f = FieldSpec::rationals();
    LinIneqSystem ineqs;
    Polynomial x = Polynomial::variable(f, mk_var(0));
    Polynomial y = Polynomial::variable(f, mk_var(1));
    ineqs.inequalities.push_back(x + y - Polynomial::constant(f, 1));

    // SA+ certificate: lift hypothesis by X0 and add axiom corrections to
    // prove X0(X+Y-1) + ... some valid target; build via complete_sa then
    // re-tag as SA+ (every SA certificate is an SA+ certificate)
    Polynomial goal = x + y - Polynomial::constant(f, 1);
    auto sa = complete_sa({}, ineqs, goal);
    sa.kind = StaticKind::SAPlus;
    REQUIRE(check_static(sa, {}, ineqs, f).accepted);
    uint32_t d_before = check_static(sa, {}, ineqs, f).degree;

    auto sos = sa_plus_to_sos(sa, {}, ineqs);
    auto v = check_static(sos, {}, ineqs, f);
    CHECK(v.accepted);
    CHECK(v.degree <= 2 * d_before);

    // scalar-only certificates are unchanged
    StaticCertificate scalar_only;
    scalar_only.kind = StaticKind::SAPlus;
    scalar_only.rel = Relation::GeqZero;
    scalar_only.target = ineqs.inequalities[0];
    scalar_only.terms.push_back({cert_source::HypIneq{0}, 1, Monomial(), std::nullopt});
    auto sos2 = sa_plus_to_sos(scalar_only, {}, ineqs);
    CHECK(sos2.terms.size() == 1);
    CHECK(check_static(sos2, {}, ineqs, f).accepted);
}

TEST_CASE("soundness harness: accepted refutations mean no twin-consistent solution") {
    std::mt19937 rng(21);
    for (int trial = 0; trial < 15; ++trial) {
        // random small clause set; refute via width search then compile
        CnfInstance cnf;
        uint32_t n = 3 + rng() % 2;
        for (uint32_t i = 0; i < n; ++i) cnf.vars.add("v" + std::to_string(i));
        for (size_t c = 0; c < 8; ++c) {
            LitClause cl;
            for (size_t j = 0; j < 1 + rng() % 2; ++j)
                cl.lits.insert(Var{uint32_t(rng() % n), rng() % 2 == 0});
            cnf.clauses.push_back(cl);
        }
        auto rp = search_resolution_width(cnf, 3);
        if (!rp) continue;
        auto f = FieldSpec::rationals();
        auto sys = multiplicative_system(cnf.clauses, f);
        auto pc = compile_resolution_to_pc(*rp, cnf.clauses, f);
        REQUIRE(check_dynamic(pc, sys, {}, f).accepted);
        REQUIRE(pc.is_refutation());
        CHECK(brute_force_eq_solutions(sys).empty());
    }
}

TEST_CASE("inline_static splices certificates into dynamic proofs") {
    auto f = FieldSpec::rationals();
    auto sys = encode_eq(cycle(3), clique(2), f);
    auto cert = complete_ns(sys, Polynomial::constant(f, -1), f);
    REQUIRE(check_static(cert, sys, {}, f).accepted);
    DynBuilder b(DynamicKind::PC, f);
    size_t line = inline_static(b, cert, sys, {});
    auto proof = b.take();
    CHECK(proof.lines[line].poly == Polynomial::constant(f, -1));
    auto v = check_dynamic(proof, sys, {}, f);
    CHECK(v.accepted);
}
