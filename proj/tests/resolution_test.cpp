#include "doctest.h"

#include <random>

#include "cspforge/resolution.hpp"
#include "cspforge/structures.hpp"

using namespace cspforge;

TEST_CASE("unit resolution to the empty clause") {
    CnfInstance cnf;
    uint32_t x = cnf.vars.add("x");
    cnf.clauses.push_back(LitClause{mk_var(x)});
    cnf.clauses.push_back(LitClause{mk_twin(x)});
    auto proof = search_resolution_width(cnf, 1);
    REQUIRE(proof.has_value());
    auto v = check_resolution(*proof, cnf);
    CHECK(v.accepted);
    CHECK(v.is_refutation);
    CHECK(v.width == 1);
}

TEST_CASE("weakening-only derivation of a superclause") {
    CnfInstance cnf;
    uint32_t x = cnf.vars.add("x");
    uint32_t y = cnf.vars.add("y");
    ResolutionProof p;
    p.lines.push_back({LitClause{mk_var(x)}, res_rule::Hypothesis{0}});
    p.lines.push_back({LitClause{mk_var(x), mk_var(y)}, res_rule::Weaken{0}});
    cnf.clauses.push_back(LitClause{mk_var(x)});
    auto v = check_resolution(p, cnf);
    CHECK(v.accepted);
}

TEST_CASE("satisfiable CNFs have no refutation at any width") {
    auto cnf = encode_cnf(cycle(4), clique(2));
    CHECK_FALSE(search_resolution_width(cnf, 4).has_value());
    CHECK_FALSE(search_resolution_width(cnf, 6).has_value());
}

TEST_CASE("C3 vs K2 refutable at width 4") {
    auto cnf = encode_cnf(cycle(3), clique(2));
    auto proof = search_resolution_width(cnf, 4);
    REQUIRE(proof.has_value());
    auto v = check_resolution(*proof, cnf);
    CHECK(v.accepted);
    CHECK(v.is_refutation);
    CHECK(v.width <= 4);
    // monotone in k
    CHECK(search_resolution_width(cnf, 5).has_value());
    CHECK(search_resolution_width(cnf, 6).has_value());
}

TEST_CASE("soundness harness: accepted refutation implies unsatisfiable") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        CnfInstance cnf;
        uint32_t n = 4 + rng() % 3;
        for (uint32_t i = 0; i < n; ++i) cnf.vars.add("v" + std::to_string(i));
        size_t m = 6 + rng() % 8;
        for (size_t c = 0; c < m; ++c) {
            LitClause cl;
            size_t w = 1 + rng() % 3;
            for (size_t j = 0; j < w; ++j) cl.lits.insert(Var{uint32_t(rng() % n), rng() % 2 == 0});
            cnf.clauses.push_back(cl);
        }
        auto proof = search_resolution_width(cnf, 3);
        if (proof) {
            CHECK(check_resolution(*proof, cnf).accepted);
            CHECK_FALSE(cnf.brute_force_solve().has_value());
        } else {
            // no width-3 certificate; nothing to conclude
        }
    }
}

TEST_CASE("tampered resolvent rejected") {
    CnfInstance cnf;
    uint32_t x = cnf.vars.add("x");
    uint32_t y = cnf.vars.add("y");
    cnf.clauses.push_back(LitClause{mk_var(x), mk_var(y)});
    cnf.clauses.push_back(LitClause{mk_twin(x)});
    ResolutionProof p;
    p.lines.push_back({cnf.clauses[0], res_rule::Hypothesis{0}});
    p.lines.push_back({cnf.clauses[1], res_rule::Hypothesis{1}});
    p.lines.push_back({LitClause{}, res_rule::Resolve{0, 1, x}});  // should be {y}
    auto v = check_resolution(p, cnf);
    CHECK_FALSE(v.accepted);
    CHECK(v.bad_line == 2);
}

TEST_CASE("width precondition enforced") {
    CnfInstance cnf;
    for (int i = 0; i < 3; ++i) cnf.vars.add("v" + std::to_string(i));
    cnf.clauses.push_back(LitClause{mk_var(0), mk_var(1), mk_var(2)});
    CHECK_THROWS_AS(search_resolution_width(cnf, 2), Error);
}
