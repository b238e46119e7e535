#include "doctest.h"

#include <random>
#include <sstream>

#include "cspforge/encodings.hpp"

using namespace cspforge;

TEST_CASE("CNF(C3,K2) has the 18 clauses of the three families") {
    auto c3 = cycle(3);
    auto k2 = clique(2);
    auto f = encode_cnf(c3, k2);
    // 3 type-1, 3 type-2 (unordered pairs), 6 edge tuples x 2 bad pairs
    CHECK(f.clauses.size() == 18);
    CHECK_FALSE(f.brute_force_solve().has_value());
}

TEST_CASE("CNF(K1 empty, K2) is satisfiable with two clauses") {
    auto k1 = RelStructure(Vocabulary{{"E", 2}}, {0});
    auto k2 = clique(2);
    auto f = encode_cnf(k1, k2);
    CHECK(f.clauses.size() == 2);
    CHECK(f.brute_force_solve().has_value());
}

TEST_CASE("bijection: satisfying valuations = homomorphisms (<=12 var pairs)") {
    std::vector<std::pair<RelStructure, RelStructure>> cases = {
        {cycle(3), clique(2)}, {cycle(4), clique(2)}, {cycle(3), clique(3)},
        {clique(2), clique(3)}, {one_element_empty(), one_element_empty()},
    };
    for (auto& [a, b] : cases) {
        auto f = encode_cnf(a, b);
        if (f.vars.size() > 12) continue;
        CHECK(f.count_models() == all_homomorphisms(a, b).size());
        // induced valuation of any found homomorphism satisfies the CNF
        for (auto& h : all_homomorphisms(a, b))
            CHECK(f.satisfied_by(hom_to_assignment(h, a, b, f.vars)));
    }
}

TEST_CASE("EQ mirrors CNF index sets and solutions") {
    auto c3 = cycle(3);
    auto k2 = clique(2);
    auto sys = encode_eq(c3, k2, FieldSpec::rationals());
    CHECK(sys.equations.size() == 18);
    CHECK(brute_force_eq_solutions(sys).empty());

    auto c4 = cycle(4);
    auto sys2 = encode_eq(c4, k2, FieldSpec::rationals());
    auto sols = brute_force_eq_solutions(sys2);
    CHECK(sols.size() == all_homomorphisms(c4, k2).size());
}

TEST_CASE("INEQ {0,1} solutions equal EQ solutions") {
    std::vector<std::pair<RelStructure, RelStructure>> cases = {
        {cycle(3), clique(2)}, {cycle(4), clique(2)}, {clique(2), clique(2)},
    };
    for (auto& [a, b] : cases) {
        auto eq = encode_eq(a, b, FieldSpec::rationals());
        auto ineq = encode_ineq(a, b);
        CHECK(brute_force_eq_solutions(eq) == brute_force_ineq_solutions(ineq));
    }
}

TEST_CASE("type-1 inequality shape") {
    auto k1 = RelStructure(Vocabulary{{"E", 2}}, {0});
    auto k2 = clique(2);
    auto sys = encode_ineq(k1, k2);
    REQUIRE(sys.inequalities.size() == 2);
    // sum_b X(a,b) - 1 >= 0
    Polynomial expect(FieldSpec::rationals());
    expect.add_term(Monomial(mk_var(0)), 1);
    expect.add_term(Monomial(mk_var(1)), 1);
    expect.add_term(Monomial::one(), -1);
    CHECK(sys.inequalities[0] == expect);
}

TEST_CASE("restriction: empty rho is identity; total rho from hom empties the CNF") {
    auto c4 = cycle(4);
    auto k2 = clique(2);
    auto f = encode_cnf(c4, k2);
    auto same = restrict_cnf(f, PartialAssignment{});
    CHECK(same.clauses.size() == f.clauses.size());

    PartialAssignment rho;
    for (ElemId e : c4.domain()) rho.map[e] = e % 2;
    auto restricted = restrict_cnf(f, rho);
    CHECK(restricted.clauses.empty());
}

TEST_CASE("restriction keeps falsified empty clauses") {
    auto c3 = cycle(3);
    auto k2 = clique(2);
    auto f = encode_cnf(c3, k2);
    PartialAssignment rho;
    for (ElemId e : c3.domain()) rho.map[e] = 0;  // all one color
    auto restricted = restrict_cnf(f, rho);
    bool has_empty = false;
    for (auto& c : restricted.clauses) has_empty = has_empty || c.empty();
    CHECK(has_empty);
}

TEST_CASE("restriction of unknown element rejected") {
    auto f = encode_cnf(cycle(3), clique(2));
    PartialAssignment rho;
    rho.map[99] = 0;
    CHECK_THROWS_AS(restrict_cnf(f, rho), Error);
}

TEST_CASE("DIMACS export") {
    CnfInstance empty;
    CHECK(export_dimacs(empty) == "p cnf 0 0\n");

    CnfInstance one;
    one.vars.add("X(0,0)");
    one.clauses.push_back(LitClause{mk_var(0)});
    CHECK(export_dimacs(one) == "p cnf 1 1\n1 0\n");
}

TEST_CASE("DIMACS round trip preserves clause structure") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        CnfInstance f;
        uint32_t n = 2 + rng() % 5;
        for (uint32_t i = 0; i < n; ++i) f.vars.add("v" + std::to_string(i));
        size_t m = rng() % 8;
        for (size_t c = 0; c < m; ++c) {
            LitClause cl;
            for (size_t j = 0; j < 1 + rng() % 3; ++j)
                cl.lits.insert(Var{uint32_t(rng() % n), rng() % 2 == 0});
            f.clauses.push_back(cl);
        }
        std::istringstream in(export_dimacs(f));
        auto g = import_dimacs(in);
        REQUIRE(g.clauses.size() == f.clauses.size());
        for (size_t i = 0; i < f.clauses.size(); ++i) CHECK(g.clauses[i] == f.clauses[i]);
        CHECK(export_dimacs(g) == export_dimacs(f));
    }
}

TEST_CASE("isomorphism invariance: renaming instance elements permutes clauses") {
    // relabel C3's vertices; the clause multiset shape is unchanged
    auto c3 = cycle(3);
    Vocabulary v{{"E", 2}};
    RelStructure c3r(v, {10, 11, 12});
    auto ren = [&](ElemId e) { return ElemId(10 + ((e + 1) % 3)); };
    for (auto& t : c3.relation("E")) c3r.add_tuple("E", {ren(t[0]), ren(t[1])});
    auto f1 = encode_cnf(c3, clique(2));
    auto f2 = encode_cnf(c3r, clique(2));
    CHECK(f1.clauses.size() == f2.clauses.size());
    std::multiset<size_t> w1, w2;
    for (auto& c : f1.clauses) w1.insert(c.width());
    for (auto& c : f2.clauses) w2.insert(c.width());
    CHECK(w1 == w2);
}
