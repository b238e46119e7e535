#include "doctest.h"

#include <random>

#include "cspforge/lsgauss.hpp"

using namespace cspforge;

namespace {

const FieldSpec kQ = FieldSpec::rationals();

Gf2LinSystem make_sys(uint32_t n, std::vector<std::pair<std::vector<uint32_t>, int>> rows) {
    Gf2LinSystem s;
    s.nvars = n;
    for (auto& [r, b] : rows) {
        s.rows.push_back(r);
        s.rhs.push_back(b);
    }
    return s;
}

// independent check against all 2^n assignments
bool gf2_satisfiable_brute(const Gf2LinSystem& s) {
    for (uint64_t mask = 0; mask < (uint64_t(1) << s.nvars); ++mask) {
        bool ok = true;
        for (size_t r = 0; r < s.rows.size(); ++r) {
            int sum = 0;
            for (uint32_t v : s.rows[r]) sum ^= int((mask >> v) & 1);
            if (sum != s.rhs[r]) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("clause inequalities of x1+x2+x3 = 1") {
    auto ineqs = clause_inequalities({0, 1, 2}, 1);
    CHECK(ineqs.size() == 4);  // T of even size
    // {0,1} solution set equals the parity constraint, all 8 assignments
    for (uint64_t mask = 0; mask < 8; ++mask) {
        std::map<uint32_t, int> a;
        for (uint32_t i = 0; i < 3; ++i) a[i] = int((mask >> i) & 1);
        bool parity = ((a[0] + a[1] + a[2]) % 2) == 1;
        bool sat = true;
        for (auto& p : ineqs) sat = sat && p.eval_consistent(a) >= 0;
        CHECK(parity == sat);
    }
}

TEST_CASE("k=1 gives the single inequality X - 1 >= 0") {
    auto ineqs = clause_inequalities({7}, 1);
    REQUIRE(ineqs.size() == 1);
    Polynomial expect(kQ);
    expect.add_term(Monomial(mk_var(7)), 1);
    expect.add_term(Monomial::one(), -1);
    CHECK(ineqs[0] == expect);
}

TEST_CASE("find_contradiction_subset on {x=0, x=1}") {
    auto s = make_sys(1, {{{0}, 0}, {{0}, 1}});
    auto w = find_contradiction_subset(s);
    REQUIRE(w.has_value());
    CHECK(w->rows.size() == 2);
    CHECK_FALSE(solve_gf2(s).has_value());
}

TEST_CASE("satisfiable systems give verified witnesses") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        uint32_t n = 4 + rng() % 4;
        Gf2LinSystem s;
        s.nvars = n;
        for (int r = 0; r < 6; ++r) {
            std::set<uint32_t> sup;
            while (sup.size() < 3) sup.insert(uint32_t(rng() % n));
            s.rows.push_back({sup.begin(), sup.end()});
            s.rhs.push_back(int(rng() % 2));
        }
        auto sol = solve_gf2(s);
        auto contra = find_contradiction_subset(s);
        CHECK(sol.has_value() == !contra.has_value());
        CHECK(sol.has_value() == gf2_satisfiable_brute(s));
        if (contra) {
            // verify by direct row arithmetic
            std::map<uint32_t, int> colsum;
            int bsum = 0;
            for (size_t r : contra->rows) {
                for (uint32_t v : s.rows[r]) colsum[v] ^= 1;
                bsum ^= s.rhs[r];
            }
            for (auto& [v, parity] : colsum) CHECK(parity == 0);
            CHECK(bsum == 1);
        }
    }
}

TEST_CASE("prove_gap: D_1(X) from the Boolean axiom") {
    LinearForm l;
    l.coeffs[0] = 1;
    auto p = prove_gap(l, 1);
    auto v = check_dynamic(p, {}, {}, kQ);
    CHECK(v.accepted);
    CHECK(v.degree <= 3);
    CHECK(p.lines.back().poly == gap_poly(l, 1, kQ));
}

TEST_CASE("prove_gap: small forms accepted at degree <= 3") {
    std::vector<std::pair<LinearForm, long long>> cases;
    {
        LinearForm l;
        l.coeffs[0] = 1;
        l.coeffs[1] = 1;
        cases.push_back({l, 1});
    }
    {
        LinearForm l;
        l.coeffs[0] = 2;
        l.coeffs[1] = 1;
        l.coeffs[2] = -1;
        cases.push_back({l, 0});
        cases.push_back({l, 2});
        cases.push_back({l, -1});
    }
    for (auto& [l, c] : cases) {
        auto p = prove_gap(l, c);
        auto v = check_dynamic(p, {}, {}, kQ);
        CHECK(v.accepted);
        CHECK(v.degree <= 3);
        CHECK(p.lines.back().poly == gap_poly(l, BigRat(c), kQ));
        CHECK(p.lines.back().rel == Relation::GeqZero);
    }
}

TEST_CASE("prove_fullsum") {
    auto p0 = prove_fullsum({});
    CHECK(check_dynamic(p0, {}, {}, kQ).accepted);
    CHECK(p0.lines.back().poly.is_zero());

    auto p1 = prove_fullsum({3});
    CHECK(check_dynamic(p1, {}, {}, kQ).accepted);

    auto p3 = prove_fullsum({0, 1, 2});
    auto v = check_dynamic(p3, {}, {}, kQ);
    CHECK(v.accepted);
    CHECK(v.degree == 3);
    // conclusion: sum over 8 extended monomials minus 1
    Polynomial expect(kQ);
    for (uint64_t mask = 0; mask < 8; ++mask) {
        std::vector<uint32_t> t;
        for (uint32_t i = 0; i < 3; ++i)
            if ((mask >> i) & 1) t.push_back(i);
        expect.add_term(ext_monomial({0, 1, 2}, t), 1);
    }
    expect.add_term(Monomial::one(), -1);
    CHECK(p3.lines.back().poly == expect);
}

TEST_CASE("prove_extmon") {
    // I = T = {1}: (X1 - 1) X1 = 0
    auto p = prove_extmon({1}, {1});
    CHECK(check_dynamic(p, {}, {}, kQ).accepted);
    Polynomial x1 = Polynomial::variable(kQ, mk_var(1));
    CHECK(p.lines.back().poly == (x1 - Polynomial::constant(kQ, 1)) * x1);

    auto p2 = prove_extmon({1, 2}, {1});
    auto v2 = check_dynamic(p2, {}, {}, kQ);
    CHECK(v2.accepted);
    CHECK(v2.degree <= 3);

    auto p3 = prove_extmon({0, 1, 2}, {});
    auto v3 = check_dynamic(p3, {}, {}, kQ);
    CHECK(v3.accepted);
    CHECK(v3.degree <= 4);
}

TEST_CASE("refute_3lin_z2: two contradictory parity constraints") {
    auto s = make_sys(3, {{{0, 1, 2}, 1}, {{0, 1, 2}, 0}});
    auto proof = refute_3lin_z2(s);
    auto ineqs = s_of(s);
    auto v = check_dynamic(proof, {}, ineqs, kQ);
    CHECK(v.accepted);
    CHECK(v.is_refutation);
    CHECK(v.degree <= 6);
}

TEST_CASE("refute_3lin_z2 rejects satisfiable systems") {
    auto s = make_sys(3, {{{0, 1, 2}, 1}});
    CHECK_THROWS_AS(refute_3lin_z2(s), Error);
}

TEST_CASE("refute_3lin_z2 on an unsatisfiable Tseitin system") {
    auto z2 = AbelianGroup::z(2);
    auto sample = sample_expander(8, 11);
    std::vector<int> sigma(8, 0);
    sigma[0] = 1;  // odd label sum
    auto ts = gen_tseitin(sample.graph, sigma, z2);
    REQUIRE_FALSE(tseitin_satisfiable(ts));
    auto sys = Gf2LinSystem::from_tseitin(ts);
    auto proof = refute_3lin_z2(sys);
    auto ineqs = s_of(sys);
    auto v = check_dynamic(proof, {}, ineqs, kQ);
    CHECK(v.accepted);
    CHECK(v.is_refutation);
    CHECK(v.degree <= 6);
    // LS only: no squares anywhere
    for (auto& line : proof.lines) CHECK_FALSE(std::holds_alternative<dyn_rule::Square>(line.rule));
}

TEST_CASE("refute_3lin_z2 on random planted-unsat systems") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        uint32_t n = 6 + rng() % 5;
        Gf2LinSystem s;
        s.nvars = n;
        // a short planted contradiction plus noise rows
        std::set<uint32_t> sup = {0, 1, 2};
        s.rows.push_back({0, 1, 2});
        s.rhs.push_back(0);
        s.rows.push_back({0, 1, 2});
        s.rhs.push_back(1);
        for (int r = 0; r < 4; ++r) {
            std::set<uint32_t> rs;
            while (rs.size() < 3) rs.insert(uint32_t(rng() % n));
            s.rows.push_back({rs.begin(), rs.end()});
            s.rhs.push_back(int(rng() % 2));
        }
        REQUIRE_FALSE(gf2_satisfiable_brute(s));
        auto proof = refute_3lin_z2(s);
        auto ineqs = s_of(s);
        auto v = check_dynamic(proof, {}, ineqs, kQ);
        CHECK(v.accepted);
        CHECK(v.is_refutation);
        CHECK(v.degree <= 6);
    }
}
