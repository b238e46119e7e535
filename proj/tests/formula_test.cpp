#include "doctest.h"

#include <random>

#include "cspforge/formula.hpp"

using namespace cspforge;

TEST_CASE("idempotency: A & A is literally A") {
    Formula a = Formula::pos(0);
    CHECK(Formula::land({a, a}) == a);
    Formula b = Formula::lor({Formula::pos(1), Formula::neg(2)});
    CHECK(Formula::lor({b, b}) == b);
}

TEST_CASE("commutativity and associativity are literal") {
    Formula a = Formula::pos(0), b = Formula::pos(1), c = Formula::pos(2);
    CHECK(Formula::land({a, b}) == Formula::land({b, a}));
    CHECK(Formula::land({Formula::land({a, b}), c}) == Formula::land({a, Formula::land({b, c})}));
}

TEST_CASE("constants are neutral and absorbing") {
    Formula a = Formula::pos(0);
    CHECK(Formula::lor({Formula::f(), a}) == a);
    CHECK(Formula::land({Formula::t(), a}) == a);
    CHECK(Formula::land({Formula::f(), a}) == Formula::f());
    CHECK(Formula::lor({Formula::t(), a}) == Formula::t());
}

TEST_CASE("complement is the De Morgan dual and involutive") {
    Formula x = Formula::pos(3);
    CHECK(x.complement() == Formula::neg(3));
    Formula c = Formula::pos(0), d = Formula::neg(1);
    Formula f = Formula::land({c, d});
    CHECK(f.complement() == Formula::lor({c.complement(), d.complement()}));
    CHECK(Formula::f().complement() == Formula::t());

    std::mt19937 rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        // random small formula
        std::vector<Formula> pool;
        for (uint32_t i = 0; i < 4; ++i) {
            pool.push_back(Formula::pos(i));
            pool.push_back(Formula::neg(i));
        }
        for (int step = 0; step < 6; ++step) {
            size_t i = rng() % pool.size(), j = rng() % pool.size();
            if (rng() % 2)
                pool.push_back(Formula::land({pool[i], pool[j]}));
            else
                pool.push_back(Formula::lor({pool[i], pool[j]}));
        }
        Formula f2 = pool.back();
        CHECK(f2.complement().complement() == f2);
    }
}

TEST_CASE("size metric follows the inductive definition") {
    CHECK(Formula::f().size_metric() == 0);
    CHECK(Formula::t().size_metric() == 0);
    CHECK(Formula::pos(0).size_metric() == 1);
    Formula ab = Formula::land({Formula::pos(0), Formula::pos(1)});
    CHECK(ab.size_metric() == 3);
    Formula abc = Formula::lor({ab, Formula::pos(2)});
    CHECK(abc.size_metric() == 5);
}

TEST_CASE("normalize is idempotent and truth-preserving") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Formula> pool;
        for (uint32_t i = 0; i < 3; ++i) {
            pool.push_back(Formula::pos(i));
            pool.push_back(Formula::neg(i));
        }
        pool.push_back(Formula::f());
        pool.push_back(Formula::t());
        for (int step = 0; step < 8; ++step) {
            size_t i = rng() % pool.size(), j = rng() % pool.size();
            if (rng() % 2)
                pool.push_back(Formula::land({pool[i], pool[j]}));
            else
                pool.push_back(Formula::lor({pool[i], pool[j]}));
        }
        Formula f = pool.back();
        CHECK(normalize(f) == f);
        // truth table preserved under rebuilding
        for (int mask = 0; mask < 8; ++mask) {
            std::map<uint32_t, bool> asg;
            for (uint32_t i = 0; i < 3; ++i) asg[i] = (mask >> i) & 1;
            CHECK(normalize(f).eval(asg) == f.eval(asg));
        }
    }
}

TEST_CASE("sigma/pi classification") {
    Formula x = Formula::pos(0), y = Formula::pos(1), z = Formula::neg(2);
    // constants and literals are (1,1)
    CHECK(classify_sigma(Formula::f()).depth == 1);
    CHECK(classify_sigma(Formula::f()).bottom_fanin == 1);
    CHECK(classify_sigma(x).depth == 1);
    CHECK(classify_sigma(x).bottom_fanin == 1);
    // clause: 1-DNF of 1-terms
    Formula cl = Formula::lor({x, y, z});
    CHECK(in_sigma(cl, 1, 1));
    // 2-DNF
    Formula dnf = Formula::lor({Formula::land({x, y}), z});
    CHECK(classify_sigma(dnf).depth == 1);
    CHECK(classify_sigma(dnf).bottom_fanin == 2);
    // CNF needs depth 2 as a Σ-formula
    Formula cnf = Formula::land({Formula::lor({x, y}), Formula::lor({z, y})});
    CHECK_FALSE(in_sigma(cnf, 1, 2));
    CHECK(in_sigma(cnf, 2, 2));
    CHECK_FALSE(in_sigma(cnf, 2, 1));
    CHECK(in_pi(cnf, 1, 2));
    // classes are cumulative in t
    CHECK(in_sigma(dnf, 2, 2));
    CHECK(in_sigma(dnf, 3, 2));
}
