#include "doctest.h"

#include "cspforge/structures.hpp"

using namespace cspforge;

TEST_CASE("identity map on K3 is a homomorphism") {
    auto k3 = clique(3);
    Homomorphism h;
    for (ElemId e : k3.domain()) h.map[e] = e;
    CHECK(is_homomorphism(h, k3, k3));
}

TEST_CASE("constant map of C3 into K2 violates the edge relation") {
    auto c3 = cycle(3);
    auto k2 = clique(2);
    Homomorphism h;
    for (ElemId e : c3.domain()) h.map[e] = 0;
    CHECK_FALSE(is_homomorphism(h, c3, k2));
}

TEST_CASE("proper 2-coloring of C4 into K2") {
    auto c4 = cycle(4);
    auto k2 = clique(2);
    Homomorphism h;
    for (ElemId e : c4.domain()) h.map[e] = e % 2;
    CHECK(is_homomorphism(h, c4, k2));
}

TEST_CASE("find_homomorphism on odd/even cycles and cliques") {
    auto k2 = clique(2);
    CHECK_FALSE(find_homomorphism(cycle(3), k2).has_value());
    auto w = find_homomorphism(cycle(4), k2);
    REQUIRE(w.has_value());
    CHECK(is_homomorphism(*w, cycle(4), k2));
    // exhaustive over 3^4 maps
    CHECK_FALSE(find_homomorphism(clique(4), clique(3)).has_value());
}

TEST_CASE("find_homomorphism witness always verifies") {
    std::vector<std::pair<RelStructure, RelStructure>> cases = {
        {cycle(4), clique(2)}, {cycle(5), clique(3)}, {clique(3), clique(3)},
        {cycle(6), cycle(3)},
    };
    for (auto& [a, b] : cases) {
        auto h = find_homomorphism(a, b);
        if (h) CHECK(is_homomorphism(*h, a, b));
    }
}

TEST_CASE("vocabulary mismatch is reported") {
    RelStructure a(Vocabulary{{"E", 2}}, {0, 1});
    RelStructure b(Vocabulary{{"F", 2}}, {0, 1});
    CHECK_THROWS_AS(find_homomorphism(a, b), Error);
}

TEST_CASE("cliques are cores") {
    auto k3 = clique(3);
    auto r = find_core(k3);
    CHECK(r.core.size() == 3);
    CHECK(is_homomorphism(r.into_core, k3, r.core));
    CHECK(is_homomorphism(r.from_core, r.core, k3));
}

TEST_CASE("disjoint union K2 + K1 retracts to K2") {
    Vocabulary v{{"E", 2}};
    RelStructure s(v, {0, 1, 2});
    s.add_tuple("E", {0, 1});
    s.add_tuple("E", {1, 0});
    auto r = find_core(s);
    CHECK(r.core.size() == 2);
    CHECK(r.core.relation("E").size() == 2);
    // homomorphic equivalence witnessed in both directions
    CHECK(is_homomorphism(r.into_core, s, r.core));
    CHECK(is_homomorphism(r.from_core, r.core, s));
    // every endomorphism of the core is a bijection
    for (auto& e : all_homomorphisms(r.core, r.core)) {
        std::set<ElemId> image;
        for (auto& [x, y] : e.map) image.insert(y);
        CHECK(image.size() == r.core.size());
    }
}

TEST_CASE("one-element empty structure is its own core") {
    auto s = one_element_empty();
    auto r = find_core(s);
    CHECK(r.core.size() == 1);
}

TEST_CASE("find_core size limit") {
    CHECK_THROWS_AS(find_core(clique(9), 8), Error);
}

TEST_CASE("expand_with_constants adds singleton unary relations") {
    auto k3 = clique(3);
    auto e = expand_with_constants(k3);
    CHECK(e.vocab().symbols().size() == 4);
    for (ElemId x : k3.domain()) {
        auto& rel = e.relation(constant_symbol_name(x));
        REQUIRE(rel.size() == 1);
        CHECK(*rel.begin() == Tuple{x});
    }
    // original relations untouched
    CHECK(e.relation("E") == k3.relation("E"));

    // expanding twice adds 2|B| unary symbols, all singletons
    auto e2 = expand_with_constants(e);
    CHECK(e2.vocab().symbols().size() == 7);
}

TEST_CASE("one-element structure with empty relations expands to one singleton") {
    auto s = one_element_empty();
    auto e = expand_with_constants(s);
    CHECK(e.vocab().symbols().size() == 1);
    CHECK(e.relation(constant_symbol_name(0)).size() == 1);
}

TEST_CASE("core of b is homomorphically equivalent to b") {
    // property: both directions succeed for assorted small structures
    std::vector<RelStructure> cases = {cycle(4), cycle(6), clique(2), clique(3)};
    for (auto& b : cases) {
        auto r = find_core(b);
        CHECK(find_homomorphism(b, r.core).has_value());
        CHECK(find_homomorphism(r.core, b).has_value());
    }
}
