#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cspforge/field.hpp"

namespace cspforge {

using ElemId = int;
using Tuple = std::vector<ElemId>;

// Relational vocabulary: symbol name -> arity. Kept ordered so every
// downstream encoding enumerates symbols deterministically.
class Vocabulary {
public:
    Vocabulary() = default;
    Vocabulary(std::initializer_list<std::pair<std::string, int>> syms);

    void add(const std::string& name, int arity);
    bool has(const std::string& name) const { return symbols_.count(name) > 0; }
    int arity(const std::string& name) const;
    const std::map<std::string, int>& symbols() const { return symbols_; }

    bool operator==(const Vocabulary& o) const { return symbols_ == o.symbols_; }

private:
    std::map<std::string, int> symbols_;
};

// Finite relational structure; serves both as CSP instance and template.
// The element order of `domain` is stable and drives all encodings.
class RelStructure {
public:
    RelStructure() = default;
    RelStructure(Vocabulary vocab, std::vector<ElemId> domain);

    const Vocabulary& vocab() const { return vocab_; }
    const std::vector<ElemId>& domain() const { return domain_; }
    size_t size() const { return domain_.size(); }
    bool has_element(ElemId e) const;
    int index_of(ElemId e) const;  // position in domain order

    void add_tuple(const std::string& rel, const Tuple& t);
    const std::set<Tuple>& relation(const std::string& rel) const;
    const std::map<std::string, std::set<Tuple>>& relations() const { return relations_; }

    // every tuple length matches arity, every entry in domain
    void validate() const;

    // Induced substructure on a subset of the domain.
    RelStructure induced(const std::vector<ElemId>& sub) const;

    bool operator==(const RelStructure& o) const;

private:
    Vocabulary vocab_;
    std::vector<ElemId> domain_;
    std::map<std::string, std::set<Tuple>> relations_;
    std::map<ElemId, int> index_;
};

struct Homomorphism {
    std::map<ElemId, ElemId> map;
};

bool is_homomorphism(const Homomorphism& h, const RelStructure& a, const RelStructure& b);

// Exhaustive backtracking search with relation pruning; the brute-force
// satisfiability oracle for CSP(b).
std::optional<Homomorphism> find_homomorphism(const RelStructure& a, const RelStructure& b);

// Enumerates all homomorphisms a -> b (used by encoding bijection tests).
std::vector<Homomorphism> all_homomorphisms(const RelStructure& a, const RelStructure& b);

struct CoreResult {
    RelStructure core;
    Homomorphism into_core;   // b -> core
    Homomorphism from_core;   // core -> b (inclusion)
};

// Smallest retract, found by exhaustive search over induced substructures;
// gated by size limit (default 8 elements).
CoreResult find_core(const RelStructure& b, size_t size_limit = 8);

// Expansion with one fresh unary singleton relation per element ("R_<id>").
RelStructure expand_with_constants(const RelStructure& b);
std::string constant_symbol_name(ElemId e);

// Common small templates and instances.
RelStructure clique(int k);                 // K_k over edge vocabulary {E:2}, directed both ways
RelStructure cycle(int n);                  // C_n, undirected (both directions)
RelStructure one_element_empty();           // single element, no relations

}  // namespace cspforge
