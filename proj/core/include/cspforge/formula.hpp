#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cspforge/polynomial.hpp"  // Var

namespace cspforge {

// NNF formula with n-ary AND/OR, constants 0/1, and negation only at
// literals. Construction normalizes: flatten + sort + dedup children,
// eliminate neutral/absorbing constants. Normal forms make the
// commutative/associative/idempotent identification literal, so
// operator== is the paper's "viewed literally the same" relation.
//
// A literal is a Var: twin=true is the negated polarity (matching the twin
// variables of the algebraic encodings).
class Formula {
public:
    enum class Kind : uint8_t { False, True, Lit, And, Or };

    Formula() : Formula(f()) {}

    static Formula f();  // constant 0
    static Formula t();  // constant 1
    static Formula lit(Var v);
    static Formula pos(uint32_t id) { return lit(mk_var(id)); }
    static Formula neg(uint32_t id) { return lit(mk_twin(id)); }
    static Formula land(std::vector<Formula> children);
    static Formula lor(std::vector<Formula> children);

    Kind kind() const;
    bool is_false() const { return kind() == Kind::False; }
    bool is_true() const { return kind() == Kind::True; }
    bool is_lit() const { return kind() == Kind::Lit; }
    bool is_and() const { return kind() == Kind::And; }
    bool is_or() const { return kind() == Kind::Or; }
    bool is_constant() const { return is_false() || is_true(); }

    Var literal() const;
    const std::vector<Formula>& children() const;

    // Top-level disjuncts: children if Or, {} if False, {self} otherwise.
    std::vector<Formula> disjuncts() const;
    std::vector<Formula> conjuncts() const;

    // De Morgan dual.
    Formula complement() const;

    // s(A): constants 0, literal 1, conjunction/disjunction of k parts
    // sum of part sizes + (k-1).
    uint64_t size_metric() const;

    bool eval(const std::map<uint32_t, bool>& assignment) const;
    std::vector<uint32_t> var_ids() const;

    uint64_t hash() const;
    bool operator==(const Formula& o) const;
    bool operator!=(const Formula& o) const { return !(*this == o); }
    // Total structural order (used for canonical child order).
    static int cmp(const Formula& a, const Formula& b);
    bool operator<(const Formula& o) const { return cmp(*this, o) < 0; }

    std::string to_string() const;

private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

// Σ_{t,k} / Π_{t,k} classification (depth t >= 1, bottom fan-in k >= 1).
// Constants and literals classify as (1,1).
struct FormulaClass {
    int depth = 1;       // t
    int bottom_fanin = 1;  // k
};

bool is_term(const Formula& f, int k);    // conjunction of <= k literals (or constant/literal)
bool is_clause(const Formula& f, int k);  // disjunction of <= k literals
bool in_sigma(const Formula& f, int t, int k);
bool in_pi(const Formula& f, int t, int k);
// Minimal t, then minimal k at that t, with f in Σ_{t,k}.
FormulaClass classify_sigma(const Formula& f);

// Builds a normalized formula from a raw tree description; exposed mainly
// to make "normalize(raw) is idempotent" testable. land/lor already
// normalize on construction.
Formula normalize(const Formula& f);

}  // namespace cspforge
