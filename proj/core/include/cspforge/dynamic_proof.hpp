#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cspforge/static_cert.hpp"

namespace cspforge {

enum class DynamicKind : uint8_t { PC, LS, LSPlus };
std::string to_string(DynamicKind k);

namespace dyn_rule {
struct HypEq {
    size_t index;
};
struct HypIneq {
    size_t index;
};
struct Axiom {
    AxiomEq kind;
    uint32_t var_id;
};
struct AxiomIneq {
    cspforge::AxiomIneq kind;
    uint32_t var_id;
};
struct Add {
    size_t from_a, from_b;
};
struct ScalarMul {
    size_t from;
    BigRat scalar;
};
struct VarMul {
    size_t from;
    Var var;
};
struct Square {  // LS+ only: q^2 >= 0
    Polynomial q;
};
struct EqToGeq {  // P = 0 gives sign*P >= 0
    size_t from;
    int sign;  // +1 or -1
};
struct PairGeq {  // P >= 0 and -P >= 0 give P = 0
    size_t from_pos, from_neg;
};
}  // namespace dyn_rule

using DynJustification =
    std::variant<dyn_rule::HypEq, dyn_rule::HypIneq, dyn_rule::Axiom, dyn_rule::AxiomIneq,
                 dyn_rule::Add, dyn_rule::ScalarMul, dyn_rule::VarMul, dyn_rule::Square,
                 dyn_rule::EqToGeq, dyn_rule::PairGeq>;

struct DynamicLine {
    Relation rel = Relation::EqZero;
    Polynomial poly;
    DynJustification rule;
};

struct DynamicProof {
    DynamicKind kind = DynamicKind::PC;
    std::vector<DynamicLine> lines;

    bool is_refutation() const;
};

struct DynamicVerdict {
    bool accepted = false;
    std::string reason;
    size_t bad_line = 0;
    uint32_t degree = 0;
    uint64_t size = 0;   // total monomial count
    uint32_t rank = 0;   // max nesting depth of variable multiplications
    bool is_refutation = false;
};

// Line-by-line validation with exact arithmetic. PC admits only equations
// (over any field); LS/LS+ admit inequalities over the rationals, with
// multiplication restricted to positive scalars and variables, and the
// square rule only in LS+.
DynamicVerdict check_dynamic(const DynamicProof& p, const PolyEquationSystem& eqs,
                             const LinIneqSystem& ineqs, FieldSpec field);

// Incremental construction helper with line dedup.
class DynBuilder {
public:
    DynBuilder(DynamicKind kind, FieldSpec field) : field_(field) { proof_.kind = kind; }

    size_t hyp_eq(size_t index, const Polynomial& p);
    size_t hyp_ineq(size_t index, const Polynomial& p);
    size_t axiom(AxiomEq kind, uint32_t var_id);
    size_t axiom_ineq(AxiomIneq kind, uint32_t var_id);
    size_t add(size_t a, size_t b);
    size_t scalar_mul(size_t from, const BigRat& c);
    size_t var_mul(size_t from, Var v);
    size_t square(const Polynomial& q);
    size_t eq_to_geq(size_t from, int sign);
    size_t pair_geq(size_t pos, size_t neg);

    // premise * monomial via a chain of variable multiplications
    size_t monomial_mul(size_t from, const Monomial& m);
    // sum of lines (balanced tree)
    size_t add_all(std::vector<size_t> lines);

    const DynamicLine& line(size_t i) const { return proof_.lines[i]; }
    DynamicProof take() { return std::move(proof_); }
    const DynamicProof& proof() const { return proof_; }
    FieldSpec field() const { return field_; }

private:
    size_t emit(Relation rel, Polynomial p, DynJustification rule);
    FieldSpec field_;
    DynamicProof proof_;
    std::map<std::pair<int, Polynomial>, size_t> index_;
};

// Splices a checker-valid static certificate into a dynamic proof,
// returning the line proving the certificate's target. Hypothesis indices
// refer to the same eqs/ineqs lists the dynamic proof is checked against.
size_t inline_static(DynBuilder& b, const StaticCertificate& cert,
                     const PolyEquationSystem& eqs, const LinIneqSystem& ineqs);

}  // namespace cspforge
