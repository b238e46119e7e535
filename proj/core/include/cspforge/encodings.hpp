#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cspforge/formula.hpp"
#include "cspforge/polynomial.hpp"
#include "cspforge/structures.hpp"

namespace cspforge {

// Payload attached to variables produced by the encoders: X(element, value).
struct EncodingVariable {
    ElemId element;
    ElemId value;
    auto operator<=>(const EncodingVariable&) const = default;
};

// Ordered variable table shared by CNFs and polynomial systems. Encoding
// variables follow the canonical (element index, template index) order, so
// DIMACS numbering is reproducible.
class VarUniverse {
public:
    uint32_t add(const std::string& name,
                 std::optional<EncodingVariable> pair = std::nullopt);
    uint32_t id_of(const std::string& name) const;
    std::optional<uint32_t> try_id_of(const std::string& name) const;
    std::optional<uint32_t> pair_id(ElemId element, ElemId value) const;
    const std::string& name(uint32_t id) const;
    std::optional<EncodingVariable> pair(uint32_t id) const;
    size_t size() const { return names_.size(); }

    bool operator==(const VarUniverse& o) const { return names_ == o.names_ && pairs_ == o.pairs_; }

private:
    std::vector<std::string> names_;
    std::vector<std::optional<EncodingVariable>> pairs_;
    std::map<std::string, uint32_t> by_name_;
    std::map<std::pair<ElemId, ElemId>, uint32_t> by_pair_;
};

// Clause over Var literals (twin = negated polarity); set semantics give
// the dedup/width conventions for free.
struct LitClause {
    std::set<Var> lits;

    LitClause() = default;
    LitClause(std::initializer_list<Var> ls) : lits(ls) {}
    size_t width() const { return lits.size(); }
    bool empty() const { return lits.empty(); }
    bool tautological() const;
    bool contains(Var v) const { return lits.count(v) > 0; }
    bool subsumes(const LitClause& o) const;
    Formula to_formula() const;

    auto operator<=>(const LitClause&) const = default;
};

struct CnfInstance {
    VarUniverse vars;
    std::vector<LitClause> clauses;

    size_t max_width() const;
    bool satisfied_by(const std::map<uint32_t, bool>& assignment) const;
    // Exhaustive satisfiability over all 2^|vars| assignments.
    std::optional<std::map<uint32_t, bool>> brute_force_solve() const;
    uint64_t count_models() const;
};

struct PolyEquationSystem {
    VarUniverse vars;
    FieldSpec field = FieldSpec::rationals();
    std::vector<Polynomial> equations;  // each P with meaning P = 0
};

struct LinIneqSystem {
    VarUniverse vars;
    std::vector<Polynomial> inequalities;  // each P with meaning P >= 0, over Q
};

// Map from instance elements to template elements (single image each).
struct PartialAssignment {
    std::map<ElemId, ElemId> map;
};

VarUniverse encoding_universe(const RelStructure& a, const RelStructure& b);

// The three local encoding schemes. Type-2 constraints are generated once
// per unordered template pair.
CnfInstance encode_cnf(const RelStructure& a, const RelStructure& b);
PolyEquationSystem encode_eq(const RelStructure& a, const RelStructure& b, FieldSpec field);
LinIneqSystem encode_ineq(const RelStructure& a, const RelStructure& b);

// Satisfying valuations of encode_cnf(a,b) <-> homomorphisms a -> b.
std::map<uint32_t, bool> hom_to_assignment(const Homomorphism& h, const RelStructure& a,
                                           const RelStructure& b, const VarUniverse& vars);
std::optional<Homomorphism> assignment_to_hom(const std::map<uint32_t, bool>& assignment,
                                              const RelStructure& a, const RelStructure& b,
                                              const VarUniverse& vars);

// Restriction per the X(a,g) -> 1 iff rho(a)=g convention. Satisfied
// clauses vanish, falsified literals vanish, the empty clause is kept.
CnfInstance restrict_cnf(const CnfInstance& f, const PartialAssignment& rho);
PolyEquationSystem restrict_eq(const PolyEquationSystem& f, const PartialAssignment& rho);

// DIMACS cnf, variables numbered 1..n in universe order.
std::string export_dimacs(const CnfInstance& f);
CnfInstance import_dimacs(std::istream& in);

// All {0,1} twin-consistent solutions of a polynomial system (exhaustive,
// for cross-checking encodings; |vars| capped by caller).
std::vector<std::map<uint32_t, int>> brute_force_eq_solutions(const PolyEquationSystem& sys);
std::vector<std::map<uint32_t, int>> brute_force_ineq_solutions(const LinIneqSystem& sys);

}  // namespace cspforge
