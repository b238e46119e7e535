#pragma once

#include <functional>
#include <optional>
#include <variant>

#include "cspforge/dynamic_proof.hpp"
#include "cspforge/frege.hpp"
#include "cspforge/simulate.hpp"
#include "cspforge/structures.hpp"

namespace cspforge {

// ---------------------------------------------------------------------------
// pp-formulas: atoms, equality atoms, conjunction, existential quantification

struct PpFormula {
    enum class Kind : uint8_t { Atom, EqAtom, And, Exists };
    Kind kind = Kind::Atom;
    std::string rel;            // Atom
    std::vector<int> args;      // Atom: variable indices
    int lhs = 0, rhs = 0;       // EqAtom
    std::vector<PpFormula> children;  // And (>=2) or Exists (exactly 1)
    int bound = 0;              // Exists: quantified variable index

    static PpFormula atom(std::string rel, std::vector<int> args);
    static PpFormula eq(int lhs, int rhs);
    static PpFormula conj(std::vector<PpFormula> children);
    static PpFormula exists(int var, PpFormula body);

    // free variables = all minus bound ones
    std::set<int> variables() const;
    std::set<int> free_variables() const;
};

// exhaustive evaluation over a structure
bool pp_eval(const PpFormula& f, const RelStructure& b, std::map<int, ElemId>& env);
// the relation {tuple : B |= f(x_0/t_0, ..., x_{r-1}/t_{r-1})} for free
// variables 0..r-1
std::set<Tuple> pp_relation(const PpFormula& f, const RelStructure& b, int r);

// ---------------------------------------------------------------------------
// the six constructions

struct EqualityStep {
    std::string symbol = "Eq";  // binary symbol interpreted as equality in B'
};

// T(x_0..x_{r-1}) := S(s_args) & P(p_args), arg entries index T's variables
struct ConjunctionStep {
    std::string t_symbol;
    int t_arity;
    std::string s_symbol;
    std::vector<int> s_args;
    std::string p_symbol;
    std::vector<int> p_args;
};

// T(x_0..x_{r-1}) := exists y S(s_args), entries in [0..r], r = the bound y
struct ExistentialStep {
    std::string t_symbol;
    int t_arity;
    std::string s_symbol;
    std::vector<int> s_args;
};

// dimension collapse of a pp-interpretation: instances over the rn-ary
// preimage relations (already present in the base template) map down to
// the representative structure B' over the interpreted vocabulary
struct PpCollapseStep {
    int power = 1;                                     // n
    std::vector<Tuple> domain_tuples;                  // delta(B) subset of B^n
    std::vector<std::pair<Tuple, Tuple>> equiv_pairs;  // epsilon
    // interpreted symbol -> (arity r, base symbol of arity r*n whose
    // interpretation is the preimage of the relation)
    std::map<std::string, std::pair<int, std::string>> relations;
};

struct HomEquivalenceStep {
    RelStructure b_prime;
    Homomorphism to_base;    // h : B' -> B
    Homomorphism from_base;  // B -> B'
};

struct AddConstantsStep {};

using StepPayload = std::variant<EqualityStep, ConjunctionStep, ExistentialStep, PpCollapseStep,
                                 HomEquivalenceStep, AddConstantsStep>;

struct ReductionStep {
    RelStructure base;  // the template B the construction starts from
    StepPayload payload;
};

// The derived template B' whose instances this step consumes.
RelStructure derive_template(const ReductionStep& step);

// The instance transformation A (over B') -> A' (over B); element ids of A
// are preserved where the construction keeps them.
RelStructure transform_instance(const ReductionStep& step, const RelStructure& a);

// ---------------------------------------------------------------------------
// substitutions

struct DnfSubstitution {
    // images of the F-variables (encoding universe of (A', B)) as formulas
    // over the G-universe (A, B'); identity entries are literals
    std::map<uint32_t, Formula> images;
    int d = 1;  // max term size
    int m = 1;  // max term count
};

struct PolySubstitution {
    std::map<Var, Polynomial> images;  // both polarities mapped explicitly
    int d = 1;
    int m = 1;
};

enum class SubstitutionMode : uint8_t { Propositional, Algebraic };

// Non-literal variable image: a disjunction/sum over tuple choices of a
// product block, prod_j X(elements[j], tuple[j]). The algebraic twin image
// complements the tuples within the same product space.
struct BlockImage {
    std::vector<ElemId> elements;
    std::set<Tuple> tuples;
};

// Everything a transfer needs, precomputed for one step and one instance
// (or composed across a chain).
struct TransferData {
    RelStructure a;        // the B'-instance
    RelStructure a_prime;  // transformed instance over the base template
    RelStructure b;        // base template
    RelStructure b_prime;  // derived template
    CnfInstance f_cnf;     // CNF(a_prime, b)
    CnfInstance g_cnf;     // CNF(a, b_prime)
    DnfSubstitution prop;
    // F-variable images that are product blocks (everything else in prop
    // is a literal or constant)
    std::map<uint32_t, BlockImage> blocks;
    // locality anchor: elements of a relevant to an element of a_prime
    std::function<std::vector<ElemId>(ElemId)> anchor;
    // set when the step is Equality: derives the substituted type-3 clause
    // by equality propagation instead of bounded-cover completeness
    bool equality_special = false;
    std::map<ElemId, ElemId> class_rep;     // Equality: element -> chosen a*
    std::string eq_symbol;                  // Equality: the E symbol in a
    // set for composed chains: the per-step data, innermost first
    std::vector<std::shared_ptr<TransferData>> chain_parts;

    PolySubstitution alg(FieldSpec field) const;
};

TransferData make_transfer_data(const ReductionStep& step, const RelStructure& a);

DnfSubstitution build_substitution_prop(const ReductionStep& step, const RelStructure& a);
PolySubstitution build_substitution_alg(const ReductionStep& step, const RelStructure& a,
                                        FieldSpec field);

// ---------------------------------------------------------------------------
// refutation transfer

// Input Frege proofs must be resolution-shaped: hypothesis, weakening, and
// cuts/axioms with literal witnesses (the form produced by
// search_resolution_width and by these transfers' own hypothesis
// derivations at the clause level).
FregeProof transfer_frege(const TransferData& td, const FregeProof& refutation);
FregeProof transfer_frege(const ReductionStep& step, const RelStructure& a,
                          const FregeProof& refutation);

// Dynamic kinds: PC, LS, LS+. Hypotheses are EQ(a_prime, b); the result is
// checked against EQ(a, b_prime).
DynamicProof transfer_dynamic(const TransferData& td, const DynamicProof& proof, FieldSpec field);
DynamicProof transfer_dynamic(const ReductionStep& step, const RelStructure& a,
                              const DynamicProof& proof, FieldSpec field);

// Static kinds: NS, SA, SA+, SOS.
StaticCertificate transfer_static(const TransferData& td, const StaticCertificate& cert,
                                  FieldSpec field);
StaticCertificate transfer_static(const ReductionStep& step, const RelStructure& a,
                                  const StaticCertificate& cert, FieldSpec field);

// Resolution derivation of ~X(a,b) from ~X(a_from,b) and the clauses of g,
// walking a shortest E-path between equivalent elements; `carry` rides
// along as extra disjuncts. Hypothesis 0 is the start clause
// {~X(a_from,b)} | carry; the remaining hypotheses are g's clauses
// (indices shifted by one).
ResolutionProof equality_propagation(const RelStructure& a, const std::string& eq_symbol,
                                     ElemId a_to, ElemId a_from, ElemId b_value,
                                     const CnfInstance& g, const RelStructure& b_prime,
                                     const LitClause& carry = {});

// ---------------------------------------------------------------------------
// chains

struct ReductionChain {
    std::vector<ReductionStep> steps;  // steps[0].base is the root template
};

// instance transforms composed: A (over the last derived template) -> ...
// -> instance of steps[0].base; index i of the result is the instance fed
// to step i (result[0] = the root instance A').
std::vector<RelStructure> chain_instances(const ReductionChain& chain, const RelStructure& a);

// substitution/anchor composition into a single TransferData
TransferData compose_chain_data(const ReductionChain& chain, const RelStructure& a);

// Decomposition of a pp-formula into single-connective steps over a
// growing template; returns the steps and the symbol realizing the formula
// (with its argument order = the formula's free variables, ascending).
struct PpDecomposition {
    std::vector<ReductionStep> steps;
    RelStructure final_template;
    std::string symbol;
    std::vector<int> arg_order;
};
PpDecomposition decompose_pp(const RelStructure& base, const PpFormula& formula,
                             const std::string& fresh_prefix);

}  // namespace cspforge
