#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cspforge/field.hpp"

namespace cspforge {

// A polynomial variable: base index plus twin flag. X(id) and its twin
// X̄(id) are independent ring variables linked only through the axiom
// X + X̄ - 1 = 0.
struct Var {
    uint32_t id = 0;
    bool twin = false;

    uint64_t key() const { return (uint64_t(id) << 1) | (twin ? 1 : 0); }
    Var partner() const { return Var{id, !twin}; }

    auto operator<=>(const Var&) const = default;
};

inline Var mk_var(uint32_t id) { return Var{id, false}; }
inline Var mk_twin(uint32_t id) { return Var{id, true}; }

// Commutative power product, kept sorted by variable key.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(Var v) { factors_.push_back({v, 1}); }
    static Monomial one() { return Monomial(); }

    bool is_one() const { return factors_.empty(); }
    uint32_t degree() const;
    uint32_t degree_of(Var v) const;
    bool multilinear() const;
    bool contains(Var v) const { return degree_of(v) > 0; }

    Monomial times(Var v, uint32_t e = 1) const;
    Monomial times(const Monomial& o) const;
    // Removes e occurrences of v; precondition degree_of(v) >= e.
    Monomial without(Var v, uint32_t e = 1) const;

    const std::vector<std::pair<Var, uint32_t>>& factors() const { return factors_; }
    std::vector<Var> variables() const;

    auto operator<=>(const Monomial&) const = default;

    std::string to_string() const;

private:
    std::vector<std::pair<Var, uint32_t>> factors_;
};

// Exact multivariate polynomial over Q or GF(p); zero coefficients are
// never stored.
class Polynomial {
public:
    explicit Polynomial(FieldSpec f = FieldSpec::rationals()) : field_(f) {}
    static Polynomial zero(FieldSpec f) { return Polynomial(f); }
    static Polynomial constant(FieldSpec f, const BigRat& c);
    static Polynomial variable(FieldSpec f, Var v);
    static Polynomial monomial(FieldSpec f, const Monomial& m, const BigRat& c = 1);

    const FieldSpec& field() const { return field_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // Coefficient of the empty monomial (0 if absent).
    BigRat constant_term() const;
    uint32_t degree() const;
    size_t term_count() const { return terms_.size(); }
    // Size metric used in proof accounting: total number of monomials.
    size_t size() const { return terms_.empty() ? 1 : terms_.size(); }

    BigRat coeff(const Monomial& m) const;
    void add_term(const Monomial& m, const BigRat& c);

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator-() const;
    bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }
    bool operator<(const Polynomial& o) const { return terms_ < o.terms_; }

    Polynomial scaled(const BigRat& c) const;
    Polynomial times_monomial(const Monomial& m, const BigRat& c = 1) const;
    Polynomial times_var(Var v) const { return times_monomial(Monomial(v)); }

    const std::map<Monomial, BigRat>& terms() const { return terms_; }
    std::vector<Var> variables() const;
    // Base ids mentioned by either polarity.
    std::vector<uint32_t> base_ids() const;

    // Evaluation under a total assignment of base ids to {0,1}; twins take
    // the complementary value (the twin-consistent semantics).
    BigRat eval_consistent(const std::map<uint32_t, int>& assignment) const;
    // Evaluation assigning every Var (twin or not) independently.
    BigRat eval_raw(const std::map<Var, BigRat>& assignment) const;

    // Simultaneous substitution of variables by polynomials. Variables not
    // in the map are kept. Twins of mapped variables must be mapped too.
    Polynomial substituted(const std::map<Var, Polynomial>& sigma) const;

    std::string to_string() const;

private:
    FieldSpec field_;
    std::map<Monomial, BigRat> terms_;
};

// The three per-variable equation axioms from the algebraic proof systems:
// X^2 - X = 0, X̄^2 - X̄ = 0, X + X̄ - 1 = 0.
enum class AxiomEq : uint8_t { BoolSquare, TwinSquare, TwinSum };
Polynomial axiom_eq_poly(FieldSpec f, AxiomEq kind, uint32_t id);

// Semi-algebraic axiom inequalities: X >= 0, X̄ >= 0, 1-X >= 0, 1-X̄ >= 0,
// 1 >= 0.
enum class AxiomIneq : uint8_t { VarNonneg, TwinNonneg, VarUpper, TwinUpper, One };
Polynomial axiom_ineq_poly(FieldSpec f, AxiomIneq kind, uint32_t id);

// Multilinearization (unique multilinear polynomial agreeing on {0,1}
// points, twins treated as independent variables). Returns P* together
// with witnesses Q_v such that P + sum_v Q_v * (v^2 - v) = P* exactly.
struct MultilinearizeResult {
    Polynomial p_star;
    std::vector<std::pair<Var, Polynomial>> witnesses;
};
MultilinearizeResult multilinearize(const Polynomial& p);

// Decomposition of a polynomial that vanishes on all twin-consistent {0,1}
// points into an exact combination of the equation axioms:
//   D = sum_i cofactor_i * axiom_i.
// Throws "not_vanishing" if D does not vanish on some twin-consistent point.
// Degrees of the produced products stay <= max(deg D, #base vars) + 1.
struct AxiomCombination {
    struct Term {
        AxiomEq axiom;
        uint32_t var_id;
        Monomial monomial;  // cofactor = coeff * monomial
        BigRat coeff;
    };
    std::vector<Term> terms;
};
AxiomCombination decompose_vanishing(const Polynomial& d);

// Normal form modulo the axiom ideal: twin-free, multilinear. Two
// polynomials agree on all twin-consistent {0,1} points iff their normal
// forms are equal.
Polynomial normal_form(const Polynomial& p);

}  // namespace cspforge
