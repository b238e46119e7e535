#pragma once

#include <optional>
#include <vector>

#include "cspforge/dynamic_proof.hpp"
#include "cspforge/tseitin.hpp"

namespace cspforge {

// GF(2) linear system with bounded row support; variables X_1..X_n keep
// only the positive encoding variables and their twins.
struct Gf2LinSystem {
    uint32_t nvars = 0;
    std::vector<std::vector<uint32_t>> rows;  // support of each row (sorted, distinct)
    std::vector<int> rhs;                     // 0/1 per row

    static Gf2LinSystem from_tseitin(const TseitinSystem& s);
};

// The 2^{k-1} inequalities S(E) of one parity constraint: for each
// T subset of the support with |T| = 1-b mod 2,
//   sum_{i in T} X̄_i + sum_{i notin T} X_i - 1 >= 0.
std::vector<Polynomial> clause_inequalities(const std::vector<uint32_t>& support, int b);
LinIneqSystem s_of(const Gf2LinSystem& sys);

// Gaussian elimination over GF(2) with certificate extraction: a row
// subset J with sum of rows = 0 and sum of rhs = 1. Throws "satisfiable"
// (carrying a witness) when the system is consistent.
struct ContradictionWitness {
    std::vector<size_t> rows;
};
struct SatisfiableError {
    std::vector<int> solution;
};
std::optional<ContradictionWitness> find_contradiction_subset(const Gf2LinSystem& s);
std::optional<std::vector<int>> solve_gf2(const Gf2LinSystem& s);

// D_c(L) = (L - c)(L - c + 1) for a linear form L = sum a_i X_i.
struct LinearForm {
    std::map<uint32_t, BigRat> coeffs;
    Polynomial to_poly(FieldSpec f) const;
};
Polynomial gap_poly(const LinearForm& l, const BigRat& c, FieldSpec f);

// Lemma-level LS builders; all return proofs from the axioms alone whose
// final line is the stated inequality/equation.
//
// prove_gap: D_c(L) >= 0 for integer coefficients and integer c, degree <= 3.
DynamicProof prove_gap(const LinearForm& l, long long c);
// prove_fullsum: sum_{T subset I} M^I_T - 1 = 0, degree |I|.
DynamicProof prove_fullsum(const std::vector<uint32_t>& i_set, size_t limit = 6);
// prove_extmon: (sum_{i in I} X_i - |T|) * M^I_T = 0, degree <= |I| + 1.
DynamicProof prove_extmon(const std::vector<uint32_t>& i_set, const std::vector<uint32_t>& t_set);

// extended monomial M^I_T as a cspforge monomial
Monomial ext_monomial(const std::vector<uint32_t>& i_set, const std::vector<uint32_t>& t_set);

// End-to-end: LS refutation of S(sys) for an unsatisfiable 3LIN(Z_2)
// system, by the reverse-induction Gaussian-elimination simulation;
// measured degree <= 6. Throws "satisfiable" with a witness if consistent.
DynamicProof refute_3lin_z2(const Gf2LinSystem& sys);

}  // namespace cspforge
