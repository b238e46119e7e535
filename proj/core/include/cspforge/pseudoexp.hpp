#pragma once

#include <map>
#include <string>
#include <vector>

#include "cspforge/encodings.hpp"
#include "cspforge/polynomial.hpp"

namespace cspforge {

// Linear functional on multilinear twin-free monomials of degree <= 2t.
struct PseudoExpectation {
    uint32_t t = 1;  // degree budget is 2t
    std::map<Monomial, BigRat> values;
};

struct PseudoVerdict {
    bool accepted = false;
    // violated condition: "unit" E(1)=1, "vanishing" E(M q)=0,
    // "boolean" E(M X^2)=E(M X), "psd" moment matrix, "domain" missing value
    std::string condition;
    std::string detail;
};

// Exact verification of the degree-2t pseudo-expectation conditions
// against a polynomial equation system: unit mass, vanishing on lifted
// equations, Boolean consistency of the value map, and positive
// semidefiniteness of the moment matrix (rational LDL with pivoting).
PseudoVerdict check_pseudo_expectation(const PseudoExpectation& e, const PolyEquationSystem& sys,
                                       uint32_t t);

// Pseudo-expectation induced by averaging a nonempty set of 0/1
// assignments (a genuine expectation, hence always accepted).
PseudoExpectation from_distribution(const std::vector<std::map<uint32_t, int>>& points,
                                    const std::vector<uint32_t>& ids, uint32_t t);

// Exact PSD test for a symmetric rational matrix; complete for rational
// inputs. Pivots on the largest remaining diagonal entry; a zero diagonal
// with a nonzero row refutes PSD.
bool is_psd_exact(std::vector<std::vector<BigRat>> a);

// Floating cross-check: smallest eigenvalue via cyclic Jacobi.
double min_eigenvalue_jacobi(std::vector<std::vector<double>> a, int sweeps = 50);

// All multilinear twin-free monomials over ids with degree <= d.
std::vector<Monomial> monomial_basis(const std::vector<uint32_t>& ids, uint32_t d);

}  // namespace cspforge
