#pragma once

#include "cspforge/dynamic_proof.hpp"
#include "cspforge/resolution.hpp"

namespace cspforge {

// Multiplicative encoding M(C): negated literals contribute X, positive
// literals contribute X̄.
Monomial multiplicative_encoding(const LitClause& c);
// The equation system { M(C_i) = 0 } for a clause list.
PolyEquationSystem multiplicative_system(const std::vector<LitClause>& clauses, FieldSpec field);

// Resolution-to-PC compilation: from a checker-accepted resolution
// derivation of C from C_1..C_m, builds a PC proof of M(C) = 0 from the
// equations M(C_i) = 0, of degree <= width + 1.
DynamicProof compile_resolution_to_pc(const ResolutionProof& rp,
                                      const std::vector<LitClause>& hyps, FieldSpec field);

// Resolution-to-SA compilation: static certificate of -M(C) >= 0 (target
// -1 for refutations) from the same equations, degree <= width + 1, with
// the symmetric-step preprocessing and DAG weighting.
StaticCertificate compile_resolution_to_sa(const ResolutionProof& rp,
                                           const std::vector<LitClause>& hyps);

}  // namespace cspforge
