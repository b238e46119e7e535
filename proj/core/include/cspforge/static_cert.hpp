#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cspforge/encodings.hpp"
#include "cspforge/polynomial.hpp"

namespace cspforge {

enum class StaticKind : uint8_t { NS, SA, SAPlus, SOS };
enum class Relation : uint8_t { EqZero, GeqZero };

std::string to_string(StaticKind k);

// Sources a certificate term can cite.
namespace cert_source {
struct HypEq {
    size_t index;
};
struct HypIneq {
    size_t index;
};
struct Axiom {  // equation axioms (NS, SA, SA+, SOS)
    AxiomEq kind;
    uint32_t var_id;
};
struct AxiomIneq {  // inequality axioms (SA, SA+, SOS)
    cspforge::AxiomIneq kind;
    uint32_t var_id;  // ignored for One
};
struct Square {  // SA+ / SOS: the checker squares q itself
    Polynomial q;
};
}  // namespace cert_source

using CertSource = std::variant<cert_source::HypEq, cert_source::HypIneq, cert_source::Axiom,
                                cert_source::AxiomIneq, cert_source::Square>;

// One summand of a static identity: source * multiplier. For NS/SA/SA+
// the multiplier is scalar * extended monomial; for SOS it may be any
// polynomial. Scalars multiplying inequality or square sources must be
// non-negative.
struct CertTerm {
    CertSource source;
    BigRat scalar = 1;
    Monomial monomial;                  // NS/SA/SA+ multiplier shape
    std::optional<Polynomial> general;  // SOS only: overrides scalar*monomial
};

struct StaticCertificate {
    StaticKind kind = StaticKind::NS;
    std::vector<CertTerm> terms;
    Polynomial target;                   // proves target (rel) 0
    Relation rel = Relation::EqZero;

    bool is_refutation() const;
};

struct StaticVerdict {
    bool accepted = false;
    std::string reason;
    size_t bad_term = 0;
    uint32_t degree = 0;  // max total degree over all products
    uint64_t size = 0;    // total monomials over multipliers and sources
};

// Exact verification of sum_i source_i * multiplier_i == target, with the
// per-kind shape and sign constraints. SA/SA+/SOS demand an ordered field
// (rationals only).
StaticVerdict check_static(const StaticCertificate& c, const PolyEquationSystem& eqs,
                           const LinIneqSystem& ineqs, FieldSpec field);

// Implicational completeness with quantitative degree control: builds a
// checker-accepted certificate of target = 0 (NS) or target >= 0 (SA) from
// the hypotheses, verified exhaustively over twin-consistent {0,1} points
// first. Certificates use the assignment-indicator scheme; when every used
// hypothesis is an extended monomial (or has degree <= 1) the certificate
// degree is at most n+1 for n base variables.
StaticCertificate complete_ns(const PolyEquationSystem& hyps, const Polynomial& goal,
                              FieldSpec field, size_t var_limit = 16);
StaticCertificate complete_sa(const PolyEquationSystem& eqs, const LinIneqSystem& ineqs,
                              const Polynomial& goal, size_t var_limit = 16);

// Lemma-level twin elimination: certificate for
//   p * c * prod_{j in J} X_j * prod_{k in K} (1-X_k)
//     - p * c * prod_{j in J} X_j * prod_{k in K} X̄_k = 0
// with degree <= deg(p) + |J| + |K| and size polynomial in 2^{|K|}.
StaticCertificate twin_bridge(const Polynomial& p, const BigRat& c,
                              const std::vector<uint32_t>& j_vars,
                              const std::vector<uint32_t>& k_vars, size_t l_limit = 16);

// SA+ -> SOS at twice the degree: variable multipliers on inequality
// sources become squared variables plus axiom corrections. The hypothesis
// systems are needed to resolve source polynomials for the corrections.
StaticCertificate sa_plus_to_sos(const StaticCertificate& c, const PolyEquationSystem& eqs,
                                 const LinIneqSystem& ineqs);

}  // namespace cspforge
