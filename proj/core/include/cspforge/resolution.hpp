#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cspforge/encodings.hpp"

namespace cspforge {

namespace res_rule {
struct Hypothesis {
    size_t index;
};
struct Resolve {
    size_t from_pos;  // line containing the positive pivot
    size_t from_neg;  // line containing the negated pivot
    uint32_t pivot;
};
struct Weaken {
    size_t from;
};
}  // namespace res_rule

using ResJustification = std::variant<res_rule::Hypothesis, res_rule::Resolve, res_rule::Weaken>;

struct ResolutionLine {
    LitClause clause;
    ResJustification rule;
};

struct ResolutionProof {
    std::vector<ResolutionLine> lines;
    bool is_refutation() const { return !lines.empty() && lines.back().clause.empty(); }
    size_t width() const;
    uint64_t size_metric() const;  // sum of clause widths
};

struct ResolutionVerdict {
    bool accepted = false;
    std::string reason;
    size_t bad_line = 0;
    size_t width = 0;
    uint64_t size = 0;
    size_t length = 0;
    bool is_refutation = false;
};

ResolutionVerdict check_resolution(const ResolutionProof& p, const CnfInstance& cnf);
// Variant checking against a bare clause list (derivations from clauses
// that are not packaged as an instance).
ResolutionVerdict check_resolution(const ResolutionProof& p, const std::vector<LitClause>& hyps);

// Width-k saturation: closes the clause set under resolution keeping only
// clauses of width <= k (with subsumption pruning). Returns a
// reconstructed refutation if the empty clause is derived; nullopt is a
// certificate that no width-k resolution refutation exists.
// Precondition: k >= max initial clause width.
std::optional<ResolutionProof> search_resolution_width(const CnfInstance& cnf, size_t k);

}  // namespace cspforge
