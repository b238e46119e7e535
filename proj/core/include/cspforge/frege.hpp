#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cspforge/formula.hpp"

namespace cspforge {

// Justifications for the four Tait-style rules plus hypothesis citation.
// Rule applications carry their witness formulas so checking is a purely
// local recomputation.
namespace frege_rule {
struct Axiom {
    Formula a;  // line must equal a | ~a
};
struct Cut {
    size_t from_c;  // line with C | A
    size_t from_d;  // line with D | ~A
    Formula pivot;  // A
};
struct AndIntro {
    size_t from_c;  // line with C | A
    size_t from_d;  // line with D | B
    Formula left;   // A
    Formula right;  // B
};
struct Weakening {
    size_t from;  // line with C; this line is C | D
};
struct Hypothesis {
    size_t index;  // into the hypothesis list
};
}  // namespace frege_rule

using FregeJustification = std::variant<frege_rule::Axiom, frege_rule::Cut,
                                        frege_rule::AndIntro, frege_rule::Weakening,
                                        frege_rule::Hypothesis>;

struct FregeLine {
    Formula formula;
    FregeJustification rule;
};

struct FregeProof {
    std::vector<FregeLine> lines;

    bool is_refutation() const {
        return !lines.empty() && lines.back().formula.is_false();
    }
    uint64_t size_metric() const;
    size_t length() const { return lines.size(); }
};

struct FregeVerdict {
    bool accepted = false;
    std::string reason;          // first violation when rejected
    size_t bad_line = 0;
    uint64_t size = 0;
    size_t length = 0;
    int depth = 0;         // minimal t with all lines in Σ_{t,k for that t}
    int bottom_fanin = 0;  // minimal k at that depth
};

// Line-by-line rule validation (modulo normalization); optional Σ_{t,k}
// class bound on every line.
FregeVerdict check_frege(const FregeProof& p, const std::vector<Formula>& hypotheses,
                         std::optional<FormulaClass> class_bound = std::nullopt);

// Quantitative completeness: builds a checker-accepted proof of `goal`
// from `hyps`, all formulas being disjunctions of class-C formulas. The
// variable count is capped (truth-table verification of the premise).
// Throws "not_a_consequence" if goal does not follow.
FregeProof complete_frege(const std::vector<Formula>& hyps, const Formula& goal,
                          size_t var_limit = 16);

// Size ceiling for complete_frege output implied by its construction:
//   leaves: for each tuple-independent subgoal, <= 2*s+1 lines of size <= n+s+1
//   per-tuple cut chain: 2^n lines; combination: sum |I_j| cuts per tuple.
// n = #variables, s = max formula size, m = #hypotheses,
// t = prod |I_j| (<= s^m), isum = sum |I_j|.
uint64_t complete_frege_size_bound(uint64_t n, uint64_t s, uint64_t m, uint64_t t,
                                   uint64_t isum);

}  // namespace cspforge
