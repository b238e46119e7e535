#pragma once

#include <optional>

#include "cspforge/resolution.hpp"
#include "cspforge/structures.hpp"

namespace cspforge {

enum class Winner : uint8_t { Spoiler, Duplicator };

struct GameVerdict {
    Winner winner = Winner::Spoiler;
    int k = 0;
    // Duplicator's witness: the nonempty family of partial homomorphisms
    // with <= k-element domains, closed under restriction with the
    // extension property (empty when Spoiler wins).
    std::vector<std::map<ElemId, ElemId>> witness;
};

// Decides the existential k-pebble game by the greatest-fixpoint family of
// partial homomorphisms; Duplicator wins iff the family is nonempty.
GameVerdict spoiler_wins(const RelStructure& a, const RelStructure& b, int k);

// The template S_q: domain {0,1}, one q-ary relation R_i per 0 <= i <= q,
// excluding exactly the valuation falsifying the clause shape with i
// negated variables.
RelStructure sq_template(int q);

// The structure A_F of a q-CNF: domain = variables, R_i holds the clause
// tuples (negated literals first, padded by repetition). F is satisfiable
// iff A_F maps homomorphically into S_q.
RelStructure cnf_to_structure(const CnfInstance& f, int q);

// Lemma-level bridges between the game and resolution width.
// If Spoiler wins the (k+2)-game, returns the width-(k+|B|) refutation
// found by saturation (guaranteed to exist); otherwise nullopt.
std::optional<ResolutionProof> width_upper_via_game(const RelStructure& a, const RelStructure& b,
                                                    int k);
// If Duplicator wins the (k+2)-game, asserts that width-(k+1) saturation
// fails; throws "inconsistency" if the solvers disagree. Returns true when
// the consistency check ran (Duplicator won), false when Spoiler won.
bool game_lower_via_width(const RelStructure& a, const RelStructure& b, int k);

}  // namespace cspforge
