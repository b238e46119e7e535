#include "cspforge/frege.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace cspforge {

uint64_t FregeProof::size_metric() const {
    uint64_t s = 0;
    for (auto& l : lines) s += l.formula.size_metric();
    return s;
}

namespace {

using DisjunctSet = std::set<Formula>;

DisjunctSet disjunct_set(const Formula& f) {
    DisjunctSet s;
    for (auto& d : f.disjuncts()) s.insert(d);
    return s;
}

bool subset(const DisjunctSet& a, const DisjunctSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

Formula from_set(const DisjunctSet& s) {
    std::vector<Formula> v(s.begin(), s.end());
    return Formula::lor(std::move(v));
}

DisjunctSet minus(DisjunctSet s, const DisjunctSet& remove) {
    for (auto& r : remove) s.erase(r);
    return s;
}

}  // namespace

FregeVerdict check_frege(const FregeProof& p, const std::vector<Formula>& hypotheses,
                         std::optional<FormulaClass> class_bound) {
    FregeVerdict v;
    v.length = p.lines.size();
    std::vector<Formula> hyps;
    hyps.reserve(hypotheses.size());
    for (auto& h : hypotheses) hyps.push_back(normalize(h));

    for (size_t i = 0; i < p.lines.size(); ++i) {
        const Formula& line = p.lines[i].formula;
        v.size += line.size_metric();
        auto reject = [&](const std::string& why) {
            v.accepted = false;
            v.bad_line = i;
            v.reason = why;
            return v;
        };
        if (!(line == normalize(line))) return reject("line not in normal form");

        const auto& rule = p.lines[i].rule;
        if (auto* ax = std::get_if<frege_rule::Axiom>(&rule)) {
            Formula expected = Formula::lor({ax->a, ax->a.complement()});
            if (!(line == expected)) return reject("axiom instance mismatch");
        } else if (auto* cut = std::get_if<frege_rule::Cut>(&rule)) {
            if (cut->from_c >= i || cut->from_d >= i) return reject("cut premise index not backward");
            DisjunctSet p1 = disjunct_set(p.lines[cut->from_c].formula);
            DisjunctSet p2 = disjunct_set(p.lines[cut->from_d].formula);
            DisjunctSet piv = disjunct_set(cut->pivot);
            DisjunctSet coPiv = disjunct_set(cut->pivot.complement());
            if (!subset(piv, p1)) return reject("cut: first premise lacks pivot");
            if (!subset(coPiv, p2)) return reject("cut: second premise lacks complement of pivot");
            DisjunctSet c = minus(p1, piv);
            DisjunctSet d = minus(p2, coPiv);
            c.insert(d.begin(), d.end());
            if (!(line == from_set(c))) return reject("cut conclusion mismatch");
        } else if (auto* ai = std::get_if<frege_rule::AndIntro>(&rule)) {
            if (ai->from_c >= i || ai->from_d >= i)
                return reject("and-intro premise index not backward");
            DisjunctSet p1 = disjunct_set(p.lines[ai->from_c].formula);
            DisjunctSet p2 = disjunct_set(p.lines[ai->from_d].formula);
            DisjunctSet da = disjunct_set(ai->left);
            DisjunctSet db = disjunct_set(ai->right);
            if (!subset(da, p1)) return reject("and-intro: first premise lacks left witness");
            if (!subset(db, p2)) return reject("and-intro: second premise lacks right witness");
            DisjunctSet c = minus(p1, da);
            DisjunctSet d = minus(p2, db);
            c.insert(d.begin(), d.end());
            Formula conj = Formula::land({ai->left, ai->right});
            DisjunctSet dc = disjunct_set(conj);
            c.insert(dc.begin(), dc.end());
            if (conj.is_true()) c.insert(conj);  // degenerate 1&1
            if (!(line == from_set(c))) return reject("and-intro conclusion mismatch");
        } else if (auto* wk = std::get_if<frege_rule::Weakening>(&rule)) {
            if (wk->from >= i) return reject("weakening premise index not backward");
            if (line.is_true()) {
                // C | 1 is literally 1
            } else {
                DisjunctSet p1 = disjunct_set(p.lines[wk->from].formula);
                DisjunctSet lw = disjunct_set(line);
                if (!subset(p1, lw)) return reject("weakening does not extend premise");
            }
        } else if (auto* hy = std::get_if<frege_rule::Hypothesis>(&rule)) {
            if (hy->index >= hyps.size()) return reject("hypothesis index out of range");
            if (!(line == hyps[hy->index])) return reject("hypothesis formula mismatch");
        }
        if (class_bound && !in_sigma(line, class_bound->depth, class_bound->bottom_fanin))
            return reject("line outside class bound Σ_{" + std::to_string(class_bound->depth) +
                          "," + std::to_string(class_bound->bottom_fanin) + "}");
    }

    // proof-level class metrics: minimal t admitting some k, then minimal k
    for (int t = 1; t <= 64; ++t) {
        bool all = true;
        for (auto& l : p.lines)
            if (!in_sigma(l.formula, t, 1 << 20)) {
                all = false;
                break;
            }
        if (!all) continue;
        int lo = 1, hi = 1 << 20;
        while (lo < hi) {
            int mid = lo + (hi - lo) / 2;
            bool ok = true;
            for (auto& l : p.lines)
                if (!in_sigma(l.formula, t, mid)) {
                    ok = false;
                    break;
                }
            if (ok)
                hi = mid;
            else
                lo = mid + 1;
        }
        v.depth = t;
        v.bottom_fanin = lo;
        break;
    }
    v.accepted = true;
    return v;
}

namespace {

// Proof under construction with line dedup (proofs are DAGs: identical
// formulas share a line).
struct ProofBuilder {
    FregeProof proof;
    std::map<Formula, size_t> index;

    size_t emit(Formula f, FregeJustification rule) {
        auto it = index.find(f);
        if (it != index.end()) return it->second;
        proof.lines.push_back({f, std::move(rule)});
        index.emplace(std::move(f), proof.lines.size() - 1);
        return proof.lines.size() - 1;
    }

    size_t axiom(const Formula& a) {
        return emit(Formula::lor({a, a.complement()}), frege_rule::Axiom{a});
    }

    size_t weaken_to(size_t from, const Formula& target) {
        if (proof.lines[from].formula == target) return from;
        return emit(target, frege_rule::Weakening{from});
    }

    // dedup can leave the conclusion in the middle of the line list; force
    // it to the end (a self-weakening when already derived earlier)
    void finalize(size_t line, const Formula& target) {
        size_t at = weaken_to(line, target);
        if (at != proof.lines.size() - 1)
            proof.lines.push_back({target, frege_rule::Weakening{at}});
    }

    // cut with automatic tight-conclusion computation; weakens to `target`
    // if the caller wants a specific superset.
    size_t cut(size_t from_c, size_t from_d, const Formula& pivot) {
        DisjunctSet p1 = disjunct_set(proof.lines[from_c].formula);
        DisjunctSet p2 = disjunct_set(proof.lines[from_d].formula);
        DisjunctSet c = minus(p1, disjunct_set(pivot));
        DisjunctSet d = minus(p2, disjunct_set(pivot.complement()));
        c.insert(d.begin(), d.end());
        return emit(from_set(c), frege_rule::Cut{from_c, from_d, pivot});
    }

    size_t and_intro(size_t from_c, size_t from_d, const Formula& a, const Formula& b) {
        DisjunctSet p1 = disjunct_set(proof.lines[from_c].formula);
        DisjunctSet p2 = disjunct_set(proof.lines[from_d].formula);
        DisjunctSet c = minus(p1, disjunct_set(a));
        DisjunctSet d = minus(p2, disjunct_set(b));
        c.insert(d.begin(), d.end());
        Formula conj = Formula::land({a, b});
        auto dc = disjunct_set(conj);
        c.insert(dc.begin(), dc.end());
        if (conj.is_true()) c.insert(conj);
        return emit(from_set(c), frege_rule::AndIntro{from_c, from_d, a, b});
    }
};

Formula selector_clause(const std::vector<uint32_t>& vars, uint64_t b) {
    // S_b = OR_i X_i^{(1-b_i)}
    std::vector<Formula> lits;
    for (size_t i = 0; i < vars.size(); ++i) {
        bool bit = (b >> i) & 1;
        lits.push_back(bit ? Formula::neg(vars[i]) : Formula::pos(vars[i]));
    }
    return Formula::lor(std::move(lits));
}

// cut-free proof of S_b | B for an assignment b satisfying B, by
// induction on the structure of B.
size_t prove_selected(ProofBuilder& pb, const std::vector<uint32_t>& vars, uint64_t b,
                      const Formula& sb, const Formula& B) {
    Formula target = Formula::lor({sb, B});
    if (B.is_true()) return pb.weaken_to(pb.axiom(Formula::t()), target);
    if (B.is_lit()) {
        size_t ax = pb.axiom(Formula::lit(B.literal()));
        return pb.weaken_to(ax, target);
    }
    if (B.is_or()) {
        std::map<uint32_t, bool> asg;
        for (size_t i = 0; i < vars.size(); ++i) asg[vars[i]] = (b >> i) & 1;
        for (auto& c : B.children()) {
            if (c.eval(asg)) {
                size_t sub = prove_selected(pb, vars, b, sb, c);
                return pb.weaken_to(sub, target);
            }
        }
        fail("internal", "prove_selected: no satisfied disjunct");
    }
    if (B.is_and()) {
        const auto& cs = B.children();
        size_t cur = prove_selected(pb, vars, b, sb, cs[0]);
        Formula acc = cs[0];
        for (size_t i = 1; i < cs.size(); ++i) {
            size_t nxt = prove_selected(pb, vars, b, sb, cs[i]);
            size_t line = pb.and_intro(cur, nxt, acc, cs[i]);
            acc = Formula::land({acc, cs[i]});
            cur = pb.weaken_to(line, Formula::lor({sb, acc}));
        }
        return cur;
    }
    fail("internal", "prove_selected on constant 0");
}

}  // namespace

uint64_t complete_frege_size_bound(uint64_t n, uint64_t s, uint64_t m, uint64_t t,
                                   uint64_t isum) {
    uint64_t line_size = n + (m + 1) * s + 2;
    uint64_t leaf = ((uint64_t)1 << n) * (1 + isum) * (2 * s + 2) * (n + s + 2);
    uint64_t chain = t * ((uint64_t)1 << (n + 1)) * line_size;
    uint64_t comb = t * (isum + m + 1) * line_size;
    return 4 * (leaf + chain + comb);
}

FregeProof complete_frege(const std::vector<Formula>& hyps_in, const Formula& goal_in,
                          size_t var_limit) {
    std::vector<Formula> hyps;
    for (auto& h : hyps_in) hyps.push_back(normalize(h));
    Formula goal = normalize(goal_in);

    std::set<uint32_t> varset;
    for (auto& h : hyps)
        for (uint32_t v : h.var_ids()) varset.insert(v);
    for (uint32_t v : goal.var_ids()) varset.insert(v);
    std::vector<uint32_t> vars(varset.begin(), varset.end());
    size_t n = vars.size();
    if (n > var_limit)
        fail("size_limit", "complete_frege limited to " + std::to_string(var_limit) + " variables");

    // premise: goal follows from hyps (truth-table)
    for (uint64_t b = 0; b < (uint64_t(1) << n); ++b) {
        std::map<uint32_t, bool> asg;
        for (size_t i = 0; i < n; ++i) asg[vars[i]] = (b >> i) & 1;
        bool all = true;
        for (auto& h : hyps)
            if (!h.eval(asg)) {
                all = false;
                break;
            }
        if (all && !goal.eval(asg)) fail("not_a_consequence", "goal fails under a model of the hypotheses");
    }

    ProofBuilder pb;

    // degenerate shortcut: a false hypothesis yields everything
    for (size_t j = 0; j < hyps.size(); ++j) {
        if (hyps[j].is_false()) {
            size_t h = pb.emit(hyps[j], frege_rule::Hypothesis{j});
            pb.finalize(h, goal);
            return pb.proof;
        }
    }
    // a true goal is an axiom instance
    if (goal.is_true()) {
        pb.axiom(Formula::t());
        return pb.proof;
    }

    size_t m = hyps.size();
    std::vector<std::vector<Formula>> parts(m);  // I_j
    for (size_t j = 0; j < m; ++j) {
        parts[j] = hyps[j].disjuncts();
        if (parts[j].empty()) fail("internal", "false hypothesis not shortcut");
    }
    uint64_t tuples = 1;
    for (auto& I : parts) {
        tuples *= I.size();
        if (tuples > 200000) fail("size_limit", "complete_frege tuple count too large");
    }

    // choose, per falsifying assignment, the smallest falsified hypothesis
    std::vector<int> chosen(uint64_t(1) << n, -1);
    for (uint64_t b = 0; b < (uint64_t(1) << n); ++b) {
        std::map<uint32_t, bool> asg;
        for (size_t i = 0; i < n; ++i) asg[vars[i]] = (b >> i) & 1;
        if (goal.eval(asg)) continue;
        for (size_t j = 0; j < m; ++j)
            if (!hyps[j].eval(asg)) {
                chosen[b] = int(j);
                break;
            }
        if (chosen[b] < 0) fail("internal", "falsifying assignment with all hypotheses true");
    }

    // leaf proofs, shared across tuples
    // key: (assignment, which formula G) — G is goal or complement(A_{j,k})
    std::map<std::pair<uint64_t, Formula>, size_t> leaf;
    auto leaf_for = [&](uint64_t b, const Formula& g) {
        auto key = std::make_pair(b, g);
        auto it = leaf.find(key);
        if (it != leaf.end()) return it->second;
        Formula sb = selector_clause(vars, b);
        size_t line = prove_selected(pb, vars, b, sb, g);
        leaf.emplace(key, line);
        return line;
    };

    // enumerate tuples
    std::vector<size_t> idx(m, 0);
    std::vector<size_t> tuple_conclusions;
    for (uint64_t ti = 0; ti < tuples; ++ti) {
        // D_tau = goal | OR_j ~A_{j,k_j}
        std::vector<Formula> dparts = {goal};
        for (size_t j = 0; j < m; ++j) dparts.push_back(parts[j][idx[j]].complement());
        Formula dtau = Formula::lor(dparts);

        // binary cut tree over assignments: level i holds S_p | D_tau for
        // prefixes p of length i
        std::vector<size_t> level(uint64_t(1) << n);
        for (uint64_t b = 0; b < (uint64_t(1) << n); ++b) {
            std::map<uint32_t, bool> asg;
            for (size_t i = 0; i < n; ++i) asg[vars[i]] = (b >> i) & 1;
            Formula g = goal.eval(asg) ? goal : parts[chosen[b]][idx[chosen[b]]].complement();
            size_t l = leaf_for(b, g);
            // weaken S_b | g  to  S_b | D_tau
            Formula sb = selector_clause(vars, b);
            level[b] = pb.weaken_to(l, Formula::lor({sb, dtau}));
        }
        for (size_t i = n; i-- > 0;) {
            std::vector<size_t> next(uint64_t(1) << i);
            for (uint64_t p = 0; p < (uint64_t(1) << i); ++p) {
                // prefix p on vars[0..i-1]; children p|0 (bit i = 0) and p|1
                uint64_t b0 = p;                       // bit i = 0
                uint64_t b1 = p | (uint64_t(1) << i);  // bit i = 1
                // S_{p,0} contains X_i (positive), S_{p,1} contains ~X_i
                size_t cutline = pb.cut(level[b0], level[b1], Formula::pos(vars[i]));
                Formula sp = selector_clause(std::vector<uint32_t>(vars.begin(), vars.begin() + i), p);
                next[p] = pb.weaken_to(cutline, Formula::lor({sp, dtau}));
            }
            level = std::move(next);
        }
        tuple_conclusions.push_back(level[0]);

        // advance tuple index
        for (size_t j = 0; j < m; ++j) {
            if (++idx[j] < parts[j].size()) break;
            idx[j] = 0;
        }
    }

    // combination phase: eliminate hypothesis j by cutting each A_{j,k}
    // against the conclusions. current is indexed by the mixed-radix tuple
    // (k_j, ..., k_{m-1}) with k_j least significant; tuple_conclusions
    // came out with k_0 least significant, matching phase j = 0.
    std::vector<size_t> current = std::move(tuple_conclusions);
    for (size_t j = 0; j < m; ++j) {
        uint64_t outer = 1;
        for (size_t j2 = j + 1; j2 < m; ++j2) outer *= parts[j2].size();
        std::vector<size_t> next(outer);
        for (uint64_t o = 0; o < outer; ++o) {
            size_t acc_line = pb.emit(hyps[j], frege_rule::Hypothesis{j});
            for (size_t k = 0; k < parts[j].size(); ++k) {
                size_t dline = current[k + o * parts[j].size()];
                // earlier cuts may have stripped pieces of the pivot's
                // complement from the conclusion; restore them first
                DisjunctSet need = disjunct_set(parts[j][k].complement());
                DisjunctSet have = disjunct_set(pb.proof.lines[dline].formula);
                if (!subset(need, have)) {
                    have.insert(need.begin(), need.end());
                    dline = pb.weaken_to(dline, from_set(have));
                }
                acc_line = pb.cut(acc_line, dline, parts[j][k]);
            }
            next[o] = acc_line;
        }
        current = std::move(next);
    }
    // the survivor proves goal (possibly with redundant disjuncts removed
    // by cuts); weaken to the literal goal
    pb.finalize(current[0], goal);
    return pb.proof;
}

}  // namespace cspforge
