#include "cspforge/resolution.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace cspforge {

size_t ResolutionProof::width() const {
    size_t w = 0;
    for (auto& l : lines) w = std::max(w, l.clause.width());
    return w;
}

uint64_t ResolutionProof::size_metric() const {
    uint64_t s = 0;
    for (auto& l : lines) s += l.clause.width();
    return s;
}

ResolutionVerdict check_resolution(const ResolutionProof& p, const CnfInstance& cnf) {
    return check_resolution(p, cnf.clauses);
}

ResolutionVerdict check_resolution(const ResolutionProof& p, const std::vector<LitClause>& hyps) {
    ResolutionVerdict v;
    v.length = p.lines.size();
    for (size_t i = 0; i < p.lines.size(); ++i) {
        const auto& line = p.lines[i];
        v.width = std::max(v.width, line.clause.width());
        v.size += line.clause.width();
        auto reject = [&](const std::string& why) {
            v.accepted = false;
            v.bad_line = i;
            v.reason = why;
            return v;
        };
        if (auto* hy = std::get_if<res_rule::Hypothesis>(&line.rule)) {
            if (hy->index >= hyps.size()) return reject("hypothesis index out of range");
            if (!(line.clause == hyps[hy->index])) return reject("hypothesis clause mismatch");
        } else if (auto* rs = std::get_if<res_rule::Resolve>(&line.rule)) {
            if (rs->from_pos >= i || rs->from_neg >= i) return reject("premise index not backward");
            const LitClause& cp = p.lines[rs->from_pos].clause;
            const LitClause& cn = p.lines[rs->from_neg].clause;
            Var pos = mk_var(rs->pivot), neg = mk_twin(rs->pivot);
            if (!cp.contains(pos)) return reject("first premise lacks positive pivot");
            if (!cn.contains(neg)) return reject("second premise lacks negated pivot");
            LitClause expect;
            for (auto& l : cp.lits)
                if (!(l == pos)) expect.lits.insert(l);
            for (auto& l : cn.lits)
                if (!(l == neg)) expect.lits.insert(l);
            if (!(line.clause == expect)) return reject("resolvent mismatch");
        } else if (auto* wk = std::get_if<res_rule::Weaken>(&line.rule)) {
            if (wk->from >= i) return reject("premise index not backward");
            if (!p.lines[wk->from].clause.subsumes(line.clause))
                return reject("weakening does not extend premise");
        }
    }
    v.accepted = true;
    v.is_refutation = p.is_refutation();
    return v;
}

namespace {

struct Derived {
    LitClause clause;
    ResJustification how;  // indices refer to the kept list
    bool active = true;
};

}  // namespace

std::optional<ResolutionProof> search_resolution_width(const CnfInstance& cnf, size_t k) {
    for (auto& c : cnf.clauses)
        if (c.width() > k)
            fail("width", "initial clause exceeds width bound " + std::to_string(k));

    std::vector<Derived> kept;
    std::map<LitClause, size_t> seen;
    std::deque<size_t> queue;
    // literal -> active clause indices containing it
    std::map<Var, std::vector<size_t>> occurs;
    std::optional<size_t> empty_idx;

    auto add = [&](LitClause c, ResJustification how) -> void {
        if (c.tautological() || c.width() > k) return;
        auto it = seen.find(c);
        if (it != seen.end()) return;
        if (!c.empty()) {
            // forward subsumption: a nonempty subsumer S satisfies S ⊆ c,
            // so S shows up in occurs[l] for each of its literals l ∈ c;
            // the union of c's occurrence lists covers all candidates
            for (auto& l : c.lits) {
                auto oc = occurs.find(l);
                if (oc == occurs.end()) continue;
                for (size_t j : oc->second)
                    if (kept[j].active && kept[j].clause.subsumes(c)) return;
            }
            // backward subsumption: a clause subsumed by c contains every
            // literal of c, so one occurrence list (the shortest) covers all
            const std::vector<size_t>* shortest = nullptr;
            for (auto& l : c.lits) {
                auto oc = occurs.find(l);
                if (oc == occurs.end()) {
                    shortest = nullptr;
                    break;
                }
                if (!shortest || oc->second.size() < shortest->size()) shortest = &oc->second;
            }
            if (shortest)
                for (size_t j : *shortest)
                    if (kept[j].active && c.subsumes(kept[j].clause)) kept[j].active = false;
        }
        size_t idx = kept.size();
        kept.push_back({c, std::move(how), true});
        seen.emplace(std::move(c), idx);
        for (auto& l : kept[idx].clause.lits) occurs[l].push_back(idx);
        queue.push_back(idx);
        if (kept[idx].clause.empty()) empty_idx = idx;
    };

    for (size_t i = 0; i < cnf.clauses.size() && !empty_idx; ++i)
        add(cnf.clauses[i], res_rule::Hypothesis{i});

    while (!queue.empty() && !empty_idx) {
        size_t ci = queue.front();
        queue.pop_front();
        if (!kept[ci].active) continue;
        LitClause c = kept[ci].clause;  // copy: kept may reallocate
        for (auto& l : c.lits) {
            auto it = occurs.find(l.partner());
            if (it == occurs.end()) continue;
            std::vector<size_t> partners = it->second;  // copy: occurs mutates
            for (size_t dj : partners) {
                if (!kept[dj].active) continue;
                const LitClause& d = kept[dj].clause;
                LitClause res;
                for (auto& x : c.lits)
                    if (!(x == l)) res.lits.insert(x);
                for (auto& x : d.lits)
                    if (!(x == l.partner())) res.lits.insert(x);
                size_t pos_line = l.twin ? dj : ci;
                size_t neg_line = l.twin ? ci : dj;
                add(std::move(res), res_rule::Resolve{pos_line, neg_line, l.id});
                if (empty_idx) break;
            }
            if (empty_idx) break;
        }
    }

    if (!empty_idx) return std::nullopt;

    // reconstruct: topological emit of the empty clause's ancestors
    std::vector<std::optional<size_t>> line_of(kept.size());
    ResolutionProof proof;
    std::vector<size_t> stack = {*empty_idx};
    // iterative DFS with post-order emission
    std::vector<std::pair<size_t, bool>> work = {{*empty_idx, false}};
    while (!work.empty()) {
        auto [idx, expanded] = work.back();
        work.pop_back();
        if (line_of[idx]) continue;
        if (auto* rs = std::get_if<res_rule::Resolve>(&kept[idx].how)) {
            if (!expanded) {
                work.push_back({idx, true});
                work.push_back({rs->from_pos, false});
                work.push_back({rs->from_neg, false});
                continue;
            }
            proof.lines.push_back(
                {kept[idx].clause,
                 res_rule::Resolve{*line_of[rs->from_pos], *line_of[rs->from_neg], rs->pivot}});
        } else {
            proof.lines.push_back({kept[idx].clause, kept[idx].how});
        }
        line_of[idx] = proof.lines.size() - 1;
    }
    return proof;
}

}  // namespace cspforge
