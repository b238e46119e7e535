#include "cspforge/width.hpp"

#include <algorithm>
#include <functional>

namespace cspforge {

namespace {

using PartialMap = std::map<ElemId, ElemId>;

// partial map f is a partial homomorphism: every tuple fully inside
// dom(f) maps into the target relation
bool is_partial_hom(const PartialMap& f, const RelStructure& a, const RelStructure& b) {
    for (auto& [name, tuples] : a.relations()) {
        const auto& target = b.relation(name);
        for (auto& t : tuples) {
            Tuple img(t.size());
            bool complete = true;
            for (size_t i = 0; i < t.size(); ++i) {
                auto it = f.find(t[i]);
                if (it == f.end()) {
                    complete = false;
                    break;
                }
                img[i] = it->second;
            }
            if (complete && !target.count(img)) return false;
        }
    }
    return true;
}

}  // namespace

GameVerdict spoiler_wins(const RelStructure& a, const RelStructure& b, int k) {
    if (!(a.vocab() == b.vocab()))
        fail("vocabulary_mismatch", "game on structures over different vocabularies");
    if (k < 1) fail("domain_error", "pebble count must be >= 1");

    // enumerate all partial homomorphisms with <= k-element domains
    std::vector<PartialMap> family;
    std::map<PartialMap, size_t> index;
    {
        std::vector<ElemId> dom = a.domain();
        std::function<void(size_t, PartialMap&)> rec = [&](size_t pos, PartialMap& cur) {
            if (int(cur.size()) > k) return;
            if (is_partial_hom(cur, a, b)) {
                if (!index.count(cur)) {
                    index[cur] = family.size();
                    family.push_back(cur);
                }
            } else {
                return;  // supersets cannot recover
            }
            for (size_t i = pos; i < dom.size(); ++i) {
                if (int(cur.size()) == k) break;
                for (ElemId v : b.domain()) {
                    cur[dom[i]] = v;
                    rec(i + 1, cur);
                    cur.erase(dom[i]);
                }
            }
        };
        PartialMap cur;
        rec(0, cur);
    }

    // greatest fixpoint: drop maps lacking the extension property or with a
    // dropped restriction
    std::vector<bool> alive(family.size(), true);
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < family.size(); ++i) {
            if (!alive[i]) continue;
            const PartialMap& f = family[i];
            bool ok = true;
            // restrictions by removing one point must be alive
            for (auto& [x, y] : f) {
                PartialMap g = f;
                g.erase(x);
                auto it = index.find(g);
                if (it == index.end() || !alive[it->second]) {
                    ok = false;
                    break;
                }
            }
            // forth property: every element extendable while pebbles remain
            if (ok && int(f.size()) < k) {
                for (ElemId x : a.domain()) {
                    if (f.count(x)) continue;
                    bool ext = false;
                    for (ElemId v : b.domain()) {
                        PartialMap g = f;
                        g[x] = v;
                        auto it = index.find(g);
                        if (it != index.end() && alive[it->second]) {
                            ext = true;
                            break;
                        }
                    }
                    if (!ext) {
                        ok = false;
                        break;
                    }
                }
            }
            if (!ok) {
                alive[i] = false;
                changed = true;
            }
        }
    }

    GameVerdict v;
    v.k = k;
    for (size_t i = 0; i < family.size(); ++i)
        if (alive[i]) v.witness.push_back(family[i]);
    v.winner = v.witness.empty() ? Winner::Spoiler : Winner::Duplicator;
    return v;
}

RelStructure sq_template(int q) {
    if (q < 1) fail("domain_error", "q must be >= 1");
    Vocabulary voc;
    for (int i = 0; i <= q; ++i) voc.add("R" + std::to_string(i), q);
    RelStructure s(voc, {0, 1});
    for (int i = 0; i <= q; ++i) {
        Tuple excluded(q);
        for (int j = 0; j < q; ++j) excluded[j] = (j < i) ? 1 : 0;
        // all q-tuples over {0,1} except the excluded one
        for (uint64_t mask = 0; mask < (uint64_t(1) << q); ++mask) {
            Tuple t(q);
            for (int j = 0; j < q; ++j) t[j] = int((mask >> j) & 1);
            if (t != excluded) s.add_tuple("R" + std::to_string(i), t);
        }
    }
    return s;
}

RelStructure cnf_to_structure(const CnfInstance& f, int q) {
    for (auto& c : f.clauses) {
        if (int(c.width()) > q) fail("width_exceeded", "clause wider than q");
        if (c.empty()) fail("width_exceeded", "empty clause has no structure encoding");
    }
    Vocabulary voc;
    for (int i = 0; i <= q; ++i) voc.add("R" + std::to_string(i), q);
    std::vector<ElemId> dom;
    for (size_t i = 0; i < f.vars.size(); ++i) dom.push_back(ElemId(i));
    RelStructure s(voc, dom);
    for (auto& c : f.clauses) {
        // negated literals first, then positives; pad by repeating the last
        // literal of its polarity block
        std::vector<ElemId> neg, pos;
        for (auto& l : c.lits) (l.twin ? neg : pos).push_back(ElemId(l.id));
        int i = int(neg.size());
        Tuple t;
        t.insert(t.end(), neg.begin(), neg.end());
        t.insert(t.end(), pos.begin(), pos.end());
        // pad: repeat a positive literal if any (keeps the clause shape),
        // else repeat the last negated literal and bump i
        while (int(t.size()) < q) {
            if (!pos.empty()) {
                t.push_back(pos.back());
            } else {
                t.insert(t.begin(), neg.back());
                ++i;
            }
        }
        s.add_tuple("R" + std::to_string(i), t);
    }
    return s;
}

std::optional<ResolutionProof> width_upper_via_game(const RelStructure& a, const RelStructure& b,
                                                    int k) {
    int r = 0;
    for (auto& [name, arity] : a.vocab().symbols()) r = std::max(r, arity);
    if (k < int(b.size()) || k < r)
        fail("domain_error", "width_upper_via_game needs k >= |B| and k >= max arity");
    auto game = spoiler_wins(a, b, k + 2);
    if (game.winner != Winner::Spoiler) return std::nullopt;
    auto proof = search_resolution_width(encode_cnf(a, b), size_t(k) + b.size());
    if (!proof)
        fail("inconsistency",
             "Spoiler wins the (k+2)-game but no width-(k+|B|) refutation was found");
    return proof;
}

bool game_lower_via_width(const RelStructure& a, const RelStructure& b, int k) {
    int r = 0;
    for (auto& [name, arity] : a.vocab().symbols()) r = std::max(r, arity);
    if (k < int(b.size()) || k < r)
        fail("domain_error", "game_lower_via_width needs k >= |B| and k >= max arity");
    auto game = spoiler_wins(a, b, k + 2);
    if (game.winner != Winner::Duplicator) return false;
    auto proof = search_resolution_width(encode_cnf(a, b), size_t(k) + 1);
    if (proof)
        fail("inconsistency", "Duplicator wins the (k+2)-game yet a width-(k+1) refutation exists");
    return true;
}

}  // namespace cspforge
