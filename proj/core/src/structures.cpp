#include "cspforge/structures.hpp"

#include <algorithm>

namespace cspforge {

Vocabulary::Vocabulary(std::initializer_list<std::pair<std::string, int>> syms) {
    for (auto& [n, a] : syms) add(n, a);
}

void Vocabulary::add(const std::string& name, int arity) {
    if (arity < 1) fail("vocabulary", "relation symbol arity must be >= 1: " + name);
    auto [it, fresh] = symbols_.emplace(name, arity);
    if (!fresh && it->second != arity)
        fail("vocabulary", "symbol " + name + " redeclared with different arity");
}

int Vocabulary::arity(const std::string& name) const {
    auto it = symbols_.find(name);
    if (it == symbols_.end()) fail("vocabulary", "unknown symbol " + name);
    return it->second;
}

RelStructure::RelStructure(Vocabulary vocab, std::vector<ElemId> domain)
    : vocab_(std::move(vocab)), domain_(std::move(domain)) {
    for (size_t i = 0; i < domain_.size(); ++i) {
        if (!index_.emplace(domain_[i], int(i)).second)
            fail("structure", "duplicate domain element");
    }
    for (auto& [name, arity] : vocab_.symbols()) relations_[name];
}

bool RelStructure::has_element(ElemId e) const { return index_.count(e) > 0; }

int RelStructure::index_of(ElemId e) const {
    auto it = index_.find(e);
    if (it == index_.end()) fail("structure", "element not in domain");
    return it->second;
}

void RelStructure::add_tuple(const std::string& rel, const Tuple& t) {
    if (!vocab_.has(rel)) fail("vocabulary", "unknown symbol " + rel);
    if (int(t.size()) != vocab_.arity(rel)) fail("structure", "tuple arity mismatch for " + rel);
    for (ElemId e : t)
        if (!has_element(e)) fail("structure", "tuple entry outside domain in " + rel);
    relations_[rel].insert(t);
}

const std::set<Tuple>& RelStructure::relation(const std::string& rel) const {
    auto it = relations_.find(rel);
    if (it == relations_.end()) fail("vocabulary", "unknown symbol " + rel);
    return it->second;
}

void RelStructure::validate() const {
    for (auto& [name, tuples] : relations_) {
        int a = vocab_.arity(name);
        for (auto& t : tuples) {
            if (int(t.size()) != a) fail("structure", "tuple arity mismatch for " + name);
            for (ElemId e : t)
                if (!has_element(e)) fail("structure", "tuple entry outside domain in " + name);
        }
    }
}

RelStructure RelStructure::induced(const std::vector<ElemId>& sub) const {
    RelStructure r(vocab_, sub);
    for (auto& [name, tuples] : relations_) {
        for (auto& t : tuples) {
            bool inside = std::all_of(t.begin(), t.end(), [&](ElemId e) { return r.has_element(e); });
            if (inside) r.add_tuple(name, t);
        }
    }
    return r;
}

bool RelStructure::operator==(const RelStructure& o) const {
    return vocab_ == o.vocab_ && domain_ == o.domain_ && relations_ == o.relations_;
}

bool is_homomorphism(const Homomorphism& h, const RelStructure& a, const RelStructure& b) {
    if (!(a.vocab() == b.vocab())) fail("vocabulary_mismatch", "structures over different vocabularies");
    for (ElemId e : a.domain()) {
        auto it = h.map.find(e);
        if (it == h.map.end()) fail("domain_error", "homomorphism not total");
        if (!b.has_element(it->second)) fail("domain_error", "image outside codomain");
    }
    for (auto& [name, tuples] : a.relations()) {
        const auto& target = b.relation(name);
        for (auto& t : tuples) {
            Tuple img(t.size());
            for (size_t i = 0; i < t.size(); ++i) img[i] = h.map.at(t[i]);
            if (!target.count(img)) return false;
        }
    }
    return true;
}

namespace {

// Backtracking over domain(a) in order; prunes as soon as a fully-mapped
// tuple leaves its target relation.
struct HomSearch {
    const RelStructure& a;
    const RelStructure& b;
    std::vector<ElemId> order;
    std::map<ElemId, ElemId> partial;
    // tuples indexed by the position (in `order`) of their last-assigned element
    std::map<ElemId, std::vector<std::pair<std::string, const Tuple*>>> checks;
    bool enumerate_all = false;
    std::vector<Homomorphism> found;

    HomSearch(const RelStructure& a_, const RelStructure& b_) : a(a_), b(b_) {
        order = a.domain();
        std::map<ElemId, int> pos;
        for (size_t i = 0; i < order.size(); ++i) pos[order[i]] = int(i);
        for (auto& [name, tuples] : a.relations()) {
            for (auto& t : tuples) {
                int last = -1;
                ElemId last_e = 0;
                for (ElemId e : t) {
                    if (pos[e] > last) {
                        last = pos[e];
                        last_e = e;
                    }
                }
                if (!t.empty()) checks[last_e].push_back({name, &t});
            }
        }
    }

    bool consistent(ElemId just_assigned) {
        auto it = checks.find(just_assigned);
        if (it == checks.end()) return true;
        for (auto& [name, t] : it->second) {
            Tuple img(t->size());
            bool complete = true;
            for (size_t i = 0; i < t->size(); ++i) {
                auto p = partial.find((*t)[i]);
                if (p == partial.end()) {
                    complete = false;
                    break;
                }
                img[i] = p->second;
            }
            if (complete && !b.relation(name).count(img)) return false;
        }
        return true;
    }

    bool run(size_t pos) {
        if (pos == order.size()) {
            found.push_back(Homomorphism{partial});
            return !enumerate_all;
        }
        ElemId e = order[pos];
        for (ElemId v : b.domain()) {
            partial[e] = v;
            if (consistent(e)) {
                if (run(pos + 1)) return true;
            }
            partial.erase(e);
        }
        return false;
    }
};

}  // namespace

std::optional<Homomorphism> find_homomorphism(const RelStructure& a, const RelStructure& b) {
    if (!(a.vocab() == b.vocab())) fail("vocabulary_mismatch", "structures over different vocabularies");
    HomSearch s(a, b);
    s.run(0);
    if (s.found.empty()) return std::nullopt;
    return s.found.front();
}

std::vector<Homomorphism> all_homomorphisms(const RelStructure& a, const RelStructure& b) {
    if (!(a.vocab() == b.vocab())) fail("vocabulary_mismatch", "structures over different vocabularies");
    HomSearch s(a, b);
    s.enumerate_all = true;
    s.run(0);
    return s.found;
}

CoreResult find_core(const RelStructure& b, size_t size_limit) {
    if (b.size() > size_limit)
        fail("size_limit", "find_core limited to " + std::to_string(size_limit) + " elements");
    size_t n = b.size();
    const auto& dom = b.domain();
    // Try candidate subsets by ascending size; the smallest retract is a
    // core: a non-surjective endomorphism of it would retract b further.
    for (size_t sz = 1; sz <= n; ++sz) {
        std::vector<bool> pick(n, false);
        std::fill(pick.end() - sz, pick.end(), true);
        do {
            std::vector<ElemId> sub;
            for (size_t i = 0; i < n; ++i)
                if (pick[i]) sub.push_back(dom[i]);
            RelStructure cand = b.induced(sub);
            auto retraction = find_homomorphism(b, cand);
            if (!retraction) continue;
            Homomorphism inclusion;
            for (ElemId e : sub) inclusion.map[e] = e;
            if (!is_homomorphism(inclusion, cand, b)) continue;  // always true for induced
            return CoreResult{cand, *retraction, inclusion};
        } while (std::next_permutation(pick.begin(), pick.end()));
    }
    fail("internal", "find_core: identity retraction missing");
}

std::string constant_symbol_name(ElemId e) { return "R_" + std::to_string(e); }

RelStructure expand_with_constants(const RelStructure& b) {
    Vocabulary v = b.vocab();
    std::map<ElemId, std::string> names;
    for (ElemId e : b.domain()) {
        std::string name = constant_symbol_name(e);
        while (v.has(name)) name += "'";  // fresh even if caller already used R_<id>
        v.add(name, 1);
        names[e] = name;
    }
    RelStructure r(v, b.domain());
    for (auto& [name, tuples] : b.relations())
        for (auto& t : tuples) r.add_tuple(name, t);
    for (ElemId e : b.domain()) r.add_tuple(names[e], {e});
    return r;
}

RelStructure clique(int k) {
    Vocabulary v{{"E", 2}};
    std::vector<ElemId> dom(k);
    for (int i = 0; i < k; ++i) dom[i] = i;
    RelStructure r(v, dom);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (i != j) r.add_tuple("E", {i, j});
    return r;
}

RelStructure cycle(int n) {
    Vocabulary v{{"E", 2}};
    std::vector<ElemId> dom(n);
    for (int i = 0; i < n; ++i) dom[i] = i;
    RelStructure r(v, dom);
    for (int i = 0; i < n; ++i) {
        int j = (i + 1) % n;
        r.add_tuple("E", {i, j});
        r.add_tuple("E", {j, i});
    }
    return r;
}

RelStructure one_element_empty() {
    return RelStructure(Vocabulary{}, {0});
}

}  // namespace cspforge
