#include "cspforge/reductions.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace cspforge {

// ---------------------------------------------------------------------------
// pp-formulas

PpFormula PpFormula::atom(std::string rel, std::vector<int> args) {
    PpFormula f;
    f.kind = Kind::Atom;
    f.rel = std::move(rel);
    f.args = std::move(args);
    return f;
}

PpFormula PpFormula::eq(int lhs, int rhs) {
    PpFormula f;
    f.kind = Kind::EqAtom;
    f.lhs = lhs;
    f.rhs = rhs;
    return f;
}

PpFormula PpFormula::conj(std::vector<PpFormula> children) {
    if (children.empty()) fail("pp", "empty conjunction");
    if (children.size() == 1) return children[0];
    PpFormula f;
    f.kind = Kind::And;
    f.children = std::move(children);
    return f;
}

PpFormula PpFormula::exists(int var, PpFormula body) {
    PpFormula f;
    f.kind = Kind::Exists;
    f.bound = var;
    f.children.push_back(std::move(body));
    return f;
}

std::set<int> PpFormula::variables() const {
    std::set<int> out;
    switch (kind) {
        case Kind::Atom:
            out.insert(args.begin(), args.end());
            break;
        case Kind::EqAtom:
            out.insert(lhs);
            out.insert(rhs);
            break;
        case Kind::And:
        case Kind::Exists:
            for (auto& c : children) {
                auto s = c.variables();
                out.insert(s.begin(), s.end());
            }
            if (kind == Kind::Exists) out.insert(bound);
            break;
    }
    return out;
}

std::set<int> PpFormula::free_variables() const {
    std::set<int> out = variables();
    std::function<void(const PpFormula&)> strip = [&](const PpFormula& f) {
        if (f.kind == Kind::Exists) out.erase(f.bound);
        for (auto& c : f.children) strip(c);
    };
    strip(*this);
    return out;
}

bool pp_eval(const PpFormula& f, const RelStructure& b, std::map<int, ElemId>& env) {
    switch (f.kind) {
        case PpFormula::Kind::Atom: {
            Tuple t;
            for (int v : f.args) t.push_back(env.at(v));
            return b.relation(f.rel).count(t) > 0;
        }
        case PpFormula::Kind::EqAtom:
            return env.at(f.lhs) == env.at(f.rhs);
        case PpFormula::Kind::And:
            for (auto& c : f.children)
                if (!pp_eval(c, b, env)) return false;
            return true;
        case PpFormula::Kind::Exists: {
            std::optional<ElemId> old;
            auto saved = env.find(f.bound);
            if (saved != env.end()) old = saved->second;
            bool found = false;
            for (ElemId e : b.domain()) {
                env[f.bound] = e;
                if (pp_eval(f.children[0], b, env)) {
                    found = true;
                    break;
                }
            }
            if (old)
                env[f.bound] = *old;
            else
                env.erase(f.bound);
            return found;
        }
    }
    fail("internal", "bad pp formula kind");
}

std::set<Tuple> pp_relation(const PpFormula& f, const RelStructure& b, int r) {
    std::set<Tuple> out;
    Tuple t(size_t(r), 0);
    std::function<void(int)> rec = [&](int pos) {
        if (pos == r) {
            std::map<int, ElemId> env;
            for (int i = 0; i < r; ++i) env[i] = t[size_t(i)];
            if (pp_eval(f, b, env)) out.insert(t);
            return;
        }
        for (ElemId e : b.domain()) {
            t[size_t(pos)] = e;
            rec(pos + 1);
        }
    };
    rec(0);
    return out;
}

// ---------------------------------------------------------------------------
// shared helpers

namespace {

struct UnionFind {
    std::map<ElemId, ElemId> parent;
    ElemId find(ElemId x) {
        auto it = parent.find(x);
        if (it == parent.end() || it->second == x) return x;
        ElemId r = find(it->second);
        parent[x] = r;
        return r;
    }
    void unite(ElemId a, ElemId b) {
        ElemId ra = find(a), rb = find(b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
};

Tuple project(const Tuple& t, const std::vector<int>& args) {
    Tuple r;
    r.reserve(args.size());
    for (int i : args) r.push_back(t[size_t(i)]);
    return r;
}

bool is_core_structure(const RelStructure& b) {
    for (auto& e : all_homomorphisms(b, b)) {
        std::set<ElemId> image;
        for (auto& [x, y] : e.map) image.insert(y);
        if (image.size() != b.size()) return false;
    }
    return true;
}

template <typename Fn>
void for_bad_tuples_of(const RelStructure& b, const std::string& rel, int arity, Fn&& fn) {
    const auto& good = b.relation(rel);
    Tuple t(size_t(arity), 0);
    std::function<void(int)> rec = [&](int pos) {
        if (pos == arity) {
            if (!good.count(t)) fn(t);
            return;
        }
        for (ElemId v : b.domain()) {
            t[size_t(pos)] = v;
            rec(pos + 1);
        }
    };
    rec(0);
}

RelStructure copy_with_vocab(const Vocabulary& v, const RelStructure& src) {
    RelStructure out(v, src.domain());
    for (auto& [name, tuples] : src.relations())
        for (auto& t : tuples) out.add_tuple(name, t);
    return out;
}

// representatives for the collapse step
struct CollapseData {
    std::vector<Tuple> reps;  // sorted
    std::map<Tuple, ElemId> rep_id;
    std::map<Tuple, Tuple> rep_of_tuple;
};

CollapseData collapse_data(const PpCollapseStep& pc) {
    CollapseData out;
    UnionFind uf;
    std::map<Tuple, ElemId> tid;
    ElemId next = 0;
    for (auto& t : pc.domain_tuples) tid.emplace(t, next++);
    for (auto& [x, y] : pc.equiv_pairs) {
        if (!tid.count(x) || !tid.count(y)) fail("pp", "equivalence pair outside the domain");
        uf.unite(tid.at(x), tid.at(y));
    }
    std::map<ElemId, Tuple> min_of_root;
    for (auto& t : pc.domain_tuples) {
        ElemId r = uf.find(tid.at(t));
        auto it = min_of_root.find(r);
        if (it == min_of_root.end() || t < it->second) min_of_root[r] = t;
    }
    std::set<Tuple> reps;
    for (auto& t : pc.domain_tuples) {
        Tuple rep = min_of_root.at(uf.find(tid.at(t)));
        out.rep_of_tuple[t] = rep;
        reps.insert(rep);
    }
    out.reps.assign(reps.begin(), reps.end());
    for (size_t i = 0; i < out.reps.size(); ++i) out.rep_id[out.reps[i]] = ElemId(i);
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// templates

RelStructure derive_template(const ReductionStep& step) {
    const RelStructure& b = step.base;
    if (auto* eq = std::get_if<EqualityStep>(&step.payload)) {
        if (b.vocab().has(eq->symbol)) fail("vocabulary", "equality symbol already in use");
        Vocabulary v = b.vocab();
        v.add(eq->symbol, 2);
        RelStructure out = copy_with_vocab(v, b);
        for (ElemId e : b.domain()) out.add_tuple(eq->symbol, {e, e});
        return out;
    }
    if (auto* cj = std::get_if<ConjunctionStep>(&step.payload)) {
        Vocabulary v = b.vocab();
        v.add(cj->t_symbol, cj->t_arity);
        RelStructure out = copy_with_vocab(v, b);
        Tuple t(size_t(cj->t_arity), 0);
        std::function<void(int)> rec = [&](int pos) {
            if (pos == cj->t_arity) {
                if (b.relation(cj->s_symbol).count(project(t, cj->s_args)) &&
                    b.relation(cj->p_symbol).count(project(t, cj->p_args)))
                    out.add_tuple(cj->t_symbol, t);
                return;
            }
            for (ElemId e : b.domain()) {
                t[size_t(pos)] = e;
                rec(pos + 1);
            }
        };
        rec(0);
        return out;
    }
    if (auto* ex = std::get_if<ExistentialStep>(&step.payload)) {
        Vocabulary v = b.vocab();
        v.add(ex->t_symbol, ex->t_arity);
        RelStructure out = copy_with_vocab(v, b);
        Tuple t(size_t(ex->t_arity), 0);
        std::function<void(int)> rec = [&](int pos) {
            if (pos == ex->t_arity) {
                for (ElemId w : b.domain()) {
                    Tuple s;
                    for (int idx : ex->s_args)
                        s.push_back(idx == ex->t_arity ? w : t[size_t(idx)]);
                    if (b.relation(ex->s_symbol).count(s)) {
                        out.add_tuple(ex->t_symbol, t);
                        return;
                    }
                }
                return;
            }
            for (ElemId e : b.domain()) {
                t[size_t(pos)] = e;
                rec(pos + 1);
            }
        };
        rec(0);
        return out;
    }
    if (auto* pc = std::get_if<PpCollapseStep>(&step.payload)) {
        auto cd = collapse_data(*pc);
        Vocabulary v;
        for (auto& [name, info] : pc->relations) v.add(name, info.first);
        std::vector<ElemId> dom;
        for (size_t i = 0; i < cd.reps.size(); ++i) dom.push_back(ElemId(i));
        RelStructure out(v, dom);
        int n = pc->power;
        for (auto& [name, info] : pc->relations) {
            auto [r, base_sym] = info;
            for (auto& flat : b.relation(base_sym)) {
                if (int(flat.size()) != r * n) fail("pp", "preimage arity mismatch");
                Tuple mapped;
                bool ok = true;
                for (int j = 0; j < r && ok; ++j) {
                    Tuple part(flat.begin() + j * n, flat.begin() + (j + 1) * n);
                    auto it = cd.rep_of_tuple.find(part);
                    if (it == cd.rep_of_tuple.end())
                        fail("pp", "preimage tuple outside the delta domain");
                    mapped.push_back(cd.rep_id.at(it->second));
                }
                if (ok) out.add_tuple(name, mapped);
            }
        }
        return out;
    }
    if (auto* he = std::get_if<HomEquivalenceStep>(&step.payload)) {
        if (!is_homomorphism(he->to_base, he->b_prime, b) ||
            !is_homomorphism(he->from_base, b, he->b_prime))
            fail("invalid_proof", "homomorphic equivalence witnesses do not verify");
        return he->b_prime;
    }
    if (std::get_if<AddConstantsStep>(&step.payload)) {
        if (!is_core_structure(b)) fail("not_a_core", "adding constants requires a core template");
        return expand_with_constants(b);
    }
    fail("internal", "unknown step payload");
}

// ---------------------------------------------------------------------------
// instances

namespace {

std::map<Tuple, ElemId> existential_witnesses(const ExistentialStep& ex, const RelStructure& a) {
    ElemId next = 0;
    for (ElemId e : a.domain()) next = std::max(next, e + 1);
    std::map<Tuple, ElemId> witness;
    for (auto& t : a.relation(ex.t_symbol)) witness[t] = next++;
    return witness;
}

}  // namespace

RelStructure transform_instance(const ReductionStep& step, const RelStructure& a) {
    const RelStructure& b = step.base;
    RelStructure bp = derive_template(step);
    if (!(a.vocab() == bp.vocab()))
        fail("vocabulary_mismatch", "instance is not over the derived template's vocabulary");

    if (auto* eq = std::get_if<EqualityStep>(&step.payload)) {
        UnionFind uf;
        for (auto& t : a.relation(eq->symbol)) uf.unite(t[0], t[1]);
        std::set<ElemId> reps;
        for (ElemId e : a.domain()) reps.insert(uf.find(e));
        RelStructure out(b.vocab(), {reps.begin(), reps.end()});
        for (auto& [name, tuples] : a.relations()) {
            if (name == eq->symbol) continue;
            for (auto& t : tuples) {
                Tuple m;
                for (ElemId e : t) m.push_back(uf.find(e));
                out.add_tuple(name, m);
            }
        }
        return out;
    }
    if (auto* cj = std::get_if<ConjunctionStep>(&step.payload)) {
        RelStructure out(b.vocab(), a.domain());
        for (auto& [name, tuples] : a.relations()) {
            if (name == cj->t_symbol) continue;
            for (auto& t : tuples) out.add_tuple(name, t);
        }
        for (auto& t : a.relation(cj->t_symbol)) {
            out.add_tuple(cj->s_symbol, project(t, cj->s_args));
            out.add_tuple(cj->p_symbol, project(t, cj->p_args));
        }
        return out;
    }
    if (auto* ex = std::get_if<ExistentialStep>(&step.payload)) {
        auto witness = existential_witnesses(*ex, a);
        std::vector<ElemId> dom = a.domain();
        for (auto& [t, w] : witness) dom.push_back(w);
        RelStructure out(b.vocab(), dom);
        for (auto& [name, tuples] : a.relations()) {
            if (name == ex->t_symbol) continue;
            for (auto& t : tuples) out.add_tuple(name, t);
        }
        for (auto& t : a.relation(ex->t_symbol)) {
            Tuple s;
            for (int idx : ex->s_args)
                s.push_back(idx == ex->t_arity ? witness.at(t) : t[size_t(idx)]);
            out.add_tuple(ex->s_symbol, s);
        }
        return out;
    }
    if (auto* pc = std::get_if<PpCollapseStep>(&step.payload)) {
        int n = pc->power;
        std::vector<ElemId> dom;
        for (int ai = 0; ai < int(a.size()); ++ai)
            for (int i = 0; i < n; ++i) dom.push_back(ElemId(ai * n + i));
        RelStructure out(b.vocab(), dom);
        for (auto& [name, info] : pc->relations) {
            for (auto& t : a.relation(name)) {
                Tuple flat;
                for (ElemId e : t) {
                    int ai = a.index_of(e);
                    for (int i = 0; i < n; ++i) flat.push_back(ElemId(ai * n + i));
                }
                out.add_tuple(info.second, flat);
            }
        }
        return out;
    }
    if (std::get_if<HomEquivalenceStep>(&step.payload)) {
        return copy_with_vocab(b.vocab(), a);
    }
    if (std::get_if<AddConstantsStep>(&step.payload)) {
        ElemId offset = 0;
        for (ElemId e : a.domain()) offset = std::max(offset, e + 1);
        std::vector<ElemId> dom = a.domain();
        std::map<ElemId, ElemId> bmap;
        for (ElemId e : b.domain()) {
            bmap[e] = offset + b.index_of(e);
            dom.push_back(bmap[e]);
        }
        RelStructure out(b.vocab(), dom);
        for (auto& [name, arity] : b.vocab().symbols()) {
            for (auto& t : a.relation(name)) out.add_tuple(name, t);
            for (auto& t : b.relation(name)) {
                Tuple m;
                for (ElemId e : t) m.push_back(bmap.at(e));
                out.add_tuple(name, m);
            }
            for (ElemId be : b.domain()) {
                for (auto& ct : a.relation(constant_symbol_name(be))) {
                    ElemId x = ct[0];
                    for (auto& t : b.relation(name)) {
                        Tuple m;
                        for (ElemId e : t) m.push_back(e == be ? x : bmap.at(e));
                        out.add_tuple(name, m);
                    }
                }
            }
        }
        return out;
    }
    fail("internal", "unknown step payload");
}

// ---------------------------------------------------------------------------
// transfer data

namespace {

Formula block_to_formula(const BlockImage& blk, const CnfInstance& g) {
    std::vector<Formula> terms;
    for (auto& t : blk.tuples) {
        std::vector<Formula> lits;
        for (size_t j = 0; j < blk.elements.size(); ++j) {
            auto id = g.vars.pair_id(blk.elements[j], t[j]);
            if (!id) fail("internal", "block image variable missing");
            lits.push_back(Formula::pos(*id));
        }
        terms.push_back(Formula::land(std::move(lits)));
    }
    return Formula::lor(std::move(terms));
}

}  // namespace

TransferData make_transfer_data(const ReductionStep& step, const RelStructure& a) {
    TransferData td;
    td.a = a;
    td.b = step.base;
    td.b_prime = derive_template(step);
    td.a_prime = transform_instance(step, a);
    td.f_cnf = encode_cnf(td.a_prime, td.b);
    td.g_cnf = encode_cnf(td.a, td.b_prime);
    td.anchor = [](ElemId e) { return std::vector<ElemId>{e}; };

    auto g_lit = [&](ElemId ae, ElemId be) {
        auto id = td.g_cnf.vars.pair_id(ae, be);
        if (!id) fail("internal", "missing G variable");
        return Formula::pos(*id);
    };
    auto identity_images = [&](std::function<std::optional<Formula>(const EncodingVariable&)> f) {
        for (size_t i = 0; i < td.f_cnf.vars.size(); ++i) {
            auto p = td.f_cnf.vars.pair(uint32_t(i));
            auto img = f(*p);
            td.prop.images[uint32_t(i)] = img ? *img : g_lit(p->element, p->value);
        }
    };
    auto set_block = [&](uint32_t fv, BlockImage blk) {
        td.prop.images[fv] = block_to_formula(blk, td.g_cnf);
        td.prop.d = std::max(td.prop.d, int(blk.elements.size()));
        td.prop.m = std::max(td.prop.m, int(blk.tuples.size()));
        td.blocks[fv] = std::move(blk);
    };

    if (auto* eq = std::get_if<EqualityStep>(&step.payload)) {
        UnionFind uf;
        for (auto& t : a.relation(eq->symbol)) uf.unite(t[0], t[1]);
        std::map<ElemId, std::vector<ElemId>> members;
        for (ElemId e : a.domain()) {
            td.class_rep[e] = uf.find(e);
            members[uf.find(e)].push_back(e);
        }
        td.equality_special = true;
        td.eq_symbol = eq->symbol;
        identity_images([&](const EncodingVariable& p) -> std::optional<Formula> {
            // X([a], b) -> X(a*, b); class ids are the representatives
            return g_lit(p.element, p.value);
        });
        auto mem = members;
        td.anchor = [mem](ElemId e) {
            for (auto& [r, ms] : mem)
                if (std::find(ms.begin(), ms.end(), e) != ms.end()) return ms;
            return std::vector<ElemId>{e};
        };
        return td;
    }
    if (std::get_if<ConjunctionStep>(&step.payload)) {
        identity_images([](const EncodingVariable&) { return std::nullopt; });
        return td;
    }
    if (auto* ex = std::get_if<ExistentialStep>(&step.payload)) {
        auto witness = existential_witnesses(*ex, a);
        std::map<ElemId, Tuple> tuple_of;
        for (auto& [t, w] : witness) tuple_of[w] = t;
        // F(b) blocks: tuples of T(B') assigned to their least witness
        std::map<ElemId, std::set<Tuple>> f_of;
        {
            std::set<Tuple> seen;
            for (ElemId w : td.b.domain()) {
                Tuple t(size_t(ex->t_arity), 0);
                std::function<void(int)> rec = [&](int pos) {
                    if (pos == ex->t_arity) {
                        Tuple s;
                        for (int idx : ex->s_args)
                            s.push_back(idx == ex->t_arity ? w : t[size_t(idx)]);
                        if (td.b.relation(ex->s_symbol).count(s) && !seen.count(t)) {
                            seen.insert(t);
                            f_of[w].insert(t);
                        }
                        return;
                    }
                    for (ElemId e : td.b.domain()) {
                        t[size_t(pos)] = e;
                        rec(pos + 1);
                    }
                };
                rec(0);
            }
            // partition check: blocks are disjoint by construction and cover
            // T(B') because every tuple has some witness
            size_t total = 0;
            for (auto& [w, s] : f_of) total += s.size();
            if (total != td.b_prime.relation(ex->t_symbol).size())
                fail("internal", "existential blocks do not partition T(B')");
        }
        for (size_t i = 0; i < td.f_cnf.vars.size(); ++i) {
            auto p = td.f_cnf.vars.pair(uint32_t(i));
            auto it = tuple_of.find(p->element);
            if (it == tuple_of.end()) {
                td.prop.images[uint32_t(i)] = g_lit(p->element, p->value);
                continue;
            }
            BlockImage blk;
            blk.elements.assign(it->second.begin(), it->second.end());
            auto fb = f_of.find(p->value);
            if (fb != f_of.end()) blk.tuples = fb->second;
            set_block(uint32_t(i), std::move(blk));
        }
        auto tuples = tuple_of;
        td.anchor = [tuples](ElemId e) {
            auto it = tuples.find(e);
            if (it == tuples.end()) return std::vector<ElemId>{e};
            std::set<ElemId> s(it->second.begin(), it->second.end());
            return std::vector<ElemId>(s.begin(), s.end());
        };
        return td;
    }
    if (auto* pc = std::get_if<PpCollapseStep>(&step.payload)) {
        auto cd = collapse_data(*pc);
        int n = pc->power;
        auto dom = a.domain();
        for (size_t i = 0; i < td.f_cnf.vars.size(); ++i) {
            auto p = td.f_cnf.vars.pair(uint32_t(i));
            int ai = int(p->element) / n;
            int coord = int(p->element) % n;
            ElemId orig = dom[size_t(ai)];
            BlockImage blk;
            blk.elements = {orig};
            for (auto& rep : cd.reps)
                if (rep[size_t(coord)] == p->value) blk.tuples.insert({cd.rep_id.at(rep)});
            set_block(uint32_t(i), std::move(blk));
        }
        td.anchor = [dom, n](ElemId e) { return std::vector<ElemId>{dom[size_t(int(e) / n)]}; };
        return td;
    }
    if (auto* he = std::get_if<HomEquivalenceStep>(&step.payload)) {
        for (size_t i = 0; i < td.f_cnf.vars.size(); ++i) {
            auto p = td.f_cnf.vars.pair(uint32_t(i));
            BlockImage blk;
            blk.elements = {p->element};
            for (ElemId bp : he->b_prime.domain())
                if (he->to_base.map.at(bp) == p->value) blk.tuples.insert({bp});
            set_block(uint32_t(i), std::move(blk));
        }
        return td;
    }
    if (std::get_if<AddConstantsStep>(&step.payload)) {
        ElemId offset = 0;
        for (ElemId e : a.domain()) offset = std::max(offset, e + 1);
        identity_images([&](const EncodingVariable& p) -> std::optional<Formula> {
            if (a.has_element(p.element)) return std::nullopt;
            ElemId be = td.b.domain()[size_t(p.element - offset)];
            return (be == p.value) ? Formula::t() : Formula::f();
        });
        auto adom = a.domain();
        td.anchor = [adom](ElemId e) {
            if (std::find(adom.begin(), adom.end(), e) != adom.end())
                return std::vector<ElemId>{e};
            return std::vector<ElemId>{};
        };
        return td;
    }
    fail("internal", "unknown step payload");
}

PolySubstitution TransferData::alg(FieldSpec field) const {
    if (!chain_parts.empty()) {
        PolySubstitution out = chain_parts[0]->alg(field);
        for (size_t s = 1; s < chain_parts.size(); ++s) {
            PolySubstitution next = chain_parts[s]->alg(field);
            for (auto& [v, img] : out.images) img = img.substituted(next.images);
            out.d *= next.d;
            out.m *= next.m;
        }
        return out;
    }
    PolySubstitution out;
    out.d = prop.d;
    out.m = prop.m;
    for (auto& [fv, img] : prop.images) {
        auto blk = blocks.find(fv);
        if (blk == blocks.end()) {
            Polynomial pos(field), neg(field);
            if (img.is_lit()) {
                pos = Polynomial::variable(field, img.literal());
                neg = Polynomial::variable(field, img.literal().partner());
            } else if (img.is_true()) {
                pos = Polynomial::constant(field, 1);
                neg = Polynomial::constant(field, 0);
            } else if (img.is_false()) {
                pos = Polynomial::constant(field, 0);
                neg = Polynomial::constant(field, 1);
            } else {
                fail("internal", "non-block image must be a literal or constant");
            }
            out.images[mk_var(fv)] = pos;
            out.images[mk_twin(fv)] = neg;
            continue;
        }
        auto g_var = [&](ElemId ae, ElemId be) {
            auto id = g_cnf.vars.pair_id(ae, be);
            if (!id) fail("internal", "missing G variable");
            return *id;
        };
        Polynomial pos(field), neg(field);
        Tuple t(blk->second.elements.size());
        std::function<void(size_t)> rec = [&](size_t pos_i) {
            if (pos_i == blk->second.elements.size()) {
                Monomial m;
                for (size_t j = 0; j < t.size(); ++j)
                    m = m.times(mk_var(g_var(blk->second.elements[j], t[j])));
                if (blk->second.tuples.count(t))
                    pos.add_term(m, 1);
                else
                    neg.add_term(m, 1);
                return;
            }
            for (ElemId be : b_prime.domain()) {
                t[pos_i] = be;
                rec(pos_i + 1);
            }
        };
        rec(0);
        out.images[mk_var(fv)] = pos;
        out.images[mk_twin(fv)] = neg;
    }
    return out;
}

DnfSubstitution build_substitution_prop(const ReductionStep& step, const RelStructure& a) {
    return make_transfer_data(step, a).prop;
}

PolySubstitution build_substitution_alg(const ReductionStep& step, const RelStructure& a,
                                        FieldSpec field) {
    return make_transfer_data(step, a).alg(field);
}

// ---------------------------------------------------------------------------
// equality propagation

ResolutionProof equality_propagation(const RelStructure& a, const std::string& eq_symbol,
                                     ElemId a_to, ElemId a_from, ElemId b_value,
                                     const CnfInstance& g, const RelStructure& b_prime,
                                     const LitClause& carry) {
    std::map<ElemId, ElemId> pred;
    std::queue<ElemId> q;
    q.push(a_from);
    pred[a_from] = a_from;
    while (!q.empty() && !pred.count(a_to)) {
        ElemId v = q.front();
        q.pop();
        for (auto& t : a.relation(eq_symbol)) {
            ElemId other = -1;
            if (t[0] == v) other = t[1];
            if (t[1] == v) other = t[0];
            if (other >= 0 && !pred.count(other)) {
                pred[other] = v;
                q.push(other);
            }
        }
    }
    if (!pred.count(a_to)) fail("not_equivalent", "elements are not E-equivalent");
    std::vector<ElemId> path;
    for (ElemId v = a_to; v != a_from; v = pred[v]) path.push_back(v);
    path.push_back(a_from);
    std::reverse(path.begin(), path.end());

    auto g_index = [&](const LitClause& c) {
        for (size_t i = 0; i < g.clauses.size(); ++i)
            if (g.clauses[i] == c) return i;
        fail("internal", "propagation step clause missing from G");
    };
    auto gv = [&](ElemId ae, ElemId be) {
        auto id = g.vars.pair_id(ae, be);
        if (!id) fail("internal", "missing variable in equality propagation");
        return *id;
    };

    ResolutionProof proof;
    auto emit = [&](LitClause c, ResJustification how) {
        proof.lines.push_back({std::move(c), std::move(how)});
        return proof.lines.size() - 1;
    };

    LitClause start = carry;
    start.lits.insert(mk_twin(gv(a_from, b_value)));
    size_t cur = emit(start, res_rule::Hypothesis{0});
    for (size_t s = 0; s + 1 < path.size(); ++s) {
        ElemId u = path[s], w = path[s + 1];
        // cut the type-1 clause of u against ~X(u, b_value)
        LitClause type1;
        for (ElemId be : b_prime.domain()) type1.lits.insert(mk_var(gv(u, be)));
        size_t t1 = emit(type1, res_rule::Hypothesis{g_index(type1) + 1});
        LitClause acc_clause = carry;
        for (ElemId be : b_prime.domain())
            if (be != b_value) acc_clause.lits.insert(mk_var(gv(u, be)));
        size_t acc = emit(acc_clause, res_rule::Resolve{t1, cur, gv(u, b_value)});
        // resolve each surviving X(u, be) with the equality type-3 clause
        // {~X(u,be), ~X(w,b_value)}
        for (ElemId be : b_prime.domain()) {
            if (be == b_value) continue;
            LitClause t3{mk_twin(gv(u, be)), mk_twin(gv(w, b_value))};
            size_t t3l = emit(t3, res_rule::Hypothesis{g_index(t3) + 1});
            LitClause next;
            for (auto& l : proof.lines[acc].clause.lits)
                if (!(l == mk_var(gv(u, be)))) next.lits.insert(l);
            next.lits.insert(mk_twin(gv(w, b_value)));
            acc = emit(std::move(next), res_rule::Resolve{acc, t3l, gv(u, be)});
        }
        LitClause goal = carry;
        goal.lits.insert(mk_twin(gv(w, b_value)));
        if (!(proof.lines[acc].clause == goal))
            fail("internal", "propagation block did not land on the goal clause");
        cur = acc;
    }
    return proof;
}

// ---------------------------------------------------------------------------
// Frege transfer

namespace {

Formula image_of_literal(const DnfSubstitution& sub, Var lit) {
    auto it = sub.images.find(lit.id);
    if (it == sub.images.end()) fail("internal", "missing substitution image");
    return lit.twin ? it->second.complement() : it->second;
}

Formula image_of_clause(const DnfSubstitution& sub, const Formula& clause) {
    std::vector<Formula> pieces;
    for (auto& d : clause.disjuncts()) {
        if (!d.is_lit()) fail("unsupported_rule", "transfer expects clause-shaped lines");
        pieces.push_back(image_of_literal(sub, d.literal()));
    }
    return Formula::lor(std::move(pieces));
}

struct FregeBuilder {
    FregeProof proof;
    std::map<Formula, size_t> index;
    size_t emit(Formula f, FregeJustification rule) {
        auto it = index.find(f);
        if (it != index.end()) return it->second;
        proof.lines.push_back({f, std::move(rule)});
        index.emplace(std::move(f), proof.lines.size() - 1);
        return proof.lines.size() - 1;
    }
    size_t weaken_to(size_t from, const Formula& target) {
        if (proof.lines[from].formula == target) return from;
        return emit(target, frege_rule::Weakening{from});
    }
};

std::vector<size_t> local_clauses(const CnfInstance& g, const std::set<ElemId>& elems) {
    std::vector<size_t> out;
    for (size_t i = 0; i < g.clauses.size(); ++i) {
        bool inside = true;
        for (auto& l : g.clauses[i].lits) {
            auto p = g.vars.pair(l.id);
            if (!p || !elems.count(p->element)) {
                inside = false;
                break;
            }
        }
        if (inside) out.push_back(i);
    }
    return out;
}

std::set<ElemId> clause_anchor_elements(const TransferData& td, const LitClause& c) {
    std::set<ElemId> out;
    for (auto& l : c.lits) {
        auto p = td.f_cnf.vars.pair(l.id);
        if (!p) continue;
        for (ElemId e : td.anchor(p->element)) out.insert(e);
    }
    return out;
}

// drop cover clauses that are not needed for the implication, widest
// disjunctions first (they dominate the completeness proof's tuple count)
std::vector<size_t> prune_cover(const CnfInstance& g, std::vector<size_t> cover,
                                const Formula& goal) {
    auto implies = [&](const std::vector<size_t>& subset) {
        std::set<uint32_t> vs;
        for (size_t i : subset)
            for (auto& l : g.clauses[i].lits) vs.insert(l.id);
        for (uint32_t v : goal.var_ids()) vs.insert(v);
        std::vector<uint32_t> vars(vs.begin(), vs.end());
        if (vars.size() > 20) return false;
        for (uint64_t b = 0; b < (uint64_t(1) << vars.size()); ++b) {
            std::map<uint32_t, bool> asg;
            for (size_t i = 0; i < vars.size(); ++i) asg[vars[i]] = (b >> i) & 1;
            bool all = true;
            for (size_t i : subset)
                if (!g.clauses[i].to_formula().eval(asg)) {
                    all = false;
                    break;
                }
            if (all && !goal.eval(asg)) return false;
        }
        return true;
    };
    std::stable_sort(cover.begin(), cover.end(), [&](size_t x, size_t y) {
        return g.clauses[x].width() > g.clauses[y].width();
    });
    for (size_t i = 0; i < cover.size();) {
        std::vector<size_t> without = cover;
        without.erase(without.begin() + long(i));
        if (implies(without))
            cover = std::move(without);
        else
            ++i;
    }
    return cover;
}

size_t splice_completeness(FregeBuilder& fb, const CnfInstance& g, std::vector<size_t> cover,
                           const Formula& goal, size_t var_limit) {
    cover = prune_cover(g, std::move(cover), goal);
    std::vector<Formula> hyps;
    for (size_t i : cover) hyps.push_back(g.clauses[i].to_formula());
    FregeProof sub = complete_frege(hyps, goal, var_limit);
    std::vector<size_t> map(sub.lines.size());
    for (size_t i = 0; i < sub.lines.size(); ++i) {
        FregeJustification rule = sub.lines[i].rule;
        if (auto* hy = std::get_if<frege_rule::Hypothesis>(&rule)) {
            map[i] = fb.emit(sub.lines[i].formula, frege_rule::Hypothesis{cover[hy->index]});
            continue;
        }
        if (auto* cu = std::get_if<frege_rule::Cut>(&rule))
            rule = frege_rule::Cut{map[cu->from_c], map[cu->from_d], cu->pivot};
        else if (auto* ai = std::get_if<frege_rule::AndIntro>(&rule))
            rule = frege_rule::AndIntro{map[ai->from_c], map[ai->from_d], ai->left, ai->right};
        else if (auto* wk = std::get_if<frege_rule::Weakening>(&rule))
            rule = frege_rule::Weakening{map[wk->from]};
        map[i] = fb.emit(sub.lines[i].formula, std::move(rule));
    }
    return map[sub.lines.size() - 1];
}

// splice a resolution derivation over G's clauses (optionally with a
// pre-existing line standing in for hypothesis 0)
size_t splice_resolution(FregeBuilder& fb, const ResolutionProof& rp,
                         std::optional<size_t> hyp0_line) {
    std::vector<size_t> map(rp.lines.size());
    for (size_t i = 0; i < rp.lines.size(); ++i) {
        Formula f = rp.lines[i].clause.to_formula();
        if (auto* hy = std::get_if<res_rule::Hypothesis>(&rp.lines[i].rule)) {
            if (hyp0_line && hy->index == 0)
                map[i] = *hyp0_line;
            else
                map[i] = fb.emit(f, frege_rule::Hypothesis{hyp0_line ? hy->index - 1 : hy->index});
        } else if (auto* rs = std::get_if<res_rule::Resolve>(&rp.lines[i].rule)) {
            map[i] =
                fb.emit(f, frege_rule::Cut{map[rs->from_pos], map[rs->from_neg],
                                           Formula::pos(rs->pivot)});
        } else if (auto* wk = std::get_if<res_rule::Weaken>(&rp.lines[i].rule)) {
            map[i] = fb.emit(f, frege_rule::Weakening{map[wk->from]});
        }
    }
    return map[rp.lines.size() - 1];
}

// resolution derivation (from G) of the class-representative image of an
// equality-step type-3 clause, by coordinatewise propagation
ResolutionProof equality_clause_derivation(const TransferData& td, const LitClause& f_clause) {
    auto fv = [&](ElemId ae, ElemId be) { return *td.f_cnf.vars.pair_id(ae, be); };
    auto gv = [&](ElemId ae, ElemId be) { return *td.g_cnf.vars.pair_id(ae, be); };
    for (auto& [name, tuples] : td.a.relations()) {
        if (name == td.eq_symbol) continue;
        int r = td.a.vocab().arity(name);
        for (auto& t : tuples) {
            Tuple cls;
            for (ElemId e : t) cls.push_back(td.class_rep.at(e));
            std::optional<Tuple> matched_bad;
            for_bad_tuples_of(td.b, name, r, [&](const Tuple& bad) {
                if (matched_bad) return;
                LitClause fc;
                for (int i = 0; i < r; ++i)
                    fc.lits.insert(mk_twin(fv(cls[size_t(i)], bad[size_t(i)])));
                if (fc == f_clause) matched_bad = bad;
            });
            if (!matched_bad) continue;
            const Tuple& bad = *matched_bad;

            // start from the G clause of the original tuple t
            LitClause gstart;
            for (int i = 0; i < r; ++i)
                gstart.lits.insert(mk_twin(gv(t[size_t(i)], bad[size_t(i)])));
            std::optional<size_t> gidx;
            for (size_t i = 0; i < td.g_cnf.clauses.size(); ++i)
                if (td.g_cnf.clauses[i] == gstart) {
                    gidx = i;
                    break;
                }
            if (!gidx) continue;

            ResolutionProof proof;
            proof.lines.push_back({gstart, res_rule::Hypothesis{*gidx}});
            LitClause current = gstart;
            for (int i = 0; i < r; ++i) {
                ElemId from = t[size_t(i)];
                ElemId to = td.class_rep.at(from);
                Var moving = mk_twin(gv(from, bad[size_t(i)]));
                Var landed = mk_twin(gv(to, bad[size_t(i)]));
                if (from == to || !current.contains(moving)) continue;
                LitClause carry = current;
                carry.lits.erase(moving);
                auto sub = equality_propagation(td.a, td.eq_symbol, to, from, bad[size_t(i)],
                                                td.g_cnf, td.b_prime, carry);
                // splice with hypothesis 0 = the current line, other
                // hypothesis indices shifted down to G indices
                size_t cur_line = proof.lines.size() - 1;
                std::vector<size_t> map(sub.lines.size());
                for (size_t k = 0; k < sub.lines.size(); ++k) {
                    if (auto* hy = std::get_if<res_rule::Hypothesis>(&sub.lines[k].rule)) {
                        if (hy->index == 0) {
                            if (!(sub.lines[k].clause == current))
                                fail("internal", "equality splice start mismatch");
                            map[k] = cur_line;
                            continue;
                        }
                        proof.lines.push_back(
                            {sub.lines[k].clause, res_rule::Hypothesis{hy->index - 1}});
                    } else if (auto* rs = std::get_if<res_rule::Resolve>(&sub.lines[k].rule)) {
                        proof.lines.push_back(
                            {sub.lines[k].clause,
                             res_rule::Resolve{map[rs->from_pos], map[rs->from_neg], rs->pivot}});
                    } else if (auto* wk = std::get_if<res_rule::Weaken>(&sub.lines[k].rule)) {
                        proof.lines.push_back({sub.lines[k].clause, res_rule::Weaken{map[wk->from]}});
                    }
                    map[k] = proof.lines.size() - 1;
                }
                current = carry;
                current.lits.insert(landed);
                if (!(proof.lines.back().clause == current))
                    fail("internal", "equality propagation landed on the wrong clause");
            }
            return proof;
        }
    }
    fail("internal", "no originating tuple found for an equality type-3 clause");
}

}  // namespace

FregeProof transfer_frege(const TransferData& td, const FregeProof& refutation) {
    FregeBuilder fb;
    std::vector<size_t> map(refutation.lines.size());

    for (size_t i = 0; i < refutation.lines.size(); ++i) {
        const auto& line = refutation.lines[i];
        Formula target = image_of_clause(td.prop, line.formula);
        if (auto* hy = std::get_if<frege_rule::Hypothesis>(&line.rule)) {
            if (hy->index >= td.f_cnf.clauses.size())
                fail("invalid_proof", "hypothesis index outside CNF(A',B)");
            const LitClause& fc = td.f_cnf.clauses[hy->index];
            if (target.is_true()) {
                map[i] = fb.emit(Formula::t(), frege_rule::Axiom{Formula::t()});
                continue;
            }
            std::optional<size_t> gsub;
            {
                auto tset = target.disjuncts();
                std::set<Formula> tf(tset.begin(), tset.end());
                for (size_t gi = 0; gi < td.g_cnf.clauses.size() && !gsub; ++gi) {
                    bool sub = !td.g_cnf.clauses[gi].empty();
                    for (auto& l : td.g_cnf.clauses[gi].lits)
                        if (!tf.count(Formula::lit(l))) {
                            sub = false;
                            break;
                        }
                    if (sub) gsub = gi;
                }
            }
            if (gsub) {
                size_t h =
                    fb.emit(td.g_cnf.clauses[*gsub].to_formula(), frege_rule::Hypothesis{*gsub});
                map[i] = fb.weaken_to(h, target);
                continue;
            }
            if (td.equality_special) {
                auto rp = equality_clause_derivation(td, fc);
                size_t l = splice_resolution(fb, rp, std::nullopt);
                map[i] = fb.weaken_to(l, target);
                continue;
            }
            auto elems = clause_anchor_elements(td, fc);
            map[i] = splice_completeness(fb, td.g_cnf, local_clauses(td.g_cnf, elems), target, 16);
        } else if (auto* ax = std::get_if<frege_rule::Axiom>(&line.rule)) {
            if (!ax->a.is_lit() && !ax->a.is_constant())
                fail("unsupported_rule", "transfer expects literal axiom witnesses");
            Formula wit = ax->a.is_lit() ? image_of_literal(td.prop, ax->a.literal()) : ax->a;
            size_t l = fb.emit(Formula::lor({wit, wit.complement()}), frege_rule::Axiom{wit});
            map[i] = fb.weaken_to(l, target);
        } else if (auto* cut = std::get_if<frege_rule::Cut>(&line.rule)) {
            if (!cut->pivot.is_lit())
                fail("unsupported_rule", "transfer expects literal cut pivots");
            Formula p = image_of_literal(td.prop, cut->pivot.literal());
            if (p.is_true()) {
                map[i] = fb.weaken_to(map[cut->from_d], target);
            } else if (p.is_false()) {
                map[i] = fb.weaken_to(map[cut->from_c], target);
            } else {
                std::set<Formula> c1, c2;
                for (auto& d : fb.proof.lines[map[cut->from_c]].formula.disjuncts()) c1.insert(d);
                for (auto& d : fb.proof.lines[map[cut->from_d]].formula.disjuncts()) c2.insert(d);
                for (auto& d : p.disjuncts()) c1.erase(d);
                for (auto& d : p.complement().disjuncts()) c2.erase(d);
                c1.insert(c2.begin(), c2.end());
                std::vector<Formula> cs(c1.begin(), c1.end());
                size_t l = fb.emit(Formula::lor(std::move(cs)),
                                   frege_rule::Cut{map[cut->from_c], map[cut->from_d], p});
                map[i] = fb.weaken_to(l, target);
            }
        } else if (auto* wk = std::get_if<frege_rule::Weakening>(&line.rule)) {
            map[i] = fb.weaken_to(map[wk->from], target);
        } else {
            fail("unsupported_rule", "transfer expects resolution-shaped Frege proofs");
        }
    }
    size_t last = map[refutation.lines.size() - 1];
    if (last != fb.proof.lines.size() - 1)
        fb.proof.lines.push_back({fb.proof.lines[last].formula, frege_rule::Weakening{last}});
    return fb.proof;
}

FregeProof transfer_frege(const ReductionStep& step, const RelStructure& a,
                          const FregeProof& refutation) {
    return transfer_frege(make_transfer_data(step, a), refutation);
}

// ---------------------------------------------------------------------------
// algebraic transfers

namespace {

PolyEquationSystem local_equations(const PolyEquationSystem& g, const VarUniverse& gvars,
                                   const std::set<ElemId>& elems, std::vector<size_t>& indices) {
    PolyEquationSystem out;
    out.field = g.field;
    indices.clear();
    for (size_t i = 0; i < g.equations.size(); ++i) {
        bool inside = true;
        for (uint32_t id : g.equations[i].base_ids()) {
            auto p = gvars.pair(id);
            if (!p || !elems.count(p->element)) {
                inside = false;
                break;
            }
        }
        if (inside) {
            out.equations.push_back(g.equations[i]);
            indices.push_back(i);
        }
    }
    return out;
}

std::set<ElemId> poly_anchor_elements(const TransferData& td, const Polynomial& p) {
    std::set<ElemId> out;
    for (uint32_t id : p.base_ids()) {
        auto pr = td.f_cnf.vars.pair(id);
        if (!pr) continue;
        for (ElemId e : td.anchor(pr->element)) out.insert(e);
    }
    return out;
}

void remap_cert(StaticCertificate& cert, const std::vector<size_t>& indices) {
    for (auto& t : cert.terms)
        if (auto* he = std::get_if<cert_source::HypEq>(&t.source))
            t.source = cert_source::HypEq{indices[he->index]};
}

struct AlgTransfer {
    const TransferData& td;
    FieldSpec field;
    PolySubstitution sub;
    PolyEquationSystem f_eqs;
    PolyEquationSystem g_eqs;

    AlgTransfer(const TransferData& td_, FieldSpec f_)
        : td(td_),
          field(f_),
          sub(td_.alg(f_)),
          f_eqs(encode_eq(td_.a_prime, td_.b, f_)),
          g_eqs(encode_eq(td_.a, td_.b_prime, f_)) {}

    Polynomial image(const Polynomial& p) const { return p.substituted(sub.images); }

    StaticCertificate derive_eq_cert(const Polynomial& fsrc) const {
        Polynomial target = image(fsrc);
        auto elems = poly_anchor_elements(td, fsrc);
        std::vector<size_t> indices;
        auto local = local_equations(g_eqs, td.g_cnf.vars, elems, indices);
        auto cert = complete_ns(local, target, field);
        remap_cert(cert, indices);
        return cert;
    }
    StaticCertificate derive_ineq_cert(const Polynomial& fsrc) const {
        Polynomial target = image(fsrc);
        auto elems = poly_anchor_elements(td, fsrc);
        std::vector<size_t> indices;
        auto local = local_equations(g_eqs, td.g_cnf.vars, elems, indices);
        auto cert = complete_sa(local, {}, target);
        remap_cert(cert, indices);
        return cert;
    }
};

// reconstruct the clause whose multiplicative encoding a monomial equation is
LitClause clause_of_encoding(const Polynomial& p) {
    LitClause c;
    for (auto& [m, k] : p.terms())
        for (auto& [v, e] : m.factors()) c.lits.insert(v.partner());
    return c;
}

}  // namespace

DynamicProof transfer_dynamic(const TransferData& td, const DynamicProof& proof, FieldSpec field) {
    AlgTransfer at(td, field);
    DynBuilder b(proof.kind, field);
    std::vector<size_t> map(proof.lines.size());

    auto splice_pc = [&](const DynamicProof& pc) -> size_t {
        std::vector<size_t> m2(pc.lines.size());
        for (size_t k = 0; k < pc.lines.size(); ++k) {
            const auto& ln = pc.lines[k];
            if (auto* he = std::get_if<dyn_rule::HypEq>(&ln.rule))
                m2[k] = b.hyp_eq(he->index, at.g_eqs.equations[he->index]);
            else if (auto* ax = std::get_if<dyn_rule::Axiom>(&ln.rule))
                m2[k] = b.axiom(ax->kind, ax->var_id);
            else if (auto* ad = std::get_if<dyn_rule::Add>(&ln.rule))
                m2[k] = b.add(m2[ad->from_a], m2[ad->from_b]);
            else if (auto* sm = std::get_if<dyn_rule::ScalarMul>(&ln.rule))
                m2[k] = b.scalar_mul(m2[sm->from], sm->scalar);
            else if (auto* vm = std::get_if<dyn_rule::VarMul>(&ln.rule))
                m2[k] = b.var_mul(m2[vm->from], vm->var);
            else
                fail("internal", "unexpected rule in compiled PC proof");
        }
        return m2[pc.lines.size() - 1];
    };

    auto derive_hyp_eq = [&](const Polynomial& fpoly) -> size_t {
        Polynomial target = at.image(fpoly);
        // hypothesis images that are G hypotheses verbatim
        for (size_t gi = 0; gi < at.g_eqs.equations.size(); ++gi)
            if (target == at.g_eqs.equations[gi]) return b.hyp_eq(gi, target);
        if (td.equality_special) {
            LitClause fc = clause_of_encoding(fpoly);
            auto rp = equality_clause_derivation(td, fc);
            auto pc = compile_resolution_to_pc(rp, td.g_cnf.clauses, field);
            return splice_pc(pc);
        }
        auto cert = at.derive_eq_cert(fpoly);
        return inline_static(b, cert, at.g_eqs, {});
    };

    auto derive_axiom_eq = [&](AxiomEq kind, uint32_t var_id) -> size_t {
        Polynomial ax = axiom_eq_poly(field, kind, var_id);
        Polynomial target = at.image(ax);
        for (uint32_t gid = 0; gid < td.g_cnf.vars.size(); ++gid)
            for (AxiomEq k2 : {AxiomEq::BoolSquare, AxiomEq::TwinSquare, AxiomEq::TwinSum})
                if (target == axiom_eq_poly(field, k2, gid)) return b.axiom(k2, gid);
        if (target.is_zero()) return b.scalar_mul(b.axiom(AxiomEq::TwinSum, 0), 0);
        auto cert = at.derive_eq_cert(ax);
        return inline_static(b, cert, at.g_eqs, {});
    };

    auto derive_axiom_ineq = [&](AxiomIneq kind, uint32_t var_id) -> size_t {
        Polynomial ax = axiom_ineq_poly(field, kind, var_id);
        Polynomial target = at.image(ax);
        for (uint32_t gid = 0; gid < td.g_cnf.vars.size(); ++gid)
            for (AxiomIneq k2 : {AxiomIneq::VarNonneg, AxiomIneq::TwinNonneg, AxiomIneq::VarUpper,
                                 AxiomIneq::TwinUpper})
                if (target == axiom_ineq_poly(field, k2, gid)) return b.axiom_ineq(k2, gid);
        if (target == axiom_ineq_poly(field, AxiomIneq::One, 0))
            return b.axiom_ineq(AxiomIneq::One, 0);
        auto cert = at.derive_ineq_cert(ax);
        return inline_static(b, cert, at.g_eqs, {});
    };

    for (size_t i = 0; i < proof.lines.size(); ++i) {
        const auto& line = proof.lines[i];
        if (auto* he = std::get_if<dyn_rule::HypEq>(&line.rule)) {
            map[i] = derive_hyp_eq(at.f_eqs.equations[he->index]);
        } else if (std::get_if<dyn_rule::HypIneq>(&line.rule)) {
            fail("unsupported_rule", "dynamic transfer over EQ expects equation hypotheses");
        } else if (auto* ax = std::get_if<dyn_rule::Axiom>(&line.rule)) {
            map[i] = derive_axiom_eq(ax->kind, ax->var_id);
        } else if (auto* ai = std::get_if<dyn_rule::AxiomIneq>(&line.rule)) {
            map[i] = derive_axiom_ineq(ai->kind, ai->var_id);
        } else if (auto* ad = std::get_if<dyn_rule::Add>(&line.rule)) {
            map[i] = b.add(map[ad->from_a], map[ad->from_b]);
        } else if (auto* sm = std::get_if<dyn_rule::ScalarMul>(&line.rule)) {
            map[i] = b.scalar_mul(map[sm->from], sm->scalar);
        } else if (auto* vm = std::get_if<dyn_rule::VarMul>(&line.rule)) {
            auto it = at.sub.images.find(vm->var);
            if (it == at.sub.images.end()) fail("internal", "missing variable image");
            const Polynomial& img = it->second;
            if (img.is_zero()) {
                // image of the product is 0; land on 0 = 0 (or 0 >= 0)
                size_t z = b.scalar_mul(b.axiom(AxiomEq::TwinSum, 0), 0);
                map[i] = b.line(map[vm->from]).rel == Relation::EqZero ? z : b.eq_to_geq(z, 1);
            } else {
                std::vector<size_t> pieces;
                for (auto& [mono, c] : img.terms()) {
                    size_t l = b.monomial_mul(map[vm->from], mono);
                    pieces.push_back(c == 1 ? l : b.scalar_mul(l, c));
                }
                map[i] = b.add_all(std::move(pieces));
            }
        } else if (auto* sq = std::get_if<dyn_rule::Square>(&line.rule)) {
            map[i] = b.square(at.image(sq->q));
        } else if (auto* eg = std::get_if<dyn_rule::EqToGeq>(&line.rule)) {
            map[i] = b.eq_to_geq(map[eg->from], eg->sign);
        } else if (auto* pg = std::get_if<dyn_rule::PairGeq>(&line.rule)) {
            map[i] = b.pair_geq(map[pg->from_pos], map[pg->from_neg]);
        }
    }
    size_t last = map[proof.lines.size() - 1];
    DynamicProof out = b.take();
    if (last != out.lines.size() - 1) out.lines.push_back(out.lines[last]);
    return out;
}

DynamicProof transfer_dynamic(const ReductionStep& step, const RelStructure& a,
                              const DynamicProof& proof, FieldSpec field) {
    return transfer_dynamic(make_transfer_data(step, a), proof, field);
}

StaticCertificate transfer_static(const TransferData& td, const StaticCertificate& cert,
                                  FieldSpec field) {
    AlgTransfer at(td, field);
    StaticCertificate out;
    out.kind = cert.kind;
    out.rel = cert.rel;
    out.target = at.image(cert.target);

    // +M >= 0 is a lift of 1 >= 0; -M >= 0 needs an SA certificate from G
    auto negative_monomial_cert = [&](const Polynomial& target_mono) -> StaticCertificate {
        // target_mono = the (coefficient 1) monomial equation image M; we
        // certify -M >= 0 from the local cover
        auto elems = std::set<ElemId>{};
        for (uint32_t id : target_mono.base_ids()) {
            auto pr = td.g_cnf.vars.pair(id);
            if (pr) elems.insert(pr->element);
        }
        std::vector<size_t> indices;
        auto local = local_equations(at.g_eqs, td.g_cnf.vars, elems, indices);
        auto c2 = complete_sa(local, {}, -target_mono);
        remap_cert(c2, indices);
        return c2;
    };

    for (auto& t : cert.terms) {
        if (t.scalar == 0) continue;
        Polynomial mult = Polynomial::monomial(field, t.monomial, 1).substituted(at.sub.images);
        if (!t.general && mult.is_zero()) continue;

        if (auto* sq = std::get_if<cert_source::Square>(&t.source)) {
            CertTerm nt;
            nt.source = cert_source::Square{at.image(sq->q)};
            nt.scalar = t.scalar;
            if (t.general) {
                nt.general = at.image(*t.general);
                out.terms.push_back(std::move(nt));
            } else if (cert.kind == StaticKind::SOS) {
                nt.general = mult;
                out.terms.push_back(std::move(nt));
            } else {
                for (auto& [m, c] : mult.terms())
                    out.terms.push_back({nt.source, field.mul(t.scalar, c), m, std::nullopt});
            }
            continue;
        }

        bool is_ineq = std::holds_alternative<cert_source::HypIneq>(t.source) ||
                       std::holds_alternative<cert_source::AxiomIneq>(t.source);
        Polynomial fsrc(field);
        if (auto* he = std::get_if<cert_source::HypEq>(&t.source))
            fsrc = at.f_eqs.equations[he->index];
        else if (auto* ax = std::get_if<cert_source::Axiom>(&t.source))
            fsrc = axiom_eq_poly(field, ax->kind, ax->var_id);
        else if (auto* ai = std::get_if<cert_source::AxiomIneq>(&t.source))
            fsrc = axiom_ineq_poly(field, ai->kind, ai->var_id);
        else
            fail("unsupported_rule", "static transfer expects hypothesis or axiom sources");

        StaticCertificate src_cert;
        Polynomial target = at.image(fsrc);
        bool direct = false;
        if (!is_ineq) {
            // G hypothesis verbatim?
            for (size_t gi = 0; gi < at.g_eqs.equations.size() && !direct; ++gi) {
                if (target == at.g_eqs.equations[gi]) {
                    src_cert.terms.push_back({cert_source::HypEq{gi}, 1, Monomial(), std::nullopt});
                    direct = true;
                }
            }
            if (!direct && td.equality_special && target.term_count() == 1 &&
                !target.is_constant()) {
                // equality type-3 image: split by the sign of the use
                // (cert^- from the compiled propagation, cert^+ from 1 >= 0)
                // and emit per expanded multiplier monomial
                LitClause fc = clause_of_encoding(fsrc);
                auto rp = equality_clause_derivation(td, fc);
                auto negc = compile_resolution_to_sa(rp, td.g_cnf.clauses);
                Monomial target_mono = target.terms().begin()->first;
                for (auto& [m, c] : mult.terms()) {
                    BigRat s = field.mul(t.scalar, c);
                    if (s >= 0) {
                        out.terms.push_back({cert_source::AxiomIneq{AxiomIneq::One, 0}, s,
                                             m.times(target_mono), std::nullopt});
                    } else {
                        for (auto& st : negc.terms)
                            out.terms.push_back({st.source, field.mul(-s, st.scalar),
                                                 m.times(st.monomial), std::nullopt});
                    }
                }
                continue;
            }
            if (!direct) src_cert = at.derive_eq_cert(fsrc);
        } else {
            src_cert = at.derive_ineq_cert(fsrc);
        }
        (void)negative_monomial_cert;

        if (t.general) {
            Polynomial gen = at.image(*t.general).scaled(t.scalar);
            for (auto& st : src_cert.terms) {
                CertTerm nt;
                nt.source = st.source;
                nt.scalar = 1;
                Polynomial g2 = gen.times_monomial(st.monomial, st.scalar);
                if (st.general) g2 = g2 * *st.general;
                nt.general = g2;
                out.terms.push_back(std::move(nt));
            }
            continue;
        }
        for (auto& [m, c] : mult.terms()) {
            for (auto& st : src_cert.terms) {
                CertTerm nt;
                nt.source = st.source;
                nt.scalar = field.mul(field.mul(t.scalar, c), st.scalar);
                nt.monomial = m.times(st.monomial);
                if (st.general) {
                    nt.general = st.general->times_monomial(m, field.mul(t.scalar, c));
                    nt.scalar = st.scalar;
                    nt.monomial = Monomial();
                }
                out.terms.push_back(std::move(nt));
            }
        }
    }
    return out;
}

StaticCertificate transfer_static(const ReductionStep& step, const RelStructure& a,
                                  const StaticCertificate& cert, FieldSpec field) {
    return transfer_static(make_transfer_data(step, a), cert, field);
}

// ---------------------------------------------------------------------------
// chains

std::vector<RelStructure> chain_instances(const ReductionChain& chain, const RelStructure& a) {
    std::vector<RelStructure> out(chain.steps.size() + 1);
    out[chain.steps.size()] = a;
    for (size_t i = chain.steps.size(); i-- > 0;)
        out[i] = transform_instance(chain.steps[i], out[i + 1]);
    return out;
}

TransferData compose_chain_data(const ReductionChain& chain, const RelStructure& a) {
    if (chain.steps.empty()) fail("domain_error", "empty chain has no transfer data");
    auto insts = chain_instances(chain, a);
    std::vector<std::shared_ptr<TransferData>> tds;
    for (size_t i = 0; i < chain.steps.size(); ++i)
        tds.push_back(std::make_shared<TransferData>(
            make_transfer_data(chain.steps[i], insts[i + 1])));

    TransferData out;
    out.a = a;
    out.a_prime = insts[0];
    out.b = chain.steps[0].base;
    out.b_prime = derive_template(chain.steps.back());
    out.f_cnf = tds[0]->f_cnf;
    out.g_cnf = tds.back()->g_cnf;
    out.chain_parts = tds;

    std::map<uint32_t, Formula> images = tds[0]->prop.images;
    for (size_t s = 1; s < tds.size(); ++s) {
        const auto& next = tds[s]->prop.images;
        std::function<Formula(const Formula&)> push = [&](const Formula& f) -> Formula {
            if (f.is_constant()) return f;
            if (f.is_lit()) {
                auto it = next.find(f.literal().id);
                if (it == next.end()) fail("internal", "chain image missing");
                return f.literal().twin ? it->second.complement() : it->second;
            }
            std::vector<Formula> cs;
            for (auto& c : f.children()) cs.push_back(push(c));
            return f.is_and() ? Formula::land(std::move(cs)) : Formula::lor(std::move(cs));
        };
        for (auto& [v, img] : images) img = push(img);
    }
    out.prop.images = std::move(images);
    out.prop.d = 1;
    out.prop.m = 1;
    for (auto& [v, img] : out.prop.images) {
        out.prop.m = std::max(out.prop.m, int(img.disjuncts().size()));
        for (auto& t : img.disjuncts())
            out.prop.d = std::max(out.prop.d, int(t.conjuncts().size()));
    }

    std::vector<std::function<std::vector<ElemId>(ElemId)>> anchors;
    for (auto& td : tds) anchors.push_back(td->anchor);
    out.anchor = [anchors](ElemId e) {
        std::set<ElemId> cur = {e};
        for (auto& f : anchors) {
            std::set<ElemId> next;
            for (ElemId x : cur)
                for (ElemId y : f(x)) next.insert(y);
            cur = std::move(next);
        }
        return std::vector<ElemId>(cur.begin(), cur.end());
    };
    return out;
}

// ---------------------------------------------------------------------------
// pp decomposition

PpDecomposition decompose_pp(const RelStructure& base, const PpFormula& formula,
                             const std::string& fresh_prefix) {
    PpDecomposition out;
    RelStructure current = base;
    int fresh = 0;
    std::optional<std::string> eq_symbol;

    std::function<std::pair<std::string, std::vector<int>>(const PpFormula&)> go =
        [&](const PpFormula& f) -> std::pair<std::string, std::vector<int>> {
        switch (f.kind) {
            case PpFormula::Kind::Atom:
                return {f.rel, f.args};
            case PpFormula::Kind::EqAtom: {
                if (!eq_symbol) {
                    eq_symbol = fresh_prefix + "_eq";
                    ReductionStep step{current, EqualityStep{*eq_symbol}};
                    RelStructure next = derive_template(step);
                    out.steps.push_back(std::move(step));
                    current = next;
                }
                return {*eq_symbol, {f.lhs, f.rhs}};
            }
            case PpFormula::Kind::And: {
                auto acc = go(f.children[0]);
                for (size_t i = 1; i < f.children.size(); ++i) {
                    auto rhs = go(f.children[i]);
                    std::set<int> vs(acc.second.begin(), acc.second.end());
                    vs.insert(rhs.second.begin(), rhs.second.end());
                    std::vector<int> args(vs.begin(), vs.end());
                    std::map<int, int> pos;
                    for (size_t j = 0; j < args.size(); ++j) pos[args[j]] = int(j);
                    ConjunctionStep cj;
                    cj.t_symbol = fresh_prefix + std::to_string(fresh++);
                    cj.t_arity = int(args.size());
                    cj.s_symbol = acc.first;
                    for (int v : acc.second) cj.s_args.push_back(pos.at(v));
                    cj.p_symbol = rhs.first;
                    for (int v : rhs.second) cj.p_args.push_back(pos.at(v));
                    ReductionStep step{current, cj};
                    RelStructure next = derive_template(step);
                    out.steps.push_back(std::move(step));
                    current = next;
                    acc = {cj.t_symbol, args};
                }
                return acc;
            }
            case PpFormula::Kind::Exists: {
                auto body = go(f.children[0]);
                if (std::find(body.second.begin(), body.second.end(), f.bound) ==
                    body.second.end())
                    return body;
                std::set<int> fv(body.second.begin(), body.second.end());
                fv.erase(f.bound);
                std::vector<int> free(fv.begin(), fv.end());
                std::map<int, int> pos;
                for (size_t j = 0; j < free.size(); ++j) pos[free[j]] = int(j);
                ExistentialStep ex;
                ex.t_symbol = fresh_prefix + std::to_string(fresh++);
                ex.t_arity = int(free.size());
                ex.s_symbol = body.first;
                for (int v : body.second)
                    ex.s_args.push_back(v == f.bound ? ex.t_arity : pos.at(v));
                ReductionStep step{current, ex};
                RelStructure next = derive_template(step);
                out.steps.push_back(std::move(step));
                current = next;
                return {ex.t_symbol, free};
            }
        }
        fail("internal", "bad pp formula kind");
    };

    auto res = go(formula);
    out.final_template = current;
    out.symbol = res.first;
    out.arg_order = res.second;
    return out;
}

}  // namespace cspforge
