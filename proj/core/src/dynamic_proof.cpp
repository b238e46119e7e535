#include "cspforge/dynamic_proof.hpp"

#include <algorithm>

namespace cspforge {

std::string to_string(DynamicKind k) {
    switch (k) {
        case DynamicKind::PC: return "PC";
        case DynamicKind::LS: return "LS";
        case DynamicKind::LSPlus: return "LS+";
    }
    return "?";
}

bool DynamicProof::is_refutation() const {
    if (lines.empty()) return false;
    const auto& last = lines.back();
    if (!last.poly.is_constant()) return false;
    BigRat c = last.poly.constant_term();
    if (last.rel == Relation::EqZero) return c != 0;
    return c < 0;
}

DynamicVerdict check_dynamic(const DynamicProof& p, const PolyEquationSystem& eqs,
                             const LinIneqSystem& ineqs, FieldSpec field) {
    DynamicVerdict v;
    bool semialgebraic = p.kind != DynamicKind::PC;
    if (semialgebraic && field.is_prime_field()) {
        v.reason = "field_mismatch: LS/LS+ require an ordered field";
        return v;
    }
    std::vector<uint32_t> rank(p.lines.size(), 0);
    for (size_t i = 0; i < p.lines.size(); ++i) {
        const auto& line = p.lines[i];
        v.degree = std::max(v.degree, line.poly.degree());
        v.size += line.poly.size();
        auto reject = [&](const std::string& why) {
            v.accepted = false;
            v.bad_line = i;
            v.reason = why;
            return v;
        };
        if (!semialgebraic && line.rel != Relation::EqZero)
            return reject("PC proofs manipulate equations only");
        if (line.poly.field() != field) return reject("line over wrong field");

        if (auto* h = std::get_if<dyn_rule::HypEq>(&line.rule)) {
            if (h->index >= eqs.equations.size()) return reject("hypothesis index out of range");
            if (line.rel != Relation::EqZero) return reject("equation hypothesis yields an equation");
            if (!(line.poly == eqs.equations[h->index])) return reject("hypothesis mismatch");
        } else if (auto* h2 = std::get_if<dyn_rule::HypIneq>(&line.rule)) {
            if (!semialgebraic) return reject("inequality hypothesis in PC");
            if (h2->index >= ineqs.inequalities.size())
                return reject("hypothesis index out of range");
            if (line.rel != Relation::GeqZero) return reject("inequality hypothesis yields >=");
            if (!(line.poly == ineqs.inequalities[h2->index])) return reject("hypothesis mismatch");
        } else if (auto* ax = std::get_if<dyn_rule::Axiom>(&line.rule)) {
            if (line.rel != Relation::EqZero) return reject("equation axiom yields an equation");
            if (!(line.poly == axiom_eq_poly(field, ax->kind, ax->var_id)))
                return reject("axiom polynomial mismatch");
        } else if (auto* ai = std::get_if<dyn_rule::AxiomIneq>(&line.rule)) {
            if (!semialgebraic) return reject("inequality axiom in PC");
            if (line.rel != Relation::GeqZero) return reject("inequality axiom yields >=");
            if (!(line.poly == axiom_ineq_poly(field, ai->kind, ai->var_id)))
                return reject("axiom polynomial mismatch");
        } else if (auto* ad = std::get_if<dyn_rule::Add>(&line.rule)) {
            if (ad->from_a >= i || ad->from_b >= i) return reject("premise index not backward");
            const auto& a = p.lines[ad->from_a];
            const auto& bl = p.lines[ad->from_b];
            Relation expect = (a.rel == Relation::EqZero && bl.rel == Relation::EqZero)
                                  ? Relation::EqZero
                                  : Relation::GeqZero;
            if (line.rel != expect) return reject("addition relation mismatch");
            if (!(line.poly == a.poly + bl.poly)) return reject("addition polynomial mismatch");
            rank[i] = std::max(rank[ad->from_a], rank[ad->from_b]);
        } else if (auto* sm = std::get_if<dyn_rule::ScalarMul>(&line.rule)) {
            if (sm->from >= i) return reject("premise index not backward");
            const auto& a = p.lines[sm->from];
            if (a.rel == Relation::GeqZero && !(sm->scalar > 0))
                return reject("inequality scaled by non-positive scalar");
            if (line.rel != a.rel) return reject("scalar multiplication changes relation");
            if (!(line.poly == a.poly.scaled(sm->scalar)))
                return reject("scalar multiplication mismatch");
            rank[i] = rank[sm->from];
        } else if (auto* vm = std::get_if<dyn_rule::VarMul>(&line.rule)) {
            if (vm->from >= i) return reject("premise index not backward");
            const auto& a = p.lines[vm->from];
            if (line.rel != a.rel) return reject("variable multiplication changes relation");
            if (!(line.poly == a.poly.times_var(vm->var)))
                return reject("variable multiplication mismatch");
            rank[i] = rank[vm->from] + 1;
        } else if (auto* sq = std::get_if<dyn_rule::Square>(&line.rule)) {
            if (p.kind != DynamicKind::LSPlus) return reject("square rule outside LS+");
            if (line.rel != Relation::GeqZero) return reject("square yields >=");
            if (!(line.poly == sq->q * sq->q)) return reject("square polynomial mismatch");
        } else if (auto* eg = std::get_if<dyn_rule::EqToGeq>(&line.rule)) {
            if (!semialgebraic) return reject("relation conversion in PC");
            if (eg->from >= i) return reject("premise index not backward");
            const auto& a = p.lines[eg->from];
            if (a.rel != Relation::EqZero) return reject("EqToGeq premise not an equation");
            if (line.rel != Relation::GeqZero) return reject("EqToGeq yields >=");
            if (eg->sign != 1 && eg->sign != -1) return reject("EqToGeq sign must be +-1");
            if (!(line.poly == a.poly.scaled(eg->sign))) return reject("EqToGeq mismatch");
            rank[i] = rank[eg->from];
        } else if (auto* pg = std::get_if<dyn_rule::PairGeq>(&line.rule)) {
            if (!semialgebraic) return reject("relation conversion in PC");
            if (pg->from_pos >= i || pg->from_neg >= i) return reject("premise index not backward");
            const auto& a = p.lines[pg->from_pos];
            const auto& bl = p.lines[pg->from_neg];
            if (a.rel != Relation::GeqZero || bl.rel != Relation::GeqZero)
                return reject("PairGeq premises must be inequalities");
            if (!(bl.poly == -a.poly)) return reject("PairGeq premises are not opposite");
            if (line.rel != Relation::EqZero || !(line.poly == a.poly))
                return reject("PairGeq conclusion mismatch");
            rank[i] = std::max(rank[pg->from_pos], rank[pg->from_neg]);
        }
        v.rank = std::max(v.rank, rank[i]);
    }
    v.accepted = true;
    v.is_refutation = p.is_refutation();
    return v;
}

size_t DynBuilder::emit(Relation rel, Polynomial p, DynJustification rule) {
    auto key = std::make_pair(int(rel), p);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    proof_.lines.push_back({rel, std::move(p), std::move(rule)});
    index_.emplace(std::move(key), proof_.lines.size() - 1);
    return proof_.lines.size() - 1;
}

size_t DynBuilder::hyp_eq(size_t index, const Polynomial& p) {
    return emit(Relation::EqZero, p, dyn_rule::HypEq{index});
}
size_t DynBuilder::hyp_ineq(size_t index, const Polynomial& p) {
    return emit(Relation::GeqZero, p, dyn_rule::HypIneq{index});
}
size_t DynBuilder::axiom(AxiomEq kind, uint32_t var_id) {
    return emit(Relation::EqZero, axiom_eq_poly(field_, kind, var_id), dyn_rule::Axiom{kind, var_id});
}
size_t DynBuilder::axiom_ineq(AxiomIneq kind, uint32_t var_id) {
    return emit(Relation::GeqZero, axiom_ineq_poly(field_, kind, var_id),
                dyn_rule::AxiomIneq{kind, var_id});
}
size_t DynBuilder::add(size_t a, size_t b) {
    Relation rel = (line(a).rel == Relation::EqZero && line(b).rel == Relation::EqZero)
                       ? Relation::EqZero
                       : Relation::GeqZero;
    return emit(rel, line(a).poly + line(b).poly, dyn_rule::Add{a, b});
}
size_t DynBuilder::scalar_mul(size_t from, const BigRat& c) {
    if (line(from).rel == Relation::GeqZero && !(c > 0))
        fail("dynamic", "scaling an inequality by a non-positive scalar");
    return emit(line(from).rel, line(from).poly.scaled(c), dyn_rule::ScalarMul{from, c});
}
size_t DynBuilder::var_mul(size_t from, Var v) {
    return emit(line(from).rel, line(from).poly.times_var(v), dyn_rule::VarMul{from, v});
}
size_t DynBuilder::square(const Polynomial& q) {
    return emit(Relation::GeqZero, q * q, dyn_rule::Square{q});
}
size_t DynBuilder::eq_to_geq(size_t from, int sign) {
    return emit(Relation::GeqZero, line(from).poly.scaled(sign), dyn_rule::EqToGeq{from, sign});
}
size_t DynBuilder::pair_geq(size_t pos, size_t neg) {
    return emit(Relation::EqZero, line(pos).poly, dyn_rule::PairGeq{pos, neg});
}

size_t DynBuilder::monomial_mul(size_t from, const Monomial& m) {
    size_t cur = from;
    for (auto& [v, e] : m.factors())
        for (uint32_t i = 0; i < e; ++i) cur = var_mul(cur, v);
    return cur;
}

size_t DynBuilder::add_all(std::vector<size_t> lines) {
    if (lines.empty()) fail("dynamic", "add_all of nothing");
    while (lines.size() > 1) {
        std::vector<size_t> next;
        for (size_t i = 0; i + 1 < lines.size(); i += 2) next.push_back(add(lines[i], lines[i + 1]));
        if (lines.size() % 2) next.push_back(lines.back());
        lines = std::move(next);
    }
    return lines[0];
}

size_t inline_static(DynBuilder& b, const StaticCertificate& cert,
                     const PolyEquationSystem& eqs, const LinIneqSystem& ineqs) {
    if (cert.terms.empty() && cert.target.is_zero()) {
        // trivial certificate of 0 = 0
        size_t z = b.scalar_mul(b.axiom(AxiomEq::TwinSum, 0), 0);
        return cert.rel == Relation::EqZero ? z : b.eq_to_geq(z, 1);
    }
    std::vector<size_t> pieces;
    for (auto& t : cert.terms) {
        if (t.scalar == 0) continue;
        size_t src;
        if (auto* he = std::get_if<cert_source::HypEq>(&t.source))
            src = b.hyp_eq(he->index, eqs.equations[he->index]);
        else if (auto* hi = std::get_if<cert_source::HypIneq>(&t.source))
            src = b.hyp_ineq(hi->index, ineqs.inequalities[hi->index]);
        else if (auto* ax = std::get_if<cert_source::Axiom>(&t.source))
            src = b.axiom(ax->kind, ax->var_id);
        else if (auto* ai = std::get_if<cert_source::AxiomIneq>(&t.source))
            src = b.axiom_ineq(ai->kind, ai->var_id);
        else if (auto* sq = std::get_if<cert_source::Square>(&t.source))
            src = b.square(sq->q);
        else
            fail("dynamic", "unknown certificate source");
        if (t.general)
            fail("dynamic", "general multipliers cannot be inlined into LS/PC steps");
        size_t lifted = b.monomial_mul(src, t.monomial);
        pieces.push_back(t.scalar == 1 ? lifted : b.scalar_mul(lifted, t.scalar));
    }
    if (pieces.empty()) fail("dynamic", "empty certificate cannot be inlined");
    return b.add_all(std::move(pieces));
}

}  // namespace cspforge
