#include "cspforge/static_cert.hpp"

#include <algorithm>

namespace cspforge {

std::string to_string(StaticKind k) {
    switch (k) {
        case StaticKind::NS: return "NS";
        case StaticKind::SA: return "SA";
        case StaticKind::SAPlus: return "SA+";
        case StaticKind::SOS: return "SOS";
    }
    return "?";
}

bool StaticCertificate::is_refutation() const {
    if (!target.is_constant()) return false;
    BigRat c = target.constant_term();
    if (rel == Relation::EqZero) return c != 0;
    return c < 0;
}

namespace {

bool ineq_kind_source(const CertSource& s) {
    return std::holds_alternative<cert_source::HypIneq>(s) ||
           std::holds_alternative<cert_source::AxiomIneq>(s) ||
           std::holds_alternative<cert_source::Square>(s);
}

Polynomial source_poly(const CertSource& s, const PolyEquationSystem& eqs,
                       const LinIneqSystem& ineqs, FieldSpec field, bool& ok,
                       std::string& why) {
    ok = true;
    if (auto* he = std::get_if<cert_source::HypEq>(&s)) {
        if (he->index >= eqs.equations.size()) {
            ok = false;
            why = "equation hypothesis index out of range";
            return Polynomial(field);
        }
        return eqs.equations[he->index];
    }
    if (auto* hi = std::get_if<cert_source::HypIneq>(&s)) {
        if (hi->index >= ineqs.inequalities.size()) {
            ok = false;
            why = "inequality hypothesis index out of range";
            return Polynomial(field);
        }
        return ineqs.inequalities[hi->index];
    }
    if (auto* ax = std::get_if<cert_source::Axiom>(&s))
        return axiom_eq_poly(field, ax->kind, ax->var_id);
    if (auto* ai = std::get_if<cert_source::AxiomIneq>(&s))
        return axiom_ineq_poly(field, ai->kind, ai->var_id);
    auto* sq = std::get_if<cert_source::Square>(&s);
    return sq->q * sq->q;
}

}  // namespace

StaticVerdict check_static(const StaticCertificate& c, const PolyEquationSystem& eqs,
                           const LinIneqSystem& ineqs, FieldSpec field) {
    StaticVerdict v;
    auto reject = [&](size_t i, const std::string& why) {
        v.accepted = false;
        v.bad_term = i;
        v.reason = why;
        return v;
    };
    bool semialgebraic = c.kind != StaticKind::NS;
    if (semialgebraic && field.is_prime_field())
        return reject(0, "field_mismatch: SA/SA+/SOS require an ordered field");
    if (c.kind == StaticKind::NS && c.rel != Relation::EqZero)
        return reject(0, "NS proves equations");
    if (semialgebraic && c.rel != Relation::GeqZero)
        return reject(0, "semi-algebraic certificates prove inequalities");

    Polynomial sum(field);
    for (size_t i = 0; i < c.terms.size(); ++i) {
        const auto& t = c.terms[i];
        // admissible sources per kind
        if (c.kind == StaticKind::NS) {
            if (!std::holds_alternative<cert_source::HypEq>(t.source) &&
                !std::holds_alternative<cert_source::Axiom>(t.source))
                return reject(i, "NS admits only equation sources");
        } else if (c.kind == StaticKind::SA) {
            if (std::holds_alternative<cert_source::Square>(t.source))
                return reject(i, "square source outside SA+/SOS");
        }
        bool ok = true;
        std::string why;
        Polynomial src = source_poly(t.source, eqs, ineqs, field, ok, why);
        if (!ok) return reject(i, why);

        Polynomial mult(field);
        if (c.kind == StaticKind::SOS) {
            if (t.general) {
                if (ineq_kind_source(t.source)) {
                    // multiplier must be a square: scalar * q^2, scalar >= 0
                    if (t.scalar < 0) return reject(i, "negative scalar on an inequality source");
                    mult = (*t.general * *t.general).scaled(t.scalar);
                } else {
                    mult = t.general->scaled(t.scalar);
                }
            } else {
                if (ineq_kind_source(t.source)) {
                    // a bare extended monomial is not a square; only scalars pass
                    if (!t.monomial.is_one())
                        return reject(i, "inequality source in SOS lifted by a non-square");
                    if (t.scalar < 0) return reject(i, "negative scalar on an inequality source");
                }
                mult = Polynomial::monomial(field, t.monomial, t.scalar);
            }
        } else {
            if (t.general) return reject(i, "general multipliers are SOS-only");
            if (ineq_kind_source(t.source) && t.scalar < 0)
                return reject(i, "negative scalar on an inequality source");
            mult = Polynomial::monomial(field, t.monomial, t.scalar);
        }

        Polynomial prod = src * mult;
        v.degree = std::max(v.degree, prod.degree());
        v.size += src.size() + mult.size();
        sum = sum + prod;
    }
    v.degree = std::max(v.degree, c.target.degree());
    if (!(sum == c.target)) return reject(c.terms.size(), "identity does not hold");
    v.accepted = true;
    return v;
}

namespace {

// Indicator extended monomial of a full assignment, skipping the listed ids.
Monomial indicator(const std::vector<uint32_t>& ids, uint64_t a,
                   const std::set<uint32_t>& skip) {
    Monomial m;
    for (size_t i = 0; i < ids.size(); ++i) {
        if (skip.count(ids[i])) continue;
        bool one = (a >> i) & 1;
        m = m.times(one ? mk_var(ids[i]) : mk_twin(ids[i]));
    }
    return m;
}

// A hypothesis that is a single multilinear monomial with no contradictory
// (X and X̄) pair can absorb the indicator factors over its own variables.
struct MonomialHyp {
    bool yes = false;
    BigRat coeff;
    Monomial mono;
    std::set<uint32_t> support;
};

MonomialHyp monomial_view(const Polynomial& p) {
    MonomialHyp r;
    if (p.term_count() != 1) return r;
    auto& [m, c] = *p.terms().begin();
    if (!m.multilinear()) return r;
    std::set<uint32_t> supp;
    for (auto& [v, e] : m.factors()) {
        if (m.degree_of(v.partner()) > 0) return r;  // contains X and X̄
        supp.insert(v.id);
    }
    r.yes = true;
    r.coeff = c;
    r.mono = m;
    r.support = std::move(supp);
    return r;
}

struct GoalSetup {
    std::vector<uint32_t> ids;
    Polynomial goal;
};

GoalSetup gather_ids(const PolyEquationSystem& eqs, const LinIneqSystem& ineqs,
                     const Polynomial& goal, size_t var_limit) {
    std::set<uint32_t> idset;
    for (auto& e : eqs.equations)
        for (uint32_t id : e.base_ids()) idset.insert(id);
    for (auto& q : ineqs.inequalities)
        for (uint32_t id : q.base_ids()) idset.insert(id);
    for (uint32_t id : goal.base_ids()) idset.insert(id);
    if (idset.size() > var_limit)
        fail("size_limit", "completeness generator limited to " + std::to_string(var_limit) +
                               " variables");
    return GoalSetup{{idset.begin(), idset.end()}, goal};
}

}  // namespace

StaticCertificate complete_ns(const PolyEquationSystem& hyps, const Polynomial& goal,
                              FieldSpec field, size_t var_limit) {
    LinIneqSystem no_ineqs;
    auto setup = gather_ids(hyps, no_ineqs, goal, var_limit);
    const auto& ids = setup.ids;
    size_t n = ids.size();

    std::vector<MonomialHyp> views;
    views.reserve(hyps.equations.size());
    for (auto& e : hyps.equations) views.push_back(monomial_view(e));

    StaticCertificate cert;
    cert.kind = StaticKind::NS;
    cert.rel = Relation::EqZero;
    cert.target = goal;

    Polynomial covered(field);  // running sum of the hypothesis terms
    for (uint64_t a = 0; a < (uint64_t(1) << n); ++a) {
        std::map<uint32_t, int> asg;
        for (size_t i = 0; i < n; ++i) asg[ids[i]] = int((a >> i) & 1);
        BigRat pv = goal.eval_consistent(asg);
        if (pv == 0) continue;
        // smallest hypothesis with nonzero value at a
        size_t istar = hyps.equations.size();
        BigRat hv;
        for (size_t i = 0; i < hyps.equations.size(); ++i) {
            hv = hyps.equations[i].eval_consistent(asg);
            if (hv != 0) {
                istar = i;
                break;
            }
        }
        if (istar == hyps.equations.size())
            fail("not_a_consequence", "goal is nonzero on a common zero of the hypotheses");
        BigRat c = field.div(pv, hv);
        std::set<uint32_t> skip;
        if (views[istar].yes) skip = views[istar].support;
        Monomial mult = indicator(ids, a, skip);
        cert.terms.push_back({cert_source::HypEq{istar}, c, mult, std::nullopt});
        covered = covered + hyps.equations[istar].times_monomial(mult, c);
    }

    // axioms absorb the difference, which vanishes on twin-consistent points
    auto comb = decompose_vanishing(goal - covered);
    for (auto& t : comb.terms)
        cert.terms.push_back({cert_source::Axiom{t.axiom, t.var_id}, t.coeff, t.monomial,
                              std::nullopt});
    return cert;
}

StaticCertificate complete_sa(const PolyEquationSystem& eqs, const LinIneqSystem& ineqs,
                              const Polynomial& goal, size_t var_limit) {
    FieldSpec field = FieldSpec::rationals();
    if (eqs.field.is_prime_field()) fail("field_mismatch", "SA requires the rationals");
    auto setup = gather_ids(eqs, ineqs, goal, var_limit);
    const auto& ids = setup.ids;
    size_t n = ids.size();

    std::vector<MonomialHyp> views;
    for (auto& e : eqs.equations) views.push_back(monomial_view(e));

    StaticCertificate cert;
    cert.kind = StaticKind::SA;
    cert.rel = Relation::GeqZero;
    cert.target = goal;

    Polynomial covered(field);
    for (uint64_t a = 0; a < (uint64_t(1) << n); ++a) {
        std::map<uint32_t, int> asg;
        for (size_t i = 0; i < n; ++i) asg[ids[i]] = int((a >> i) & 1);
        BigRat pv = goal.eval_consistent(asg);
        if (pv == 0) continue;
        if (pv > 0) {
            // weight on the 1 >= 0 axiom under this assignment's indicator
            Monomial mult = indicator(ids, a, {});
            cert.terms.push_back({cert_source::AxiomIneq{AxiomIneq::One, 0}, pv, mult,
                                  std::nullopt});
            covered = covered + Polynomial::monomial(field, mult, pv);
            continue;
        }
        // pv < 0: need a violated constraint; prefer a nonzero equation
        // (scalar sign free), otherwise a negative inequality
        bool done = false;
        for (size_t i = 0; i < eqs.equations.size() && !done; ++i) {
            BigRat hv = eqs.equations[i].eval_consistent(asg);
            if (hv == 0) continue;
            BigRat c = pv / hv;
            std::set<uint32_t> skip;
            if (views[i].yes) skip = views[i].support;
            Monomial mult = indicator(ids, a, skip);
            cert.terms.push_back({cert_source::HypEq{i}, c, mult, std::nullopt});
            covered = covered + eqs.equations[i].times_monomial(mult, c);
            done = true;
        }
        for (size_t i = 0; i < ineqs.inequalities.size() && !done; ++i) {
            BigRat qv = ineqs.inequalities[i].eval_consistent(asg);
            if (qv >= 0) continue;
            BigRat c = pv / qv;  // both negative: positive scalar
            Monomial mult = indicator(ids, a, {});
            cert.terms.push_back({cert_source::HypIneq{i}, c, mult, std::nullopt});
            covered = covered + ineqs.inequalities[i].times_monomial(mult, c);
            done = true;
        }
        if (!done)
            fail("not_a_consequence", "goal is negative on a point satisfying all hypotheses");
    }

    auto comb = decompose_vanishing(goal - covered);
    for (auto& t : comb.terms)
        cert.terms.push_back({cert_source::Axiom{t.axiom, t.var_id}, t.coeff, t.monomial,
                              std::nullopt});
    return cert;
}

StaticCertificate twin_bridge(const Polynomial& p, const BigRat& c,
                              const std::vector<uint32_t>& j_vars,
                              const std::vector<uint32_t>& k_vars, size_t l_limit) {
    if (j_vars.size() + k_vars.size() > l_limit)
        fail("size_limit", "twin_bridge limited to " + std::to_string(l_limit) + " variables");
    FieldSpec field = p.field();
    Polynomial xs = Polynomial::constant(field, c);
    for (uint32_t j : j_vars) xs = xs.times_var(mk_var(j));
    Polynomial lhs = p * xs;  // c * p * prod X_j, to be completed two ways
    Polynomial with_one_minus = lhs;
    Polynomial with_twins = lhs;
    for (uint32_t k : k_vars) {
        Polynomial om(field);
        om.add_term(Monomial::one(), 1);
        om.add_term(Monomial(mk_var(k)), -1);
        with_one_minus = with_one_minus * om;
        with_twins = with_twins.times_var(mk_twin(k));
    }
    Polynomial target = with_one_minus - with_twins;

    StaticCertificate cert;
    cert.kind = StaticKind::NS;
    cert.rel = Relation::EqZero;
    cert.target = target;
    auto comb = decompose_vanishing(target);
    for (auto& t : comb.terms)
        cert.terms.push_back({cert_source::Axiom{t.axiom, t.var_id}, t.coeff, t.monomial,
                              std::nullopt});
    return cert;
}

StaticCertificate sa_plus_to_sos(const StaticCertificate& c, const PolyEquationSystem& eqs,
                                 const LinIneqSystem& ineqs) {
    if (c.kind != StaticKind::SAPlus) fail("kind_mismatch", "sa_plus_to_sos expects an SA+ certificate");
    StaticCertificate out;
    out.kind = StaticKind::SOS;
    out.rel = c.rel;
    out.target = c.target;
    FieldSpec field = c.target.field();
    for (auto& t : c.terms) {
        if (!ineq_kind_source(t.source) || t.monomial.is_one()) {
            out.terms.push_back(t);
            continue;
        }
        // c*P*m = c*P*m^2 - sum_i (v_i^2 - v_i) * (c*P*stuff_i)
        // for m = v_1...v_d, stuff_i = v_1^2..v_{i-1}^2 * v_{i+1}..v_d
        std::vector<Var> vs;
        for (auto& [v, e] : t.monomial.factors())
            for (uint32_t r = 0; r < e; ++r) vs.push_back(v);
        CertTerm main = t;
        main.general = Polynomial::monomial(field, t.monomial, 1);
        main.monomial = Monomial();
        out.terms.push_back(main);

        bool ok = true;
        std::string why;
        Polynomial src = source_poly(t.source, eqs, ineqs, field, ok, why);
        if (!ok) fail("kind_mismatch", "unresolvable source in SA+ certificate: " + why);
        for (size_t i = 0; i < vs.size(); ++i) {
            Monomial stuff;
            for (size_t j = 0; j < vs.size(); ++j) {
                if (j < i)
                    stuff = stuff.times(vs[j], 2);
                else if (j > i)
                    stuff = stuff.times(vs[j], 1);
            }
            CertTerm corr;
            corr.source = cert_source::Axiom{vs[i].twin ? AxiomEq::TwinSquare : AxiomEq::BoolSquare,
                                             vs[i].id};
            corr.scalar = 1;
            corr.monomial = Monomial();
            corr.general = src.times_monomial(stuff, -t.scalar);
            out.terms.push_back(corr);
        }
    }
    return out;
}

}  // namespace cspforge
