#include "cspforge/simulate.hpp"

namespace cspforge {

Monomial multiplicative_encoding(const LitClause& c) {
    Monomial m;
    for (auto& l : c.lits) m = m.times(Var{l.id, !l.twin});
    return m;
}

PolyEquationSystem multiplicative_system(const std::vector<LitClause>& clauses, FieldSpec field) {
    PolyEquationSystem sys;
    sys.field = field;
    for (auto& c : clauses)
        sys.equations.push_back(Polynomial::monomial(field, multiplicative_encoding(c), 1));
    return sys;
}

namespace {

// M-variable a literal contributes to the multiplicative encoding
Var m_var(Var literal) { return Var{literal.id, !literal.twin}; }

void require_accepted(const ResolutionProof& rp, const std::vector<LitClause>& hyps) {
    auto v = check_resolution(rp, hyps);
    if (!v.accepted)
        fail("invalid_proof", "resolution input rejected at line " + std::to_string(v.bad_line) +
                                  ": " + v.reason);
}

}  // namespace

DynamicProof compile_resolution_to_pc(const ResolutionProof& rp,
                                      const std::vector<LitClause>& hyps, FieldSpec field) {
    require_accepted(rp, hyps);
    PolyEquationSystem sys = multiplicative_system(hyps, field);
    DynBuilder b(DynamicKind::PC, field);
    std::vector<size_t> line_for(rp.lines.size());

    // derive M(sup) = 0 from M(sub) = 0 by lifting the missing literals
    auto lift_to = [&](size_t from, const LitClause& sub, const LitClause& sup) {
        size_t cur = from;
        for (auto& l : sup.lits)
            if (!sub.contains(l)) cur = b.var_mul(cur, m_var(l));
        return cur;
    };

    for (size_t i = 0; i < rp.lines.size(); ++i) {
        const auto& line = rp.lines[i];
        if (auto* hy = std::get_if<res_rule::Hypothesis>(&line.rule)) {
            line_for[i] = b.hyp_eq(hy->index, sys.equations[hy->index]);
        } else if (auto* wk = std::get_if<res_rule::Weaken>(&line.rule)) {
            line_for[i] = lift_to(line_for[wk->from], rp.lines[wk->from].clause, line.clause);
        } else if (auto* rs = std::get_if<res_rule::Resolve>(&line.rule)) {
            const LitClause& r = line.clause;
            // a pivot literal surviving in the resolvent means one premise
            // was tautological on the pivot and the step is a weakening
            if (r.contains(mk_var(rs->pivot))) {
                line_for[i] = lift_to(line_for[rs->from_pos], rp.lines[rs->from_pos].clause, r);
                continue;
            }
            if (r.contains(mk_twin(rs->pivot))) {
                line_for[i] = lift_to(line_for[rs->from_neg], rp.lines[rs->from_neg].clause, r);
                continue;
            }
            // symmetric step: weaken both premises to R|x and R|~x, then
            // cancel via the lift of 1 - X - X̄ = 0 by M(R)
            LitClause r_pos = r, r_neg = r;
            r_pos.lits.insert(mk_var(rs->pivot));
            r_neg.lits.insert(mk_twin(rs->pivot));
            size_t mp = lift_to(line_for[rs->from_pos], rp.lines[rs->from_pos].clause, r_pos);
            size_t mn = lift_to(line_for[rs->from_neg], rp.lines[rs->from_neg].clause, r_neg);
            // M(R)(X + X̄ - 1) = 0, scaled by -1: M(R)(1 - X - X̄) = 0
            size_t ax = b.axiom(AxiomEq::TwinSum, rs->pivot);
            size_t lifted = b.monomial_mul(ax, multiplicative_encoding(r));
            size_t neg = b.scalar_mul(lifted, -1);
            // M(R)X̄ + M(R)X + M(R)(1 - X - X̄) = M(R)
            line_for[i] = b.add(b.add(mp, mn), neg);
        }
    }
    // ensure the conclusion is the final line
    size_t concl = line_for[rp.lines.size() - 1];
    DynamicProof proof = b.take();
    if (concl != proof.lines.size() - 1) proof.lines.push_back(proof.lines[concl]);
    return proof;
}

StaticCertificate compile_resolution_to_sa(const ResolutionProof& rp,
                                           const std::vector<LitClause>& hyps) {
    require_accepted(rp, hyps);
    // Internal DAG in symmetric form: initial clauses, one-literal
    // weakenings, and symmetric resolution nodes.
    struct Node {
        LitClause clause;
        enum Kind { Init, Weak, SymRes } kind = Init;
        size_t hyp_index = 0;   // Init
        size_t parent = 0;      // Weak
        Var added{};            // Weak: the literal added
        size_t parent_pos = 0;  // SymRes
        size_t parent_neg = 0;
        uint32_t pivot = 0;
        BigRat weight = 0;
    };
    std::vector<Node> nodes;

    // expand a multi-literal weakening into single steps
    auto weaken_chain = [&](size_t from, const LitClause& sub, const LitClause& sup) {
        size_t cur = from;
        LitClause acc = sub;
        for (auto& l : sup.lits) {
            if (acc.contains(l)) continue;
            acc.lits.insert(l);
            Node nd;
            nd.clause = acc;
            nd.kind = Node::Weak;
            nd.parent = cur;
            nd.added = l;
            nodes.push_back(nd);
            cur = nodes.size() - 1;
        }
        return cur;
    };

    std::vector<size_t> node_for(rp.lines.size());
    for (size_t i = 0; i < rp.lines.size(); ++i) {
        const auto& line = rp.lines[i];
        if (auto* hy = std::get_if<res_rule::Hypothesis>(&line.rule)) {
            Node nd;
            nd.clause = line.clause;
            nd.kind = Node::Init;
            nd.hyp_index = hy->index;
            nodes.push_back(nd);
            node_for[i] = nodes.size() - 1;
        } else if (auto* wk = std::get_if<res_rule::Weaken>(&line.rule)) {
            node_for[i] = weaken_chain(node_for[wk->from], rp.lines[wk->from].clause, line.clause);
        } else if (auto* rs = std::get_if<res_rule::Resolve>(&line.rule)) {
            const LitClause& r = line.clause;
            if (r.contains(mk_var(rs->pivot))) {
                node_for[i] = weaken_chain(node_for[rs->from_pos], rp.lines[rs->from_pos].clause, r);
                continue;
            }
            if (r.contains(mk_twin(rs->pivot))) {
                node_for[i] = weaken_chain(node_for[rs->from_neg], rp.lines[rs->from_neg].clause, r);
                continue;
            }
            LitClause r_pos = r, r_neg = r;
            r_pos.lits.insert(mk_var(rs->pivot));
            r_neg.lits.insert(mk_twin(rs->pivot));
            size_t np = weaken_chain(node_for[rs->from_pos], rp.lines[rs->from_pos].clause, r_pos);
            size_t nn = weaken_chain(node_for[rs->from_neg], rp.lines[rs->from_neg].clause, r_neg);
            Node nd;
            nd.clause = r;
            nd.kind = Node::SymRes;
            nd.parent_pos = np;
            nd.parent_neg = nn;
            nd.pivot = rs->pivot;
            nodes.push_back(nd);
            node_for[i] = nodes.size() - 1;
        }
    }

    // weights: conclusion 1; every node passes its weight to its parents
    size_t concl = node_for[rp.lines.size() - 1];
    nodes[concl].weight = 1;
    for (size_t i = nodes.size(); i-- > 0;) {
        if (nodes[i].weight == 0) continue;
        if (nodes[i].kind == Node::Weak) {
            nodes[nodes[i].parent].weight += nodes[i].weight;
        } else if (nodes[i].kind == Node::SymRes) {
            nodes[nodes[i].parent_pos].weight += nodes[i].weight;
            nodes[nodes[i].parent_neg].weight += nodes[i].weight;
        }
    }

    FieldSpec field = FieldSpec::rationals();
    StaticCertificate cert;
    cert.kind = StaticKind::SA;
    cert.rel = Relation::GeqZero;
    cert.target = -Polynomial::monomial(field, multiplicative_encoding(nodes[concl].clause), 1);
    for (size_t i = 0; i < nodes.size(); ++i) {
        const Node& nd = nodes[i];
        if (nd.weight == 0) continue;
        if (nd.kind == Node::Init) {
            // Q = -M(D): equation source, scalar -weight, multiplier 1
            cert.terms.push_back({cert_source::HypEq{nd.hyp_index}, -nd.weight, Monomial(),
                                  std::nullopt});
        } else if (nd.kind == Node::Weak) {
            // Q = M(D) - M(D|l) = M(D)(1 - varof(l)): lift of 1 - v >= 0
            Var mv = m_var(nd.added);
            AxiomIneq kind = mv.twin ? AxiomIneq::TwinUpper : AxiomIneq::VarUpper;
            cert.terms.push_back({cert_source::AxiomIneq{kind, mv.id}, nd.weight,
                                  multiplicative_encoding(nodes[nd.parent].clause), std::nullopt});
        } else {
            // Q = M(R|x) + M(R|~x) - M(R) = M(R)(X̄ + X - 1): lift of the
            // twin-sum axiom equation by M(R)
            cert.terms.push_back({cert_source::Axiom{AxiomEq::TwinSum, nd.pivot}, nd.weight,
                                  multiplicative_encoding(nd.clause), std::nullopt});
        }
    }
    return cert;
}

}  // namespace cspforge
