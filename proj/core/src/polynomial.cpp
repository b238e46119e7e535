#include "cspforge/polynomial.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace cspforge {

uint32_t Monomial::degree() const {
    uint32_t d = 0;
    for (auto& [v, e] : factors_) d += e;
    return d;
}

uint32_t Monomial::degree_of(Var v) const {
    for (auto& [w, e] : factors_)
        if (w == v) return e;
    return 0;
}

bool Monomial::multilinear() const {
    for (auto& [v, e] : factors_)
        if (e > 1) return false;
    return true;
}

Monomial Monomial::times(Var v, uint32_t e) const {
    Monomial r = *this;
    auto it = std::lower_bound(r.factors_.begin(), r.factors_.end(), v,
                               [](const auto& f, Var x) { return f.first < x; });
    if (it != r.factors_.end() && it->first == v)
        it->second += e;
    else
        r.factors_.insert(it, {v, e});
    return r;
}

Monomial Monomial::times(const Monomial& o) const {
    Monomial r = *this;
    for (auto& [v, e] : o.factors_) r = r.times(v, e);
    return r;
}

Monomial Monomial::without(Var v, uint32_t e) const {
    Monomial r = *this;
    for (auto it = r.factors_.begin(); it != r.factors_.end(); ++it) {
        if (it->first == v) {
            if (it->second < e) fail("monomial", "without(): exponent underflow");
            it->second -= e;
            if (it->second == 0) r.factors_.erase(it);
            return r;
        }
    }
    fail("monomial", "without(): variable absent");
}

std::vector<Var> Monomial::variables() const {
    std::vector<Var> vs;
    vs.reserve(factors_.size());
    for (auto& [v, e] : factors_) vs.push_back(v);
    return vs;
}

std::string Monomial::to_string() const {
    if (factors_.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (auto& [v, e] : factors_) {
        if (!first) os << "*";
        first = false;
        os << (v.twin ? "~x" : "x") << v.id;
        if (e > 1) os << "^" << e;
    }
    return os.str();
}

Polynomial Polynomial::constant(FieldSpec f, const BigRat& c) {
    Polynomial p(f);
    p.add_term(Monomial::one(), c);
    return p;
}

Polynomial Polynomial::variable(FieldSpec f, Var v) {
    Polynomial p(f);
    p.add_term(Monomial(v), 1);
    return p;
}

Polynomial Polynomial::monomial(FieldSpec f, const Monomial& m, const BigRat& c) {
    Polynomial p(f);
    p.add_term(m, c);
    return p;
}

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

BigRat Polynomial::constant_term() const {
    auto it = terms_.find(Monomial::one());
    return it == terms_.end() ? BigRat(0) : it->second;
}

uint32_t Polynomial::degree() const {
    uint32_t d = 0;
    for (auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
}

BigRat Polynomial::coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? BigRat(0) : it->second;
}

void Polynomial::add_term(const Monomial& m, const BigRat& c) {
    BigRat r = field_.reduce(c);
    if (r == 0) return;
    auto [it, fresh] = terms_.emplace(m, r);
    if (!fresh) {
        it->second = field_.add(it->second, r);
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    if (field_ != o.field_) fail("field_mismatch", "adding polynomials over different fields");
    Polynomial r = *this;
    for (auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator-() const {
    Polynomial r(field_);
    for (auto& [m, c] : terms_) r.terms_.emplace(m, field_.neg(c));
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (field_ != o.field_) fail("field_mismatch", "multiplying polynomials over different fields");
    Polynomial r(field_);
    for (auto& [m1, c1] : terms_)
        for (auto& [m2, c2] : o.terms_) r.add_term(m1.times(m2), field_.mul(c1, c2));
    return r;
}

Polynomial Polynomial::scaled(const BigRat& c) const {
    Polynomial r(field_);
    BigRat rc = field_.reduce(c);
    if (rc == 0) return r;
    for (auto& [m, k] : terms_) r.terms_.emplace(m, field_.mul(k, rc));
    return r;
}

Polynomial Polynomial::times_monomial(const Monomial& m, const BigRat& c) const {
    Polynomial r(field_);
    BigRat rc = field_.reduce(c);
    if (rc == 0) return r;
    for (auto& [m1, c1] : terms_) r.terms_.emplace(m1.times(m), field_.mul(c1, rc));
    return r;
}

std::vector<Var> Polynomial::variables() const {
    std::set<Var> s;
    for (auto& [m, c] : terms_)
        for (auto& [v, e] : m.factors()) s.insert(v);
    return {s.begin(), s.end()};
}

std::vector<uint32_t> Polynomial::base_ids() const {
    std::set<uint32_t> s;
    for (auto& [m, c] : terms_)
        for (auto& [v, e] : m.factors()) s.insert(v.id);
    return {s.begin(), s.end()};
}

BigRat Polynomial::eval_consistent(const std::map<uint32_t, int>& assignment) const {
    BigRat total = 0;
    for (auto& [m, c] : terms_) {
        bool zero = false;
        for (auto& [v, e] : m.factors()) {
            auto it = assignment.find(v.id);
            if (it == assignment.end()) fail("domain_error", "unassigned variable in evaluation");
            int val = v.twin ? 1 - it->second : it->second;
            if (val == 0) {
                zero = true;
                break;
            }
        }
        if (!zero) total += c;
    }
    return field_.reduce(total);
}

BigRat Polynomial::eval_raw(const std::map<Var, BigRat>& assignment) const {
    BigRat total = 0;
    for (auto& [m, c] : terms_) {
        BigRat prod = c;
        for (auto& [v, e] : m.factors()) {
            auto it = assignment.find(v);
            if (it == assignment.end()) fail("domain_error", "unassigned variable in evaluation");
            for (uint32_t i = 0; i < e && prod != 0; ++i) prod *= it->second;
        }
        total += prod;
    }
    return field_.reduce(total);
}

Polynomial Polynomial::substituted(const std::map<Var, Polynomial>& sigma) const {
    Polynomial r(field_);
    for (auto& [m, c] : terms_) {
        Polynomial prod = Polynomial::constant(field_, c);
        for (auto& [v, e] : m.factors()) {
            auto it = sigma.find(v);
            for (uint32_t i = 0; i < e; ++i) {
                if (it == sigma.end())
                    prod = prod.times_var(v);
                else
                    prod = prod * it->second;
            }
        }
        r = r + prod;
    }
    return r;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        if (m.is_one())
            os << fraction_to_string(c);
        else if (c == 1)
            os << m.to_string();
        else
            os << fraction_to_string(c) << "*" << m.to_string();
    }
    return os.str();
}

Polynomial axiom_eq_poly(FieldSpec f, AxiomEq kind, uint32_t id) {
    Polynomial p(f);
    switch (kind) {
        case AxiomEq::BoolSquare:
            p.add_term(Monomial(mk_var(id)).times(mk_var(id)), 1);
            p.add_term(Monomial(mk_var(id)), -1);
            break;
        case AxiomEq::TwinSquare:
            p.add_term(Monomial(mk_twin(id)).times(mk_twin(id)), 1);
            p.add_term(Monomial(mk_twin(id)), -1);
            break;
        case AxiomEq::TwinSum:
            p.add_term(Monomial(mk_var(id)), 1);
            p.add_term(Monomial(mk_twin(id)), 1);
            p.add_term(Monomial::one(), -1);
            break;
    }
    return p;
}

Polynomial axiom_ineq_poly(FieldSpec f, AxiomIneq kind, uint32_t id) {
    Polynomial p(f);
    switch (kind) {
        case AxiomIneq::VarNonneg:
            p.add_term(Monomial(mk_var(id)), 1);
            break;
        case AxiomIneq::TwinNonneg:
            p.add_term(Monomial(mk_twin(id)), 1);
            break;
        case AxiomIneq::VarUpper:
            p.add_term(Monomial::one(), 1);
            p.add_term(Monomial(mk_var(id)), -1);
            break;
        case AxiomIneq::TwinUpper:
            p.add_term(Monomial::one(), 1);
            p.add_term(Monomial(mk_twin(id)), -1);
            break;
        case AxiomIneq::One:
            p.add_term(Monomial::one(), 1);
            break;
    }
    return p;
}

namespace {

struct SquareHit {
    Monomial mono;
    BigRat coeff;
    Var var;
};

std::optional<SquareHit> find_square(const Polynomial& p) {
    for (auto& [m, c] : p.terms())
        for (auto& [v, e] : m.factors())
            if (e > 1) return SquareHit{m, c, v};
    return std::nullopt;
}

}  // namespace

MultilinearizeResult multilinearize(const Polynomial& p) {
    // Repeatedly rewrite v^2*rest -> v*rest using v^2 - v = 0, recording the
    // cofactor. Terminates since total degree drops each step.
    MultilinearizeResult res{p, {}};
    std::map<Var, Polynomial> acc;
    while (auto hit = find_square(res.p_star)) {
        Monomial rest = hit->mono.without(hit->var, 2);
        Polynomial cof = Polynomial::monomial(p.field(), rest, hit->coeff);
        auto [it, fresh] = acc.emplace(hit->var, cof);
        if (!fresh) it->second = it->second + cof;
        Polynomial delta(p.field());
        delta.add_term(hit->mono, -hit->coeff);
        delta.add_term(rest.times(hit->var), hit->coeff);
        res.p_star = res.p_star + delta;
    }
    // P_orig = P* + sum steps c*(v^2-v)*rest, so the witness identity
    // P + sum Q_v (v^2 - v) = P* holds with Q_v = -accumulated cofactor.
    for (auto& [v, q] : acc) res.witnesses.push_back({v, -q});
    Polynomial check = p;
    for (auto& [v, q] : res.witnesses) {
        Polynomial sq(p.field());
        sq.add_term(Monomial(v).times(v), 1);
        sq.add_term(Monomial(v), -1);
        check = check + q * sq;
    }
    if (!(check == res.p_star)) fail("internal", "multilinearization witness identity failed");
    return res;
}

Polynomial normal_form(const Polynomial& p) {
    // Eliminate twins via X̄ -> 1 - X, then drop exponents via X^e -> X.
    Polynomial r(p.field());
    for (auto& [m, c] : p.terms()) {
        Polynomial prod = Polynomial::constant(p.field(), c);
        for (auto& [v, e] : m.factors()) {
            Polynomial f(p.field());
            if (v.twin) {
                f.add_term(Monomial::one(), 1);
                f.add_term(Monomial(mk_var(v.id)), -1);
            } else {
                f.add_term(Monomial(v), 1);
            }
            // idempotent: one factor per variable regardless of exponent
            // is wrong for mixed signs, so expand fully then reduce below.
            for (uint32_t i = 0; i < e; ++i) prod = prod * f;
        }
        r = r + prod;
    }
    // reduce exponents
    Polynomial next(p.field());
    for (auto& [m, c] : r.terms()) {
        Monomial reduced;
        for (auto& [v, e] : m.factors()) reduced = reduced.times(v, 1);
        next.add_term(reduced, c);
    }
    return next;
}

AxiomCombination decompose_vanishing(const Polynomial& d) {
    // Invariant maintained below: d = rest + sum(out.terms) exactly.
    AxiomCombination out;
    Polynomial rest = d;
    // Step 1: remove twins via X̄ = (1-X) - (X + X̄ - 1), i.e.
    //   c*X̄*M' = c*(1-X)*M' - c*(X+X̄-1)*M'.
    for (;;) {
        std::optional<std::tuple<Monomial, BigRat, Var>> found;
        for (auto& [m, c] : rest.terms()) {
            for (auto& [v, e] : m.factors())
                if (v.twin) {
                    found = {m, c, v};
                    break;
                }
            if (found) break;
        }
        if (!found) break;
        auto [m, c, tw] = *found;
        Monomial mrest = m.without(tw);
        out.terms.push_back({AxiomEq::TwinSum, tw.id, mrest, c});
        Polynomial delta(d.field());
        delta.add_term(m, d.field().neg(c));
        delta.add_term(mrest, c);
        delta.add_term(mrest.times(mk_var(tw.id)), d.field().neg(c));
        rest = rest + delta;
    }
    // Step 2: reduce squares via c*v^2*M' = c*v*M' + c*(v^2-v)*M'.
    while (auto hit = find_square(rest)) {
        Monomial mrest = hit->mono.without(hit->var, 2);
        out.terms.push_back({hit->var.twin ? AxiomEq::TwinSquare : AxiomEq::BoolSquare,
                             hit->var.id, mrest, hit->coeff});
        Polynomial delta(d.field());
        delta.add_term(hit->mono, d.field().neg(hit->coeff));
        delta.add_term(mrest.times(hit->var), hit->coeff);
        rest = rest + delta;
    }
    // rest is now twin-free and multilinear; it must be identically zero.
    if (!rest.is_zero())
        fail("not_vanishing",
             "polynomial does not vanish on all twin-consistent points; residual " +
                 rest.to_string());
    return out;
}

}  // namespace cspforge
