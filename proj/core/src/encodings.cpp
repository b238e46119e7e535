#include "cspforge/encodings.hpp"

#include <algorithm>
#include <functional>
#include <istream>
#include <sstream>

namespace cspforge {

uint32_t VarUniverse::add(const std::string& name, std::optional<EncodingVariable> pair) {
    auto it = by_name_.find(name);
    if (it != by_name_.end()) return it->second;
    uint32_t id = uint32_t(names_.size());
    names_.push_back(name);
    pairs_.push_back(pair);
    by_name_[name] = id;
    if (pair) by_pair_[{pair->element, pair->value}] = id;
    return id;
}

uint32_t VarUniverse::id_of(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) fail("unknown_element", "unknown variable " + name);
    return it->second;
}

std::optional<uint32_t> VarUniverse::try_id_of(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

std::optional<uint32_t> VarUniverse::pair_id(ElemId element, ElemId value) const {
    auto it = by_pair_.find({element, value});
    if (it == by_pair_.end()) return std::nullopt;
    return it->second;
}

const std::string& VarUniverse::name(uint32_t id) const {
    if (id >= names_.size()) fail("unknown_element", "variable id out of range");
    return names_[id];
}

std::optional<EncodingVariable> VarUniverse::pair(uint32_t id) const {
    if (id >= pairs_.size()) fail("unknown_element", "variable id out of range");
    return pairs_[id];
}

bool LitClause::tautological() const {
    for (auto& v : lits)
        if (lits.count(v.partner())) return true;
    return false;
}

bool LitClause::subsumes(const LitClause& o) const {
    return std::includes(o.lits.begin(), o.lits.end(), lits.begin(), lits.end());
}

Formula LitClause::to_formula() const {
    std::vector<Formula> ls;
    ls.reserve(lits.size());
    for (auto& v : lits) ls.push_back(Formula::lit(v));
    return Formula::lor(std::move(ls));
}

size_t CnfInstance::max_width() const {
    size_t w = 0;
    for (auto& c : clauses) w = std::max(w, c.width());
    return w;
}

bool CnfInstance::satisfied_by(const std::map<uint32_t, bool>& assignment) const {
    for (auto& c : clauses) {
        bool sat = false;
        for (auto& l : c.lits) {
            auto it = assignment.find(l.id);
            if (it == assignment.end()) fail("domain_error", "assignment not total");
            if (it->second != l.twin) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

std::optional<std::map<uint32_t, bool>> CnfInstance::brute_force_solve() const {
    size_t n = vars.size();
    if (n > 26) fail("size_limit", "brute force capped at 26 variables");
    for (uint64_t mask = 0; mask < (uint64_t(1) << n); ++mask) {
        std::map<uint32_t, bool> a;
        for (size_t i = 0; i < n; ++i) a[uint32_t(i)] = (mask >> i) & 1;
        if (satisfied_by(a)) return a;
    }
    return std::nullopt;
}

uint64_t CnfInstance::count_models() const {
    size_t n = vars.size();
    if (n > 26) fail("size_limit", "brute force capped at 26 variables");
    uint64_t count = 0;
    for (uint64_t mask = 0; mask < (uint64_t(1) << n); ++mask) {
        std::map<uint32_t, bool> a;
        for (size_t i = 0; i < n; ++i) a[uint32_t(i)] = (mask >> i) & 1;
        if (satisfied_by(a)) ++count;
    }
    return count;
}

VarUniverse encoding_universe(const RelStructure& a, const RelStructure& b) {
    VarUniverse u;
    for (ElemId x : a.domain())
        for (ElemId v : b.domain())
            u.add("X(" + std::to_string(x) + "," + std::to_string(v) + ")",
                  EncodingVariable{x, v});
    return u;
}

namespace {

void check_shared_vocab(const RelStructure& a, const RelStructure& b) {
    if (!(a.vocab() == b.vocab()))
        fail("vocabulary_mismatch", "instance and template vocabularies differ");
}

// Enumerates B^r \ R(B) tuples for type-3 constraints.
template <typename Fn>
void for_bad_tuples(const RelStructure& b, const std::string& rel, int arity, Fn&& fn) {
    const auto& good = b.relation(rel);
    Tuple t(arity);
    std::function<void(int)> rec = [&](int pos) {
        if (pos == arity) {
            if (!good.count(t)) fn(t);
            return;
        }
        for (ElemId v : b.domain()) {
            t[pos] = v;
            rec(pos + 1);
        }
    };
    rec(0);
}

}  // namespace

CnfInstance encode_cnf(const RelStructure& a, const RelStructure& b) {
    check_shared_vocab(a, b);
    CnfInstance f;
    f.vars = encoding_universe(a, b);
    // type 1: each instance element takes some value
    for (ElemId x : a.domain()) {
        LitClause c;
        for (ElemId v : b.domain()) c.lits.insert(mk_var(*f.vars.pair_id(x, v)));
        f.clauses.push_back(std::move(c));
    }
    // type 2: at most one value, per unordered template pair
    for (ElemId x : a.domain()) {
        const auto& dom = b.domain();
        for (size_t i = 0; i < dom.size(); ++i)
            for (size_t j = i + 1; j < dom.size(); ++j) {
                LitClause c;
                c.lits.insert(mk_twin(*f.vars.pair_id(x, dom[i])));
                c.lits.insert(mk_twin(*f.vars.pair_id(x, dom[j])));
                f.clauses.push_back(std::move(c));
            }
    }
    // type 3: relation tuples avoid the bad template tuples
    for (auto& [rel, tuples] : a.relations()) {
        int r = a.vocab().arity(rel);
        for (auto& t : tuples) {
            for_bad_tuples(b, rel, r, [&](const Tuple& bad) {
                LitClause c;
                for (int i = 0; i < r; ++i)
                    c.lits.insert(mk_twin(*f.vars.pair_id(t[i], bad[i])));
                f.clauses.push_back(std::move(c));
            });
        }
    }
    return f;
}

PolyEquationSystem encode_eq(const RelStructure& a, const RelStructure& b, FieldSpec field) {
    check_shared_vocab(a, b);
    PolyEquationSystem sys;
    sys.vars = encoding_universe(a, b);
    sys.field = field;
    auto monomial_for = [&](const LitClause& c) {
        // multiplicative encoding: positive literal contributes its twin
        Monomial m;
        for (auto& l : c.lits) m = m.times(Var{l.id, !l.twin});
        return m;
    };
    CnfInstance cnf = encode_cnf(a, b);
    for (auto& c : cnf.clauses)
        sys.equations.push_back(Polynomial::monomial(field, monomial_for(c), 1));
    return sys;
}

LinIneqSystem encode_ineq(const RelStructure& a, const RelStructure& b) {
    check_shared_vocab(a, b);
    LinIneqSystem sys;
    sys.vars = encoding_universe(a, b);
    CnfInstance cnf = encode_cnf(a, b);
    for (auto& c : cnf.clauses) {
        // additive encoding: sum of literal polynomials minus 1
        Polynomial p(FieldSpec::rationals());
        for (auto& l : c.lits) p.add_term(Monomial(l), 1);
        p.add_term(Monomial::one(), -1);
        sys.inequalities.push_back(std::move(p));
    }
    return sys;
}

std::map<uint32_t, bool> hom_to_assignment(const Homomorphism& h, const RelStructure& a,
                                           const RelStructure& b, const VarUniverse& vars) {
    std::map<uint32_t, bool> out;
    for (size_t i = 0; i < vars.size(); ++i) {
        auto p = vars.pair(uint32_t(i));
        if (!p) fail("domain_error", "non-encoding variable in universe");
        out[uint32_t(i)] = (h.map.at(p->element) == p->value);
    }
    return out;
}

std::optional<Homomorphism> assignment_to_hom(const std::map<uint32_t, bool>& assignment,
                                              const RelStructure& a, const RelStructure& b,
                                              const VarUniverse& vars) {
    Homomorphism h;
    for (size_t i = 0; i < vars.size(); ++i) {
        if (!assignment.at(uint32_t(i))) continue;
        auto p = vars.pair(uint32_t(i));
        if (!p) fail("domain_error", "non-encoding variable in universe");
        auto [it, fresh] = h.map.emplace(p->element, p->value);
        if (!fresh && it->second != p->value) return std::nullopt;  // two values
    }
    for (ElemId x : a.domain())
        if (!h.map.count(x)) return std::nullopt;  // no value
    if (!is_homomorphism(h, a, b)) return std::nullopt;
    return h;
}

namespace {

// -1: unset, 0: literal false, 1: literal true
int literal_value_under(const VarUniverse& vars, const PartialAssignment& rho, Var l) {
    auto p = vars.pair(l.id);
    if (!p) return -1;
    auto it = rho.map.find(p->element);
    if (it == rho.map.end()) return -1;
    bool var_true = (it->second == p->value);
    return (var_true != l.twin) ? 1 : 0;
}

}  // namespace

CnfInstance restrict_cnf(const CnfInstance& f, const PartialAssignment& rho) {
    for (auto& [e, v] : rho.map) {
        bool known = false;
        for (size_t i = 0; i < f.vars.size() && !known; ++i) {
            auto p = f.vars.pair(uint32_t(i));
            known = p && p->element == e;
        }
        if (!known) fail("unknown_element", "restriction mentions element outside the instance");
    }
    CnfInstance out;
    out.vars = f.vars;
    for (auto& c : f.clauses) {
        LitClause nc;
        bool satisfied = false;
        for (auto& l : c.lits) {
            int v = literal_value_under(f.vars, rho, l);
            if (v == 1) {
                satisfied = true;
                break;
            }
            if (v == -1) nc.lits.insert(l);
        }
        if (!satisfied) out.clauses.push_back(std::move(nc));
    }
    return out;
}

PolyEquationSystem restrict_eq(const PolyEquationSystem& f, const PartialAssignment& rho) {
    PolyEquationSystem out;
    out.vars = f.vars;
    out.field = f.field;
    std::map<Var, Polynomial> sigma;
    for (size_t i = 0; i < f.vars.size(); ++i) {
        auto p = f.vars.pair(uint32_t(i));
        if (!p) continue;
        auto it = rho.map.find(p->element);
        if (it == rho.map.end()) continue;
        int val = (it->second == p->value) ? 1 : 0;
        sigma[mk_var(uint32_t(i))] = Polynomial::constant(f.field, val);
        sigma[mk_twin(uint32_t(i))] = Polynomial::constant(f.field, 1 - val);
    }
    for (auto& eq : f.equations) {
        Polynomial r = eq.substituted(sigma);
        if (r.is_zero()) continue;  // satisfied equation vanishes
        out.equations.push_back(std::move(r));
    }
    return out;
}

std::string export_dimacs(const CnfInstance& f) {
    std::ostringstream os;
    os << "p cnf " << f.vars.size() << " " << f.clauses.size() << "\n";
    for (auto& c : f.clauses) {
        for (auto& l : c.lits) os << (l.twin ? "-" : "") << (l.id + 1) << " ";
        os << "0\n";
    }
    return os.str();
}

CnfInstance import_dimacs(std::istream& in) {
    CnfInstance f;
    std::string tok;
    long declared_vars = -1, declared_clauses = -1;
    while (in >> tok) {
        if (tok == "c") {
            std::string line;
            std::getline(in, line);
            continue;
        }
        if (tok == "p") {
            std::string kind;
            in >> kind >> declared_vars >> declared_clauses;
            if (kind != "cnf") fail("parse", "expected DIMACS cnf header");
            for (long i = 0; i < declared_vars; ++i) f.vars.add("v" + std::to_string(i + 1));
            break;
        }
        fail("parse", "unexpected token before DIMACS header: " + tok);
    }
    if (declared_vars < 0) fail("parse", "missing DIMACS header");
    LitClause cur;
    long lit;
    while (in >> lit) {
        if (lit == 0) {
            f.clauses.push_back(cur);
            cur = LitClause{};
            continue;
        }
        uint32_t id = uint32_t(std::abs(lit) - 1);
        if (id >= f.vars.size()) fail("parse", "literal exceeds declared variable count");
        cur.lits.insert(Var{id, lit < 0});
    }
    if (!cur.lits.empty()) fail("parse", "trailing clause without terminating 0");
    return f;
}

std::vector<std::map<uint32_t, int>> brute_force_eq_solutions(const PolyEquationSystem& sys) {
    std::set<uint32_t> idset;
    for (auto& eq : sys.equations)
        for (uint32_t id : eq.base_ids()) idset.insert(id);
    for (size_t i = 0; i < sys.vars.size(); ++i) idset.insert(uint32_t(i));
    std::vector<uint32_t> ids(idset.begin(), idset.end());
    if (ids.size() > 24) fail("size_limit", "brute force capped at 24 variables");
    std::vector<std::map<uint32_t, int>> out;
    for (uint64_t mask = 0; mask < (uint64_t(1) << ids.size()); ++mask) {
        std::map<uint32_t, int> a;
        for (size_t i = 0; i < ids.size(); ++i) a[ids[i]] = int((mask >> i) & 1);
        bool ok = true;
        for (auto& eq : sys.equations)
            if (eq.eval_consistent(a) != 0) {
                ok = false;
                break;
            }
        if (ok) out.push_back(std::move(a));
    }
    return out;
}

std::vector<std::map<uint32_t, int>> brute_force_ineq_solutions(const LinIneqSystem& sys) {
    std::set<uint32_t> idset;
    for (auto& p : sys.inequalities)
        for (uint32_t id : p.base_ids()) idset.insert(id);
    for (size_t i = 0; i < sys.vars.size(); ++i) idset.insert(uint32_t(i));
    std::vector<uint32_t> ids(idset.begin(), idset.end());
    if (ids.size() > 24) fail("size_limit", "brute force capped at 24 variables");
    std::vector<std::map<uint32_t, int>> out;
    for (uint64_t mask = 0; mask < (uint64_t(1) << ids.size()); ++mask) {
        std::map<uint32_t, int> a;
        for (size_t i = 0; i < ids.size(); ++i) a[ids[i]] = int((mask >> i) & 1);
        bool ok = true;
        for (auto& p : sys.inequalities)
            if (p.eval_consistent(a) < 0) {
                ok = false;
                break;
            }
        if (ok) out.push_back(std::move(a));
    }
    return out;
}

}  // namespace cspforge
