#include "cspforge/lsgauss.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace cspforge {

Gf2LinSystem Gf2LinSystem::from_tseitin(const TseitinSystem& s) {
    if (s.group.moduli() != std::vector<uint32_t>{2})
        fail("group", "from_tseitin expects a Z2 system");
    Gf2LinSystem out;
    std::map<int, uint32_t> var_of;
    for (int e : s.variable_ids) {
        var_of[e] = out.nvars;
        ++out.nvars;
    }
    for (auto& eq : s.equations) {
        std::map<uint32_t, int> parity;
        for (auto& [v, z] : eq.terms) parity[var_of.at(v)] ^= (z & 1);
        std::vector<uint32_t> row;
        for (auto& [v, p] : parity)
            if (p) row.push_back(v);
        out.rows.push_back(std::move(row));
        out.rhs.push_back(eq.rhs != 0 ? 1 : 0);
    }
    return out;
}

std::vector<Polynomial> clause_inequalities(const std::vector<uint32_t>& support, int b) {
    FieldSpec f = FieldSpec::rationals();
    std::vector<Polynomial> out;
    size_t k = support.size();
    for (uint64_t mask = 0; mask < (uint64_t(1) << k); ++mask) {
        if ((__builtin_popcountll(mask) % 2) != ((1 - b) & 1)) continue;
        Polynomial p(f);
        for (size_t i = 0; i < k; ++i) {
            bool in_t = (mask >> i) & 1;
            p.add_term(Monomial(in_t ? mk_twin(support[i]) : mk_var(support[i])), 1);
        }
        p.add_term(Monomial::one(), -1);
        out.push_back(std::move(p));
    }
    return out;
}

LinIneqSystem s_of(const Gf2LinSystem& sys) {
    LinIneqSystem out;
    for (uint32_t v = 0; v < sys.nvars; ++v) out.vars.add("x" + std::to_string(v));
    for (size_t r = 0; r < sys.rows.size(); ++r)
        for (auto& p : clause_inequalities(sys.rows[r], sys.rhs[r]))
            out.inequalities.push_back(p);
    return out;
}

namespace {

struct Elimination {
    // reduced rows as (support set, rhs, combination of original rows)
    std::vector<std::set<uint32_t>> rows;
    std::vector<int> rhs;
    std::vector<std::set<size_t>> combo;
};

Elimination eliminate(const Gf2LinSystem& s) {
    Elimination e;
    for (size_t r = 0; r < s.rows.size(); ++r) {
        e.rows.push_back({s.rows[r].begin(), s.rows[r].end()});
        e.rhs.push_back(s.rhs[r]);
        e.combo.push_back({r});
    }
    auto xor_into = [](std::set<uint32_t>& a, const std::set<uint32_t>& b) {
        for (uint32_t v : b) {
            auto it = a.find(v);
            if (it != a.end())
                a.erase(it);
            else
                a.insert(v);
        }
    };
    auto xor_combo = [](std::set<size_t>& a, const std::set<size_t>& b) {
        for (size_t v : b) {
            auto it = a.find(v);
            if (it != a.end())
                a.erase(it);
            else
                a.insert(v);
        }
    };
    size_t rank_row = 0;
    for (uint32_t col = 0; col < s.nvars && rank_row < e.rows.size(); ++col) {
        size_t piv = e.rows.size();
        for (size_t r = rank_row; r < e.rows.size(); ++r)
            if (e.rows[r].count(col)) {
                piv = r;
                break;
            }
        if (piv == e.rows.size()) continue;
        std::swap(e.rows[piv], e.rows[rank_row]);
        std::swap(e.rhs[piv], e.rhs[rank_row]);
        std::swap(e.combo[piv], e.combo[rank_row]);
        for (size_t r = 0; r < e.rows.size(); ++r) {
            if (r == rank_row || !e.rows[r].count(col)) continue;
            xor_into(e.rows[r], e.rows[rank_row]);
            e.rhs[r] ^= e.rhs[rank_row];
            xor_combo(e.combo[r], e.combo[rank_row]);
        }
        ++rank_row;
    }
    return e;
}

}  // namespace

std::optional<ContradictionWitness> find_contradiction_subset(const Gf2LinSystem& s) {
    auto e = eliminate(s);
    for (size_t r = 0; r < e.rows.size(); ++r) {
        if (e.rows[r].empty() && e.rhs[r] == 1) {
            ContradictionWitness w;
            w.rows.assign(e.combo[r].begin(), e.combo[r].end());
            return w;
        }
    }
    return std::nullopt;
}

std::optional<std::vector<int>> solve_gf2(const Gf2LinSystem& s) {
    auto e = eliminate(s);
    for (size_t r = 0; r < e.rows.size(); ++r)
        if (e.rows[r].empty() && e.rhs[r] == 1) return std::nullopt;
    std::vector<int> sol(s.nvars, 0);
    for (size_t r = 0; r < e.rows.size(); ++r) {
        if (e.rows[r].empty()) continue;
        // leading variable determined by the free tail (all set to 0)
        sol[*e.rows[r].begin()] = e.rhs[r];
    }
    // verify
    for (size_t r = 0; r < s.rows.size(); ++r) {
        int sum = 0;
        for (uint32_t v : s.rows[r]) sum ^= sol[v];
        if (sum != s.rhs[r]) fail("internal", "gf2 solver produced a bad witness");
    }
    return sol;
}

Polynomial LinearForm::to_poly(FieldSpec f) const {
    Polynomial p(f);
    for (auto& [v, a] : coeffs) p.add_term(Monomial(mk_var(v)), a);
    return p;
}

Polynomial gap_poly(const LinearForm& l, const BigRat& c, FieldSpec f) {
    Polynomial lp = l.to_poly(f);
    Polynomial a = lp - Polynomial::constant(f, c);
    Polynomial b = a + Polynomial::constant(f, 1);
    return a * b;
}

namespace {

const FieldSpec kQ = FieldSpec::rationals();

// 0 >= 0, via the two signings of an equation axiom
size_t zero_geq(DynBuilder& b, uint32_t any_var) {
    size_t ax = b.axiom(AxiomEq::BoolSquare, any_var);
    return b.add(b.eq_to_geq(ax, 1), b.eq_to_geq(ax, -1));
}

// X*X̄ = 0 from the axioms
size_t twin_product_zero(DynBuilder& b, uint32_t var) {
    size_t lifted = b.var_mul(b.axiom(AxiomEq::TwinSum, var), mk_var(var));
    size_t neg = b.scalar_mul(b.axiom(AxiomEq::BoolSquare, var), -1);
    return b.add(lifted, neg);
}

// equation line times an arbitrary polynomial, by monomial decomposition
size_t multiply_eq_by_poly(DynBuilder& b, size_t eq_line, const Polynomial& poly,
                           uint32_t fallback_var) {
    if (poly.is_zero()) return b.scalar_mul(eq_line, 0);
    std::vector<size_t> pieces;
    for (auto& [m, c] : poly.terms()) {
        size_t t = b.monomial_mul(eq_line, m);
        pieces.push_back(c == 1 ? t : b.scalar_mul(t, c));
    }
    (void)fallback_var;
    return b.add_all(std::move(pieces));
}

struct GapBuilder {
    DynBuilder& b;
    std::vector<std::pair<uint32_t, long long>> terms;  // (var, integer coeff)
    std::map<std::pair<size_t, long long>, size_t> memo;

    // linear prefix polynomial sum_{i<j} a_i X_i
    Polynomial prefix(size_t j) const {
        Polynomial p(kQ);
        for (size_t i = 0; i < j; ++i)
            p.add_term(Monomial(mk_var(terms[i].first)), terms[i].second);
        return p;
    }

    size_t line(size_t j, long long c) {
        auto key = std::make_pair(j, c);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        size_t res;
        if (j == 0) {
            long long k = c * (c - 1);
            uint32_t anchor = terms.empty() ? 0 : terms[0].first;
            res = (k == 0) ? zero_geq(b, anchor)
                           : b.scalar_mul(b.axiom_ineq(AxiomIneq::One, 0), BigRat(k));
        } else {
            uint32_t x = terms[j - 1].first;
            long long a = terms[j - 1].second;
            size_t pa = line(j - 1, c - a);
            size_t pb = line(j - 1, c);
            Polynomial lj = prefix(j - 1);
            // D_c(L_j) X >= 0:
            //   D_{c-a}(L_{j-1}) X + (X^2-X) * a(2L_{j-1} + aX - 2c + a + 1)
            size_t line_a = b.var_mul(pa, mk_var(x));
            Polynomial ga(kQ);
            ga = lj.scaled(2) + Polynomial::variable(kQ, mk_var(x)).scaled(a) +
                 Polynomial::constant(kQ, -2 * c + a + 1);
            ga = ga.scaled(a);
            size_t corr_a =
                multiply_eq_by_poly(b, b.axiom(AxiomEq::BoolSquare, x), ga, x);
            size_t full_a = b.add(line_a, corr_a);
            // D_c(L_j) X̄ >= 0:
            //   D_c(L_{j-1}) X̄ + (X X̄) * (a(2L_{j-1} - 2c + 1) + a^2 X)
            size_t line_b = b.var_mul(pb, mk_twin(x));
            Polynomial gb = lj.scaled(2 * a) + Polynomial::constant(kQ, a * (-2 * c + 1)) +
                            Polynomial::variable(kQ, mk_var(x)).scaled(a * a);
            size_t corr_b = multiply_eq_by_poly(b, twin_product_zero(b, x), gb, x);
            size_t full_b = b.add(line_b, corr_b);
            // sum and strip the (X + X̄ - 1) slack
            size_t both = b.add(full_a, full_b);
            Polynomial dcl = gap_poly_from(j, c);
            size_t slack = multiply_eq_by_poly(b, b.axiom(AxiomEq::TwinSum, x), dcl, x);
            res = b.add(both, b.eq_to_geq(b.scalar_mul(slack, -1), 1));
            if (!(b.line(res).poly == dcl)) fail("internal", "gap induction identity broke");
        }
        memo.emplace(key, res);
        return res;
    }

    Polynomial gap_poly_from(size_t j, long long c) const {
        Polynomial lp = prefix(j);
        Polynomial a = lp - Polynomial::constant(kQ, c);
        return a * (a + Polynomial::constant(kQ, 1));
    }
};

}  // namespace

DynamicProof prove_gap(const LinearForm& l, long long c) {
    DynBuilder b(DynamicKind::LS, kQ);
    GapBuilder gb{b, {}, {}};
    for (auto& [v, a] : l.coeffs) {
        BigInt num = boost::multiprecision::numerator(a);
        BigInt den = boost::multiprecision::denominator(a);
        if (den != 1) fail("domain_error", "prove_gap needs integer coefficients");
        gb.terms.push_back({v, num.convert_to<long long>()});
    }
    size_t last = gb.line(gb.terms.size(), c);
    auto proof = b.take();
    if (last != proof.lines.size() - 1) proof.lines.push_back(proof.lines[last]);
    return proof;
}

Monomial ext_monomial(const std::vector<uint32_t>& i_set, const std::vector<uint32_t>& t_set) {
    std::set<uint32_t> t(t_set.begin(), t_set.end());
    Monomial m;
    for (uint32_t v : i_set) m = m.times(t.count(v) ? mk_var(v) : mk_twin(v));
    return m;
}

namespace {

// sum_{T subset I} M^I_T - 1 = 0, built inside an existing builder
size_t fullsum_line(DynBuilder& b, const std::vector<uint32_t>& i_set) {
    if (i_set.empty()) {
        // 1 - 1 = 0 as the scaled-to-zero axiom
        return b.scalar_mul(b.axiom(AxiomEq::TwinSum, 0), 0);
    }
    size_t cur = b.axiom(AxiomEq::TwinSum, i_set[0]);  // X + X̄ - 1 = 0
    for (size_t q = 1; q < i_set.size(); ++q) {
        size_t with_x = b.var_mul(cur, mk_var(i_set[q]));
        size_t with_t = b.var_mul(cur, mk_twin(i_set[q]));
        size_t merged = b.add(with_x, with_t);
        cur = b.add(merged, b.axiom(AxiomEq::TwinSum, i_set[q]));
    }
    return cur;
}

size_t extmon_line(DynBuilder& b, const std::vector<uint32_t>& i_set,
                   const std::vector<uint32_t>& t_set) {
    std::set<uint32_t> t(t_set.begin(), t_set.end());
    Monomial m = ext_monomial(i_set, t_set);
    std::vector<size_t> pieces;
    for (uint32_t v : i_set) {
        if (t.count(v)) {
            // X_v M - M = (X^2 - X) * (M / X_v)
            pieces.push_back(b.monomial_mul(b.axiom(AxiomEq::BoolSquare, v), m.without(mk_var(v))));
        } else {
            // X_v M = (X X̄) * (M / X̄_v)
            pieces.push_back(b.monomial_mul(twin_product_zero(b, v), m.without(mk_twin(v))));
        }
    }
    if (pieces.empty()) return b.scalar_mul(b.axiom(AxiomEq::TwinSum, 0), 0);
    return b.add_all(std::move(pieces));
}

}  // namespace

DynamicProof prove_fullsum(const std::vector<uint32_t>& i_set, size_t limit) {
    if (i_set.size() > limit) fail("size_limit", "fullsum limited to |I| <= " + std::to_string(limit));
    DynBuilder b(DynamicKind::LS, kQ);
    size_t last = fullsum_line(b, i_set);
    auto proof = b.take();
    if (last != proof.lines.size() - 1) proof.lines.push_back(proof.lines[last]);
    return proof;
}

DynamicProof prove_extmon(const std::vector<uint32_t>& i_set, const std::vector<uint32_t>& t_set) {
    for (uint32_t v : t_set)
        if (std::find(i_set.begin(), i_set.end(), v) == i_set.end())
            fail("domain_error", "T must be a subset of I");
    DynBuilder b(DynamicKind::LS, kQ);
    size_t last = extmon_line(b, i_set, t_set);
    auto proof = b.take();
    if (last != proof.lines.size() - 1) proof.lines.push_back(proof.lines[last]);
    return proof;
}

DynamicProof refute_3lin_z2(const Gf2LinSystem& sys) {
    auto witness = find_contradiction_subset(sys);
    if (!witness) fail("satisfiable", "system has a GF(2) solution");
    // order J rows to keep prefix supports connected-ish (small L_k support)
    std::vector<size_t> order;
    {
        std::vector<size_t> pool(witness->rows.begin(), witness->rows.end());
        std::set<uint32_t> covered;
        while (!pool.empty()) {
            size_t best = 0;
            long best_overlap = -1;
            for (size_t i = 0; i < pool.size(); ++i) {
                long ov = 0;
                for (uint32_t v : sys.rows[pool[i]]) ov += covered.count(v) ? 1 : 0;
                if (ov > best_overlap) {
                    best_overlap = ov;
                    best = i;
                }
            }
            for (uint32_t v : sys.rows[pool[best]]) covered.insert(v);
            order.push_back(pool[best]);
            pool.erase(pool.begin() + long(best));
        }
        // reverse: the greedy built good suffixes; prefixes L_k sum rows
        // 1..k, so place overlapping rows first
        std::reverse(order.begin(), order.end());
    }
    size_t jn = order.size();

    // global S(E) hypothesis indexing: row-major, subsets by ascending mask
    LinIneqSystem ineqs = s_of(sys);
    std::vector<size_t> row_base(sys.rows.size());
    {
        size_t at = 0;
        for (size_t r = 0; r < sys.rows.size(); ++r) {
            row_base[r] = at;
            at += clause_inequalities(sys.rows[r], sys.rhs[r]).size();
        }
    }
    auto hyp_index = [&](size_t row, uint64_t mask) {
        size_t off = 0;
        for (uint64_t m2 = 0; m2 < mask; ++m2)
            if ((__builtin_popcountll(m2) % 2) == ((1 - sys.rhs[row]) & 1)) ++off;
        return row_base[row] + off;
    };

    // L_k = (sum_{j<=k} row_j + sum_{j>k} b_j) / 2 over the reordered J
    auto level_form = [&](size_t k) {
        Polynomial p(kQ);
        for (size_t j = 0; j < k; ++j)
            for (uint32_t v : sys.rows[order[j]]) p.add_term(Monomial(mk_var(v)), BigRat(1, 2));
        long long tail = 0;
        for (size_t j = k; j < jn; ++j) tail += sys.rhs[order[j]];
        p.add_term(Monomial::one(), BigRat(tail, 2));
        return p;
    };
    long long total_b = 0;
    for (size_t j = 0; j < jn; ++j) total_b += sys.rhs[order[j]];
    if (total_b % 2 == 0) fail("internal", "contradiction subset with even rhs sum");
    long long qq = (total_b - 1) / 2;
    long long c_star = qq + 1;

    DynBuilder b(DynamicKind::LS, kQ);
    // base level: D_c(L_J) >= 0 for c in {c*, ..., c*+|J|} via the gap proofs
    std::map<long long, size_t> level_lines;
    {
        Polynomial lj = level_form(jn);
        // integer linear form: 2 L_J has even coefficients by the row-sum
        GapBuilder gb{b, {}, {}};
        for (auto& [m, coef] : lj.terms()) {
            if (m.is_one()) continue;
            BigRat c2 = coef;
            BigInt num = boost::multiprecision::numerator(c2);
            BigInt den = boost::multiprecision::denominator(c2);
            if (den != 1) fail("internal", "L_J has non-integer coefficients");
            gb.terms.push_back({m.factors()[0].first.id, num.convert_to<long long>()});
        }
        BigRat k0 = lj.coeff(Monomial::one());
        if (boost::multiprecision::denominator(k0) != 1)
            fail("internal", "L_J has a non-integer constant");
        long long shift = boost::multiprecision::numerator(k0).convert_to<long long>();
        for (long long c = c_star; c <= c_star + (long long)jn; ++c)
            level_lines[c] = gb.line(gb.terms.size(), c - shift);
    }

    // reverse induction on k
    for (size_t k = jn; k-- > 0;) {
        size_t row = order[k];  // equation number k+1 in 1-based terms
        const auto& support = sys.rows[row];
        int bb = sys.rhs[row];
        Polynomial lk = level_form(k);
        Polynomial lk1 = level_form(k + 1);

        // per-level shared objects
        // bad subsets: |T| = 1 - b mod 2 (these index the S(E) hypotheses)
        std::vector<uint64_t> bad_masks, good_masks;
        for (uint64_t mask = 0; mask < (uint64_t(1) << support.size()); ++mask) {
            if ((__builtin_popcountll(mask) % 2) == ((1 - bb) & 1))
                bad_masks.push_back(mask);
            else
                good_masks.push_back(mask);
        }
        auto subset_of = [&](uint64_t mask) {
            std::vector<uint32_t> t;
            for (size_t i = 0; i < support.size(); ++i)
                if ((mask >> i) & 1) t.push_back(support[i]);
            return t;
        };

        // M^I_T = 0 for each bad T: -M >= 0 from the S(E) inequality
        // (local SA completeness), M >= 0 by lifting 1 >= 0
        std::vector<size_t> bad_eq_lines;
        for (uint64_t mask : bad_masks) {
            auto tset = subset_of(mask);
            Monomial m = ext_monomial(support, tset);
            size_t idx = hyp_index(row, mask);
            LinIneqSystem local;
            local.inequalities.push_back(ineqs.inequalities[idx]);
            Polynomial goal = -Polynomial::monomial(kQ, m, 1);
            auto cert = complete_sa({}, local, goal);
            for (auto& term : cert.terms)
                if (auto* hi = std::get_if<cert_source::HypIneq>(&term.source))
                    term.source = cert_source::HypIneq{idx};
            size_t neg_m = inline_static(b, cert, {}, ineqs);
            size_t pos_m = b.monomial_mul(b.axiom_ineq(AxiomIneq::One, 0), m);
            bad_eq_lines.push_back(b.pair_geq(pos_m, b.scalar_mul(neg_m, 1)));
        }
        std::optional<size_t> bad_sum;
        if (!bad_eq_lines.empty()) bad_sum = b.add_all(bad_eq_lines);

        // fullsum equation over the support
        size_t full = fullsum_line(b, support);

        // shared products with L_k (for the c-indexed combinations)
        auto shared_products = [&](size_t eq_line) {
            size_t u1 = multiply_eq_by_poly(b, eq_line, lk, support.empty() ? 0 : support[0]);
            size_t u2 = multiply_eq_by_poly(b, u1, lk, support.empty() ? 0 : support[0]);
            return std::make_pair(u1, u2);
        };
        auto [full_l, full_ll] = shared_products(full);
        std::optional<std::pair<size_t, size_t>> bad_l;
        if (bad_sum) bad_l = shared_products(*bad_sum);

        // D_c(P) combination of an equation line W: W_ll + (1-2c) W_l + (c^2-c) W
        auto dc_combo = [&](size_t w, size_t wl, size_t wll, long long c) {
            size_t acc = wll;
            if (1 - 2 * c != 0) acc = b.add(acc, b.scalar_mul(wl, BigRat(1 - 2 * c)));
            long long cc = c * c - c;
            if (cc != 0) acc = b.add(acc, b.scalar_mul(w, BigRat(cc)));
            return acc;
        };

        std::map<long long, size_t> next_lines;
        for (long long c = c_star; c <= c_star + (long long)k; ++c) {
            std::vector<size_t> good_lines;
            for (uint64_t mask : good_masks) {
                auto tset = subset_of(mask);
                long long t = __builtin_popcountll(mask);
                long long d2 = (t - bb);
                if (d2 % 2 != 0) fail("internal", "good subset with odd t-b");
                long long d = c + d2 / 2;
                size_t start = level_lines.at(d);
                Monomial m = ext_monomial(support, tset);
                size_t lifted = b.monomial_mul(start, m);
                // A = (sum_{i in I} X_i - t) M^I_T = 0
                size_t a_line = extmon_line(b, support, tset);
                // first factor swap: add -(1/2) A (L_{k+1} - d + 1)
                Polynomial f1 = lk1 - Polynomial::constant(kQ, d - 1);
                size_t corr1 = multiply_eq_by_poly(b, a_line, f1, support[0]);
                size_t step1 = b.add(lifted, b.eq_to_geq(b.scalar_mul(corr1, BigRat(-1, 2)), 1));
                // second factor swap: add -(1/2) A (L_k - c)
                Polynomial f2 = lk - Polynomial::constant(kQ, c);
                size_t corr2 = multiply_eq_by_poly(b, a_line, f2, support[0]);
                size_t step2 = b.add(step1, b.eq_to_geq(b.scalar_mul(corr2, BigRat(-1, 2)), 1));
                good_lines.push_back(step2);
            }
            std::optional<size_t> acc;
            if (!good_lines.empty()) acc = b.add_all(good_lines);
            if (bad_l) {
                size_t bad_dc = dc_combo(*bad_sum, bad_l->first, bad_l->second, c);
                acc = acc ? b.add(*acc, b.eq_to_geq(bad_dc, 1)) : b.eq_to_geq(bad_dc, 1);
            }
            if (!acc) fail("internal", "equation with no subsets at all");
            // subtract D_c (fullsum - 1) to land on D_c(L_k) >= 0
            size_t full_dc = dc_combo(full, full_l, full_ll, c);
            size_t res = b.add(*acc, b.eq_to_geq(b.scalar_mul(full_dc, -1), 1));
            Polynomial want = (lk - Polynomial::constant(kQ, c)) *
                              (lk - Polynomial::constant(kQ, c - 1));
            if (!(b.line(res).poly == want)) fail("internal", "level identity broke");
            next_lines[c] = res;
        }
        level_lines = std::move(next_lines);
    }

    // D_{q+1}(L_0) = -1/4; scale by 4
    size_t last = b.scalar_mul(level_lines.at(c_star), 4);
    auto proof = b.take();
    if (last != proof.lines.size() - 1) proof.lines.push_back(proof.lines[last]);
    return proof;
}

}  // namespace cspforge
