#include "cspforge/pseudoexp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace cspforge {

std::vector<Monomial> monomial_basis(const std::vector<uint32_t>& ids, uint32_t d) {
    std::vector<Monomial> out = {Monomial::one()};
    size_t lo = 0;
    for (uint32_t deg = 1; deg <= d; ++deg) {
        size_t hi = out.size();
        for (size_t i = lo; i < hi; ++i) {
            const auto& fac = out[i].factors();
            uint32_t last = fac.empty() ? 0 : fac.back().first.id + 1;
            for (uint32_t id : ids)
                if (id >= last) out.push_back(out[i].times(mk_var(id)));
        }
        lo = hi;
    }
    return out;
}

namespace {

// E extended to polynomials: reduce to the multilinear twin-free normal
// form, then apply the value map linearly.
bool eval_e(const PseudoExpectation& e, const Polynomial& p, BigRat& out, std::string& missing) {
    Polynomial nf = normal_form(p);
    BigRat total = 0;
    for (auto& [m, c] : nf.terms()) {
        auto it = e.values.find(m);
        if (it == e.values.end()) {
            missing = m.to_string();
            return false;
        }
        total += c * it->second;
    }
    out = total;
    return true;
}

}  // namespace

bool is_psd_exact(std::vector<std::vector<BigRat>> a) {
    size_t n = a.size();
    std::vector<bool> done(n, false);
    for (size_t step = 0; step < n; ++step) {
        // pick the largest remaining diagonal entry
        size_t piv = n;
        for (size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            if (a[i][i] < 0) return false;
            if (piv == n || a[i][i] > a[piv][piv]) piv = i;
        }
        if (piv == n) break;
        if (a[piv][piv] == 0) {
            // all remaining diagonals are zero: PSD iff the block is zero
            for (size_t i = 0; i < n; ++i) {
                if (done[i]) continue;
                for (size_t j = 0; j < n; ++j)
                    if (!done[j] && a[i][j] != 0) return false;
            }
            return true;
        }
        done[piv] = true;
        BigRat d = a[piv][piv];
        for (size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            for (size_t j = 0; j < n; ++j) {
                if (done[j]) continue;
                a[i][j] -= a[i][piv] * a[piv][j] / d;
            }
        }
    }
    return true;
}

double min_eigenvalue_jacobi(std::vector<std::vector<double>> a, int sweeps) {
    size_t n = a.size();
    for (int s = 0; s < sweeps; ++s) {
        double off = 0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-24) break;
        for (size_t p = 0; p < n; ++p) {
            for (size_t q = p + 1; q < n; ++q) {
                if (std::fabs(a[p][q]) < 1e-18) continue;
                double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1));
                double c = 1 / std::sqrt(t * t + 1);
                double sn = t * c;
                for (size_t k = 0; k < n; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - sn * akq;
                    a[k][q] = sn * akp + c * akq;
                }
                for (size_t k = 0; k < n; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - sn * aqk;
                    a[q][k] = sn * apk + c * aqk;
                }
            }
        }
    }
    double mn = a.empty() ? 0 : a[0][0];
    for (size_t i = 0; i < n; ++i) mn = std::min(mn, a[i][i]);
    return mn;
}

PseudoVerdict check_pseudo_expectation(const PseudoExpectation& e, const PolyEquationSystem& sys,
                                       uint32_t t) {
    PseudoVerdict v;
    auto reject = [&](const std::string& cond, const std::string& why) {
        v.accepted = false;
        v.condition = cond;
        v.detail = why;
        return v;
    };

    // condition (iii): the value map itself must respect the Boolean
    // reductions (non-multilinear or twin keys must agree with their
    // normal forms)
    for (auto& [m, val] : e.values) {
        bool canonical = m.multilinear();
        for (auto& [var, ex] : m.factors()) canonical = canonical && !var.twin;
        if (canonical) continue;
        Polynomial nf = normal_form(Polynomial::monomial(sys.field, m, 1));
        BigRat expect;
        std::string missing;
        if (!eval_e(e, nf, expect, missing))
            return reject("boolean", "reduction of " + m.to_string() + " undefined at " + missing);
        if (expect != val)
            return reject("boolean", "E(" + m.to_string() + ") disagrees with its reduction");
    }

    std::set<uint32_t> idset;
    for (auto& q : sys.equations)
        for (uint32_t id : q.base_ids()) idset.insert(id);
    for (size_t i = 0; i < sys.vars.size(); ++i) idset.insert(uint32_t(i));
    std::vector<uint32_t> ids(idset.begin(), idset.end());

    // (i) unit mass
    {
        BigRat one;
        std::string missing;
        if (!eval_e(e, Polynomial::constant(sys.field, 1), one, missing))
            return reject("domain", "E(1) undefined");
        if (one != 1) return reject("unit", "E(1) = " + fraction_to_string(one));
    }

    // (ii) E vanishes on M*q for every equation q and monomial M with
    // deg(M) <= 2t - deg(q)
    for (size_t qi = 0; qi < sys.equations.size(); ++qi) {
        const Polynomial& q = sys.equations[qi];
        uint32_t dq = q.degree();
        if (dq > 2 * t) continue;
        for (auto& m : monomial_basis(ids, 2 * t - dq)) {
            BigRat val;
            std::string missing;
            if (!eval_e(e, q.times_monomial(m, 1), val, missing))
                return reject("domain", "E undefined at " + missing);
            if (val != 0)
                return reject("vanishing", "E(M*q) != 0 for equation " + std::to_string(qi) +
                                               ", M = " + m.to_string());
        }
    }

    // (iv) moment matrix over the degree-<=t basis
    auto basis = monomial_basis(ids, t);
    std::vector<std::vector<BigRat>> moment(basis.size(), std::vector<BigRat>(basis.size()));
    for (size_t i = 0; i < basis.size(); ++i) {
        for (size_t j = i; j < basis.size(); ++j) {
            BigRat val;
            std::string missing;
            if (!eval_e(e, Polynomial::monomial(sys.field, basis[i].times(basis[j]), 1), val,
                        missing))
                return reject("domain", "E undefined at " + missing);
            moment[i][j] = moment[j][i] = val;
        }
    }
    if (!is_psd_exact(moment)) return reject("psd", "moment matrix is not positive semidefinite");

    v.accepted = true;
    return v;
}

PseudoExpectation from_distribution(const std::vector<std::map<uint32_t, int>>& points,
                                    const std::vector<uint32_t>& ids, uint32_t t) {
    if (points.empty()) fail("domain_error", "empty distribution");
    PseudoExpectation e;
    e.t = t;
    for (auto& m : monomial_basis(ids, 2 * t)) {
        BigRat total = 0;
        for (auto& p : points) {
            bool one = true;
            for (auto& [v, ex] : m.factors()) {
                auto it = p.find(v.id);
                if (it == p.end()) fail("domain_error", "point does not cover id");
                if (it->second == 0) {
                    one = false;
                    break;
                }
            }
            if (one) total += 1;
        }
        e.values[m] = total / BigRat(points.size());
    }
    return e;
}

}  // namespace cspforge
