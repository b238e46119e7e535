#include "cspforge/tseitin.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <set>

namespace cspforge {

AbelianGroup::AbelianGroup(std::vector<uint32_t> moduli) : moduli_(std::move(moduli)) {
    if (moduli_.empty()) fail("group", "group needs at least one cyclic factor");
    order_ = 1;
    for (uint32_t q : moduli_) {
        if (q < 2) fail("group", "cyclic factor must have order >= 2");
        order_ *= q;
    }
    if (order_ > 1'000'000) fail("size_limit", "group order too large");
}

int AbelianGroup::one() const {
    std::vector<uint32_t> c(moduli_.size(), 0);
    c[0] = 1 % moduli_[0];
    return from_coords(c);
}

std::vector<uint32_t> AbelianGroup::coords(int a) const {
    std::vector<uint32_t> c(moduli_.size());
    uint64_t rem = uint64_t(a);
    for (size_t i = 0; i < moduli_.size(); ++i) {
        c[i] = uint32_t(rem % moduli_[i]);
        rem /= moduli_[i];
    }
    return c;
}

int AbelianGroup::from_coords(const std::vector<uint32_t>& c) const {
    uint64_t a = 0, base = 1;
    for (size_t i = 0; i < moduli_.size(); ++i) {
        a += (c[i] % moduli_[i]) * base;
        base *= moduli_[i];
    }
    return int(a);
}

int AbelianGroup::add(int a, int b) const {
    auto ca = coords(a), cb = coords(b);
    for (size_t i = 0; i < moduli_.size(); ++i) ca[i] = (ca[i] + cb[i]) % moduli_[i];
    return from_coords(ca);
}

int AbelianGroup::neg(int a) const {
    auto c = coords(a);
    for (size_t i = 0; i < moduli_.size(); ++i) c[i] = (moduli_[i] - c[i]) % moduli_[i];
    return from_coords(c);
}

int AbelianGroup::mul_int(long long z, int a) const {
    auto c = coords(a);
    for (size_t i = 0; i < moduli_.size(); ++i) {
        long long v = (z % moduli_[i]) * c[i] % moduli_[i];
        if (v < 0) v += moduli_[i];
        c[i] = uint32_t(v);
    }
    return from_coords(c);
}

std::string AbelianGroup::to_string(int a) const {
    auto c = coords(a);
    if (c.size() == 1) return std::to_string(c[0]);
    std::string s = "(";
    for (size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
    return s + ")";
}

std::string AbelianGroup::name() const {
    std::string s;
    for (size_t i = 0; i < moduli_.size(); ++i)
        s += (i ? "+" : "") + ("z" + std::to_string(moduli_[i]));
    return s;
}

int DiGraph::add_edge(int tail, int head) {
    if (tail < 0 || tail >= n_ || head < 0 || head >= n_) fail("graph", "edge endpoint out of range");
    edges_.push_back({int(edges_.size()), tail, head});
    return edges_.back().id;
}

std::vector<int> DiGraph::out_edges(int v) const {
    std::vector<int> r;
    for (auto& e : edges_)
        if (e.tail == v && e.head != v) r.push_back(e.id);
    return r;
}

std::vector<int> DiGraph::in_edges(int v) const {
    std::vector<int> r;
    for (auto& e : edges_)
        if (e.head == v && e.tail != v) r.push_back(e.id);
    return r;
}

std::vector<int> DiGraph::boundary(const std::vector<int>& w) const {
    std::set<int> ws(w.begin(), w.end());
    std::vector<int> r;
    for (auto& e : edges_) {
        bool t = ws.count(e.tail) > 0, h = ws.count(e.head) > 0;
        if (t != h) r.push_back(e.id);
    }
    return r;
}

bool DiGraph::connected() const {
    if (n_ == 0) return true;
    std::vector<int> all(n_);
    std::iota(all.begin(), all.end(), 0);
    return induced_connected(all);
}

bool DiGraph::induced_connected(const std::vector<int>& w) const {
    if (w.empty()) return false;
    std::set<int> ws(w.begin(), w.end());
    std::set<int> seen;
    std::queue<int> q;
    q.push(w[0]);
    seen.insert(w[0]);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (auto& e : edges_) {
            int other = -1;
            if (e.tail == v && ws.count(e.head)) other = e.head;
            if (e.head == v && ws.count(e.tail)) other = e.tail;
            if (other >= 0 && !seen.count(other)) {
                seen.insert(other);
                q.push(other);
            }
        }
    }
    return seen.size() == ws.size();
}

std::vector<int> DiGraph::degree_sequence() const {
    std::vector<int> deg(n_, 0);
    for (auto& e : edges_) {
        if (e.tail == e.head) continue;
        deg[e.tail]++;
        deg[e.head]++;
    }
    return deg;
}

TseitinSystem gen_tseitin(const DiGraph& h, const std::vector<int>& sigma, const AbelianGroup& g) {
    if (int(sigma.size()) != h.vertex_count()) fail("graph", "labelling size mismatch");
    TseitinSystem s;
    s.group = g;
    s.graph = h;
    s.sigma = sigma;
    for (auto& e : h.edges()) s.variable_ids.push_back(e.id);
    for (int v = 0; v < h.vertex_count(); ++v) {
        GroupEquation eq;
        for (int e : h.out_edges(v)) eq.terms.push_back({e, 1});
        for (int e : h.in_edges(v)) eq.terms.push_back({e, -1});
        std::sort(eq.terms.begin(), eq.terms.end());
        eq.rhs = sigma[v];
        s.equations.push_back(std::move(eq));
    }
    return s;
}

bool tseitin_satisfiable(const TseitinSystem& s) {
    if (!s.graph.connected()) fail("not_connected", "satisfiability criterion needs a connected graph");
    int sum = s.group.zero();
    for (int l : s.sigma) sum = s.group.add(sum, l);
    return sum == s.group.zero();
}

std::optional<std::vector<int>> brute_force_group_solution(const AbelianGroup& g,
                                                           const std::vector<GroupEquation>& eqs,
                                                           const std::vector<int>& var_ids,
                                                           uint64_t node_limit) {
    // order variables; track for each equation how many of its terms are
    // unassigned and the partial sum of assigned ones
    std::map<int, size_t> var_pos;
    for (size_t i = 0; i < var_ids.size(); ++i) var_pos[var_ids[i]] = i;
    size_t n = var_ids.size();
    std::vector<int> assign(n, -1);
    // per equation: terms grouped by variable position
    struct EqState {
        const GroupEquation* eq;
        int unassigned;
        int partial;  // group element: sum of assigned z_i * value_i
    };
    std::vector<EqState> st;
    std::vector<std::vector<size_t>> eqs_of_var(n);
    for (auto& e : eqs) {
        EqState es{&e, 0, g.zero()};
        std::set<size_t> positions;
        for (auto& [v, z] : e.terms) positions.insert(var_pos.at(v));
        es.unassigned = int(positions.size());
        for (size_t p : positions) eqs_of_var[p].push_back(st.size());
        st.push_back(es);
        if (es.unassigned == 0 && e.rhs != g.zero()) return std::nullopt;
    }
    uint64_t nodes = 0;
    std::function<bool(size_t)> rec = [&](size_t pos) -> bool {
        if (++nodes > node_limit) fail("size_limit", "brute force node limit exceeded");
        if (pos == n) return true;
        for (uint64_t val = 0; val < g.order(); ++val) {
            assign[pos] = int(val);
            bool ok = true;
            // update equations touching this variable
            std::vector<std::pair<size_t, std::pair<int, int>>> undo;
            for (size_t ei : eqs_of_var[pos]) {
                int delta = g.zero();
                for (auto& [v, z] : st[ei].eq->terms)
                    if (var_pos.at(v) == pos) delta = g.add(delta, g.mul_int(z, int(val)));
                undo.push_back({ei, {st[ei].unassigned, st[ei].partial}});
                st[ei].partial = g.add(st[ei].partial, delta);
                st[ei].unassigned -= 1;
                if (st[ei].unassigned == 0 && st[ei].partial != st[ei].eq->rhs) ok = false;
            }
            if (ok && rec(pos + 1)) return true;
            for (auto& [ei, prev] : undo) {
                st[ei].unassigned = prev.first;
                st[ei].partial = prev.second;
            }
            assign[pos] = -1;
        }
        return false;
    };
    if (!rec(0)) return std::nullopt;
    return assign;
}

GroupEquation boundary_equation(const TseitinSystem& s, const std::vector<int>& w) {
    if (!s.graph.induced_connected(w)) fail("not_connected", "boundary of a disconnected set");
    std::set<int> ws(w.begin(), w.end());
    GroupEquation eq;
    eq.rhs = s.group.zero();
    std::map<int, int> coeff;
    for (int v : w) {
        for (int e : s.graph.out_edges(v)) coeff[e] += 1;
        for (int e : s.graph.in_edges(v)) coeff[e] -= 1;
        eq.rhs = s.group.add(eq.rhs, s.sigma[v]);
    }
    for (auto& [e, z] : coeff)
        if (z != 0) eq.terms.push_back({e, z});
    return eq;
}

namespace {

double exact_expansion(const DiGraph& h) {
    int n = h.vertex_count();
    double best = 1e18;
    for (uint64_t mask = 1; mask < (uint64_t(1) << n); ++mask) {
        int size = __builtin_popcountll(mask);
        if (size > n / 2) continue;
        std::vector<int> w;
        for (int v = 0; v < n; ++v)
            if ((mask >> v) & 1) w.push_back(v);
        best = std::min(best, double(h.boundary(w).size()) / size);
    }
    return best;
}

double spectral_expansion_bound(const DiGraph& h) {
    // Cheeger-type bound for edge expansion: e(H) >= lambda_2(Laplacian)/2
    int n = h.vertex_count();
    std::vector<std::vector<double>> lap(n, std::vector<double>(n, 0.0));
    for (auto& e : h.edges()) {
        if (e.tail == e.head) continue;
        lap[e.tail][e.tail] += 1;
        lap[e.head][e.head] += 1;
        lap[e.tail][e.head] -= 1;
        lap[e.head][e.tail] -= 1;
    }
    // lambda_2 via deflation of the all-ones kernel: add a rank-one shift
    double big = 2.0 * n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) lap[i][j] += big / n;
    // smallest eigenvalue of the shifted matrix is lambda_2 when
    // lambda_2 < big (true for desk-scale graphs)
    double l2 = 0;
    {
        // local Jacobi (duplicated small helper to avoid a header cycle)
        auto a = lap;
        for (int s = 0; s < 60; ++s) {
            for (int p = 0; p < n; ++p)
                for (int q = p + 1; q < n; ++q) {
                    if (std::fabs(a[p][q]) < 1e-15) continue;
                    double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
                    double t = (theta >= 0 ? 1.0 : -1.0) /
                               (std::fabs(theta) + std::sqrt(theta * theta + 1));
                    double c = 1 / std::sqrt(t * t + 1);
                    double sn = t * c;
                    for (int k = 0; k < n; ++k) {
                        double akp = a[k][p], akq = a[k][q];
                        a[k][p] = c * akp - sn * akq;
                        a[k][q] = sn * akp + c * akq;
                    }
                    for (int k = 0; k < n; ++k) {
                        double apk = a[p][k], aqk = a[q][k];
                        a[p][k] = c * apk - sn * aqk;
                        a[q][k] = sn * apk + c * aqk;
                    }
                }
        }
        l2 = a[0][0];
        for (int i = 0; i < n; ++i) l2 = std::min(l2, a[i][i]);
    }
    return std::max(0.0, l2 / 2);
}

}  // namespace

ExpanderSample sample_expander(int n, uint64_t seed, int degree, int max_retries) {
    if ((int64_t(n) * degree) % 2 != 0) fail("graph", "n*degree must be even");
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        DiGraph g(n);
        // union of perfect matchings (n even) or random pairing of stubs
        std::vector<int> stubs;
        for (int v = 0; v < n; ++v)
            for (int d = 0; d < degree; ++d) stubs.push_back(v);
        std::shuffle(stubs.begin(), stubs.end(), rng);
        bool loop = false;
        for (size_t i = 0; i + 1 < stubs.size(); i += 2) {
            if (stubs[i] == stubs[i + 1]) {
                loop = true;
                break;
            }
            // direction seed-derived via the shuffle order
            g.add_edge(stubs[i], stubs[i + 1]);
        }
        if (loop || !g.connected()) continue;
        ExpanderSample out;
        out.graph = g;
        if (n <= 20) {
            out.expansion = exact_expansion(g);
            out.exact = true;
        } else {
            out.expansion = spectral_expansion_bound(g);
            out.exact = false;
        }
        if (out.expansion <= 0) continue;
        return out;
    }
    fail("retry_exhausted", "no connected sample with positive expansion");
}

std::vector<std::vector<int>> bubble_partition(const DiGraph& h, const BubbleOptions& opts) {
    if (!h.connected()) fail("not_connected", "bubble partition needs a connected graph");
    int n = h.vertex_count();
    int target = opts.target_size > 0
                     ? opts.target_size
                     : std::max(1, int(std::floor(std::pow(double(n), 2.0 / 3.0))));
    // BFS-grow connected parts of roughly target size
    std::vector<int> part(n, -1);
    int next_part = 0;
    for (int start = 0; start < n; ++start) {
        if (part[start] >= 0) continue;
        std::queue<int> q;
        q.push(start);
        part[start] = next_part;
        int grown = 1;
        while (!q.empty() && grown < target) {
            int v = q.front();
            q.pop();
            for (auto& e : h.edges()) {
                int other = -1;
                if (e.tail == v) other = e.head;
                if (e.head == v) other = e.tail;
                if (other >= 0 && part[other] < 0) {
                    part[other] = next_part;
                    ++grown;
                    q.push(other);
                    if (grown >= target) break;
                }
            }
        }
        ++next_part;
    }
    // adjacency matrix of parts
    auto parts_adjacent = [&](int p, int q) {
        for (auto& e : h.edges())
            if ((part[e.tail] == p && part[e.head] == q) || (part[e.tail] == q && part[e.head] == p))
                return true;
        return false;
    };
    auto merge_into = [&](int from, int into) {
        for (int v = 0; v < n; ++v)
            if (part[v] == from) part[v] = into;
        // renumber to keep parts dense
        for (int v = 0; v < n; ++v)
            if (part[v] == next_part - 1) part[v] = from;
        --next_part;
    };
    // grown fragments may be disconnected from their seed only if BFS
    // stopped early; fix by merging any disconnected part into a neighbor
    auto part_vertices = [&](int p) {
        std::vector<int> vs;
        for (int v = 0; v < n; ++v)
            if (part[v] == p) vs.push_back(v);
        return vs;
    };
    for (int p = 0; p < next_part;) {
        auto vs = part_vertices(p);
        if (h.induced_connected(vs)) {
            ++p;
            continue;
        }
        // move one connected component of the part into an adjacent part
        std::set<int> comp;
        std::queue<int> q;
        q.push(vs[0]);
        comp.insert(vs[0]);
        std::set<int> inpart(vs.begin(), vs.end());
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (auto& e : h.edges()) {
                int other = -1;
                if (e.tail == v) other = e.head;
                if (e.head == v) other = e.tail;
                if (other >= 0 && inpart.count(other) && !comp.count(other)) {
                    comp.insert(other);
                    q.push(other);
                }
            }
        }
        // reassign the complement of comp to neighboring parts greedily
        for (int v : vs) {
            if (comp.count(v)) continue;
            for (auto& e : h.edges()) {
                int other = -1;
                if (e.tail == v) other = e.head;
                if (e.head == v) other = e.tail;
                if (other >= 0 && part[other] != p) {
                    part[v] = part[other];
                    break;
                }
            }
        }
    }
    // enforce pairwise adjacency by merging offending parts into neighbors
    bool again = true;
    while (again && next_part > 1) {
        again = false;
        for (int p = 0; p < next_part && !again; ++p) {
            for (int q = p + 1; q < next_part && !again; ++q) {
                if (parts_adjacent(p, q)) continue;
                // merge q into one of its adjacent parts (connected stays)
                int host = -1;
                for (int r = 0; r < next_part; ++r)
                    if (r != q && parts_adjacent(q, r)) {
                        host = r;
                        break;
                    }
                if (host < 0) fail("partition_failed", "isolated part in a connected graph");
                merge_into(std::max(q, host) == q ? q : host,
                           std::max(q, host) == q ? host : q);
                again = true;
            }
        }
    }
    int required = std::max(opts.min_parts,
                            int(std::floor(opts.c * std::cbrt(double(n)))));
    if (opts.force_odd && next_part % 2 == 0) {
        if (next_part < 2) fail("partition_failed", "cannot force odd part count");
        merge_into(next_part - 1, next_part - 2);
    }
    if (next_part < required)
        fail("partition_failed", "only " + std::to_string(next_part) + " bubbles, need " +
                                     std::to_string(required));
    std::vector<std::vector<int>> out(next_part);
    for (int v = 0; v < n; ++v) out[part[v]].push_back(v);
    // verify both conditions exhaustively
    for (auto& vs : out)
        if (!h.induced_connected(vs)) fail("partition_failed", "part not connected");
    for (size_t p = 0; p < out.size(); ++p)
        for (size_t q = p + 1; q < out.size(); ++q)
            if (!parts_adjacent(int(p), int(q))) fail("partition_failed", "parts not adjacent");
    return out;
}

HardInstance build_hard_instance(int n, const AbelianGroup& g, uint64_t seed) {
    for (int attempt = 0; attempt < 50; ++attempt) {
        auto sample = sample_expander(n, seed + uint64_t(attempt) * 7919);
        std::vector<std::vector<int>> bubbles;
        for (int tsz = 2; tsz <= std::max(2, n / 5) && bubbles.empty(); ++tsz) {
            try {
                BubbleOptions opts;
                opts.min_parts = 5;
                opts.target_size = tsz;
                bubbles = bubble_partition(sample.graph, opts);
            } catch (const Error&) {
            }
        }
        if (bubbles.empty()) continue;
        int h = int(bubbles.size());
        int m = (h - 1) / 2;
        // blue bubbles V_1..V_m, green W_1..W_{m+1}
        std::vector<std::vector<int>> blue(bubbles.begin(), bubbles.begin() + m);
        std::vector<std::vector<int>> green(bubbles.begin() + m, bubbles.end());

        // pick one red edge per (blue, green) pair; direct it green -> blue
        DiGraph directed(sample.graph.vertex_count());
        std::vector<std::vector<int>> red(m, std::vector<int>(m + 1, -1));
        std::map<int, std::pair<int, int>> red_dir;  // edge id -> (tail, head)
        std::set<int> red_ids;
        auto in_set = [](const std::vector<int>& vs, int v) {
            return std::find(vs.begin(), vs.end(), v) != vs.end();
        };
        bool ok = true;
        for (int i = 0; i < m && ok; ++i) {
            for (int j = 0; j < m + 1 && ok; ++j) {
                int found = -1;
                for (auto& e : sample.graph.edges()) {
                    if (red_ids.count(e.id)) continue;
                    bool tb = in_set(blue[i], e.tail), hg = in_set(green[j], e.head);
                    bool tg = in_set(green[j], e.tail), hb = in_set(blue[i], e.head);
                    if ((tb && hg) || (tg && hb)) {
                        found = e.id;
                        // direction green -> blue
                        red_dir[e.id] = (tb && hg) ? std::make_pair(e.head, e.tail)
                                                   : std::make_pair(e.tail, e.head);
                        break;
                    }
                }
                if (found < 0) {
                    ok = false;
                    break;
                }
                red[i][j] = found;
                red_ids.insert(found);
            }
        }
        if (!ok) continue;
        // rebuild the graph with red directions fixed, others as sampled
        for (auto& e : sample.graph.edges()) {
            auto it = red_dir.find(e.id);
            if (it != red_dir.end())
                directed.add_edge(it->second.first, it->second.second);
            else
                directed.add_edge(e.tail, e.head);
        }
        // labels: one blue vertex -1 per blue bubble, one green vertex +1
        std::vector<int> sigma(directed.vertex_count(), g.zero());
        HardInstance out;
        for (int i = 0; i < m; ++i) {
            sigma[blue[i][0]] = g.neg(g.one());
            out.blue_vertices.push_back(blue[i][0]);
        }
        for (int j = 0; j < m + 1; ++j) {
            sigma[green[j][0]] = g.one();
            out.green_vertices.push_back(green[j][0]);
        }
        out.system = gen_tseitin(directed, sigma, g);
        out.bubbles = bubbles;
        out.red_edges = red;
        // rho: non-red boundary edges of every bubble go to 0
        for (auto& vs : bubbles)
            for (int e : directed.boundary(vs))
                if (!red_ids.count(e)) out.rho[e] = g.zero();
        return out;
    }
    fail("partition_failed", "no expander admitted the bubble construction");
}

TseitinSystem restrict_system(const TseitinSystem& s, const std::map<int, int>& rho) {
    TseitinSystem out = s;
    out.equations.clear();
    out.variable_ids.clear();
    for (int v : s.variable_ids)
        if (!rho.count(v)) out.variable_ids.push_back(v);
    for (auto& eq : s.equations) {
        GroupEquation ne;
        ne.rhs = eq.rhs;
        for (auto& [v, z] : eq.terms) {
            auto it = rho.find(v);
            if (it == rho.end())
                ne.terms.push_back({v, z});
            else
                ne.rhs = s.group.add(ne.rhs, s.group.neg(s.group.mul_int(z, it->second)));
        }
        if (ne.terms.empty() && ne.rhs == s.group.zero()) continue;  // satisfied
        out.equations.push_back(std::move(ne));
    }
    return out;
}

std::vector<LitClause> exactly_one(const std::vector<uint32_t>& vars) {
    std::vector<LitClause> out;
    LitClause all;
    for (uint32_t v : vars) all.lits.insert(mk_var(v));
    out.push_back(all);
    for (size_t i = 0; i < vars.size(); ++i)
        for (size_t j = i + 1; j < vars.size(); ++j)
            out.push_back(LitClause{mk_twin(vars[i]), mk_twin(vars[j])});
    return out;
}

CnfInstance gen_ophp(int m) {
    if (m < 1) fail("domain_error", "OPHP needs m >= 1");
    CnfInstance f;
    // edge (i,j) of K_{m,m+1}: blue i in [m], green j in [m+1]
    std::vector<std::vector<uint32_t>> var(m, std::vector<uint32_t>(m + 1));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m + 1; ++j)
            var[i][j] = f.vars.add("e(" + std::to_string(i) + "," + std::to_string(j) + ")");
    for (int i = 0; i < m; ++i) {
        std::vector<uint32_t> vs;
        for (int j = 0; j < m + 1; ++j) vs.push_back(var[i][j]);
        for (auto& c : exactly_one(vs)) f.clauses.push_back(c);
    }
    for (int j = 0; j < m + 1; ++j) {
        std::vector<uint32_t> vs;
        for (int i = 0; i < m; ++i) vs.push_back(var[i][j]);
        for (auto& c : exactly_one(vs)) f.clauses.push_back(c);
    }
    return f;
}

Formula gen_dnf_of(const CnfInstance& f, size_t var_limit) {
    if (f.vars.size() > var_limit)
        fail("size_limit", "DNF expansion limited to " + std::to_string(var_limit) + " variables");
    std::vector<Formula> terms;
    size_t n = f.vars.size();
    for (uint64_t mask = 0; mask < (uint64_t(1) << n); ++mask) {
        std::map<uint32_t, bool> a;
        for (size_t i = 0; i < n; ++i) a[uint32_t(i)] = (mask >> i) & 1;
        if (!f.satisfied_by(a)) continue;
        std::vector<Formula> lits;
        for (size_t i = 0; i < n; ++i)
            lits.push_back(a[uint32_t(i)] ? Formula::pos(uint32_t(i)) : Formula::neg(uint32_t(i)));
        terms.push_back(Formula::land(std::move(lits)));
    }
    return Formula::lor(std::move(terms));
}

SubgroupEmbedding embed_subgroup(const TseitinSystem& s, const AbelianGroup& g) {
    if (s.group.moduli().size() != 1)
        fail("not_a_subgroup", "embedding implemented for cyclic source groups");
    uint32_t q = s.group.moduli()[0];
    size_t host = g.moduli().size();
    for (size_t i = 0; i < g.moduli().size(); ++i)
        if (g.moduli()[i] % q == 0) {
            host = i;
            break;
        }
    if (host == g.moduli().size())
        fail("not_a_subgroup", "no cyclic factor of the target is divisible by " + std::to_string(q));
    uint32_t stretch = g.moduli()[host] / q;
    auto embed = [&](int a) {
        std::vector<uint32_t> c(g.moduli().size(), 0);
        c[host] = uint32_t(a) * stretch;
        return g.from_coords(c);
    };
    SubgroupEmbedding out;
    out.system = s;
    out.system.group = g;
    for (auto& l : out.system.sigma) l = embed(l);
    for (auto& eq : out.system.equations) eq.rhs = embed(eq.rhs);
    // image of the subgroup inside g
    std::set<int> image;
    for (uint32_t a = 0; a < q; ++a) image.insert(embed(int(a)));
    for (int v : s.variable_ids)
        for (uint64_t e = 0; e < g.order(); ++e)
            if (!image.count(int(e))) out.zeroed.push_back({v, int(e)});
    return out;
}

LinStructures to_structures(const TseitinSystem& s) {
    const AbelianGroup& g = s.group;
    // shape of an equation: (sorted coefficient list, rhs) up to the
    // relation it defines; canonical key is the defined relation itself
    std::map<std::vector<Tuple>, std::string> symbol_of;
    Vocabulary voc;
    std::vector<std::pair<std::string, const GroupEquation*>> tagged;
    for (auto& eq : s.equations) {
        int r = int(eq.terms.size());
        // defined relation over G^r
        std::vector<Tuple> content;
        std::vector<int> idx(r, 0);
        Tuple t(r);
        std::function<void(int)> rec = [&](int pos) {
            if (pos == r) {
                int sum = g.zero();
                for (int i = 0; i < r; ++i) sum = g.add(sum, g.mul_int(eq.terms[i].second, t[i]));
                if (sum == eq.rhs) content.push_back(t);
                return;
            }
            for (uint64_t e = 0; e < g.order(); ++e) {
                t[pos] = int(e);
                rec(pos + 1);
            }
        };
        rec(0);
        std::sort(content.begin(), content.end());
        auto it = symbol_of.find(content);
        std::string name;
        if (it == symbol_of.end()) {
            name = "E" + std::to_string(symbol_of.size());
            symbol_of.emplace(content, name);
            voc.add(name, r);
        } else {
            name = it->second;
        }
        tagged.push_back({name, &eq});
    }
    std::vector<ElemId> bdom;
    for (uint64_t e = 0; e < g.order(); ++e) bdom.push_back(ElemId(e));
    RelStructure templ(voc, bdom);
    for (auto& [content, name] : symbol_of)
        for (auto& t : content) templ.add_tuple(name, t);

    std::vector<ElemId> adom;
    for (int v : s.variable_ids) adom.push_back(ElemId(v));
    RelStructure inst(voc, adom);
    for (auto& [name, eq] : tagged) {
        Tuple t;
        for (auto& [v, z] : eq->terms) t.push_back(ElemId(v));
        inst.add_tuple(name, t);
    }
    return LinStructures{inst, templ};
}

}  // namespace cspforge
