#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "cspforge/encodings.hpp"
#include "cspforge/formula.hpp"
#include "cspforge/structures.hpp"

namespace cspforge {

// Finite abelian group as a direct sum of cyclic groups Z_{q_i};
// elements are indexed 0..order-1 in mixed-radix order.
class AbelianGroup {
public:
    explicit AbelianGroup(std::vector<uint32_t> moduli);
    static AbelianGroup z(uint32_t q) { return AbelianGroup({q}); }

    const std::vector<uint32_t>& moduli() const { return moduli_; }
    uint64_t order() const { return order_; }
    int zero() const { return 0; }
    // the element (1,0,...,0)
    int one() const;
    int add(int a, int b) const;
    int neg(int a) const;
    int mul_int(long long z, int a) const;  // z*a
    std::vector<uint32_t> coords(int a) const;
    int from_coords(const std::vector<uint32_t>& c) const;
    std::string to_string(int a) const;
    std::string name() const;

    bool operator==(const AbelianGroup& o) const { return moduli_ == o.moduli_; }

private:
    std::vector<uint32_t> moduli_;
    uint64_t order_;
};

struct DiEdge {
    int id;
    int tail;
    int head;
};

// Directed multigraph with stable edge ids; parallel edges are distinct.
class DiGraph {
public:
    DiGraph() = default;
    explicit DiGraph(int n) : n_(n) {}

    int add_edge(int tail, int head);
    int vertex_count() const { return n_; }
    const std::vector<DiEdge>& edges() const { return edges_; }
    std::vector<int> out_edges(int v) const;   // tail v, head != v
    std::vector<int> in_edges(int v) const;    // head v, tail != v
    std::vector<int> boundary(const std::vector<int>& w) const;
    bool connected() const;
    bool induced_connected(const std::vector<int>& w) const;
    std::vector<int> degree_sequence() const;  // loopless degree, counting multiplicity

private:
    int n_ = 0;
    std::vector<DiEdge> edges_;
};

// One linear equation over the group: sum z_i * var_i = rhs.
struct GroupEquation {
    std::vector<std::pair<int, int>> terms;  // (edge/variable id, integer coefficient)
    int rhs = 0;                             // group element index
};

struct TseitinSystem {
    AbelianGroup group{std::vector<uint32_t>{2}};
    DiGraph graph;
    std::vector<int> sigma;  // per-vertex labels (element indices)
    std::vector<GroupEquation> equations;
    std::vector<int> variable_ids;  // edge ids in canonical order
};

TseitinSystem gen_tseitin(const DiGraph& h, const std::vector<int>& sigma, const AbelianGroup& g);

// Lemma-level satisfiability oracle: for connected graphs, satisfiable iff
// the labels sum to zero.
bool tseitin_satisfiable(const TseitinSystem& s);

// Exhaustive satisfiability of any group equation system by backtracking
// with equation propagation (the independent oracle).
std::optional<std::vector<int>> brute_force_group_solution(const AbelianGroup& g,
                                                           const std::vector<GroupEquation>& eqs,
                                                           const std::vector<int>& var_ids,
                                                           uint64_t node_limit = 50'000'000);

// The summed equation over the boundary of a connected vertex set.
GroupEquation boundary_equation(const TseitinSystem& s, const std::vector<int>& w);

struct ExpanderSample {
    DiGraph graph;  // edges directed arbitrarily (seed-derived)
    double expansion;
    bool exact;  // exact subset enumeration (n <= 20) vs spectral bound
};

// Random connected 3-regular multigraph by unioning perfect matchings;
// expansion certified exactly at desk scale, else by the spectral bound.
ExpanderSample sample_expander(int n, uint64_t seed, int degree = 3, int max_retries = 200);

struct BubbleOptions {
    double c = 1.2;         // required part count: floor(c * n^{1/3})
    int min_parts = 1;
    int target_size = 0;    // 0: grow parts of about n^{2/3} vertices
    bool force_odd = true;  // merge the last two parts when even
};

// Partition into connected, pairwise adjacent parts ("bubbles").
std::vector<std::vector<int>> bubble_partition(const DiGraph& h, const BubbleOptions& opts = {});

struct HardInstance {
    TseitinSystem system;
    std::vector<std::vector<int>> bubbles;
    std::vector<int> blue_vertices;           // labelled -1, one per blue bubble
    std::vector<int> green_vertices;          // labelled +1, one per green bubble
    std::vector<std::vector<int>> red_edges;  // red edge id per (blue i, green j)
    std::map<int, int> rho;                   // edge id -> 0 (non-red boundary edges)
};

// The hard-instance construction: directed expander with m blue and m+1
// green bubbles; label sum is 1, so the system is unsatisfiable.
HardInstance build_hard_instance(int n, const AbelianGroup& g, uint64_t seed);

// Restriction of a Tseitin/LIN system by a partial edge assignment.
TseitinSystem restrict_system(const TseitinSystem& s, const std::map<int, int>& rho);

// Onto pigeonhole principle over the edges of K_{m,m+1}: the union of
// exactly-one constraints U(boundary(v)) over all vertices.
CnfInstance gen_ophp(int m);
// exactly-one constraint block over the given variables
std::vector<LitClause> exactly_one(const std::vector<uint32_t>& vars);

// DNF with one term per satisfying assignment of f.
Formula gen_dnf_of(const CnfInstance& f, size_t var_limit = 16);

struct SubgroupEmbedding {
    TseitinSystem system;  // same equations over the larger group
    // encoding variables X(edge, g) forced to 0: g outside the subgroup
    std::vector<std::pair<int, int>> zeroed;  // (edge id, element index in g)
};

// Reads a Z_q system as a system over a group containing Z_q.
SubgroupEmbedding embed_subgroup(const TseitinSystem& s, const AbelianGroup& g);

// Realization as a homomorphism instance over the L(G,k) slice actually
// used: A = the system, B = B(G,k); shared canonical vocabulary.
struct LinStructures {
    RelStructure instance;
    RelStructure templ;
};
LinStructures to_structures(const TseitinSystem& s);

}  // namespace cspforge
