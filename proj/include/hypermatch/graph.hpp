#pragma once

#include "hypermatch/rational.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace hm {

enum class Side : std::uint8_t { left, right };

struct Edge {
    int u;
    int w;
};

// Finite graph with stable integer ids. In bipartite mode every edge must
// join opposite sides; general mode only forbids loops and parallel edges.
class BipartiteGraph {
public:
    explicit BipartiteGraph(bool bipartite = true) : bipartite_(bipartite) {}

    int add_vertex(Side side, bool boundary = false);
    int add_edge(int u, int w);

    int num_vertices() const { return static_cast<int>(side_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    bool bipartite_mode() const { return bipartite_; }

    Side side(int v) const { return side_[v]; }
    bool is_boundary(int v) const { return boundary_[v] != 0; }
    void set_boundary(int v, bool b) { boundary_[v] = b ? 1 : 0; }
    const Edge& edge(int e) const { return edges_[e]; }
    const std::vector<int>& incident(int v) const { return adj_[v]; }
    int degree(int v) const { return static_cast<int>(adj_[v].size()); }
    int other(int e, int v) const { return edges_[e].u == v ? edges_[e].w : edges_[e].u; }
    int find_edge(int u, int w) const;
    bool has_edge(int u, int w) const { return find_edge(u, w) >= 0; }
    int max_degree() const;
    std::vector<int> boundary_vertices() const;

private:
    static std::uint64_t key(int u, int w);
    bool bipartite_;
    std::vector<Side> side_;
    std::vector<char> boundary_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adj_;
    std::unordered_map<std::uint64_t, int> index_;
};

using DemandProfile = std::vector<long>;
using CapacityProfile = std::vector<long>;
using FractionalAssignment = std::vector<Rational>;
using EdgeSet = std::vector<int>;  // sorted, duplicate free
using VertexSet = std::vector<int>;

EdgeSet make_edge_set(std::vector<int> ids);
std::vector<char> mask_of(const std::vector<int>& ids, int universe);
EdgeSet set_difference(const EdgeSet& a, const EdgeSet& b);
EdgeSet set_union(const EdgeSet& a, const EdgeSet& b);
EdgeSet set_intersection(const EdgeSet& a, const EdgeSet& b);

DemandProfile unit_demand(const BipartiteGraph& g);
CapacityProfile unit_capacity(const BipartiteGraph& g);
FractionalAssignment constant_assignment(const BipartiteGraph& g, const Rational& value);

struct Violation {
    enum Kind { vertex_sum, boundary_excess, edge_range } kind;
    int id;
    Rational value;
    Rational bound;
};

struct ValidationReport {
    bool ok = true;
    std::vector<Violation> violations;
    std::vector<int> vertices() const;
    std::vector<int> edges() const;
};

ValidationReport validate_perfect_fractional_matching(const BipartiteGraph& g, const DemandProfile& f,
                                                      const CapacityProfile& c,
                                                      const FractionalAssignment& t);

Rational vertex_sum(const BipartiteGraph& g, const FractionalAssignment& t, int v);

EdgeSet support(const FractionalAssignment& t, const CapacityProfile& c);

struct UnitCapacityReduction {
    DemandProfile f;
    FractionalAssignment t;
    std::vector<long> integral_part;
};

UnitCapacityReduction reduce_to_unit_capacity(const BipartiteGraph& g, const DemandProfile& f,
                                              const FractionalAssignment& t);
FractionalAssignment reassemble(const UnitCapacityReduction& r, const FractionalAssignment& sigma);

// One maximal path or cycle of a line set. Edges are listed in traversal
// order starting at the lowest-id endpoint (paths) or lowest-id vertex
// (cycles), stepping first along the lower-id edge. color[i] = i % 2.
struct LineComponent {
    bool cycle = false;
    std::vector<int> vertices;
    std::vector<int> edges;
    std::vector<int> color;
    int length() const { return static_cast<int>(edges.size()); }
};

std::vector<LineComponent> line_decomposition(const EdgeSet& l, const BipartiteGraph& g);

EdgeSet boundary_edges(const BipartiteGraph& g, const VertexSet& w);

// Components of the subgraph spanned by the given edge mask (nullptr = all).
std::vector<int> component_labels(const BipartiteGraph& g, const std::vector<char>* edge_mask, int* count);

// Returns an odd cycle (as a vertex list) when the graph is not 2-colourable.
std::optional<std::vector<int>> find_odd_cycle(const BipartiteGraph& g);

// BFS 2-colouring (lowest id of each component gets 0), if one exists.
std::optional<std::vector<int>> two_colouring(const BipartiteGraph& g);

// Copy of a general-mode graph in bipartite mode, sides from the colouring.
BipartiteGraph as_bipartite(const BipartiteGraph& g, const std::vector<int>& colour);

std::vector<int> bfs_distances(const BipartiteGraph& g, int source);

enum class EndKind { one_ended, two_ended, finite };

// BFS from source inside the masked subgraph (nullptr = all edges);
// ratio = |B(2r)| / |B(r)| with r = max(1, eccentricity / 4).
struct BallGrowth {
    int eccentricity = 0;
    long size = 0;
    double ratio = 0;
    bool touches_boundary = false;
};

BallGrowth ball_growth(const BipartiteGraph& g, const std::vector<char>* mask, int source);

struct GraphBundle {
    BipartiteGraph g;
    std::optional<DemandProfile> f;
    std::optional<CapacityProfile> c;
    std::optional<FractionalAssignment> t;

    DemandProfile demand() const { return f ? *f : unit_demand(g); }
    CapacityProfile capacity() const { return c ? *c : unit_capacity(g); }
};

GraphBundle read_graph(std::istream& in);
GraphBundle read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const GraphBundle& b);
std::string graph_to_string(const GraphBundle& b);

}  // namespace hm
