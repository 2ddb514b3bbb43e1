#pragma once

#include "hypermatch/graph.hpp"
#include "hypermatch/polytope.hpp"
#include "hypermatch/toast.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hm {

// families[i] is a list of pairwise edge-disjoint simple cycles. Each cycle's
// edges[0] is its distinguished edge.
struct CycleFamily {
    std::vector<std::vector<Cycle>> families;
    int k() const { return static_cast<int>(families.size()); }
};

// Counts recomputed from scratch from the cycles alone.
struct CoverAudit {
    bool disjoint_within_families = true;
    bool cycles_simple = true;
    long line_edges = 0;
    long joint_covered = 0;                 // line edges covered by every family
    std::vector<long> family_covered;       // line edges covered by each family
    int max_offline = 0;                    // max cycles through one edge off the line set
    long offline_edges_used = 0;
    std::vector<int> count;                 // cycles through each edge, all families
};

CoverAudit audit_cover(const CycleFamily& fam, const BipartiteGraph& g, const EdgeSet& l);

struct CoverStats {
    std::string method;
    int k = 0;
    Rational eps;
    int base_level = 0;
    int depth = 0;
    bool depth_ok = true;
    long line_edges = 0;
    long base_covered = 0;  // line edges touching a base-level tile (one-ended) or inside kept intervals (two-ended)
    long skipped_units = 0; // tiles or intervals dropped for parity reasons
    long dropped_pieces = 0;
    int period = 0;
    bool coverage_ok = true;
    Rational target;        // required fraction of line edges
};

struct CoverResult {
    CycleFamily fam;
    CoverStats stats;
};

// Splits an even-degree edge set into simple cycles, greedily in identifier order.
std::vector<Cycle> cycle_decomposition(const BipartiteGraph& g, const EdgeSet& edges);

// One-ended cover through a connected toast. Family i pairs up the loose
// ends of the line pieces meeting level m+i-1 tiles inside the core of their
// level m+i tile (m = depth - k). allowed (optional) restricts the extra
// edges off the line set.
CoverResult cover_lines_one_ended(const BipartiteGraph& g, const EdgeSet& l, const Toast& t, int k, const Rational& eps,
                                  const std::vector<char>* allowed = nullptr);

// Two-ended cover on strips: cutsets are the vertex sets of constant strip
// coordinate. Family i uses intervals [s, s+P-1] with s = 2i+1 mod P, so
// families never share a cutset. Throws when some component carries fewer
// than two lines. cyclic_period > 0 means strip coordinates wrap around.
CoverResult cover_lines_two_ended(const BipartiteGraph& g, const std::vector<int>& strip, const EdgeSet& l, int k,
                                  const Rational& eps, int cyclic_period = 0,
                                  const std::vector<char>* allowed = nullptr);

// Ball-growth ratio |B(x,2r)| / |B(x,r)| from the lowest vertex of the
// component, r = a quarter of its eccentricity; two-ended when <= 2 + 1/4.
struct ComponentClass {
    int component = 0;
    EndKind kind = EndKind::finite;
    double growth = 0;
    int lines = 0;
    bool touches_boundary = false;
};

struct ThresholdResult {
    CycleFamily fam;
    Rational theta;
    std::vector<ComponentClass> components;
    long line_edges = 0;
    long joint_covered = 0;
    bool target_met = false;
    std::vector<CoverStats> parts;
};

struct ThresholdInput {
    const std::vector<int>* strip = nullptr;  // for two-ended parts
    int cyclic_period = 0;
    const Toast* toast = nullptr;             // for one-ended parts
};

// H_theta = l plus the edges with theta < t < 1 - theta. One-ended parts get
// the toast cover with eps 1/2, two-ended parts the strip cover with eps 1/4.
// Tries each theta of the grid (default 1/4, 1/8, ..., 1/64) until more than
// half of l is covered by every family; otherwise reports the best one.
ThresholdResult cover_lines_threshold(const BipartiteGraph& g, const FractionalAssignment& t, const EdgeSet& l, int k,
                                      const ThresholdInput& in, std::vector<Rational> theta_grid = {});

// Shrinks a family of integer intervals [a, b] to a subfamily with the same
// union in which no point lies in three intervals. Returns kept indices.
std::vector<int> helly_prune(const std::vector<std::pair<int, int>>& intervals);

}  // namespace hm
