#pragma once

#include "hypermatch/graph.hpp"
#include "hypermatch/random.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace hm {

// Simple cycle: edges[i] joins vertices[i] and vertices[i+1 mod n].
// Normalized so that edges[0] is the lowest edge id (the distinguished
// edge) and vertices[0] is its lower-id endpoint.
struct Cycle {
    std::vector<int> vertices;
    std::vector<int> edges;
    int length() const { return static_cast<int>(edges.size()); }
};

// Builds a normalized cycle from a closed vertex walk v0 v1 ... v_{n-1}.
Cycle make_cycle(const BipartiteGraph& g, const std::vector<int>& vertex_loop);

// Checks that the edges form one simple cycle; returns it normalized.
Cycle cycle_from_edges(const BipartiteGraph& g, const std::vector<int>& edges);

// Greedy identifier-ordered family of vertex-disjoint simple cycles inside
// the given edge set, maximal: no further disjoint cycle exists.
std::vector<Cycle> find_disjoint_cycles(const EdgeSet& support, const BipartiteGraph& g);

// Values change by +sign*eps on even positions, -sign*eps on odd ones.
struct AlternatingCircuit {
    Cycle cycle;
    Rational eps;
    int sign = 1;
};

class RangeError : public std::range_error {
public:
    RangeError(int e, Rational v)
        : std::range_error("edge " + std::to_string(e) + " leaves its range: " + to_string(v)), edge(e), value(std::move(v)) {}
    int edge;
    Rational value;
};

// Throws RangeError for the first edge leaving [0, c] (c == nullptr: [0, 1]).
FractionalAssignment apply_alternating_circuit(const FractionalAssignment& t, const AlternatingCircuit& ac,
                                               const CapacityProfile* c = nullptr);

enum class SignRule {
    face,    // increase the distinguished edge, maximal step
    random,  // step to either face with probabilities that keep the mean
};

struct DescentOptions {
    SignRule rule = SignRule::face;
    bool half_snap = false;
    // Line-quotient marks: each entry is the edge list of a cycle that stands
    // in for a bi-infinite line. A marked cycle is never cancelled while it is
    // an isolated component of the support.
    std::vector<std::vector<int>> marked_cycles;
    Rng* rng = nullptr;
};

struct ExtremeReport {
    FractionalAssignment chi;
    std::vector<std::pair<Rational, long>> histogram;
    EdgeSet lines;
    std::vector<LineComponent> decomposition;
    std::vector<int> line_component;  // graph component containing each line
    std::vector<char> one_lined;      // per graph component
    EdgeSet exempt;                   // edges of marked cycles left uncancelled
    long steps = 0;
    long snapped = 0;
};

// Histogram, L(chi) = {chi = 1/2}, its decomposition and one-lined flags.
ExtremeReport make_report(const BipartiteGraph& g, const FractionalAssignment& chi);

ExtremeReport descend_to_extreme(const FractionalAssignment& t, const BipartiteGraph& g, const DemandProfile& f,
                                 const CapacityProfile& c, const DescentOptions& opts = {});

struct HalfLines {
    std::vector<LineComponent> lines;
    std::vector<int> line_component;
    std::vector<char> one_lined;
};

HalfLines extract_half_lines(const ExtremeReport& report, const BipartiteGraph& g);

}  // namespace hm
