#pragma once

#include "hypermatch/graph.hpp"

#include <optional>
#include <stdexcept>

namespace hm {

// Hall-type witness: demand of S exceeds what its neighbourhood can absorb.
// neighborhood_capacity = sum over u in N(S) of min(f(u), c(S,u)).
struct DeficiencyCertificate {
    Side side = Side::left;
    VertexSet s;
    VertexSet neighborhood;
    long demand = 0;
    long neighborhood_capacity = 0;
    long deficit = 0;
};

struct MatchingResult {
    std::optional<FractionalAssignment> assignment;
    std::optional<DeficiencyCertificate> certificate;
    bool ok() const { return assignment.has_value(); }
};

class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(DeficiencyCertificate c)
        : std::runtime_error("no perfect fractional f-matching exists"), certificate(std::move(c)) {}
    DeficiencyCertificate certificate;
};

// Recomputes the deficit of S from scratch (boundary vertices of S carry no demand).
long deficiency_of(const BipartiteGraph& g, const DemandProfile& f, const CapacityProfile& c, const VertexSet& s);

MatchingResult perfect_f_matching(const BipartiteGraph& g, const DemandProfile& f, const CapacityProfile& c);

struct FractionalOptions {
    long denominator = 0;                        // 0: derive from hint or use 2 * max degree
    const FractionalAssignment* hint = nullptr;  // only its denominators are used
    bool uniform = false;                        // return 1/d on d-regular inputs
};

// Integral flow on demands scaled by D, divided by D. Among feasible scaled
// flows it picks one minimising the largest edge value.
MatchingResult perfect_fractional_f_matching(const BipartiteGraph& g, const DemandProfile& f, const CapacityProfile& c,
                                             const FractionalOptions& opts = {});

// Integral perfect f-matching with per-edge bounds lo <= x <= hi, if any.
std::optional<std::vector<long>> bounded_f_matching(const BipartiteGraph& g, const DemandProfile& f,
                                                    const std::vector<long>& lo, const std::vector<long>& hi);

// Spanning subgraph whose odd-degree vertices are exactly n_set. Works on
// general (non-bipartite) connected graphs.
EdgeSet parity_subgraph(const BipartiteGraph& g, const VertexSet& n_set);

// Same, restricted to the subgraph induced by an edge mask that must connect
// all vertices of n_set; used on tiles and cutsets.
EdgeSet parity_subgraph_within(const BipartiteGraph& g, const std::vector<char>& edge_mask, const VertexSet& n_set);

struct MaximalSupport {
    EdgeSet edges;
    FractionalAssignment witness;
    int probes = 0;
};

MaximalSupport maximal_support(const BipartiteGraph& g, const DemandProfile& f, const CapacityProfile& c);

// Plain augmenting-path maximum matching (f = c = 1); independent of the flow code.
int maximum_matching_size(const BipartiteGraph& g);

}  // namespace hm
