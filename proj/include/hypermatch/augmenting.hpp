#pragma once

#include "hypermatch/graph.hpp"
#include "hypermatch/polytope.hpp"
#include "hypermatch/random.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hm {

// Half-valued lines of chi with vertex and edge positions along each line.
// Cycle lines: edge i joins vertices[i] and vertices[i+1 mod n]. Path lines:
// edge i joins vertices[i] and vertices[i+1]. Positions increase along the
// orientation fixed by line_decomposition (lowest vertex first).
struct OneLinedView {
    std::vector<LineComponent> lines;
    std::vector<int> vertex_line;  // -1 off the lines
    std::vector<int> vertex_pos;
    std::vector<int> edge_line;    // -1 off the lines
    std::vector<int> edge_pos;
    std::vector<char> on_line;
    bool one_lined = true;         // no graph component holds two lines
    long line_edges() const;
};

OneLinedView make_one_lined_view(const BipartiteGraph& g, const FractionalAssignment& chi);

// Edges start, start+1, ..., start+length-1 of one line (wrapping on cycles).
struct LineInterval {
    int line = 0;
    int start = 0;
    int length = 0;
};

// Odd alternating path whose end vertices lie on a line, closed through the
// line interval between them. The path runs from the head (line position
// start+length) to the tail (position start); its first and last edges carry
// chi = 0. The class is the line colour of the interval edges at even offsets
// (the ones the cycle pairs with chi = 1 edges), which is the colour of edge
// `start`.
struct AugmentingCycle {
    LineInterval interval;
    std::vector<int> path_vertices;
    std::vector<int> path_edges;
    std::vector<int> interval_edges;
    int cls = 0;
    Cycle cycle;
    // +1/2 on cycle edges paired with chi = 0 path edges, -1/2 on the rest
    std::vector<std::pair<int, int>> circuit_signs() const;
};

// Empty string when every invariant holds, otherwise the first violation.
std::string validate_augmenting_cycle(const BipartiteGraph& g, const FractionalAssignment& chi, const OneLinedView& view,
                                      const AugmentingCycle& a);

struct AugmentingSearch {
    int cls = -1;  // -1: either class
    const std::vector<char>* blocked_vertices = nullptr;
    const std::vector<char>* blocked_edges = nullptr;
    // Closing interval must lie inside this window; default: anywhere on the line.
    std::optional<LineInterval> window;
    // Among admissible cycles prefer the widest closing interval (default: narrowest).
    bool prefer_long = false;
};

// Exhaustive alternating BFS from the line vertices before J; returns a cycle
// whose closing interval contains J, or none.
std::optional<AugmentingCycle> find_augmenting_cycle(const BipartiteGraph& g, const FractionalAssignment& chi,
                                                     const OneLinedView& view, const LineInterval& j,
                                                     const AugmentingSearch& search = {});

// Off-line edges shared by a and b with agreeing traversal direction when
// both closing intervals are read in increasing line position. Inequivalent
// inputs (other line or class) give an empty set and clear *equivalent.
EdgeSet substantial_intersection(const AugmentingCycle& a, const AugmentingCycle& b, bool* equivalent = nullptr);

// Merges along e from the pieces A1 e A2 and B1 e B2: the valid variant with
// the widest closing interval wins, ties in the order A1B2, B1A2, A1A2, B1B2.
// Throws invalid_argument if e is not a substantial intersection edge and
// logic_error if no variant is valid.
AugmentingCycle merge_cycles(const BipartiteGraph& g, const FractionalAssignment& chi, const OneLinedView& view,
                             const AugmentingCycle& a, const AugmentingCycle& b, int e);

struct AugmentingFamily {
    std::vector<std::vector<AugmentingCycle>> families;
    int k() const { return static_cast<int>(families.size()); }
};

// Counts recomputed from the cycles alone.
struct OneLinedAudit {
    long line_edges = 0;
    int max_off_line = 0;                // over all families
    std::vector<int> max_on_line;        // per family
    std::vector<long> both_class;        // per family: line edges covered in both classes
    long joint_both_class = 0;           // covered in both classes by every family
    bool off_line_ok = true;             // <= 4
    bool on_line_ok = true;              // <= 2 in every family
    bool valid_cycles = true;
    std::vector<LineInterval> uncovered; // maximal runs outside the joint coverage
};

OneLinedAudit audit_one_lined(const BipartiteGraph& g, const FractionalAssignment& chi, const OneLinedView& view,
                              const AugmentingFamily& fam);

struct OneLinedTraceRow {
    int family = 0;
    int cycles = 0;
    long class_covered[2] = {0, 0};
    long both_covered = 0;
    long joint_so_far = 0;
    int chop_length = 0;
    int helly_dropped = 0;
    bool cond_i = false;    // off-line coverage <= 4 so far
    bool cond_ii = false;   // on-line coverage <= 2 in this family
    bool cond_iii = false;  // joint both-class coverage >= (1 - eps) |L| so far
};

struct OneLinedCover {
    AugmentingFamily fam;
    OneLinedAudit audit;
    std::vector<OneLinedTraceRow> trace;
    bool target_met = false;  // joint both-class coverage >= (1 - eps) |L|
    std::string branch;       // "augmenting" or "no-chords"
};

// Each family chops every line into windows of length ~8k/eps (offset per
// family) and sweeps each window once per class, taking the widest admissible
// cycle at the first uncovered edge. Equivalent cycles never share an
// off-line edge, so off-line coverage is at most 2. Throws invalid_argument
// unless the view is one-lined, k >= 1 and 0 < eps < 1.
OneLinedCover cover_one_lined(const BipartiteGraph& g, const FractionalAssignment& chi, int k, const Rational& eps);

struct OneLinedStep {
    int subfamilies = 0;  // l of the greedy edge-disjoint partition
    int chosen = -1;      // I
    int z = 0;            // Z in {0, 1}
    FractionalAssignment x;
    ExtremeReport next;
    double barycenter_distance = 0;  // || E[X] - chi ||_2, logged only
};

// Partitions all cycles into edge-disjoint subfamilies, draws I uniformly and
// Z in {0, 1}, sets X = chi + Z zeta_I and descends from X with the random
// rule. Marks protect a cycle only while it is entirely half-valued in X.
OneLinedStep one_lined_step(const BipartiteGraph& g, const DemandProfile& f, const CapacityProfile& c,
                            const FractionalAssignment& chi, const AugmentingFamily& fam, std::uint64_t seed,
                            const std::vector<std::vector<int>>& marks = {});

}  // namespace hm
