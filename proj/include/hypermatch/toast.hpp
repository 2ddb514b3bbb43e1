#pragma once

#include "hypermatch/graph.hpp"
#include "hypermatch/substrates.hpp"

#include <utility>
#include <vector>

namespace hm {

// Spanning forest rooted at the boundary set, oriented rootward. Boundary
// vertices are roots and carry height -1; an interior vertex has height equal
// to the longest path leading down from it (leaves have height 0).
struct HeightForest {
    std::vector<int> parent;       // -1 at roots
    std::vector<int> parent_edge;  // -1 at roots
    std::vector<int> height;
    std::vector<std::vector<int>> children;
    std::vector<int> order;  // BFS order, roots first
    int max_height = -1;
};

// Multi-source BFS from the boundary in identifier order. Throws when there
// is no boundary or some interior vertex cannot reach it.
HeightForest one_ended_spanning_forest(const BipartiteGraph& g);

struct Toast {
    std::vector<VertexSet> tiles;  // sorted vertex lists
    std::vector<int> level;        // 1 for minimal tiles, 2 for minimal among the rest, ...
    std::vector<int> parent;       // smallest strictly larger tile, -1 if none
    int depth() const;
};

struct ToastCoverage {
    std::vector<int> schedule;
    int candidate_tiles = 0;  // tiles of height in some band
    int kept_tiles = 0;       // kept before gluing
    int glued_classes = 0;
    long interior_vertices = 0;
    long covered_vertices = 0;
    long interior_edges = 0;
    long covered_edges = 0;
    std::vector<long> band_vertices;  // vertices in a maximal tile of each band
    std::vector<long> band_uncovered; // vertices of band tiles not covered by the next band
};

struct ToastBuild {
    Toast toast;
    ToastCoverage coverage;
};

// 1, 2, 4, ... up to the forest height.
std::vector<int> geometric_schedule(int max_height);

// Maximal tiles per height band, kept when covered by a tile of the next band
// (tiles hanging directly off the boundary are always kept), then glued along
// the touching relation.
ToastBuild build_toast(const HeightForest& forest, const BipartiteGraph& g, std::vector<int> schedule = {});

struct ToastReport {
    bool covers_edges = true;  // (1)
    bool nested = true;        // (2)
    bool connected = true;     // (3)
    std::vector<int> uncovered_edges;
    std::vector<std::pair<int, int>> nesting_violations;
    std::vector<int> disconnected_tiles;
    bool ok() const { return covers_edges && nested && connected; }
};

// (1) every edge between two non-boundary vertices lies inside a tile;
// (2) tiles are buffer-separated or buffer-nested; (3) each tile minus its
// strict subtiles induces a connected graph.
ToastReport verify_toast(const Toast& t, const BipartiteGraph& g);

// M_1, M_2, ...: tile indices by level.
std::vector<std::vector<int>> toast_levels(const Toast& t);

// Nested square frames on a 2D window: the interior is the top tile; each
// tile of side S holds a lattice of child squares of the next smaller side,
// one vertex apart and one vertex inside its border. sides lists the child
// square sides from the smallest up. The forest spans each tile's core from
// its root and hangs every child tile off an adjacent core vertex, so every
// tile is the set of vertices below its root.
struct FrameHierarchy {
    HeightForest forest;
    Toast toast;
    std::vector<int> roots;  // forest root of each tile
};

FrameHierarchy frame_hierarchy(const WindowGraph& w, const std::vector<int>& sides);

// Fills level and parent from the tile list.
void index_toast(Toast& t);

}  // namespace hm
