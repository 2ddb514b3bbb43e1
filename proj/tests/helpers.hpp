#pragma once

#include "hypermatch/graph.hpp"

#include <vector>

namespace hm::testing {

// Even cycle 0-1-...-(n-1)-0 with alternating sides; edge i joins i and i+1.
inline BipartiteGraph cycle_graph(int n) {
    BipartiteGraph g;
    for (int i = 0; i < n; ++i) g.add_vertex(i % 2 ? Side::right : Side::left);
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
    return g;
}

inline BipartiteGraph path_graph(int vertices) {
    BipartiteGraph g;
    for (int i = 0; i < vertices; ++i) g.add_vertex(i % 2 ? Side::right : Side::left);
    for (int i = 0; i + 1 < vertices; ++i) g.add_edge(i, i + 1);
    return g;
}

// Left vertices 0..a-1, right vertices a..a+b-1, edges in row-major order.
inline BipartiteGraph complete_bipartite(int a, int b) {
    BipartiteGraph g;
    for (int i = 0; i < a; ++i) g.add_vertex(Side::left);
    for (int j = 0; j < b; ++j) g.add_vertex(Side::right);
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) g.add_edge(i, a + j);
    return g;
}

}  // namespace hm::testing
