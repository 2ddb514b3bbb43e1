#include "hypermatch/toast.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>

namespace hm {

namespace {

std::vector<int> sorted_neighbours(const BipartiteGraph& g, int v) {
    std::vector<int> out;
    for (int e : g.incident(v)) out.push_back(g.other(e, v));
    std::sort(out.begin(), out.end());
    return out;
}

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a), b = find(b);
        if (a != b) p[std::max(a, b)] = std::min(a, b);
    }
};

// Tiles containing each vertex.
std::vector<std::vector<int>> membership(const Toast& t, int n) {
    std::vector<std::vector<int>> m(n);
    for (int i = 0; i < static_cast<int>(t.tiles.size()); ++i)
        for (int v : t.tiles[i]) m[v].push_back(i);
    return m;
}

// Intersection sizes of every pair of tiles that share a vertex.
std::map<std::pair<int, int>, int> overlaps(const std::vector<std::vector<int>>& member) {
    std::map<std::pair<int, int>, int> out;
    for (const auto& ts : member)
        for (std::size_t a = 0; a < ts.size(); ++a)
            for (std::size_t b = a + 1; b < ts.size(); ++b) ++out[{ts[a], ts[b]}];
    return out;
}

// strict[i]: tiles strictly contained in tile i.
std::vector<std::vector<int>> strict_subtiles(const Toast& t, const std::vector<std::vector<int>>& member) {
    std::vector<std::vector<int>> strict(t.tiles.size());
    for (const auto& [pr, common] : overlaps(member)) {
        auto [a, b] = pr;
        int sa = static_cast<int>(t.tiles[a].size()), sb = static_cast<int>(t.tiles[b].size());
        if (common == sa && sa < sb) strict[b].push_back(a);
        if (common == sb && sb < sa) strict[a].push_back(b);
    }
    return strict;
}

void compute_heights(HeightForest& f, const BipartiteGraph& g) {
    f.max_height = -1;
    for (auto it = f.order.rbegin(); it != f.order.rend(); ++it) {
        int v = *it;
        if (g.is_boundary(v)) continue;
        int h = 0;
        for (int c : f.children[v]) h = std::max(h, f.height[c] + 1);
        f.height[v] = h;
        f.max_height = std::max(f.max_height, h);
    }
}

VertexSet closed_neighbourhood(const BipartiteGraph& g, const VertexSet& k) {
    VertexSet out = k;
    for (int v : k)
        for (int e : g.incident(v)) out.push_back(g.other(e, v));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

int Toast::depth() const { return level.empty() ? 0 : *std::max_element(level.begin(), level.end()); }

HeightForest one_ended_spanning_forest(const BipartiteGraph& g) {
    int n = g.num_vertices();
    auto roots = g.boundary_vertices();
    if (roots.empty()) throw std::invalid_argument("window has no boundary; cut a window out of the graph first");
    HeightForest f;
    f.parent.assign(n, -1);
    f.parent_edge.assign(n, -1);
    f.height.assign(n, -1);
    f.children.assign(n, {});
    std::vector<char> seen(n, 0);
    std::deque<int> q;
    for (int r : roots) seen[r] = 1, q.push_back(r), f.order.push_back(r);
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int u : sorted_neighbours(g, v)) {
            if (seen[u]) continue;
            seen[u] = 1;
            f.parent[u] = v;
            f.parent_edge[u] = g.find_edge(u, v);
            f.children[v].push_back(u);
            f.order.push_back(u);
            q.push_back(u);
        }
    }
    for (int v = 0; v < n; ++v)
        if (!seen[v]) throw std::invalid_argument("vertex " + std::to_string(v) + " cannot reach the boundary");
    compute_heights(f, g);
    return f;
}

std::vector<int> geometric_schedule(int max_height) {
    std::vector<int> s;
    for (int n = 1; n <= std::max(1, max_height); n *= 2) s.push_back(n);
    return s;
}

ToastBuild build_toast(const HeightForest& forest, const BipartiteGraph& g, std::vector<int> schedule) {
    int n = g.num_vertices();
    if (schedule.empty()) schedule = geometric_schedule(forest.max_height);
    for (std::size_t i = 1; i < schedule.size(); ++i)
        if (schedule[i] <= schedule[i - 1]) throw std::invalid_argument("schedule must be strictly increasing");
    int bands = static_cast<int>(schedule.size());

    // Euler intervals: subtree(v) = {x : tin[v] <= tin[x] < tout[v]}.
    std::vector<int> tin(n, 0), tout(n, 0);
    int clock = 0;
    for (int r : forest.order) {
        if (forest.parent[r] != -1) continue;
        std::vector<std::pair<int, std::size_t>> stack{{r, 0}};
        tin[r] = clock++;
        while (!stack.empty()) {
            auto& [v, i] = stack.back();
            if (i < forest.children[v].size()) {
                int c = forest.children[v][i++];
                tin[c] = clock++;
                stack.push_back({c, 0});
            } else {
                tout[v] = clock;
                stack.pop_back();
            }
        }
    }
    auto inside = [&](int x, int root) { return tin[root] <= tin[x] && tin[x] < tout[root]; };
    auto is_root = [&](int v) { return forest.parent[v] == -1; };

    std::vector<int> band(n, -1);
    for (int v = 0; v < n; ++v) {
        if (g.is_boundary(v)) continue;
        for (int i = 0; i < bands; ++i)
            if (forest.height[v] >= schedule[i]) band[v] = i;
    }
    auto candidate = [&](int v) {
        if (g.is_boundary(v) || band[v] < 0) return false;
        int p = forest.parent[v];
        return is_root(p) || band[p] != band[v];
    };
    auto subtree = [&](int v) {
        std::vector<int> out{v};
        for (std::size_t i = 0; i < out.size(); ++i)
            for (int c : forest.children[out[i]]) out.push_back(c);
        return out;
    };

    ToastBuild out;
    auto& cov = out.coverage;
    cov.schedule = schedule;
    cov.band_vertices.assign(bands, 0);
    cov.band_uncovered.assign(bands, 0);

    // Root-children subtrees are always kept: without them nothing near the
    // boundary would be tiled. Vertices of height below the first threshold
    // still lie in those.
    std::vector<char> kept(n, 0);
    for (int v : forest.order) {
        if (g.is_boundary(v)) continue;
        bool top = is_root(forest.parent[v]);
        if (!top && !candidate(v)) continue;
        ++cov.candidate_tiles;
        auto tile = subtree(v);
        if (band[v] >= 0) cov.band_vertices[band[v]] += static_cast<long>(tile.size());
        if (top) {
            kept[v] = 1;
            continue;
        }
        int u = forest.parent[v];
        while (!is_root(u) && band[u] < band[v] + 1) u = forest.parent[u];
        bool covered = false;
        if (!is_root(u) && band[u] == band[v] + 1) {
            while (!is_root(forest.parent[u]) && band[forest.parent[u]] == band[v] + 1) u = forest.parent[u];
            covered = true;
            for (int x : tile) {
                for (int e : g.incident(x)) {
                    int y = g.other(e, x);
                    if (g.is_boundary(y) || !inside(y, u)) {
                        covered = false;
                        break;
                    }
                }
                if (!covered) break;
            }
        }
        if (covered)
            kept[v] = 1;
        else
            cov.band_uncovered[band[v]] += static_cast<long>(tile.size());
    }

    // Kept tiles containing each vertex, outermost first.
    std::vector<std::vector<int>> kept_anc(n);
    for (int v : forest.order) {
        if (g.is_boundary(v)) continue;
        int p = forest.parent[v];
        if (!is_root(p)) kept_anc[v] = kept_anc[p];
        if (kept[v]) kept_anc[v].push_back(v), ++cov.kept_tiles;
    }

    UnionFind uf(n);
    for (int e = 0; e < g.num_edges(); ++e) {
        int x = g.edge(e).u, y = g.edge(e).w;
        if (g.is_boundary(x) || g.is_boundary(y)) continue;
        for (int k : kept_anc[x])
            for (int l : kept_anc[y])
                if (k != l && !inside(k, l) && !inside(l, k)) uf.unite(k, l);
    }

    std::map<int, VertexSet> classes;
    for (int x = 0; x < n; ++x)
        for (int k : kept_anc[x]) {
            auto& c = classes[uf.find(k)];
            if (c.empty() || c.back() != x) c.push_back(x);
        }
    cov.glued_classes = static_cast<int>(classes.size());
    std::vector<VertexSet> tiles;
    for (auto& [root, vs] : classes) tiles.push_back(std::move(vs));
    std::sort(tiles.begin(), tiles.end());
    tiles.erase(std::unique(tiles.begin(), tiles.end()), tiles.end());
    out.toast.tiles = std::move(tiles);
    index_toast(out.toast);

    std::vector<char> in_tile(n, 0);
    for (const auto& t : out.toast.tiles)
        for (int v : t) in_tile[v] = 1;
    for (int v = 0; v < n; ++v)
        if (!g.is_boundary(v)) ++cov.interior_vertices, cov.covered_vertices += in_tile[v];
    auto rep = verify_toast(out.toast, g);
    for (int e = 0; e < g.num_edges(); ++e)
        if (!g.is_boundary(g.edge(e).u) && !g.is_boundary(g.edge(e).w)) ++cov.interior_edges;
    cov.covered_edges = cov.interior_edges - static_cast<long>(rep.uncovered_edges.size());
    return out;
}

void index_toast(Toast& t) {
    int m = static_cast<int>(t.tiles.size());
    int n = 0;
    for (const auto& k : t.tiles)
        if (!k.empty()) n = std::max(n, k.back() + 1);
    auto member = membership(t, n);
    auto strict = strict_subtiles(t, member);
    std::vector<int> by_size(m);
    std::iota(by_size.begin(), by_size.end(), 0);
    std::stable_sort(by_size.begin(), by_size.end(),
                     [&](int a, int b) { return t.tiles[a].size() < t.tiles[b].size(); });
    t.level.assign(m, 1);
    t.parent.assign(m, -1);
    for (int k : by_size)
        for (int s : strict[k]) {
            t.level[k] = std::max(t.level[k], t.level[s] + 1);
            int& p = t.parent[s];
            if (p < 0 || t.tiles[k].size() < t.tiles[p].size() || (t.tiles[k].size() == t.tiles[p].size() && k < p))
                p = k;
        }
}

ToastReport verify_toast(const Toast& t, const BipartiteGraph& g) {
    ToastReport rep;
    int n = g.num_vertices();
    int m = static_cast<int>(t.tiles.size());
    auto member = membership(t, n);

    std::vector<char> inside(g.num_edges(), 0);
    std::vector<int> stamp(n, -1);
    for (int i = 0; i < m; ++i) {
        for (int v : t.tiles[i]) stamp[v] = i;
        for (int v : t.tiles[i])
            for (int e : g.incident(v))
                if (stamp[g.other(e, v)] == i) inside[e] = 1;
    }
    for (int e = 0; e < g.num_edges(); ++e) {
        if (g.is_boundary(g.edge(e).u) || g.is_boundary(g.edge(e).w)) continue;
        if (!inside[e]) rep.uncovered_edges.push_back(e);
    }
    rep.covers_edges = rep.uncovered_edges.empty();

    std::vector<VertexSet> closed(m);
    for (int i = 0; i < m; ++i) closed[i] = closed_neighbourhood(g, t.tiles[i]);
    for (int k = 0; k < m; ++k) {
        std::vector<int> touching;
        for (int x : closed[k])
            for (int l : member[x])
                if (l != k) touching.push_back(l);
        std::sort(touching.begin(), touching.end());
        touching.erase(std::unique(touching.begin(), touching.end()), touching.end());
        for (int l : touching) {
            if (l < k) continue;  // each pair once; the condition is symmetric
            bool k_in_l = std::includes(t.tiles[l].begin(), t.tiles[l].end(), closed[k].begin(), closed[k].end());
            bool l_in_k = std::includes(t.tiles[k].begin(), t.tiles[k].end(), closed[l].begin(), closed[l].end());
            if (!k_in_l && !l_in_k) rep.nesting_violations.push_back({k, l});
        }
    }
    rep.nested = rep.nesting_violations.empty();

    auto strict = strict_subtiles(t, member);
    std::vector<int> mark(n, -1);
    for (int k = 0; k < m; ++k) {
        for (int v : t.tiles[k]) mark[v] = k;
        for (int s : strict[k])
            for (int v : t.tiles[s]) mark[v] = -1;
        int start = -1;
        long size = 0;
        for (int v : t.tiles[k])
            if (mark[v] == k) ++size, start = start < 0 ? v : start;
        bool ok = size > 0;
        if (ok) {
            std::vector<int> stack{start};
            mark[start] = -2;
            long reached = 1;
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                for (int e : g.incident(v)) {
                    int u = g.other(e, v);
                    if (mark[u] == k) mark[u] = -2, ++reached, stack.push_back(u);
                }
            }
            ok = reached == size;
        }
        for (int v : t.tiles[k]) mark[v] = -1;
        if (!ok) rep.disconnected_tiles.push_back(k);
    }
    rep.connected = rep.disconnected_tiles.empty();
    return rep;
}

std::vector<std::vector<int>> toast_levels(const Toast& t) {
    std::vector<std::vector<int>> out(t.depth());
    for (int i = 0; i < static_cast<int>(t.tiles.size()); ++i) out[t.level[i] - 1].push_back(i);
    return out;
}

FrameHierarchy frame_hierarchy(const WindowGraph& w, const std::vector<int>& sides) {
    const auto& g = w.g;
    if (w.dim != 2) throw std::invalid_argument("frame hierarchy needs a 2D window");
    for (std::size_t i = 1; i < sides.size(); ++i)
        if (sides[i] <= sides[i - 1]) throw std::invalid_argument("frame sides must increase");
    int n = g.num_vertices();
    std::map<std::pair<int, int>, int> at;
    for (int v = 0; v < n; ++v) at[{w.coords[v][0], w.coords[v][1]}] = v;

    FrameHierarchy out;
    auto& f = out.forest;
    f.parent.assign(n, -1);
    f.parent_edge.assign(n, -1);
    f.height.assign(n, -1);
    f.children.assign(n, {});
    std::vector<char> attached(n, 0);
    for (int v = 0; v < n; ++v)
        if (g.is_boundary(v)) attached[v] = 1, f.order.push_back(v);

    auto attach = [&](int v, int p) {
        f.parent[v] = p;
        f.parent_edge[v] = g.find_edge(v, p);
        f.children[p].push_back(v);
        attached[v] = 1;
        f.order.push_back(v);
    };

    struct Region {
        VertexSet vs;
        int level;  // index into sides of its children, -1 for none
        int anchor; // attached vertex outside the region
    };
    VertexSet interior;
    for (int v = 0; v < n; ++v)
        if (!g.is_boundary(v)) interior.push_back(v);
    if (interior.empty()) throw std::invalid_argument("window has no interior");
    std::vector<Region> work{{interior, static_cast<int>(sides.size()) - 1, -1}};
    std::vector<int> owner(n, -1);  // region currently holding the vertex

    for (std::size_t wi = 0; wi < work.size(); ++wi) {
        Region r = work[wi];
        int id = static_cast<int>(out.toast.tiles.size());
        out.toast.tiles.push_back(r.vs);
        for (int v : r.vs) owner[v] = id;

        std::vector<VertexSet> kids;
        if (r.level >= 0) {
            int s = sides[r.level];
            int x0 = INT32_MAX, x1 = INT32_MIN, y0 = INT32_MAX, y1 = INT32_MIN;
            for (int v : r.vs) {
                x0 = std::min(x0, w.coords[v][0]), x1 = std::max(x1, w.coords[v][0]);
                y0 = std::min(y0, w.coords[v][1]), y1 = std::max(y1, w.coords[v][1]);
            }
            for (int by = y0 + 1; by + s - 1 <= y1 - 1; by += s + 1)
                for (int bx = x0 + 1; bx + s - 1 <= x1 - 1; bx += s + 1) {
                    VertexSet box;
                    bool ok = true;
                    for (int y = by; y < by + s && ok; ++y)
                        for (int x = bx; x < bx + s && ok; ++x) {
                            auto it = at.find({x, y});
                            if (it == at.end() || owner[it->second] != id) ok = false;
                            else box.push_back(it->second);
                        }
                    for (std::size_t i = 0; i < box.size() && ok; ++i)
                        for (int e : g.incident(box[i]))
                            if (owner[g.other(e, box[i])] != id) ok = false;
                    if (ok) std::sort(box.begin(), box.end()), kids.push_back(std::move(box));
                }
        }
        std::vector<char> in_core(n, 0);
        for (int v : r.vs) in_core[v] = 1;
        for (const auto& k : kids)
            for (int v : k) in_core[v] = 0;

        // Root: lowest core vertex next to the anchor side.
        int root = -1, parent = -1;
        for (int v : r.vs) {
            if (!in_core[v]) continue;
            for (int u : sorted_neighbours(g, v)) {
                bool outside = r.anchor < 0 ? g.is_boundary(u) : (attached[u] && owner[u] == r.anchor);
                if (outside) {
                    root = v, parent = u;
                    break;
                }
            }
            if (root >= 0) break;
        }
        if (root < 0) throw std::invalid_argument("frame tile cannot be attached");
        out.roots.push_back(root);
        attach(root, parent);
        std::deque<int> q{root};
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int u : sorted_neighbours(g, v))
                if (in_core[u] && !attached[u]) attach(u, v), q.push_back(u);
        }
        for (int v : r.vs)
            if (in_core[v] && !attached[v]) throw std::invalid_argument("frame tile core is disconnected");
        for (auto& k : kids) work.push_back({std::move(k), r.level - 1, id});
    }
    compute_heights(f, g);
    index_toast(out.toast);
    return out;
}

}  // namespace hm
