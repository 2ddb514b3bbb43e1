#include "hypermatch/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace hm {

std::uint64_t BipartiteGraph::key(int u, int w) {
    if (u > w) std::swap(u, w);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) | static_cast<std::uint32_t>(w);
}

int BipartiteGraph::add_vertex(Side side, bool boundary) {
    side_.push_back(side);
    boundary_.push_back(boundary ? 1 : 0);
    adj_.emplace_back();
    return num_vertices() - 1;
}

int BipartiteGraph::add_edge(int u, int w) {
    if (u < 0 || w < 0 || u >= num_vertices() || w >= num_vertices())
        throw std::out_of_range("edge endpoint out of range");
    if (u == w) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
    if (bipartite_ && side_[u] == side_[w])
        throw std::invalid_argument("edge " + std::to_string(u) + "-" + std::to_string(w) + " joins one side");
    auto k = key(u, w);
    if (index_.count(k))
        throw std::invalid_argument("parallel edge " + std::to_string(u) + "-" + std::to_string(w));
    int id = num_edges();
    edges_.push_back({u, w});
    adj_[u].push_back(id);
    adj_[w].push_back(id);
    index_.emplace(k, id);
    return id;
}

int BipartiteGraph::find_edge(int u, int w) const {
    auto it = index_.find(key(u, w));
    return it == index_.end() ? -1 : it->second;
}

int BipartiteGraph::max_degree() const {
    int d = 0;
    for (const auto& a : adj_) d = std::max(d, static_cast<int>(a.size()));
    return d;
}

std::vector<int> BipartiteGraph::boundary_vertices() const {
    std::vector<int> out;
    for (int v = 0; v < num_vertices(); ++v)
        if (boundary_[v]) out.push_back(v);
    return out;
}

EdgeSet make_edge_set(std::vector<int> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

std::vector<char> mask_of(const std::vector<int>& ids, int universe) {
    std::vector<char> m(universe, 0);
    for (int e : ids) m[e] = 1;
    return m;
}

EdgeSet set_difference(const EdgeSet& a, const EdgeSet& b) {
    EdgeSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

EdgeSet set_union(const EdgeSet& a, const EdgeSet& b) {
    EdgeSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

EdgeSet set_intersection(const EdgeSet& a, const EdgeSet& b) {
    EdgeSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

DemandProfile unit_demand(const BipartiteGraph& g) { return DemandProfile(g.num_vertices(), 1); }
CapacityProfile unit_capacity(const BipartiteGraph& g) { return CapacityProfile(g.num_edges(), 1); }
FractionalAssignment constant_assignment(const BipartiteGraph& g, const Rational& value) {
    return FractionalAssignment(g.num_edges(), value);
}

std::vector<int> ValidationReport::vertices() const {
    std::vector<int> out;
    for (const auto& v : violations)
        if (v.kind != Violation::edge_range) out.push_back(v.id);
    return out;
}

std::vector<int> ValidationReport::edges() const {
    std::vector<int> out;
    for (const auto& v : violations)
        if (v.kind == Violation::edge_range) out.push_back(v.id);
    return out;
}

Rational vertex_sum(const BipartiteGraph& g, const FractionalAssignment& t, int v) {
    Rational s = 0;
    for (int e : g.incident(v)) s += t[e];
    return s;
}

ValidationReport validate_perfect_fractional_matching(const BipartiteGraph& g, const DemandProfile& f,
                                                      const CapacityProfile& c,
                                                      const FractionalAssignment& t) {
    if (static_cast<int>(t.size()) != g.num_edges() || static_cast<int>(c.size()) != g.num_edges() ||
        static_cast<int>(f.size()) != g.num_vertices())
        throw std::invalid_argument("profile sizes do not match the graph");
    ValidationReport r;
    for (int e = 0; e < g.num_edges(); ++e) {
        if (t[e] < 0 || t[e] > c[e]) r.violations.push_back({Violation::edge_range, e, t[e], Rational(c[e])});
    }
    for (int v = 0; v < g.num_vertices(); ++v) {
        Rational s = vertex_sum(g, t, v);
        if (g.is_boundary(v)) {
            if (s > f[v]) r.violations.push_back({Violation::boundary_excess, v, s, Rational(f[v])});
        } else if (s != f[v]) {
            r.violations.push_back({Violation::vertex_sum, v, s, Rational(f[v])});
        }
    }
    r.ok = r.violations.empty();
    return r;
}

EdgeSet support(const FractionalAssignment& t, const CapacityProfile& c) {
    EdgeSet out;
    for (int e = 0; e < static_cast<int>(t.size()); ++e)
        if (t[e] > 0 && t[e] < c[e]) out.push_back(e);
    return out;
}

UnitCapacityReduction reduce_to_unit_capacity(const BipartiteGraph& g, const DemandProfile& f,
                                              const FractionalAssignment& t) {
    UnitCapacityReduction r;
    r.f = f;
    r.t.resize(t.size());
    r.integral_part.resize(t.size());
    for (int e = 0; e < g.num_edges(); ++e) {
        Integer fl = floor_of(t[e]);
        r.integral_part[e] = fl.get_si();
        r.t[e] = t[e] - Rational(fl);
        r.f[g.edge(e).u] -= r.integral_part[e];
        r.f[g.edge(e).w] -= r.integral_part[e];
    }
    for (int v = 0; v < g.num_vertices(); ++v)
        if (r.f[v] < 0) throw std::invalid_argument("negative residual demand at vertex " + std::to_string(v));
    return r;
}

FractionalAssignment reassemble(const UnitCapacityReduction& r, const FractionalAssignment& sigma) {
    FractionalAssignment out(sigma.size());
    for (std::size_t e = 0; e < sigma.size(); ++e) out[e] = sigma[e] + r.integral_part[e];
    return out;
}

std::vector<LineComponent> line_decomposition(const EdgeSet& l, const BipartiteGraph& g) {
    std::vector<std::vector<int>> inc(g.num_vertices());
    for (int e : l) {
        inc[g.edge(e).u].push_back(e);
        inc[g.edge(e).w].push_back(e);
    }
    for (int v = 0; v < g.num_vertices(); ++v) {
        if (inc[v].size() >= 3)
            throw std::invalid_argument("vertex " + std::to_string(v) + " has degree " +
                                        std::to_string(inc[v].size()) + " in the line set");
        std::sort(inc[v].begin(), inc[v].end());
    }
    std::vector<char> used(g.num_edges(), 0);
    std::vector<LineComponent> out;

    auto walk = [&](int start, bool cycle) {
        LineComponent comp;
        comp.cycle = cycle;
        int v = start;
        comp.vertices.push_back(v);
        while (true) {
            int next = -1;
            for (int e : inc[v])
                if (!used[e]) {
                    next = e;
                    break;
                }
            if (next < 0) break;
            used[next] = 1;
            comp.edges.push_back(next);
            v = g.other(next, v);
            if (cycle && v == start) break;
            comp.vertices.push_back(v);
        }
        for (int i = 0; i < comp.length(); ++i) comp.color.push_back(i % 2);
        out.push_back(std::move(comp));
    };

    // Paths first from their lowest endpoint, then the remaining cycles.
    for (int v = 0; v < g.num_vertices(); ++v)
        if (inc[v].size() == 1 && !used[inc[v][0]]) walk(v, false);
    for (int v = 0; v < g.num_vertices(); ++v)
        if (inc[v].size() == 2 && !used[inc[v][0]]) walk(v, true);

    std::sort(out.begin(), out.end(), [](const LineComponent& a, const LineComponent& b) {
        return a.vertices.front() < b.vertices.front();
    });
    return out;
}

EdgeSet boundary_edges(const BipartiteGraph& g, const VertexSet& w) {
    auto in = mask_of(w, g.num_vertices());
    EdgeSet out;
    for (int e = 0; e < g.num_edges(); ++e)
        if (in[g.edge(e).u] != in[g.edge(e).w]) out.push_back(e);
    return out;
}

std::vector<int> component_labels(const BipartiteGraph& g, const std::vector<char>* edge_mask, int* count) {
    std::vector<int> label(g.num_vertices(), -1);
    int c = 0;
    std::vector<int> stack;
    for (int s = 0; s < g.num_vertices(); ++s) {
        if (label[s] >= 0) continue;
        label[s] = c;
        stack.push_back(s);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int e : g.incident(v)) {
                if (edge_mask && !(*edge_mask)[e]) continue;
                int u = g.other(e, v);
                if (label[u] < 0) {
                    label[u] = c;
                    stack.push_back(u);
                }
            }
        }
        ++c;
    }
    if (count) *count = c;
    return label;
}

std::optional<std::vector<int>> find_odd_cycle(const BipartiteGraph& g) {
    int n = g.num_vertices();
    std::vector<int> color(n, -1), parent(n, -1), depth(n, 0);
    for (int s = 0; s < n; ++s) {
        if (color[s] >= 0) continue;
        color[s] = 0;
        std::deque<int> q{s};
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int e : g.incident(v)) {
                int u = g.other(e, v);
                if (color[u] < 0) {
                    color[u] = 1 - color[v];
                    parent[u] = v;
                    depth[u] = depth[v] + 1;
                    q.push_back(u);
                } else if (color[u] == color[v]) {
                    std::vector<int> a{v}, b{u};
                    int x = v, y = u;
                    while (depth[x] > depth[y]) a.push_back(x = parent[x]);
                    while (depth[y] > depth[x]) b.push_back(y = parent[y]);
                    while (x != y) {
                        a.push_back(x = parent[x]);
                        b.push_back(y = parent[y]);
                    }
                    b.pop_back();
                    a.insert(a.end(), b.rbegin(), b.rend());
                    return a;
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<std::vector<int>> two_colouring(const BipartiteGraph& g) {
    int n = g.num_vertices();
    std::vector<int> colour(n, -1);
    for (int s = 0; s < n; ++s) {
        if (colour[s] >= 0) continue;
        colour[s] = 0;
        std::deque<int> q{s};
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int e : g.incident(v)) {
                int u = g.other(e, v);
                if (colour[u] < 0) {
                    colour[u] = 1 - colour[v];
                    q.push_back(u);
                } else if (colour[u] == colour[v]) {
                    return std::nullopt;
                }
            }
        }
    }
    return colour;
}

BipartiteGraph as_bipartite(const BipartiteGraph& g, const std::vector<int>& colour) {
    BipartiteGraph h;
    for (int v = 0; v < g.num_vertices(); ++v) h.add_vertex(colour[v] ? Side::right : Side::left, g.is_boundary(v));
    for (int e = 0; e < g.num_edges(); ++e) h.add_edge(g.edge(e).u, g.edge(e).w);
    return h;
}

std::vector<int> bfs_distances(const BipartiteGraph& g, int source) {
    std::vector<int> d(g.num_vertices(), -1);
    std::deque<int> q{source};
    d[source] = 0;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int e : g.incident(v)) {
            int u = g.other(e, v);
            if (d[u] < 0) {
                d[u] = d[v] + 1;
                q.push_back(u);
            }
        }
    }
    return d;
}

BallGrowth ball_growth(const BipartiteGraph& g, const std::vector<char>* mask, int source) {
    BallGrowth b;
    std::vector<int> order{source};
    std::unordered_map<int, int> dist{{source, 0}};
    for (std::size_t i = 0; i < order.size(); ++i) {
        int v = order[i];
        if (g.is_boundary(v)) b.touches_boundary = true;
        for (int e : g.incident(v)) {
            if (mask && !(*mask)[e]) continue;
            int u = g.other(e, v);
            if (dist.emplace(u, dist[v] + 1).second) {
                b.eccentricity = std::max(b.eccentricity, dist[u]);
                order.push_back(u);
            }
        }
    }
    b.size = static_cast<long>(order.size());
    int r = std::max(1, b.eccentricity / 4);
    long b1 = 0, b2 = 0;
    for (const auto& [v, d] : dist) b1 += d <= r, b2 += d <= 2 * r;
    b.ratio = static_cast<double>(b2) / static_cast<double>(std::max(1L, b1));
    return b;
}

GraphBundle read_graph(std::istream& in) {
    std::string line, kw;
    int n = -1, m = -1;
    GraphBundle b;
    std::vector<std::pair<int, int>> pending_edges;
    std::vector<std::tuple<int, Side, bool>> pending_vertices;
    std::vector<std::pair<int, long>> fs, cs;
    std::vector<std::pair<int, Rational>> ts;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw std::invalid_argument("line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        if (!(ls >> kw)) continue;
        if (kw == "bipartite") {
            int nl, nr;
            if (!(ls >> nl >> nr >> m)) fail("bad header");
            n = nl + nr;
            b.g = BipartiteGraph(true);
        } else if (kw == "general") {
            if (!(ls >> n >> m)) fail("bad header");
            b.g = BipartiteGraph(false);
        } else if (n < 0) {
            fail("missing header");
        } else if (kw == "v") {
            int id;
            std::string s, flag;
            if (!(ls >> id >> s)) fail("bad vertex line");
            Side side;
            if (s == "L" || s == "left" || s == "l" || s == "0") side = Side::left;
            else if (s == "R" || s == "right" || s == "r" || s == "1") side = Side::right;
            else fail("bad side '" + s + "'");
            bool boundary = false;
            if (ls >> flag) {
                if (flag != "boundary" && flag != "b") fail("bad vertex flag '" + flag + "'");
                boundary = true;
            }
            pending_vertices.emplace_back(id, side, boundary);
        } else if (kw == "e") {
            int id, u, w;
            if (!(ls >> id >> u >> w)) fail("bad edge line");
            if (id != static_cast<int>(pending_edges.size())) fail("edge ids must be consecutive from 0");
            pending_edges.emplace_back(u, w);
        } else if (kw == "f" || kw == "c") {
            int id;
            long val;
            if (!(ls >> id >> val) || val < 0) fail("bad profile line");
            (kw == "f" ? fs : cs).emplace_back(id, val);
        } else if (kw == "t") {
            int id;
            std::string val;
            if (!(ls >> id >> val)) fail("bad assignment line");
            ts.emplace_back(id, parse_rational(val));
        } else {
            fail("unknown record '" + kw + "'");
        }
    }
    if (n < 0) throw std::invalid_argument("empty graph file");
    std::sort(pending_vertices.begin(), pending_vertices.end(),
              [](const auto& a, const auto& c) { return std::get<0>(a) < std::get<0>(c); });
    if (static_cast<int>(pending_vertices.size()) != n)
        throw std::invalid_argument("vertex count does not match header");
    for (int i = 0; i < n; ++i) {
        if (std::get<0>(pending_vertices[i]) != i) throw std::invalid_argument("vertex ids must be 0..n-1");
        b.g.add_vertex(std::get<1>(pending_vertices[i]), std::get<2>(pending_vertices[i]));
    }
    if (static_cast<int>(pending_edges.size()) != m) throw std::invalid_argument("edge count does not match header");
    for (auto [u, w] : pending_edges) b.g.add_edge(u, w);
    if (!fs.empty()) {
        b.f = unit_demand(b.g);
        for (auto [id, v] : fs) b.f->at(id) = v;
    }
    if (!cs.empty()) {
        b.c = unit_capacity(b.g);
        for (auto [id, v] : cs) b.c->at(id) = v;
    }
    if (!ts.empty()) {
        b.t = FractionalAssignment(m, Rational(0));
        for (auto& [id, v] : ts) b.t->at(id) = v;
    }
    return b;
}

GraphBundle read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_graph(in);
}

void write_graph(std::ostream& out, const GraphBundle& b) {
    const auto& g = b.g;
    if (g.bipartite_mode()) {
        int nl = 0;
        for (int v = 0; v < g.num_vertices(); ++v) nl += g.side(v) == Side::left;
        out << "bipartite " << nl << ' ' << g.num_vertices() - nl << ' ' << g.num_edges() << '\n';
    } else {
        out << "general " << g.num_vertices() << ' ' << g.num_edges() << '\n';
    }
    for (int v = 0; v < g.num_vertices(); ++v)
        out << "v " << v << ' ' << (g.side(v) == Side::left ? 'L' : 'R') << (g.is_boundary(v) ? " boundary" : "")
            << '\n';
    for (int e = 0; e < g.num_edges(); ++e) out << "e " << e << ' ' << g.edge(e).u << ' ' << g.edge(e).w << '\n';
    if (b.f)
        for (int v = 0; v < g.num_vertices(); ++v) out << "f " << v << ' ' << (*b.f)[v] << '\n';
    if (b.c)
        for (int e = 0; e < g.num_edges(); ++e) out << "c " << e << ' ' << (*b.c)[e] << '\n';
    if (b.t)
        for (int e = 0; e < g.num_edges(); ++e) {
            const auto& q = (*b.t)[e];
            out << "t " << e << ' ' << q.get_num().get_str() << '/' << q.get_den().get_str() << '\n';
        }
}

std::string graph_to_string(const GraphBundle& b) {
    std::ostringstream os;
    write_graph(os, b);
    return os.str();
}

}  // namespace hm
