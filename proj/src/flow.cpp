#include "hypermatch/flow.hpp"

#include "maxflow.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>

namespace hm {

namespace {

using detail::BoundedArc;

// Scaled integral flow: demands f*D, edge bounds lo..hi (already scaled).
std::optional<std::vector<long>> scaled_flow(const BipartiteGraph& g, const DemandProfile& f, long D,
                                             const std::vector<long>& lo, const std::vector<long>& hi) {
    int n = g.num_vertices();
    int s = n, t = n + 1;
    std::vector<BoundedArc> arcs;
    arcs.reserve(g.num_edges() + n);
    for (int e = 0; e < g.num_edges(); ++e) {
        int u = g.edge(e).u, w = g.edge(e).w;
        if (g.side(u) == Side::right) std::swap(u, w);
        arcs.push_back({u, w, lo[e], hi[e]});
    }
    for (int v = 0; v < n; ++v) {
        long demand = f[v] * D;
        long low = g.is_boundary(v) ? 0 : demand;
        if (g.side(v) == Side::left) arcs.push_back({s, v, low, demand});
        else arcs.push_back({v, t, low, demand});
    }
    std::vector<std::int64_t> flow;
    if (!detail::bounded_flow(n + 2, s, t, arcs, flow)) return std::nullopt;
    std::vector<long> out(g.num_edges());
    for (int e = 0; e < g.num_edges(); ++e) out[e] = static_cast<long>(flow[e]);
    return out;
}

std::optional<DeficiencyCertificate> one_sided_certificate(const BipartiteGraph& g, const DemandProfile& f,
                                                           const CapacityProfile& c, Side side) {
    int n = g.num_vertices();
    detail::MaxFlow mf(n + 2);
    int s = n, t = n + 1;
    long need = 0;
    for (int v = 0; v < n; ++v) {
        if (g.side(v) == side) {
            long d = g.is_boundary(v) ? 0 : f[v];
            mf.add_arc(s, v, d);
            need += d;
        } else {
            mf.add_arc(v, t, f[v]);
        }
    }
    for (int e = 0; e < g.num_edges(); ++e) {
        int u = g.edge(e).u, w = g.edge(e).w;
        if (g.side(u) != side) std::swap(u, w);
        mf.add_arc(u, w, c[e]);
    }
    if (mf.run(s, t) == need) return std::nullopt;
    auto reach = mf.reachable(s);
    VertexSet sset;
    for (int v = 0; v < n; ++v)
        if (g.side(v) == side && reach[v] && !g.is_boundary(v)) sset.push_back(v);
    if (deficiency_of(g, f, c, sset) <= 0) return std::nullopt;
    // Shrink to an inclusion-minimal deficient set, dropping low ids first.
    for (std::size_t i = 0; i < sset.size();) {
        VertexSet trial = sset;
        trial.erase(trial.begin() + static_cast<long>(i));
        if (deficiency_of(g, f, c, trial) > 0) sset = std::move(trial);
        else ++i;
    }
    DeficiencyCertificate cert;
    cert.side = side;
    cert.s = sset;
    auto in_s = mask_of(sset, n);
    std::vector<long> cap_to(n, 0);
    for (int v : sset) {
        cert.demand += f[v];
        for (int e : g.incident(v)) cap_to[g.other(e, v)] += c[e];
    }
    for (int u = 0; u < n; ++u)
        if (cap_to[u] > 0 && !in_s[u]) {
            cert.neighborhood.push_back(u);
            cert.neighborhood_capacity += std::min(cap_to[u], f[u]);
        }
    cert.deficit = cert.demand - cert.neighborhood_capacity;
    return cert;
}

DeficiencyCertificate make_certificate(const BipartiteGraph& g, const DemandProfile& f, const CapacityProfile& c) {
    for (Side side : {Side::left, Side::right})
        if (auto cert = one_sided_certificate(g, f, c, side)) return *cert;
    throw std::logic_error("infeasible instance without a one-sided deficiency witness");
}

}  // namespace

long deficiency_of(const BipartiteGraph& g, const DemandProfile& f, const CapacityProfile& c, const VertexSet& s) {
    int n = g.num_vertices();
    auto in_s = mask_of(s, n);
    long demand = 0;
    std::vector<long> cap_to(n, 0);
    for (int v : s) {
        if (!g.is_boundary(v)) demand += f[v];
        for (int e : g.incident(v)) cap_to[g.other(e, v)] += c[e];
    }
    long absorb = 0;
    for (int u = 0; u < n; ++u)
        if (!in_s[u]) absorb += std::min(cap_to[u], f[u]);
    return demand - absorb;
}

std::optional<std::vector<long>> bounded_f_matching(const BipartiteGraph& g, const DemandProfile& f,
                                                    const std::vector<long>& lo, const std::vector<long>& hi) {
    return scaled_flow(g, f, 1, lo, hi);
}

MatchingResult perfect_f_matching(const BipartiteGraph& g, const DemandProfile& f, const CapacityProfile& c) {
    if (!g.bipartite_mode()) throw std::invalid_argument("perfect_f_matching needs a bipartite graph");
    MatchingResult r;
    std::vector<long> lo(g.num_edges(), 0), hi(c.begin(), c.end());
    if (auto x = scaled_flow(g, f, 1, lo, hi)) {
        FractionalAssignment t(g.num_edges());
        for (int e = 0; e < g.num_edges(); ++e) t[e] = (*x)[e];
        r.assignment = std::move(t);
    } else {
        r.certificate = make_certificate(g, f, c);
    }
    return r;
}

MatchingResult perfect_fractional_f_matching(const BipartiteGraph& g, const DemandProfile& f, const CapacityProfile& c,
                                             const FractionalOptions& opts) {
    if (!g.bipartite_mode()) throw std::invalid_argument("perfect_fractional_f_matching needs a bipartite graph");
    MatchingResult r;
    if (opts.uniform) {
        int d = g.num_vertices() ? g.degree(0) : 0;
        for (int v = 0; v < g.num_vertices(); ++v)
            if (g.degree(v) != d || f[v] != 1) throw std::invalid_argument("uniform hint needs a d-regular graph with f = 1");
        for (int e = 0; e < g.num_edges(); ++e)
            if (c[e] < 1) throw std::invalid_argument("uniform hint needs capacities >= 1");
        if (d == 0) {
            r.assignment = FractionalAssignment{};
            return r;
        }
        r.assignment = constant_assignment(g, Rational(1, d));
        return r;
    }
    long D = opts.denominator;
    if (D <= 0 && opts.hint) D = common_denominator(*opts.hint).get_si();
    if (D <= 0) D = std::max(1, 2 * g.max_degree());

    long cmax = 0;
    for (long x : c) cmax = std::max(cmax, x);
    std::vector<long> lo(g.num_edges(), 0), hi(g.num_edges());
    auto attempt = [&](long cap) {
        for (int e = 0; e < g.num_edges(); ++e) hi[e] = std::min(c[e] * D, cap);
        return scaled_flow(g, f, D, lo, hi);
    };
    auto best = attempt(cmax * D);
    if (!best) {
        r.certificate = make_certificate(g, f, c);
        return r;
    }
    long a = 0, b = cmax * D;  // infeasible at a (or a == 0), feasible at b
    while (b - a > 1) {
        long mid = a + (b - a) / 2;
        if (auto x = attempt(mid)) {
            best = std::move(x);
            b = mid;
        } else {
            a = mid;
        }
    }
    FractionalAssignment t(g.num_edges());
    for (int e = 0; e < g.num_edges(); ++e) t[e] = Rational((*best)[e], D), t[e].canonicalize();
    r.assignment = std::move(t);
    return r;
}

EdgeSet parity_subgraph_within(const BipartiteGraph& g, const std::vector<char>& edge_mask, const VertexSet& n_set) {
    if (n_set.size() % 2) throw std::invalid_argument("parity set has odd size");
    int n = g.num_vertices();
    std::vector<int> parent_edge(n, -2), order;
    order.reserve(n);
    std::vector<char> odd = mask_of(n_set, n);
    for (int root = 0; root < n; ++root) {
        if (parent_edge[root] != -2) continue;
        parent_edge[root] = -1;
        std::size_t start = order.size();
        order.push_back(root);
        for (std::size_t i = start; i < order.size(); ++i) {
            int v = order[i];
            for (int e : g.incident(v)) {
                if (!edge_mask[e]) continue;
                int u = g.other(e, v);
                if (parent_edge[u] == -2) {
                    parent_edge[u] = e;
                    order.push_back(u);
                }
            }
        }
        int count = 0;
        for (std::size_t i = start; i < order.size(); ++i) count += odd[order[i]];
        if (count % 2) throw std::invalid_argument("parity set meets a component in an odd number of vertices");
    }
    EdgeSet h;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        if (parent_edge[v] >= 0 && odd[v]) {
            h.push_back(parent_edge[v]);
            odd[v] = 0;
            int p = g.other(parent_edge[v], v);
            odd[p] ^= 1;
        }
    }
    return make_edge_set(std::move(h));
}

EdgeSet parity_subgraph(const BipartiteGraph& g, const VertexSet& n_set) {
    if (n_set.size() % 2) throw std::invalid_argument("parity set has odd size");
    int comps = 0;
    component_labels(g, nullptr, &comps);
    if (comps > 1) throw std::invalid_argument("graph is disconnected");
    std::vector<char> all(g.num_edges(), 1);
    return parity_subgraph_within(g, all, n_set);
}

MaximalSupport maximal_support(const BipartiteGraph& g, const DemandProfile& f, const CapacityProfile& c) {
    int m = g.num_edges();
    MaximalSupport out;
    std::vector<std::vector<long>> found;
    std::vector<char> pos(m, 0), below(m, 0);
    auto record = [&](std::vector<long> x) {
        for (int e = 0; e < m; ++e) {
            if (x[e] > 0) pos[e] = 1;
            if (x[e] < c[e]) below[e] = 1;
        }
        found.push_back(std::move(x));
    };
    std::vector<long> lo(m, 0), hi(c.begin(), c.end());
    ++out.probes;
    auto base = bounded_f_matching(g, f, lo, hi);
    if (!base) throw InfeasibleError(make_certificate(g, f, c));
    record(std::move(*base));
    // The polytope is integral, so value > 0 is attainable iff value >= 1 is.
    for (int e = 0; e < m; ++e) {
        if (c[e] == 0) continue;
        if (!pos[e]) {
            lo[e] = 1;
            ++out.probes;
            if (auto x = bounded_f_matching(g, f, lo, hi)) record(std::move(*x));
            lo[e] = 0;
        }
        if (!below[e]) {
            hi[e] = c[e] - 1;
            ++out.probes;
            if (auto x = bounded_f_matching(g, f, lo, hi)) record(std::move(*x));
            hi[e] = c[e];
        }
        if (pos[e] && below[e]) out.edges.push_back(e);
    }
    out.witness.assign(m, Rational(0));
    long k = static_cast<long>(found.size());
    for (const auto& x : found)
        for (int e = 0; e < m; ++e) out.witness[e] += x[e];
    for (auto& v : out.witness) v /= k;
    return out;
}

int maximum_matching_size(const BipartiteGraph& g) {
    int n = g.num_vertices();
    std::vector<int> mate(n, -1);
    std::vector<int> seen(n, -1);
    std::function<bool(int, int)> augment = [&](int v, int stamp) -> bool {
        for (int e : g.incident(v)) {
            int u = g.other(e, v);
            if (seen[u] == stamp) continue;
            seen[u] = stamp;
            if (mate[u] < 0 || augment(mate[u], stamp)) {
                mate[u] = v;
                mate[v] = u;
                return true;
            }
        }
        return false;
    };
    int size = 0;
    for (int v = 0; v < n; ++v)
        if (g.side(v) == Side::left && mate[v] < 0 && augment(v, v)) ++size;
    return size;
}

}  // namespace hm
