#include "hypermatch/cayley.hpp"

#include <algorithm>
#include <stdexcept>

namespace hm {

namespace {

int mod(int a, int n) { return ((a % n) + n) % n; }

// Cayley vertex for the left translate gamma^t x.
int translate(const CayleyGraph& c, int v, int t) { return c.id(c.copy_of(v) + t, c.delta_of(v)); }

int power_step(const CayleyGraph& c, int v, const CayleyGenerator& s, int times) {
    auto step = times >= 0 ? s : inverse_generator(c.spec, s);
    for (int i = 0; i < std::abs(times); ++i) v = c.multiply(v, step);
    return v;
}

}  // namespace

DeltaClassification classify_delta_bipartition(const CayleyGraph& c) {
    if (!c.bipartite) throw std::invalid_argument("Cayley quotient is not bipartite");
    DeltaClassification r;
    int id0 = c.id(0, c.spec.delta.identity);
    for (int d = 0; d < c.spec.delta.order; ++d)
        if (c.g.side(c.id(0, d)) == c.g.side(id0)) r.delta_prime.push_back(d);
    r.tag = static_cast<int>(r.delta_prime.size()) == c.spec.delta.order ? DeltaCase::whole : DeltaCase::split;
    return r;
}

int normalized_shift(const CayleyGraph& c, const CayleyGenerator& s) {
    int n = c.spec.period, x = mod(s.shift, n);
    return 2 * x > n ? x - n : x;
}

std::pair<int, int> generator_reach(const CayleyGraph& c) {
    int l = 0, m = 0;
    for (const auto& s : c.spec.generators) {
        int x = normalized_shift(c, s);
        if (x <= 0) continue;
        if (l == 0 || x < l) l = x;
        m = std::max(m, x);
    }
    return {l, m};
}

BlockTemplate build_block(const CayleyGraph& c, int l, int m) {
    if (l < 1 || m < l) throw std::invalid_argument("block needs 0 < l <= m");
    const CayleyGenerator* sigma = nullptr;
    for (const auto& s : c.spec.generators)
        if (normalized_shift(c, s) == l) {
            sigma = &s;
            break;
        }
    if (!sigma) throw std::invalid_argument("no generator moves copies by l");
    auto cls = classify_delta_bipartition(c);
    int order = c.spec.delta.order;
    BlockTemplate t;
    t.tag = cls.tag;
    t.half_copies = cls.tag == DeltaCase::whole && order % 2 == 0;
    t.l = l, t.m = m, t.sigma = *sigma;
    t.first_copy = t.half_copies ? -l : 0;
    t.last_copy = 2 * l * m - 1 + (t.half_copies ? l : 0);
    if (t.span() + 2 > c.spec.period) throw std::invalid_argument("block does not fit in the quotient");
    if (!t.half_copies) {
        for (int run = 0; run < m; ++run)
            for (int j = 0; j < l; ++j)
                for (int d = 0; d < order; ++d) {
                    int x = c.id(2 * l * run + j, d);
                    t.matching.push_back({x, c.multiply(x, *sigma)});
                }
    } else {
        // chains x_0 sigma^j through copies 0..l-1; those starting in the first
        // half of Delta reach one step further in both directions
        for (int j = 0; j < l; ++j)
            for (int d = 0; d < order; ++d) {
                int x0 = c.id(j, d);
                bool extended = d < order / 2;
                int from = extended ? -1 : 0, to = extended ? 2 * m : 2 * m - 1;
                for (int p = from; p < to; p += 2)
                    t.matching.push_back({power_step(c, x0, *sigma, p), power_step(c, x0, *sigma, p + 1)});
            }
    }
    for (const auto& [a, b] : t.matching) t.vertices.push_back(a), t.vertices.push_back(b);
    std::sort(t.vertices.begin(), t.vertices.end());
    auto err = validate_block(c, t);
    if (!err.empty()) throw std::invalid_argument("block construction failed: " + err);
    return t;
}

std::string validate_block(const CayleyGraph& c, const BlockTemplate& t) {
    std::vector<int> seen;
    for (const auto& [a, b] : t.matching) {
        if (!c.g.has_edge(a, b)) return "pair is not an edge";
        seen.push_back(a), seen.push_back(b);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return "vertex matched twice";
    if (seen != t.vertices) return "matching does not cover the block";
    for (int v : t.vertices) {
        int copy = c.copy_of(v);
        int rel = mod(copy - t.first_copy, c.spec.period);
        if (rel >= t.span()) return "block vertex outside its copy range";
    }
    return {};
}

BlocksAndGaps blocks_and_gaps_matching(const CayleyGraph& c, int k, const BlockTemplate& t) {
    int n = c.spec.period;
    if (k < t.span()) throw std::invalid_argument("spacing smaller than the block span");
    BlocksAndGaps r;
    for (int a = 0; a + k <= n; a += k) r.anchors.push_back(a);
    if (r.anchors.empty()) r.anchors.push_back(0);
    int nv = c.g.num_vertices(), ne = c.g.num_edges();
    std::vector<char> in_block(nv, 0), matched(ne, 0);
    for (int a : r.anchors)
        for (const auto& [x, y] : t.matching) {
            int u = translate(c, x, a), w = translate(c, y, a);
            if (in_block[u] || in_block[w]) throw std::logic_error("blocks overlap");
            in_block[u] = in_block[w] = 1;
            matched[c.g.find_edge(u, w)] = 1;
        }
    std::vector<char> mask(ne, 0);
    for (int e = 0; e < ne; ++e) mask[e] = !in_block[c.g.edge(e).u] && !in_block[c.g.edge(e).w];
    int comps = 0;
    auto label = component_labels(c.g, &mask, &comps);
    std::vector<std::vector<int>> members(comps);
    for (int v = 0; v < nv; ++v)
        if (!in_block[v]) members[label[v]].push_back(v);
    r.ok = true;
    for (const auto& gap : members) {
        if (gap.empty()) continue;
        ++r.gaps;
        r.largest_gap = std::max(r.largest_gap, static_cast<int>(gap.size()));
        BipartiteGraph h;
        std::vector<int> local(nv, -1);
        for (int v : gap) local[v] = h.add_vertex(c.g.side(v));
        std::vector<int> back;
        for (int v : gap)
            for (int e : c.g.incident(v)) {
                int w = c.g.other(e, v);
                if (local[w] >= 0 && v < w) h.add_edge(local[v], local[w]), back.push_back(e);
            }
        auto res = perfect_f_matching(h, unit_demand(h), unit_capacity(h));
        if (!res.ok()) {
            r.ok = false;
            GapFailure f;
            f.vertices = gap;
            f.certificate = *res.certificate;
            for (int& v : f.certificate.s) v = gap[v];
            for (int& v : f.certificate.neighborhood) v = gap[v];
            r.failures.push_back(std::move(f));
            continue;
        }
        for (int e = 0; e < h.num_edges(); ++e)
            if ((*res.assignment)[e] == 1) matched[back[e]] = 1;
    }
    for (int e = 0; e < ne; ++e)
        if (matched[e]) r.matching.push_back(e);
    return r;
}

SpacingSearch find_spacing(const CayleyGraph& c, const BlockTemplate& t, int k_max) {
    SpacingSearch s;
    for (int k = t.span() + 1; k <= k_max; k *= 2) {
        bool all = true;
        for (int j = k; j <= std::min(2 * k, k_max); ++j) {
            bool ok = blocks_and_gaps_matching(c, j, t).ok;
            s.tried.push_back({j, ok});
            all = all && ok;
        }
        if (all) {
            s.k0 = k;
            break;
        }
    }
    return s;
}

std::vector<int> cut_parities(const CayleyGraph& c, const EdgeSet& matching) {
    int n = c.spec.period;
    std::vector<int> par(n, 0);
    for (int e : matching) {
        int a = c.copy_of(c.g.edge(e).u), b = c.copy_of(c.g.edge(e).w);
        int s = mod(b - a, n);
        if (2 * s > n) std::swap(a, b), s = n - s;
        if (2 * s == n) throw std::invalid_argument("edge shift is ambiguous on this quotient");
        for (int i = 0; i < s; ++i) par[mod(a + i, n)] ^= 1;
    }
    return par;
}

ObstructionReport odd_delta_obstruction(const CayleyGraph& c) {
    ObstructionReport r;
    r.delta_order = c.spec.delta.order;
    r.period = c.spec.period;
    r.applies = r.delta_order % 2 == 1;
    r.vertex_count_odd = c.g.num_vertices() % 2 == 1;
    if (!r.applies) {
        r.reason = "|Delta| even: crossing parity places no constraint";
        return r;
    }
    if (r.vertex_count_odd) {
        r.matching_exists = false;
        r.reason = "odd vertex count: no perfect matching";
        return r;
    }
    if (!c.bipartite) {
        r.reason = "non-bipartite quotient with an even vertex count: existence not decided here";
        return r;
    }
    auto res = perfect_f_matching(c.g, unit_demand(c.g), unit_capacity(c.g));
    r.matching_exists = res.ok();
    if (!res.ok()) {
        r.reason = "Hall condition fails";
        return r;
    }
    EdgeSet m;
    for (int e = 0; e < c.g.num_edges(); ++e)
        if ((*res.assignment)[e] == 1) m.push_back(e);
    r.cut_parity = cut_parities(c, m);
    for (int i = 0; i < r.period; ++i)
        if (r.cut_parity[i]) r.induced.push_back(i);
    r.induced_valid = true;
    for (int i = 0; i < r.period; ++i)
        if (r.cut_parity[mod(i - 1, r.period)] + r.cut_parity[i] != 1) r.induced_valid = false;
    r.reason = r.induced_valid ? "matching found; induced copy-cycle matching valid" : "induced cuts are not a matching";
    return r;
}

}  // namespace hm
