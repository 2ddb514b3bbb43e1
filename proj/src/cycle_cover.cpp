#include "hypermatch/cycle_cover.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>

namespace hm {

namespace {

struct ParityResult {
    bool ok = true;
    EdgeSet h;
    std::vector<int> comp;      // component id per region vertex index
    std::vector<int> odd_comps; // components meeting the odd set oddly
};

// Parity subgraph inside a vertex region, using the edges accepted by ok_edge
// (both endpoints are checked to lie in the region).
template <class EdgeOk>
ParityResult parity_in_region(const BipartiteGraph& g, const VertexSet& region, EdgeOk ok_edge,
                              const std::vector<char>& odd_in) {
    ParityResult r;
    std::map<int, int> index;
    for (int i = 0; i < static_cast<int>(region.size()); ++i) index[region[i]] = i;
    int n = static_cast<int>(region.size());
    std::vector<int> parent_edge(n, -2), order;
    r.comp.assign(n, -1);
    std::vector<char> odd(n, 0);
    for (int i = 0; i < n; ++i) odd[i] = odd_in[region[i]];
    int comps = 0;
    for (int root = 0; root < n; ++root) {
        if (parent_edge[root] != -2) continue;
        parent_edge[root] = -1;
        std::size_t start = order.size();
        order.push_back(root);
        r.comp[root] = comps;
        int count = odd[root];
        for (std::size_t i = start; i < order.size(); ++i) {
            int v = region[order[i]];
            for (int e : g.incident(v)) {
                if (!ok_edge(e)) continue;
                auto it = index.find(g.other(e, v));
                if (it == index.end() || parent_edge[it->second] != -2) continue;
                parent_edge[it->second] = e;
                r.comp[it->second] = comps;
                count += odd[it->second];
                order.push_back(it->second);
            }
        }
        if (count % 2) r.ok = false, r.odd_comps.push_back(comps);
        ++comps;
    }
    if (!r.ok) return r;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int i = *it;
        if (parent_edge[i] >= 0 && odd[i]) {
            r.h.push_back(parent_edge[i]);
            odd[i] = 0;
            odd[index[g.other(parent_edge[i], region[i])]] ^= 1;
        }
    }
    r.h = make_edge_set(std::move(r.h));
    return r;
}

std::vector<char> odd_vertices(const BipartiteGraph& g, const EdgeSet& edges) {
    std::vector<char> odd(g.num_vertices(), 0);
    for (int e : edges) odd[g.edge(e).u] ^= 1, odd[g.edge(e).w] ^= 1;
    return odd;
}

// Connected pieces of an edge set, each as a sorted edge list.
std::vector<EdgeSet> pieces_of(const BipartiteGraph& g, const EdgeSet& edges) {
    std::map<int, std::vector<int>> at;
    for (int e : edges) at[g.edge(e).u].push_back(e), at[g.edge(e).w].push_back(e);
    std::map<int, int> seen;
    std::vector<EdgeSet> out;
    for (int e0 : edges) {
        if (seen.count(e0)) continue;
        EdgeSet piece;
        std::vector<int> stack{e0};
        seen[e0] = 1;
        while (!stack.empty()) {
            int e = stack.back();
            stack.pop_back();
            piece.push_back(e);
            for (int v : {g.edge(e).u, g.edge(e).w})
                for (int f : at[v])
                    if (!seen.count(f)) seen[f] = 1, stack.push_back(f);
        }
        out.push_back(make_edge_set(std::move(piece)));
    }
    return out;
}

// Drops shortest pieces with a loose end in an odd component until the
// parity problem is solvable; returns the solution and the kept pieces.
template <class EdgeOk>
std::optional<std::pair<EdgeSet, EdgeSet>> pair_loose_ends(const BipartiteGraph& g, const VertexSet& region,
                                                          EdgeOk ok_edge, std::vector<EdgeSet> pieces,
                                                          long& dropped) {
    std::sort(pieces.begin(), pieces.end(), [](const EdgeSet& a, const EdgeSet& b) {
        return a.size() != b.size() ? a.size() < b.size() : a.front() < b.front();
    });
    std::vector<char> alive(pieces.size(), 1);
    for (std::size_t round = 0; round <= pieces.size(); ++round) {
        EdgeSet lines;
        for (std::size_t i = 0; i < pieces.size(); ++i)
            if (alive[i]) lines.insert(lines.end(), pieces[i].begin(), pieces[i].end());
        lines = make_edge_set(std::move(lines));
        auto odd = odd_vertices(g, lines);
        auto r = parity_in_region(g, region, ok_edge, odd);
        if (r.ok) return std::make_pair(lines, r.h);
        std::map<int, int> idx;
        for (int i = 0; i < static_cast<int>(region.size()); ++i) idx[region[i]] = i;
        std::vector<char> bad_comp(region.size() + 1, 0);
        for (int c : r.odd_comps) bad_comp[c] = 1;
        bool dropped_one = false;
        for (std::size_t i = 0; i < pieces.size() && !dropped_one; ++i) {
            if (!alive[i]) continue;
            auto po = odd_vertices(g, pieces[i]);
            for (int e : pieces[i])
                for (int v : {g.edge(e).u, g.edge(e).w}) {
                    if (!po[v] || dropped_one) continue;
                    auto it = idx.find(v);
                    if (it == idx.end() || bad_comp[r.comp[it->second]]) {
                        alive[i] = 0, dropped_one = true, ++dropped;
                    }
                }
        }
        if (!dropped_one) return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace

std::vector<Cycle> cycle_decomposition(const BipartiteGraph& g, const EdgeSet& edges) {
    std::map<int, std::vector<int>> at;
    for (int e : edges) at[g.edge(e).u].push_back(e), at[g.edge(e).w].push_back(e);
    for (auto& [v, es] : at) {
        if (es.size() % 2) throw std::invalid_argument("edge set has a vertex of odd degree");
        std::sort(es.begin(), es.end());
    }
    std::map<int, std::size_t> next;
    std::map<int, char> used;
    std::vector<Cycle> out;
    auto take = [&](int v) -> int {
        auto& es = at[v];
        auto& i = next[v];
        while (i < es.size() && used.count(es[i])) ++i;
        return i < es.size() ? es[i] : -1;
    };
    for (auto& [start, es] : at) {
        std::vector<int> path{start};
        std::map<int, int> pos{{start, 0}};
        while (true) {
            int v = path.back();
            int e = take(v);
            if (e < 0) break;
            used[e] = 1;
            int u = g.other(e, v);
            auto it = pos.find(u);
            if (it != pos.end()) {
                std::vector<int> loop(path.begin() + it->second, path.end());
                for (std::size_t i = it->second + 1; i < path.size(); ++i) pos.erase(path[i]);
                path.resize(it->second + 1);
                out.push_back(make_cycle(g, loop));
            } else {
                pos[u] = static_cast<int>(path.size());
                path.push_back(u);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Cycle& a, const Cycle& b) { return a.edges[0] < b.edges[0]; });
    return out;
}

CoverAudit audit_cover(const CycleFamily& fam, const BipartiteGraph& g, const EdgeSet& l) {
    CoverAudit a;
    int m = g.num_edges();
    auto on_line = mask_of(l, m);
    a.line_edges = static_cast<long>(l.size());
    a.count.assign(m, 0);
    std::vector<int> families_at(m, 0);
    for (const auto& f : fam.families) {
        std::vector<int> here(m, 0);
        for (const auto& c : f) {
            std::vector<int> deg;
            std::map<int, int> d;
            for (int e : c.edges) ++here[e], ++a.count[e], ++d[g.edge(e).u], ++d[g.edge(e).w];
            for (auto& [v, k] : d)
                if (k != 2) a.cycles_simple = false;
            if (static_cast<int>(d.size()) != c.length()) a.cycles_simple = false;
        }
        long cov = 0;
        for (int e = 0; e < m; ++e) {
            if (here[e] > 1) a.disjoint_within_families = false;
            if (here[e] > 0) ++families_at[e], cov += on_line[e];
        }
        a.family_covered.push_back(cov);
    }
    for (int e = 0; e < m; ++e) {
        if (on_line[e]) {
            if (fam.k() > 0 && families_at[e] == fam.k()) ++a.joint_covered;
        } else {
            a.max_offline = std::max(a.max_offline, a.count[e]);
            a.offline_edges_used += a.count[e] > 0;
        }
    }
    return a;
}

CoverResult cover_lines_one_ended(const BipartiteGraph& g, const EdgeSet& l, const Toast& t, int k, const Rational& eps,
                                  const std::vector<char>* allowed) {
    if (k < 1) throw std::invalid_argument("k must be positive");
    CoverResult out;
    auto& st = out.stats;
    st.method = "one-ended";
    st.k = k;
    st.eps = eps;
    st.target = 1 - eps;
    st.line_edges = static_cast<long>(l.size());
    st.depth = t.depth();
    out.fam.families.assign(k, {});
    if (l.empty()) return out;

    int n = g.num_vertices();
    auto on_line = mask_of(l, g.num_edges());
    int m = st.depth - k;
    if (m < 1) st.depth_ok = false, m = 1;
    st.base_level = m;

    // Tile of each level containing each vertex (tiles of one level are disjoint).
    std::vector<std::vector<int>> at_level(st.depth + 1, std::vector<int>(n, -1));
    for (int i = 0; i < static_cast<int>(t.tiles.size()); ++i)
        for (int v : t.tiles[i]) at_level[t.level[i]][v] = i;
    auto child_of = [&](int v, int a) {
        // strict subtile of a containing v that is a direct child of a, or -1
        int best = -1;
        for (int j = 1; j < t.level[a]; ++j) {
            int c = at_level[j][v];
            if (c >= 0 && t.parent[c] == a) best = c;
        }
        return best;
    };

    if (m <= st.depth)
        for (int e : l)
            if (at_level[m][g.edge(e).u] >= 0 || at_level[m][g.edge(e).w] >= 0) ++st.base_covered;

    for (int i = 1; i <= k; ++i) {
        int a = m + i - 1, b = m + i;
        if (b > st.depth) break;
        std::map<int, std::vector<int>> groups;
        for (int ti = 0; ti < static_cast<int>(t.tiles.size()); ++ti) {
            if (t.level[ti] != a) continue;
            int up = t.parent[ti];
            while (up >= 0 && t.level[up] < b) up = t.parent[up];
            if (up >= 0 && t.level[up] == b)
                groups[up].push_back(ti);
            else
                ++st.skipped_units;
        }
        for (auto& [top, kids] : groups) {
            std::vector<char> in_kid(n, 0);
            for (int c : kids)
                for (int v : t.tiles[c]) in_kid[v] = 1;
            EdgeSet lt;
            for (int e : l)
                if (in_kid[g.edge(e).u] || in_kid[g.edge(e).w]) lt.push_back(e);
            if (lt.empty()) continue;
            const auto& region = t.tiles[top];
            // line edges outside the pieces may serve as connectors
            auto in_piece = mask_of(lt, g.num_edges());
            std::vector<char> in_top(n, 0);
            for (int v : region) in_top[v] = 1;
            auto ok_edge = [&](int e) {
                if (in_piece[e] || (!on_line[e] && allowed && !(*allowed)[e])) return false;
                int x = g.edge(e).u, y = g.edge(e).w;
                if (!in_top[x] || !in_top[y]) return false;
                int cx = child_of(x, top);
                return cx < 0 || cx != child_of(y, top);
            };
            auto res = pair_loose_ends(g, region, ok_edge, pieces_of(g, lt), st.dropped_pieces);
            if (!res) {
                ++st.skipped_units;
                continue;
            }
            auto all = set_union(res->first, res->second);
            for (auto& c : cycle_decomposition(g, all)) out.fam.families[i - 1].push_back(std::move(c));
        }
    }
    auto audit = audit_cover(out.fam, g, l);
    st.coverage_ok = st.depth_ok && Rational(audit.joint_covered) >= st.target * Rational(st.line_edges);
    return out;
}

CoverResult cover_lines_two_ended(const BipartiteGraph& g, const std::vector<int>& strip, const EdgeSet& l, int k,
                                  const Rational& eps, int cyclic_period, const std::vector<char>* allowed) {
    if (k < 1) throw std::invalid_argument("k must be positive");
    if (eps <= 0) throw std::invalid_argument("eps must be positive");
    CoverResult out;
    auto& st = out.stats;
    st.method = "two-ended";
    st.k = k;
    st.eps = eps;
    st.target = Rational(2, 3) * (1 - eps);
    st.line_edges = static_cast<long>(l.size());
    out.fam.families.assign(k, {});
    if (l.empty()) return out;

    int n = g.num_vertices();
    auto on_line = mask_of(l, g.num_edges());
    std::vector<char> h_mask(g.num_edges(), 1);
    if (allowed)
        for (int e = 0; e < g.num_edges(); ++e) h_mask[e] = (*allowed)[e] || on_line[e];
    int comps = 0;
    auto comp = component_labels(g, &h_mask, &comps);
    auto lines = line_decomposition(l, g);
    std::vector<int> lines_in(comps, 0);
    for (const auto& lc : lines) ++lines_in[comp[lc.vertices[0]]];
    for (int c = 0; c < comps; ++c)
        if (lines_in[c] == 1) throw std::invalid_argument("component " + std::to_string(c) + " is one-lined");

    // P: at least 2k so that families use distinct cutsets, and at least
    // 2/eps so that the edge lost between consecutive intervals is < eps/2.
    Rational inv = Rational(2) / eps;
    int period = std::max(2 * k, static_cast<int>(Integer(-floor_of(-inv)).get_si()));
    st.period = period;
    int lo = *std::min_element(strip.begin(), strip.end());
    int hi = *std::max_element(strip.begin(), strip.end());
    if (cyclic_period > 0) lo = 0, hi = cyclic_period - 1;
    int span = hi - lo + 1;
    std::map<int, VertexSet> column;
    for (int v = 0; v < n; ++v) column[strip[v]].push_back(v);

    for (int fi = 0; fi < k; ++fi) {
        int s0 = lo + 2 * fi + 1;
        int count = cyclic_period > 0 ? span / period : (hi - s0 + 1) / period;
        // relative position of a vertex: interval index and offset
        auto locate = [&](int v) -> std::pair<int, int> {
            int d = strip[v] - s0;
            if (cyclic_period > 0) d = ((d % span) + span) % span;
            if (d < 0) return {-1, -1};
            int j = d / period;
            if (j >= count) return {-1, -1};
            return {j, d % period};
        };
        std::vector<std::vector<EdgeSet>> segs(count);
        for (const auto& lc : lines) {
            std::vector<int> vs = lc.vertices;
            std::vector<int> es = lc.edges;
            if (lc.cycle) {
                // rotate so the walk starts on a cutset or outside every interval
                int start = -1;
                for (int i = 0; i < static_cast<int>(vs.size()); ++i) {
                    auto [j, p] = locate(vs[i]);
                    if (j < 0 || p == 0 || p == period - 1) {
                        start = i;
                        break;
                    }
                }
                if (start < 0) continue;
                std::rotate(vs.begin(), vs.begin() + start, vs.end());
                std::rotate(es.begin(), es.begin() + start, es.end());
                vs.push_back(vs.front());
            }
            int open = -1;  // index of the cutset vertex that opened the current run
            for (int i = 0; i < static_cast<int>(vs.size()); ++i) {
                auto [j, p] = locate(vs[i]);
                bool cut = j >= 0 && (p == 0 || p == period - 1);
                if (open >= 0) {
                    auto [j0, p0] = locate(vs[open]);
                    if (j == j0 && cut && p != p0) {
                        segs[j].push_back(EdgeSet(es.begin() + open, es.begin() + i));
                        open = i;
                        continue;
                    }
                    if (!(j == j0 && !cut)) open = -1;
                }
                if (cut) open = i;
            }
        }
        for (int j = 0; j < count; ++j) {
            auto& pieces = segs[j];
            if (pieces.empty()) continue;
            if (pieces.size() % 2) {
                auto shortest = std::min_element(pieces.begin(), pieces.end(), [](const EdgeSet& a, const EdgeSet& b) {
                    auto ma = *std::min_element(a.begin(), a.end()), mb = *std::min_element(b.begin(), b.end());
                    return a.size() != b.size() ? a.size() < b.size() : ma < mb;
                });
                pieces.erase(shortest);
                ++st.dropped_pieces;
                if (pieces.empty()) continue;
            }
            int sa = lo + ((s0 - lo + j * period) % span);
            int sb = lo + ((s0 - lo + j * period + period - 1) % span);
            VertexSet region = column[sa];
            region.insert(region.end(), column[sb].begin(), column[sb].end());
            std::sort(region.begin(), region.end());
            auto ok_edge = [&](int e) {
                if (!on_line[e] && allowed && !(*allowed)[e]) return false;
                int x = g.edge(e).u, y = g.edge(e).w;
                return strip[x] == strip[y] && (strip[x] == sa || strip[x] == sb);
            };
            EdgeSet segment_edges;
            for (auto& p : pieces) segment_edges.insert(segment_edges.end(), p.begin(), p.end());
            segment_edges = make_edge_set(std::move(segment_edges));
            auto r = parity_in_region(g, region, ok_edge, odd_vertices(g, segment_edges));
            if (!r.ok) {
                ++st.skipped_units;
                continue;
            }
            st.base_covered += static_cast<long>(segment_edges.size());
            for (auto& c : cycle_decomposition(g, set_union(segment_edges, r.h)))
                out.fam.families[fi].push_back(std::move(c));
        }
    }
    auto audit = audit_cover(out.fam, g, l);
    st.coverage_ok = true;
    for (long c : audit.family_covered)
        if (Rational(c) < st.target * Rational(st.line_edges)) st.coverage_ok = false;
    return out;
}

ThresholdResult cover_lines_threshold(const BipartiteGraph& g, const FractionalAssignment& t, const EdgeSet& l, int k,
                                      const ThresholdInput& in, std::vector<Rational> theta_grid) {
    if (theta_grid.empty())
        for (int d = 4; d <= 64; d *= 2) theta_grid.push_back(Rational(1, d));
    ThresholdResult best;
    best.line_edges = static_cast<long>(l.size());
    best.target_met = l.empty();
    best.fam.families.assign(k, {});
    if (l.empty()) {
        best.theta = theta_grid.front();
        return best;
    }
    int m = g.num_edges();
    auto on_line = mask_of(l, m);
    bool have_best = false;
    for (const auto& theta : theta_grid) {
        ThresholdResult cur;
        cur.theta = theta;
        cur.line_edges = best.line_edges;
        cur.fam.families.assign(k, {});
        std::vector<char> allowed(m, 0), h(m, 0);
        for (int e = 0; e < m; ++e) {
            allowed[e] = !on_line[e] && theta < t[e] && t[e] < 1 - theta;
            h[e] = allowed[e] || on_line[e];
        }
        int comps = 0;
        auto comp = component_labels(g, &h, &comps);
        std::vector<int> lines_in(comps, 0);
        for (const auto& lc : line_decomposition(l, g)) ++lines_in[comp[lc.vertices[0]]];
        std::vector<std::vector<int>> members(comps);
        for (int v = 0; v < g.num_vertices(); ++v) members[comp[v]].push_back(v);
        std::vector<EndKind> kind(comps, EndKind::finite);
        for (int c = 0; c < comps; ++c) {
            if (lines_in[c] == 0) continue;
            ComponentClass cc;
            cc.component = c;
            cc.lines = lines_in[c];
            auto bg = ball_growth(g, &h, members[c].front());
            cc.touches_boundary = bg.touches_boundary;
            cc.growth = bg.ratio;
            if (cc.lines >= 2) {
                if (in.strip && cc.growth <= 2.25)
                    cc.kind = EndKind::two_ended;
                else if (in.toast)
                    cc.kind = EndKind::one_ended;
                else if (in.strip)
                    cc.kind = EndKind::two_ended;
            }
            kind[c] = cc.kind;
            cur.components.push_back(cc);
        }
        for (EndKind want : {EndKind::one_ended, EndKind::two_ended}) {
            EdgeSet part;
            std::vector<char> part_allowed(m, 0);
            for (int e : l)
                if (kind[comp[g.edge(e).u]] == want) part.push_back(e);
            if (part.empty()) continue;
            for (int e = 0; e < m; ++e)
                part_allowed[e] = allowed[e] && kind[comp[g.edge(e).u]] == want;
            CoverResult r = want == EndKind::one_ended
                                ? cover_lines_one_ended(g, part, *in.toast, k, Rational(1, 2), &part_allowed)
                                : cover_lines_two_ended(g, *in.strip, part, k, Rational(1, 4), in.cyclic_period,
                                                        &part_allowed);
            for (int i = 0; i < k; ++i)
                for (auto& c : r.fam.families[i]) cur.fam.families[i].push_back(std::move(c));
            cur.parts.push_back(r.stats);
        }
        auto audit = audit_cover(cur.fam, g, l);
        cur.joint_covered = audit.joint_covered;
        cur.target_met = 2 * cur.joint_covered > cur.line_edges;
        if (!have_best || cur.joint_covered > best.joint_covered) best = cur, have_best = true;
        if (cur.target_met) return cur;
    }
    return best;
}

std::vector<int> helly_prune(const std::vector<std::pair<int, int>>& intervals) {
    std::vector<int> idx(intervals.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        return intervals[a].first != intervals[b].first ? intervals[a].first < intervals[b].first : a < b;
    });
    std::vector<int> kept;
    std::size_t i = 0;
    long covered_to = 0;
    bool any = false;
    while (i < idx.size()) {
        // first point not yet covered
        while (i < idx.size() && any && intervals[idx[i]].second <= covered_to) ++i;
        if (i == idx.size()) break;
        long p = any ? std::max<long>(covered_to + 1, intervals[idx[i]].first) : intervals[idx[i]].first;
        int pick = -1;
        while (i < idx.size() && intervals[idx[i]].first <= p) {
            int c = idx[i];
            if (intervals[c].second >= p && (pick < 0 || intervals[c].second > intervals[pick].second)) pick = c;
            ++i;
        }
        if (pick < 0) continue;
        kept.push_back(pick);
        covered_to = intervals[pick].second;
        any = true;
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

}  // namespace hm
