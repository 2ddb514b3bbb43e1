#include "hypermatch/augmenting.hpp"

#include "hypermatch/cycle_cover.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <stdexcept>

namespace hm {

long OneLinedView::line_edges() const {
    long s = 0;
    for (const auto& lc : lines) s += lc.length();
    return s;
}

OneLinedView make_one_lined_view(const BipartiteGraph& g, const FractionalAssignment& chi) {
    OneLinedView v;
    int n = g.num_vertices(), m = g.num_edges();
    EdgeSet l;
    for (int e = 0; e < m; ++e)
        if (chi[e] == Rational(1, 2)) l.push_back(e);
    v.lines = line_decomposition(l, g);
    v.vertex_line.assign(n, -1);
    v.vertex_pos.assign(n, -1);
    v.edge_line.assign(m, -1);
    v.edge_pos.assign(m, -1);
    v.on_line.assign(m, 0);
    for (int i = 0; i < static_cast<int>(v.lines.size()); ++i) {
        const auto& lc = v.lines[i];
        for (int p = 0; p < static_cast<int>(lc.vertices.size()); ++p) v.vertex_line[lc.vertices[p]] = i, v.vertex_pos[lc.vertices[p]] = p;
        for (int p = 0; p < lc.length(); ++p) {
            int e = lc.edges[p];
            v.edge_line[e] = i, v.edge_pos[e] = p, v.on_line[e] = 1;
        }
    }
    int comps = 0;
    auto label = component_labels(g, nullptr, &comps);
    std::vector<int> seen(comps, 0);
    for (const auto& lc : v.lines)
        if (++seen[label[lc.vertices[0]]] > 1) v.one_lined = false;
    return v;
}

namespace {

bool is_cycle_line(const OneLinedView& v, int line) { return v.lines[line].cycle; }

int line_size(const OneLinedView& v, int line) { return v.lines[line].length(); }

int wrap(const OneLinedView& v, int line, int p) {
    int n = line_size(v, line);
    return is_cycle_line(v, line) ? ((p % n) + n) % n : p;
}

int vertex_at(const OneLinedView& v, int line, int p) { return v.lines[line].vertices[wrap(v, line, p)]; }

int edge_at(const OneLinedView& v, int line, int p) { return v.lines[line].edges[wrap(v, line, p)]; }

// Offset of a line vertex inside a window, or -1.
int rel_of(const OneLinedView& v, const LineInterval& w, int vertex) {
    if (v.vertex_line[vertex] != w.line) return -1;
    int r = v.vertex_pos[vertex] - w.start;
    if (is_cycle_line(v, w.line)) r = wrap(v, w.line, r);
    return r >= 0 && r <= w.length ? r : -1;
}

AugmentingCycle assemble(const BipartiteGraph& g, const OneLinedView& view, int line, int start, int length,
                         std::vector<int> head_to_tail, std::vector<int> edges) {
    AugmentingCycle a;
    a.interval = {line, wrap(view, line, start), length};
    a.path_vertices = std::move(head_to_tail);
    a.path_edges = std::move(edges);
    for (int t = 0; t < length; ++t) a.interval_edges.push_back(edge_at(view, line, start + t));
    a.cls = view.lines[line].color[a.interval.start];
    std::vector<int> loop = a.path_vertices;
    for (int t = 1; t < length; ++t) loop.push_back(vertex_at(view, line, start + t));
    a.cycle = make_cycle(g, loop);
    return a;
}

struct Candidate {
    int x_rel = -1;
    int y_rel = -1;
    std::vector<int> vertices;  // x ... y
    std::vector<int> edges;
};

// BFS over (vertex, required chi value of the next edge) from line vertex x;
// endpoints are line vertices in the window with offset in [y_min, w.length].
std::vector<Candidate> alternating_bfs(const BipartiteGraph& g, const FractionalAssignment& chi, const OneLinedView& view,
                                       const LineInterval& w, int x, int y_min, const AugmentingSearch& s) {
    int n = g.num_vertices();
    auto blocked_v = [&](int u) { return s.blocked_vertices && (*s.blocked_vertices)[u]; };
    auto blocked_e = [&](int e) { return view.on_line[e] || (s.blocked_edges && (*s.blocked_edges)[e]); };
    // state id = 2 * vertex + need
    std::vector<int> parent_state(2 * n, -2), parent_edge(2 * n, -1);
    std::map<int, std::pair<int, int>> best;  // y -> (state it came from, edge)
    std::deque<int> queue;
    int x_rel = rel_of(view, w, x);
    auto reach = [&](int from_state, int v, int need, int e) {
        int u = g.other(e, v);
        if (blocked_v(u)) return;
        if (view.vertex_line[u] >= 0) {
            if (need != 0) return;
            int r = rel_of(view, w, u);
            if (r < y_min || r <= x_rel) return;
            if (!best.count(u)) best[u] = {from_state, e};
            return;
        }
        int st = 2 * u + (1 - need);
        if (parent_state[st] != -2) return;
        parent_state[st] = from_state, parent_edge[st] = e;
        queue.push_back(st);
    };
    for (int e : g.incident(x))
        if (!blocked_e(e) && chi[e] == 0) reach(-1, x, 0, e);
    while (!queue.empty()) {
        int st = queue.front();
        queue.pop_front();
        int v = st / 2, need = st % 2;
        for (int e : g.incident(v)) {
            if (blocked_e(e) || chi[e] != need) continue;
            reach(st, v, need, e);
        }
    }
    std::vector<Candidate> out;
    for (auto& [y, from] : best) {
        Candidate c;
        c.x_rel = x_rel;
        c.y_rel = rel_of(view, w, y);
        std::vector<int> vs{y}, es{from.second};
        for (int st = from.first; st != -1; st = parent_state[st]) vs.push_back(st / 2), es.push_back(parent_edge[st]);
        vs.push_back(x);
        std::reverse(vs.begin(), vs.end());
        std::reverse(es.begin(), es.end());
        c.vertices = std::move(vs);
        c.edges = std::move(es);
        out.push_back(std::move(c));
    }
    return out;
}

// Searches one window; x candidates are tried at offsets xs in order.
std::optional<AugmentingCycle> search_window(const BipartiteGraph& g, const FractionalAssignment& chi,
                                             const OneLinedView& view, const LineInterval& w, const std::vector<int>& xs,
                                             int y_min, const AugmentingSearch& s) {
    for (int xr : xs) {
        int start = w.start + xr;
        if (s.cls >= 0 && view.lines[w.line].color[wrap(view, w.line, start)] != s.cls) continue;
        int x = vertex_at(view, w.line, start);
        if (s.blocked_vertices && (*s.blocked_vertices)[x]) continue;
        auto cands = alternating_bfs(g, chi, view, w, x, y_min, s);
        if (cands.empty()) continue;
        auto pick = std::min_element(cands.begin(), cands.end(), [&](const Candidate& a, const Candidate& b) {
            return s.prefer_long ? a.y_rel > b.y_rel : a.y_rel < b.y_rel;
        });
        std::vector<int> vs(pick->vertices.rbegin(), pick->vertices.rend());
        std::vector<int> es(pick->edges.rbegin(), pick->edges.rend());
        return assemble(g, view, w.line, start, pick->y_rel - xr, std::move(vs), std::move(es));
    }
    return std::nullopt;
}

}  // namespace

std::vector<std::pair<int, int>> AugmentingCycle::circuit_signs() const {
    std::vector<std::pair<int, int>> out;
    int m = static_cast<int>(path_edges.size());
    for (int i = 0; i < m; ++i) out.push_back({path_edges[i], i % 2 ? -1 : 1});
    for (int t = 0; t < static_cast<int>(interval_edges.size()); ++t) out.push_back({interval_edges[t], (m + t) % 2 ? -1 : 1});
    return out;
}

std::string validate_augmenting_cycle(const BipartiteGraph& g, const FractionalAssignment& chi, const OneLinedView& view,
                                      const AugmentingCycle& a) {
    int m = static_cast<int>(a.path_edges.size());
    if (m % 2 == 0) return "path length is even";
    if (static_cast<int>(a.path_vertices.size()) != m + 1) return "path vertex count mismatch";
    const auto& iv = a.interval;
    if (iv.line < 0 || iv.line >= static_cast<int>(view.lines.size())) return "unknown line";
    int n = line_size(view, iv.line);
    if (iv.length < 1 || (is_cycle_line(view, iv.line) ? iv.length > n - 1 : iv.start + iv.length > n))
        return "closing interval out of range";
    if (a.path_vertices.front() != vertex_at(view, iv.line, iv.start + iv.length)) return "head is not the interval end";
    if (a.path_vertices.back() != vertex_at(view, iv.line, iv.start)) return "tail is not the interval start";
    std::vector<int> seen;
    for (int i = 0; i < m; ++i) {
        int e = a.path_edges[i], u = a.path_vertices[i], w = a.path_vertices[i + 1];
        const auto& ed = g.edge(e);
        if (!((ed.u == u && ed.w == w) || (ed.u == w && ed.w == u))) return "path edge does not join its vertices";
        if (view.on_line[e]) return "path uses a line edge";
        if (chi[e] != (i % 2 ? 1 : 0)) return "path does not alternate chi = 0, 1";
    }
    for (int i = 1; i < m; ++i)
        if (view.vertex_line[a.path_vertices[i]] >= 0) return "path interior touches the line";
    seen = a.path_vertices;
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return "path vertices repeat";
    for (int t = 0; t < iv.length; ++t)
        if (a.interval_edges[t] != edge_at(view, iv.line, iv.start + t)) return "interval edges mismatch";
    if (a.cls != view.lines[iv.line].color[iv.start]) return "class mismatch";
    return {};
}

std::optional<AugmentingCycle> find_augmenting_cycle(const BipartiteGraph& g, const FractionalAssignment& chi,
                                                     const OneLinedView& view, const LineInterval& j,
                                                     const AugmentingSearch& s) {
    if (j.line < 0 || j.line >= static_cast<int>(view.lines.size()) || j.length < 1)
        throw std::invalid_argument("interval is not on a line");
    int n = line_size(view, j.line);
    bool cyc = is_cycle_line(view, j.line);
    if (s.window) {
        const auto& w = *s.window;
        if (w.line != j.line) throw std::invalid_argument("window is on another line");
        int lo = j.start - w.start;
        if (cyc) lo = wrap(view, j.line, lo);
        if (lo < 0 || lo + j.length > w.length) return std::nullopt;
        std::vector<int> xs;
        if (s.prefer_long)
            for (int r = 0; r <= lo; ++r) xs.push_back(r);
        else
            for (int r = lo; r >= 0; --r) xs.push_back(r);
        return search_window(g, chi, view, w, xs, lo + j.length, s);
    }
    if (!cyc) {
        LineInterval w{j.line, 0, n};
        AugmentingSearch t = s;
        t.window = w;
        return find_augmenting_cycle(g, chi, view, j, t);
    }
    if (j.length > n - 1) return std::nullopt;
    // every tail offset d before J, each with the widest window it allows
    std::optional<AugmentingCycle> best;
    for (int d = 0; d + j.length <= n - 1; ++d) {
        LineInterval w{j.line, wrap(view, j.line, j.start - d), n - 1};
        auto r = search_window(g, chi, view, w, {0}, d + j.length, s);
        if (!r) continue;
        bool better = !best || (s.prefer_long ? r->interval.length > best->interval.length
                                              : r->interval.length < best->interval.length);
        if (better) best = std::move(r);
    }
    return best;
}

EdgeSet substantial_intersection(const AugmentingCycle& a, const AugmentingCycle& b, bool* equivalent) {
    bool eq = a.interval.line == b.interval.line && a.cls == b.cls;
    if (equivalent) *equivalent = eq;
    if (!eq) return {};
    std::map<int, std::pair<int, int>> dir;
    for (std::size_t i = 0; i < a.path_edges.size(); ++i) dir[a.path_edges[i]] = {a.path_vertices[i], a.path_vertices[i + 1]};
    EdgeSet out;
    for (std::size_t i = 0; i < b.path_edges.size(); ++i) {
        auto it = dir.find(b.path_edges[i]);
        if (it != dir.end() && it->second == std::make_pair(b.path_vertices[i], b.path_vertices[i + 1]))
            out.push_back(b.path_edges[i]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

AugmentingCycle merge_cycles(const BipartiteGraph& g, const FractionalAssignment& chi, const OneLinedView& view,
                             const AugmentingCycle& a, const AugmentingCycle& b, int e) {
    auto shared = substantial_intersection(a, b);
    if (!std::binary_search(shared.begin(), shared.end(), e))
        throw std::invalid_argument("edge is not in the substantial intersection");
    auto split = [&](const AugmentingCycle& c) {
        int i = static_cast<int>(std::find(c.path_edges.begin(), c.path_edges.end(), e) - c.path_edges.begin());
        return i;
    };
    int ia = split(a), ib = split(b);
    int line = a.interval.line;
    bool cyc = is_cycle_line(view, line);
    auto build = [&](const AugmentingCycle& p, int ip, const AugmentingCycle& q, int iq) -> std::optional<AugmentingCycle> {
        std::vector<int> vs(p.path_vertices.begin(), p.path_vertices.begin() + ip + 1);
        std::vector<int> es(p.path_edges.begin(), p.path_edges.begin() + ip + 1);
        vs.insert(vs.end(), q.path_vertices.begin() + iq + 1, q.path_vertices.end());
        es.insert(es.end(), q.path_edges.begin() + iq + 1, q.path_edges.end());
        int head = view.vertex_pos[vs.front()], tail = view.vertex_pos[vs.back()];
        int len = cyc ? wrap(view, line, head - tail) : head - tail;
        if (len <= 0) return std::nullopt;
        auto c = assemble(g, view, line, tail, len, vs, es);
        if (!validate_augmenting_cycle(g, chi, view, c).empty()) return std::nullopt;
        return c;
    };
    std::vector<std::optional<AugmentingCycle>> variants{build(a, ia, b, ib), build(b, ib, a, ia), build(a, ia, a, ia),
                                                         build(b, ib, b, ib)};
    const AugmentingCycle* best = nullptr;
    for (const auto& v : variants)
        if (v && (!best || v->interval.length > best->interval.length)) best = &*v;
    if (!best) throw std::logic_error("no merge variant is a valid augmenting cycle");
    return *best;
}

OneLinedAudit audit_one_lined(const BipartiteGraph& g, const FractionalAssignment& chi, const OneLinedView& view,
                              const AugmentingFamily& fam) {
    OneLinedAudit a;
    int m = g.num_edges();
    a.line_edges = view.line_edges();
    std::vector<int> off(m, 0);
    std::vector<char> joint(m, 1);
    for (const auto& family : fam.families) {
        std::vector<int> on(m, 0);
        std::vector<char> cls0(m, 0), cls1(m, 0);
        for (const auto& c : family) {
            if (!validate_augmenting_cycle(g, chi, view, c).empty()) a.valid_cycles = false;
            for (int e : c.path_edges) ++off[e];
            for (int e : c.interval_edges) ++on[e], (c.cls ? cls1 : cls0)[e] = 1;
        }
        int mx = 0;
        long both = 0;
        for (int e = 0; e < m; ++e) {
            mx = std::max(mx, on[e]);
            bool b = view.on_line[e] && cls0[e] && cls1[e];
            both += b;
            if (!b) joint[e] = 0;
        }
        a.max_on_line.push_back(mx);
        a.both_class.push_back(both);
        if (mx > 2) a.on_line_ok = false;
    }
    for (int e = 0; e < m; ++e) {
        a.max_off_line = std::max(a.max_off_line, off[e]);
        if (view.on_line[e] && joint[e] && fam.k() > 0) ++a.joint_both_class;
    }
    a.off_line_ok = a.max_off_line <= 4;
    for (int i = 0; i < static_cast<int>(view.lines.size()); ++i) {
        const auto& lc = view.lines[i];
        int n = lc.length();
        auto bad = [&](int p) { return fam.k() == 0 || !joint[lc.edges[p]]; };
        // on cycles start the scan just after a covered edge so runs do not split at 0
        int p = 0;
        if (lc.cycle)
            for (int q = 0; q < n; ++q)
                if (!bad(q)) {
                    p = q + 1;
                    break;
                }
        for (int t = 0; t < n;) {
            if (!bad((p + t) % n)) {
                ++t;
                continue;
            }
            int s = t;
            while (t < n && bad((p + t) % n)) ++t;
            a.uncovered.push_back({i, (p + s) % n, t - s});
        }
    }
    return a;
}

OneLinedCover cover_one_lined(const BipartiteGraph& g, const FractionalAssignment& chi, int k, const Rational& eps) {
    if (k < 1) throw std::invalid_argument("k must be positive");
    if (eps <= 0 || eps >= 1) throw std::invalid_argument("eps must lie in (0, 1)");
    auto view = make_one_lined_view(g, chi);
    if (!view.one_lined) throw std::invalid_argument("a component carries more than one line");
    OneLinedCover out;
    int m = g.num_edges();
    int chop = static_cast<int>(floor_of(8 * k / eps).get_si());
    chop += chop % 2;
    std::vector<char> used[2] = {std::vector<char>(m, 0), std::vector<char>(m, 0)};
    long total = view.line_edges();
    for (int i = 0; i < k; ++i) {
        std::vector<AugmentingCycle> family;
        OneLinedTraceRow row;
        row.family = i;
        row.chop_length = chop;
        for (int li = 0; li < static_cast<int>(view.lines.size()); ++li) {
            int n = line_size(view, li);
            bool cyc = is_cycle_line(view, li);
            std::vector<LineInterval> windows;
            if (cyc && n <= chop) {
                windows.push_back({li, wrap(view, li, i * chop / k), n - 1});
            } else {
                int off = (i * chop / k) % std::max(1, n);
                if (cyc) {
                    for (int s = 0; s < n; s += chop) windows.push_back({li, wrap(view, li, off + s), std::min(chop, n - s)});
                } else {
                    if (off > 0) windows.push_back({li, 0, std::min(off, n)});
                    for (int s = off; s < n; s += chop) windows.push_back({li, s, std::min(chop, n - s)});
                }
            }
            for (const auto& w : windows)
                for (int cls = 0; cls < 2; ++cls) {
                    std::vector<AugmentingCycle> found;
                    int lo = 0;
                    for (int p = 0; p < w.length;) {
                        AugmentingSearch s;
                        s.cls = cls;
                        s.blocked_edges = &used[cls];
                        s.window = LineInterval{li, w.start, w.length};
                        s.prefer_long = true;
                        // tails at offsets lo..p only
                        s.window->start = wrap(view, li, w.start + lo);
                        s.window->length = w.length - lo;
                        auto c = find_augmenting_cycle(g, chi, view, {li, wrap(view, li, w.start + p), 1}, s);
                        if (!c) {
                            ++p;
                            continue;
                        }
                        for (int e : c->path_edges) used[cls][e] = 1;
                        lo = p = wrap(view, li, c->interval.start + c->interval.length - w.start);
                        found.push_back(std::move(*c));
                    }
                    // Helly pruning of the window's closing intervals; the sweep
                    // already yields disjoint intervals, so nothing is dropped then
                    std::vector<std::pair<int, int>> iv;
                    for (const auto& c : found) {
                        int s0 = wrap(view, li, c.interval.start - w.start);
                        iv.push_back({s0, s0 + c.interval.length});
                    }
                    auto keep = helly_prune(iv);
                    row.helly_dropped += static_cast<int>(found.size() - keep.size());
                    for (int idx : keep) family.push_back(found[idx]);
                }
        }
        out.fam.families.push_back(std::move(family));
        auto a = audit_one_lined(g, chi, view, out.fam);
        const auto& fam_i = out.fam.families.back();
        row.cycles = static_cast<int>(fam_i.size());
        std::vector<char> c0(m, 0), c1(m, 0);
        for (const auto& c : fam_i)
            for (int e : c.interval_edges) (c.cls ? c1 : c0)[e] = 1;
        for (int e = 0; e < m; ++e) row.class_covered[0] += c0[e], row.class_covered[1] += c1[e];
        row.both_covered = a.both_class.back();
        row.joint_so_far = a.joint_both_class;
        row.cond_i = a.off_line_ok;
        row.cond_ii = a.max_on_line.back() <= 2;
        row.cond_iii = Rational(a.joint_both_class) >= (1 - eps) * total;
        out.trace.push_back(row);
    }
    out.audit = audit_one_lined(g, chi, view, out.fam);
    out.target_met = total > 0 && Rational(out.audit.joint_both_class) >= (1 - eps) * total;
    out.branch = out.audit.joint_both_class > 0 ? "augmenting" : "no-chords";
    return out;
}

OneLinedStep one_lined_step(const BipartiteGraph& g, const DemandProfile& f, const CapacityProfile& c,
                            const FractionalAssignment& chi, const AugmentingFamily& fam, std::uint64_t seed,
                            const std::vector<std::vector<int>>& marks) {
    OneLinedStep st;
    Rng rng(seed);
    std::vector<const AugmentingCycle*> all;
    for (const auto& family : fam.families)
        for (const auto& cyc : family) all.push_back(&cyc);
    // greedy colouring of the edge-conflict graph of cycles
    int m = g.num_edges();
    std::vector<std::vector<int>> edge_colours(m);
    std::vector<int> colour(all.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
        std::vector<char> taken(all.size() + 1, 0);
        for (const auto& [e, s] : all[i]->circuit_signs())
            for (int col : edge_colours[e]) taken[col] = 1;
        int col = 0;
        while (taken[col]) ++col;
        colour[i] = col;
        for (const auto& [e, s] : all[i]->circuit_signs()) edge_colours[e].push_back(col);
        st.subfamilies = std::max(st.subfamilies, col + 1);
    }
    st.x = chi;
    std::vector<double> bary(m, 0);
    if (st.subfamilies > 0) {
        st.chosen = static_cast<int>(rng.below(static_cast<std::uint64_t>(st.subfamilies)));
        st.z = static_cast<int>(rng.below(2));
        for (std::size_t i = 0; i < all.size(); ++i)
            for (const auto& [e, s] : all[i]->circuit_signs()) {
                if (colour[i] == st.chosen && st.z) st.x[e] += Rational(s, 2);
                bary[e] += s / (4.0 * st.subfamilies);
            }
        for (int e = 0; e < m; ++e)
            if (st.x[e] < 0 || st.x[e] > 1) throw RangeError(e, st.x[e]);
    }
    double sq = 0;
    for (double b : bary) sq += b * b;
    st.barycenter_distance = std::sqrt(sq);
    DescentOptions o;
    o.rule = SignRule::random;
    o.rng = &rng;
    for (const auto& mk : marks)
        if (std::all_of(mk.begin(), mk.end(), [&](int e) { return st.x[e] == Rational(1, 2); })) o.marked_cycles.push_back(mk);
    st.next = descend_to_extreme(st.x, g, f, c, o);
    return st;
}

}  // namespace hm
