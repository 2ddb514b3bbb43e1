#include "hypermatch/polytope.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace hm {

Cycle make_cycle(const BipartiteGraph& g, const std::vector<int>& loop) {
    int n = static_cast<int>(loop.size());
    if (n < 3) throw std::invalid_argument("a cycle needs at least three vertices");
    std::vector<int> edges(n);
    for (int i = 0; i < n; ++i) {
        edges[i] = g.find_edge(loop[i], loop[(i + 1) % n]);
        if (edges[i] < 0) throw std::invalid_argument("closed walk uses a non-edge");
    }
    int best = static_cast<int>(std::min_element(edges.begin(), edges.end()) - edges.begin());
    Cycle c;
    c.vertices.reserve(n);
    c.edges.reserve(n);
    int a = loop[best], b = loop[(best + 1) % n];
    if (a < b) {
        for (int i = 0; i < n; ++i) {
            c.vertices.push_back(loop[(best + i) % n]);
            c.edges.push_back(edges[(best + i) % n]);
        }
    } else {
        // walk backwards starting at b
        for (int i = 0; i < n; ++i) {
            c.vertices.push_back(loop[((best + 1 - i) % n + n) % n]);
            c.edges.push_back(edges[((best - i) % n + n) % n]);
        }
    }
    return c;
}

Cycle cycle_from_edges(const BipartiteGraph& g, const std::vector<int>& edges) {
    if (edges.size() < 3) throw std::invalid_argument("a cycle needs at least three edges");
    std::map<int, std::vector<int>> inc;
    for (int e : edges) {
        inc[g.edge(e).u].push_back(e);
        inc[g.edge(e).w].push_back(e);
    }
    for (const auto& [v, es] : inc)
        if (es.size() != 2) throw std::invalid_argument("edge set is not 2-regular");
    std::vector<int> loop;
    int start = inc.begin()->first, v = start, prev = -1;
    do {
        loop.push_back(v);
        const auto& es = inc[v];
        int e = es[0] == prev ? es[1] : es[0];
        prev = e;
        v = g.other(e, v);
    } while (v != start && loop.size() <= edges.size());
    if (loop.size() != edges.size()) throw std::invalid_argument("edge set is not a single cycle");
    return make_cycle(g, loop);
}

std::vector<Cycle> find_disjoint_cycles(const EdgeSet& support, const BipartiteGraph& g) {
    int n = g.num_vertices();
    auto in_s = mask_of(support, g.num_edges());
    std::vector<char> used(n, 0);
    std::vector<Cycle> out;
    for (;;) {
        std::size_t before = out.size();
        std::vector<char> visited(n, 0);
        std::vector<int> pos(n, -1);
        for (int root = 0; root < n; ++root) {
            if (used[root] || visited[root]) continue;
            // iterative DFS; frames hold (vertex, incoming edge, next incident index)
            struct Frame {
                int v, in, next;
            };
            std::vector<Frame> st{{root, -1, 0}};
            visited[root] = 1;
            pos[root] = 0;
            while (!st.empty()) {
                Frame& fr = st.back();
                const auto& inc = g.incident(fr.v);
                if (fr.next >= static_cast<int>(inc.size())) {
                    pos[fr.v] = -1;
                    st.pop_back();
                    continue;
                }
                int e = inc[fr.next++];
                if (!in_s[e] || e == fr.in) continue;
                int u = g.other(e, fr.v);
                if (used[u]) continue;
                if (pos[u] >= 0) {
                    std::vector<int> loop;
                    for (std::size_t i = pos[u]; i < st.size(); ++i) loop.push_back(st[i].v);
                    for (int x : loop) used[x] = 1, pos[x] = -1;
                    out.push_back(make_cycle(g, loop));
                    st.resize(loop.empty() ? st.size() : st.size() - loop.size());
                    continue;
                }
                if (visited[u]) continue;
                visited[u] = 1;
                pos[u] = static_cast<int>(st.size());
                st.push_back({u, e, 0});
            }
        }
        if (out.size() == before) break;
    }
    return out;
}

FractionalAssignment apply_alternating_circuit(const FractionalAssignment& t, const AlternatingCircuit& ac,
                                               const CapacityProfile* c) {
    FractionalAssignment out = t;
    for (int i = 0; i < ac.cycle.length(); ++i) {
        int e = ac.cycle.edges[i];
        Rational delta = ac.eps * ac.sign;
        if (i % 2) delta = -delta;
        out[e] += delta;
        Rational cap = c ? Rational((*c)[e]) : Rational(1);
        if (out[e] < 0 || out[e] > cap) throw RangeError(e, out[e]);
    }
    return out;
}

ExtremeReport make_report(const BipartiteGraph& g, const FractionalAssignment& chi) {
    ExtremeReport r;
    r.chi = chi;
    std::map<Rational, long> hist;
    for (int e = 0; e < g.num_edges(); ++e) {
        ++hist[chi[e]];
        if (chi[e] == Rational(1, 2)) r.lines.push_back(e);
    }
    r.histogram.assign(hist.begin(), hist.end());
    r.decomposition = line_decomposition(r.lines, g);
    int comps = 0;
    auto label = component_labels(g, nullptr, &comps);
    std::vector<int> count(comps, 0);
    for (const auto& lc : r.decomposition) {
        r.line_component.push_back(label[lc.vertices.front()]);
        ++count[label[lc.vertices.front()]];
    }
    r.one_lined.assign(comps, 0);
    for (int i = 0; i < comps; ++i) r.one_lined[i] = count[i] == 1;
    return r;
}

namespace {

class Descent {
public:
    Descent(const BipartiteGraph& g, const DemandProfile& f, const CapacityProfile& c, const DescentOptions& o,
            FractionalAssignment t)
        : g_(g), f_(f), c_(c), opts_(o), t_(std::move(t)), n_(g.num_vertices()), m_(g.num_edges()),
          alive_(m_, 0), deg_(n_, 0), ptr_(n_, 0), mark_(m_, -1), free_(n_, 0), sum_(n_), pos_(n_, -1) {
        for (int e = 0; e < m_; ++e)
            if (t_[e] > 0 && t_[e] < c_[e]) {
                alive_[e] = 1;
                ++deg_[g.edge(e).u];
                ++deg_[g.edge(e).w];
            }
        for (std::size_t i = 0; i < o.marked_cycles.size(); ++i)
            for (int e : o.marked_cycles[i]) mark_[e] = static_cast<int>(i);
        for (int v = 0; v < n_; ++v)
            if (g.is_boundary(v)) {
                sum_[v] = vertex_sum(g, t_, v);
                free_[v] = sum_[v] < f_[v];
            }
    }

    ExtremeReport run() {
        for (int s = 0; s < n_; ++s)
            while (deg_[s] > 0) walk(s);
        std::vector<int> exempt_edges;
        for (int id : exempt_marks_) {
            const auto& es = opts_.marked_cycles[id];
            exempt_edges.insert(exempt_edges.end(), es.begin(), es.end());
            if (opts_.half_snap && snap(es)) ++snapped_;
        }
        ExtremeReport r = make_report(g_, t_);
        r.exempt = make_edge_set(exempt_edges);
        r.steps = steps_;
        r.snapped = snapped_;
        return r;
    }

private:
    int next_edge(int v, int exclude) {
        const auto& inc = g_.incident(v);
        int& p = ptr_[v];
        while (p < static_cast<int>(inc.size()) && !alive_[inc[p]]) ++p;
        for (int i = p; i < static_cast<int>(inc.size()); ++i)
            if (alive_[inc[i]] && inc[i] != exclude) return inc[i];
        return -1;
    }

    void kill(int e) {
        alive_[e] = 0;
        --deg_[g_.edge(e).u];
        --deg_[g_.edge(e).w];
    }

    bool isolated_mark(const std::vector<int>& edges) {
        int id = mark_[edges[0]];
        if (id < 0 || opts_.marked_cycles[id].size() != edges.size()) return false;
        for (int e : edges)
            if (mark_[e] != id) return false;
        for (int e : edges)
            if (deg_[g_.edge(e).u] != 2 || deg_[g_.edge(e).w] != 2) return false;
        return true;
    }

    // Alternating change along edges (closed or open); endpoints of an open
    // path are free boundary vertices with limited slack.
    void cancel(const std::vector<int>& edges, int first, int last, bool path) {
        int L = static_cast<int>(edges.size());
        Rational up, down;  // largest step with sign +1 / -1
        bool up_set = false, down_set = false;
        auto lower = [](Rational& acc, bool& set, const Rational& x) {
            if (!set || x < acc) acc = x, set = true;
        };
        for (int i = 0; i < L; ++i) {
            int e = edges[i];
            Rational room_up = c_[e] - t_[e], room_down = t_[e];
            if (i % 2 == 0) lower(up, up_set, room_up), lower(down, down_set, room_down);
            else lower(up, up_set, room_down), lower(down, down_set, room_up);
        }
        if (path) {
            lower(up, up_set, f_[first] - sum_[first]);
            if (L % 2) lower(up, up_set, f_[last] - sum_[last]);
            else lower(down, down_set, f_[last] - sum_[last]);
        }
        int sign;
        if (opts_.rule == SignRule::face) {
            int best = 0;
            for (int i = 1; i < L; ++i)
                if (edges[i] < edges[best]) best = i;
            sign = best % 2 == 0 ? 1 : -1;
        } else {
            if (!opts_.rng) throw std::invalid_argument("random sign rule needs an Rng");
            sign = opts_.rng->bernoulli(down / (up + down)) ? 1 : -1;
        }
        Rational step = sign > 0 ? up : down;
        for (int i = 0; i < L; ++i) {
            int e = edges[i];
            if ((i % 2 == 0) == (sign > 0)) t_[e] += step;
            else t_[e] -= step;
            if (t_[e] <= 0 || t_[e] >= c_[e]) kill(e);
        }
        if (path) {
            Rational d0 = sign > 0 ? step : -step;
            Rational d1 = (L % 2) ? d0 : -d0;
            sum_[first] += d0;
            sum_[last] += d1;
            free_[first] = sum_[first] < f_[first];
            free_[last] = sum_[last] < f_[last];
        }
        ++steps_;
    }

    bool snap(const std::vector<int>& edges) {
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const Rational& a = t_[edges[i]];
            if (a + t_[edges[(i + 1) % edges.size()]] != 1) return false;
        }
        if (is_integer(t_[edges[0]])) return false;
        for (int e : edges) t_[e] = Rational(1, 2);
        return true;
    }

    void reset(int v) {
        for (int x : sv_) pos_[x] = -1;
        sv_.assign(1, v);
        se_.clear();
        pos_[v] = 0;
        start_free_ = free_[v];
    }

    void walk(int s) {
        reset(s);
        for (;;) {
            int cur = sv_.back();
            int e = next_edge(cur, se_.empty() ? -1 : se_.back());
            if (e < 0) {
                if (sv_.size() == 1) break;
                throw std::logic_error("descent reached a dead end at a saturated vertex (invalid input?)");
            }
            int u = g_.other(e, cur);
            if (pos_[u] >= 0) {
                std::vector<int> cyc(se_.begin() + pos_[u], se_.end());
                cyc.push_back(e);
                if (isolated_mark(cyc)) {
                    for (int x : cyc) kill(x);
                    exempt_marks_.push_back(mark_[cyc[0]]);
                } else {
                    cancel(cyc, -1, -1, false);
                }
                for (std::size_t i = pos_[u] + 1; i < sv_.size(); ++i) pos_[sv_[i]] = -1;
                sv_.resize(pos_[u] + 1);
                se_.resize(pos_[u]);
                continue;
            }
            sv_.push_back(u);
            se_.push_back(e);
            pos_[u] = static_cast<int>(sv_.size()) - 1;
            if (free_[u]) {
                if (start_free_) {
                    int first = sv_.front();
                    cancel(se_, first, u, true);
                    reset(free_[first] || deg_[first] == 0 ? first : u);
                    if (deg_[sv_[0]] == 0) break;
                } else {
                    reset(u);
                }
            }
        }
        for (int x : sv_) pos_[x] = -1;
    }

    const BipartiteGraph& g_;
    const DemandProfile& f_;
    const CapacityProfile& c_;
    const DescentOptions& opts_;
    FractionalAssignment t_;
    int n_, m_;
    std::vector<char> alive_;
    std::vector<int> deg_, ptr_, mark_;
    std::vector<char> free_;
    std::vector<Rational> sum_;
    std::vector<int> pos_, sv_, se_;
    bool start_free_ = false;
    std::vector<int> exempt_marks_;
    long steps_ = 0, snapped_ = 0;
};

}  // namespace

ExtremeReport descend_to_extreme(const FractionalAssignment& t, const BipartiteGraph& g, const DemandProfile& f,
                                 const CapacityProfile& c, const DescentOptions& opts) {
    auto rep = validate_perfect_fractional_matching(g, f, c, t);
    if (!rep.ok) throw std::invalid_argument("descent needs a valid perfect fractional matching");
    for (const auto& mc : opts.marked_cycles) cycle_from_edges(g, mc);
    Descent d(g, f, c, opts, t);
    return d.run();
}

HalfLines extract_half_lines(const ExtremeReport& report, const BipartiteGraph& g) {
    HalfLines h;
    h.lines = line_decomposition(report.lines, g);
    int comps = 0;
    auto label = component_labels(g, nullptr, &comps);
    std::vector<int> count(comps, 0);
    for (const auto& lc : h.lines) {
        h.line_component.push_back(label[lc.vertices.front()]);
        ++count[label[lc.vertices.front()]];
    }
    h.one_lined.assign(comps, 0);
    for (int i = 0; i < comps; ++i) h.one_lined[i] = count[i] == 1;
    return h;
}

}  // namespace hm
