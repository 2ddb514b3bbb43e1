#include "hypermatch/equidecomp.hpp"

#include "hypermatch/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace hm {

namespace {

int mod(long a, int n) { return static_cast<int>(((a % n) + n) % n); }

int lattice_spacing(int d, int n, const Rational& alpha) {
    if (d < 1) throw std::invalid_argument("dimension must be positive");
    if (alpha <= 0 || alpha > 1) throw std::invalid_argument("density must lie in (0, 1]");
    Rational inv = 1 / alpha;
    if (!is_integer(inv)) throw std::invalid_argument("density must be 1/s^d");
    long sd = inv.get_num().get_si();
    long s = std::lround(std::pow(static_cast<double>(sd), 1.0 / d));
    long check = 1;
    for (int i = 0; i < d; ++i) check *= s;
    if (check != sd) throw std::invalid_argument("density must be 1/s^d");
    if (n % s != 0) throw std::invalid_argument("lattice spacing must divide the torus side");
    return static_cast<int>(s);
}

// Index of a lattice point (all coordinates multiples of s), row-major.
int lattice_index(const Point& p, int n, int s) {
    int m = n / s, idx = 0;
    for (int x : p) idx = idx * m + mod(x, n) / s;
    return idx;
}

// Lattice vectors of s Z^d with |v| <= radius.
PointSet lattice_ball(int d, int s, int radius) {
    PointSet out;
    int reach = radius / s;
    Point v(d, -reach);
    for (;;) {
        Point w(d);
        for (int i = 0; i < d; ++i) w[i] = v[i] * s;
        if (squared_norm(w) <= static_cast<long>(radius) * radius) out.push_back(w);
        int i = d - 1;
        while (i >= 0 && v[i] == reach) v[i--] = -reach;
        if (i < 0) break;
        ++v[i];
    }
    return out;
}

// Bipartite graph of points against lattice points within the radius.
BipartiteGraph lattice_graph(const PointSet& a, const PointSet& lattice, int n, int s, int radius) {
    BipartiteGraph g;
    for (std::size_t i = 0; i < a.size(); ++i) g.add_vertex(Side::left);
    for (std::size_t j = 0; j < lattice.size(); ++j) g.add_vertex(Side::right);
    int na = static_cast<int>(a.size());
    auto ball = lattice_ball(a.empty() ? 1 : static_cast<int>(a[0].size()), s, radius + s);
    long r2 = static_cast<long>(radius) * radius;
    for (int i = 0; i < na; ++i) {
        // nearest lattice point below, then every lattice offset that can reach
        Point base = a[i];
        for (int& x : base) x = mod(x, n) / s * s;
        std::vector<int> hits;
        for (const auto& v : ball) {
            Point q = base;
            for (std::size_t t = 0; t < q.size(); ++t) q[t] = mod(q[t] + v[t], n);
            if (squared_norm(torus_delta(a[i], q, n)) <= r2) hits.push_back(lattice_index(q, n, s));
        }
        std::sort(hits.begin(), hits.end());
        hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
        for (int j : hits) g.add_edge(i, na + j);
    }
    return g;
}

MetricSpec torus_metric(int n) {
    MetricSpec m;
    m.norm = Norm::euclid;
    m.scale = 1;
    m.modulus = n;
    return m;
}

bool is_connected(const BipartiteGraph& g, const std::vector<char>* mask) {
    int comps = 0;
    component_labels(g, mask, &comps);
    return comps <= 1;
}

}  // namespace

Point torus_delta(const Point& p, const Point& q, int n) {
    Point v(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        int x = mod(static_cast<long>(q[i]) - p[i], n);
        v[i] = 2 * x > n ? x - n : x;
    }
    return v;
}

long squared_norm(const Point& v) {
    long s = 0;
    for (int x : v) s += static_cast<long>(x) * x;
    return s;
}

PointSet density_lattice(int d, int n, const Rational& alpha) {
    int s = lattice_spacing(d, n, alpha);
    int m = n / s;
    PointSet out;
    Point v(d, 0);
    for (;;) {
        Point p(d);
        for (int i = 0; i < d; ++i) p[i] = v[i] * s;
        out.push_back(p);
        int i = d - 1;
        while (i >= 0 && v[i] == m - 1) v[i--] = 0;
        if (i < 0) break;
        ++v[i];
    }
    return out;
}

SpreadWitness uniform_spread_witness(const PointSet& a, int n, const Rational& alpha, int budget) {
    if (a.empty()) throw std::invalid_argument("empty point set");
    int d = static_cast<int>(a[0].size());
    SpreadWitness w;
    w.spacing = lattice_spacing(d, n, alpha);
    w.lattice = density_lattice(d, n, alpha);
    if (w.lattice.size() != a.size()) throw std::invalid_argument("point count differs from the lattice window");
    int na = static_cast<int>(a.size());
    for (int r = 0; r <= budget; ++r) {
        auto g = lattice_graph(a, w.lattice, n, w.spacing, r);
        auto res = perfect_f_matching(g, unit_demand(g), unit_capacity(g));
        w.sweep.push_back({r, res.ok()});
        if (!res.ok()) {
            if (r == budget) w.certificate = res.certificate;
            continue;
        }
        w.ok = true;
        w.radius = r;
        w.h.assign(na, -1);
        for (int e = 0; e < g.num_edges(); ++e)
            if ((*res.assignment)[e] == 1) w.h[g.edge(e).u] = g.edge(e).w - na;
        for (int i = 0; i < na; ++i) w.max_sq = std::max(w.max_sq, squared_norm(torus_delta(a[i], w.lattice[w.h[i]], n)));
        break;
    }
    return w;
}

const char* end_kind_name(EndKind e) {
    switch (e) {
        case EndKind::finite: return "finite";
        case EndKind::two_ended: return "two-ended";
        case EndKind::one_ended: return "one-ended";
    }
    return "?";
}

std::vector<EndKind> classify_components(const BipartiteGraph& g, const std::vector<char>* mask, std::vector<int>* label) {
    int comps = 0;
    auto lab = component_labels(g, mask, &comps);
    std::vector<int> root(comps, -1);
    for (int v = 0; v < g.num_vertices(); ++v)
        if (root[lab[v]] < 0) root[lab[v]] = v;
    std::vector<EndKind> out(comps, EndKind::finite);
    for (int c = 0; c < comps; ++c) {
        auto bg = ball_growth(g, mask, root[c]);
        if (bg.size < 32 || bg.eccentricity < 4) continue;
        out[c] = bg.ratio <= 2.25 ? EndKind::two_ended : EndKind::one_ended;
    }
    if (label) *label = std::move(lab);
    return out;
}

ConstantMatching constant_fractional_matching(const PointSet& a, const PointSet& b, int n, const SpreadWitness& wa,
                                              const SpreadWitness& wb, int k) {
    ConstantMatching cm;
    if (!wa.ok || !wb.ok) throw std::invalid_argument("both spread witnesses must be feasible");
    if (wa.spacing != wb.spacing || a.size() != b.size()) throw std::invalid_argument("witnesses use different lattices");
    int d = static_cast<int>(a[0].size());
    int ra = wa.radius, rb = wb.radius;
    auto metric = torus_metric(n);
    cm.chain.spread = std::max(ra, rb);
    if (k < 0) {
        for (k = cm.chain.spread + 1; 2 * k < n; ++k)
            if (is_connected(distance_bipartite_graph(a, b, metric, Rational(k)).g, nullptr)) break;
        if (2 * k >= n) {
            cm.reason = "no radius below n/2 makes G^k(A, B) connected";
            return cm;
        }
    }
    cm.chain.k = k;
    cm.chain.n2 = k + ra + rb;
    cm.chain.l = cm.chain.n2 + ra + rb;
    if (2 * cm.chain.l >= n) {
        cm.reason = "window too small for the radii chain";
        return cm;
    }
    int s = wa.spacing;
    auto lball = lattice_ball(d, s, cm.chain.n2);
    cm.r = static_cast<int>(lball.size());
    cm.value = Rational(1, cm.r);
    cm.gl = distance_bipartite_graph(a, b, metric, Rational(cm.chain.l));
    const auto& g = cm.gl.g;
    int na = static_cast<int>(a.size());
    std::vector<int> hb_inv(wb.lattice.size(), -1);
    for (int j = 0; j < na; ++j) hb_inv[wb.h[j]] = j;
    cm.phi.assign(g.num_edges(), Rational(0));
    for (int i = 0; i < na; ++i) {
        const auto& lam = wa.lattice[wa.h[i]];
        for (const auto& v : lball) {
            Point q = lam;
            for (int t = 0; t < d; ++t) q[t] = mod(q[t] + v[t], n);
            int j = hb_inv[lattice_index(q, n, s)];
            int e = g.find_edge(i, na + j);
            if (e < 0) throw std::logic_error("lattice pair beyond the l-ball");
            cm.phi[e] = cm.value;
        }
    }
    cm.valid = validate_perfect_fractional_matching(g, unit_demand(g), unit_capacity(g), cm.phi).ok;
    std::vector<char> gk(g.num_edges(), 0);
    long k2 = static_cast<long>(k) * k;
    cm.constant_on_gk = true;
    for (int e = 0; e < g.num_edges(); ++e) {
        if (squared_norm(cm.gl.labels[e]) > k2) continue;
        gk[e] = 1;
        ++cm.gk_edges;
        if (cm.phi[e] != cm.value) cm.constant_on_gk = false;
    }
    cm.gk_ends = classify_components(g, &gk);
    cm.gk_components = static_cast<int>(cm.gk_ends.size());
    cm.ok = cm.valid && cm.constant_on_gk;
    if (!cm.ok) cm.reason = cm.valid ? "phi is not constant on G^k" : "phi is not a perfect fractional matching";
    return cm;
}

std::string validate_pieces(const PointSet& a, const PointSet& b, const PieceDecomposition& dec) {
    int n = dec.n;
    std::map<Point, int> bindex;
    for (std::size_t j = 0; j < b.size(); ++j) {
        Point p = b[j];
        for (int& x : p) x = mod(x, n);
        if (!bindex.emplace(p, static_cast<int>(j)).second) return "B has a repeated point";
    }
    std::vector<int> a_hits(a.size(), 0), b_hits(b.size(), 0);
    for (const auto& pc : dec.pieces)
        for (int i : pc.members) {
            if (i < 0 || i >= static_cast<int>(a.size())) return "piece member outside A";
            ++a_hits[i];
            Point q = a[i];
            for (std::size_t t = 0; t < q.size(); ++t) q[t] = mod(static_cast<long>(q[t]) + pc.translation[t], n);
            auto it = bindex.find(q);
            if (it == bindex.end()) return "translated piece leaves B";
            ++b_hits[it->second];
        }
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a_hits[i] != 1) return "pieces do not partition A at point " + std::to_string(i);
    for (std::size_t j = 0; j < b.size(); ++j)
        if (b_hits[j] != 1) return "translated pieces do not partition B at point " + std::to_string(j);
    return {};
}

namespace {

PieceDecomposition group_pieces(int n, const std::vector<std::pair<int, int>>& matching,
                                const std::vector<std::pair<int, Point>>& words,
                                const std::vector<const TorusSpec*>& specs) {
    PieceDecomposition dec;
    dec.n = n;
    dec.matching = matching;
    std::map<std::pair<int, Point>, std::vector<int>> groups;
    for (std::size_t i = 0; i < matching.size(); ++i) groups[words[i]].push_back(matching[i].first);
    for (auto& [key, members] : groups) {
        Piece p;
        p.generator_set = key.first;
        p.word = key.second;
        p.translation = word_to_translation(p.word, *specs[key.first]);
        std::sort(members.begin(), members.end());
        p.members = std::move(members);
        dec.pieces.push_back(std::move(p));
    }
    return dec;
}

struct Rounded {
    FractionalAssignment sigma;
    bool integral = false;
    long iterations = 0;
};

Rounded round_on(const BipartiteGraph& g, const FractionalAssignment& tau, std::uint64_t seed) {
    RoundingOptions opts;
    opts.seed = seed;
    auto r = round_until_integral(g, unit_demand(g), unit_capacity(g), tau, opts);
    return {std::move(r.sigma), r.integral, static_cast<long>(r.trace.size())};
}

}  // namespace

Equidecomposition equidecompose(const PointSet& a, const PointSet& b, const TorusSpec& spec, const SquaringOptions& o) {
    Equidecomposition out;
    int n = spec.n;
    auto qa = to_orbit_coordinates(a, spec);
    auto qb = to_orbit_coordinates(b, spec);
    out.wa = uniform_spread_witness(qa, n, o.alpha, o.radius_budget);
    out.wb = uniform_spread_witness(qb, n, o.alpha, o.radius_budget);
    if (!out.wa.ok || !out.wb.ok) {
        out.reason = "not uniformly spread within the radius budget";
        return out;
    }
    out.cfm = constant_fractional_matching(qa, qb, n, out.wa, out.wb, o.k);
    if (!out.cfm.ok) {
        out.reason = out.cfm.reason;
        return out;
    }
    // rounding never leaves supp(phi), so it runs on that subgraph of G^l
    const auto& gl = out.cfm.gl.g;
    BipartiteGraph sub;
    for (int v = 0; v < gl.num_vertices(); ++v) sub.add_vertex(gl.side(v));
    std::vector<int> back;
    FractionalAssignment tau;
    for (int e = 0; e < gl.num_edges(); ++e)
        if (out.cfm.phi[e] > 0) {
            sub.add_edge(gl.edge(e).u, gl.edge(e).w);
            back.push_back(e);
            tau.push_back(out.cfm.phi[e]);
        }
    out.support_edges = sub.num_edges();
    auto rounded = round_on(sub, tau, o.seed);
    out.integral = rounded.integral;
    out.rounding_iterations = rounded.iterations;
    if (!out.integral) {
        out.reason = "rounding did not reach an integral matching";
        return out;
    }
    int na = static_cast<int>(a.size());
    std::vector<std::pair<int, int>> matching;
    std::vector<std::pair<int, Point>> words;
    for (int e = 0; e < sub.num_edges(); ++e)
        if (rounded.sigma[e] == 1) {
            int ge = back[e];
            matching.push_back({gl.edge(ge).u, gl.edge(ge).w - na});
            words.push_back({0, out.cfm.gl.labels[ge]});
        }
    out.dec = group_pieces(n, matching, words, {&spec});
    int l = out.cfm.chain.l;
    out.ball_size = static_cast<long>(displacement_ball(spec.d, torus_metric(n), Rational(l)).size());
    out.words_in_ball = std::all_of(out.dec.pieces.begin(), out.dec.pieces.end(),
                                    [&](const Piece& p) { return squared_norm(p.word) <= static_cast<long>(l) * l; });
    out.partition_error = validate_pieces(a, b, out.dec);
    out.ok = out.partition_error.empty() && out.words_in_ball &&
             static_cast<long>(out.dec.pieces.size()) <= out.ball_size;
    if (!out.ok) out.reason = out.partition_error.empty() ? "piece audit failed" : out.partition_error;
    return out;
}

CombineReport combine_equidecompositions(const PointSet& a, const PointSet& b, const Equidecomposition& e1,
                                         const TorusSpec& s1, const Equidecomposition& e2, const TorusSpec& s2,
                                         bool relaxations) {
    CombineReport rep;
    if (!e1.ok || !e2.ok) throw std::invalid_argument("both inputs must be valid equidecompositions");
    if (s1.n != s2.n || a.size() != b.size()) throw std::invalid_argument("inputs live on different windows");
    int n = s1.n, na = static_cast<int>(a.size());
    struct HEdge {
        Rational tau = 0;
        int set = -1;
        Point word;
    };
    std::map<std::pair<int, int>, HEdge> h;
    auto add = [&](int set, int i, int j, const Rational& t, const Point& word) {
        auto& he = h[{i, j}];
        he.tau += t / 2;
        if (he.set < 0) he.set = set, he.word = word;
    };
    const Equidecomposition* es[2] = {&e1, &e2};
    for (int set = 0; set < 2; ++set) {
        const auto& e = *es[set];
        if (relaxations) {
            const auto& g = e.cfm.gl.g;
            for (int x = 0; x < g.num_edges(); ++x)
                if (e.cfm.phi[x] > 0) add(set, g.edge(x).u, g.edge(x).w - na, e.cfm.phi[x], e.cfm.gl.labels[x]);
        } else {
            std::vector<int> partner(na, -1);
            for (const auto& [ai, bj] : e.dec.matching) partner[ai] = bj;
            for (const auto& pc : e.dec.pieces)
                for (int i : pc.members) {
                    Point q = a[i];
                    for (std::size_t t = 0; t < q.size(); ++t) q[t] = mod(static_cast<long>(q[t]) + pc.translation[t], n);
                    int j = partner[i];
                    if (j < 0 || b[j] != q) throw std::invalid_argument("piece list and matching disagree");
                    add(set, i, j, Rational(1), pc.word);
                }
        }
    }
    BipartiteGraph g;
    for (int i = 0; i < na; ++i) g.add_vertex(Side::left);
    for (int j = 0; j < na; ++j) g.add_vertex(Side::right);
    FractionalAssignment tau;
    std::vector<const HEdge*> rec;
    for (const auto& [key, he] : h) {
        g.add_edge(key.first, na + key.second);
        tau.push_back(he.tau);
        rec.push_back(&he);
    }
    rep.h_edges = g.num_edges();
    if (!validate_perfect_fractional_matching(g, unit_demand(g), unit_capacity(g), tau).ok)
        throw std::logic_error("averaged assignment is not a perfect fractional matching");
    std::vector<char> supp(g.num_edges());
    for (int e = 0; e < g.num_edges(); ++e) supp[e] = tau[e] > 0 && tau[e] < 1;
    std::vector<int> label;
    auto kinds = classify_components(g, &supp, &label);
    std::vector<int> size(kinds.size(), 0);
    for (int c : label) ++size[c];
    for (std::size_t c = 0; c < kinds.size(); ++c) {
        EndKind x = kinds[c];
        if (size[c] < 2) continue;  // vertex matched alike by both inputs
        if (x == EndKind::finite) ++rep.finite;
        else if (x == EndKind::two_ended) ++rep.two_ended;
        else ++rep.one_ended;
    }
    auto rounded = round_on(g, tau, 0);
    rep.integral = rounded.integral;
    if (!rep.integral) {
        rep.reason = "rounding stagnated on H";
        return rep;
    }
    std::vector<std::pair<int, int>> matching;
    std::vector<std::pair<int, Point>> words;
    for (int e = 0; e < g.num_edges(); ++e)
        if (rounded.sigma[e] == 1) {
            matching.push_back({g.edge(e).u, g.edge(e).w - na});
            words.push_back({rec[e]->set, rec[e]->word});
        }
    rep.dec = group_pieces(n, matching, words, {&s1, &s2});
    rep.partition_error = validate_pieces(a, b, rep.dec);
    std::set<int> sets;
    for (const auto& p : rep.dec.pieces) sets.insert(p.generator_set);
    for (int set : sets)
        for (const auto& u : (set == 0 ? s1 : s2).translations)
            if (std::find(rep.generators_used.begin(), rep.generators_used.end(), u) == rep.generators_used.end())
                rep.generators_used.push_back(u);
    auto sorted_pairs = [](std::vector<std::pair<int, int>> m) {
        std::sort(m.begin(), m.end());
        return m;
    };
    rep.same_as_first = sorted_pairs(rep.dec.matching) == sorted_pairs(e1.dec.matching);
    rep.ok = rep.partition_error.empty();
    if (!rep.ok) rep.reason = rep.partition_error;
    return rep;
}

void write_pieces_svg(std::ostream& out, const PointSet& a, const PieceDecomposition& dec) {
    int n = dec.n;
    int scale = std::max(1, 768 / std::max(1, n));
    int size = n * scale;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\" viewBox=\"0 0 "
        << size << ' ' << size << "\">\n";
    out << "<defs><marker id=\"arrow\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\" refY=\"3\" orient=\"auto\">"
           "<path d=\"M0,0 L6,3 L0,6 z\" fill=\"#222\"/></marker></defs>\n";
    out << "<rect width=\"" << size << "\" height=\"" << size << "\" fill=\"white\" stroke=\"#888\"/>\n";
    double r = std::max(0.5, scale * 0.45);
    for (std::size_t k = 0; k < dec.pieces.size(); ++k) {
        const auto& pc = dec.pieces[k];
        int hue = static_cast<int>(std::fmod(k * 137.508, 360.0));
        out << "<g fill=\"hsl(" << hue << ",70%,50%)\">\n";
        for (int i : pc.members)
            out << "<circle cx=\"" << (a[i][0] + 0.5) * scale << "\" cy=\"" << (a[i][1] + 0.5) * scale << "\" r=\"" << r
                << "\"/>\n";
        out << "</g>\n";
    }
    for (const auto& pc : dec.pieces) {
        if (pc.members.empty() || pc.translation.size() < 2) continue;
        const auto& p = a[pc.members.front()];
        auto v = torus_delta(Point(pc.translation.size(), 0), pc.translation, n);
        out << "<line x1=\"" << (p[0] + 0.5) * scale << "\" y1=\"" << (p[1] + 0.5) * scale << "\" x2=\""
            << (p[0] + v[0] + 0.5) * scale << "\" y2=\"" << (p[1] + v[1] + 0.5) * scale
            << "\" stroke=\"#222\" stroke-width=\"1\" marker-end=\"url(#arrow)\"/>\n";
    }
    out << "</svg>\n";
}

}  // namespace hm
