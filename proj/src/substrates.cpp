#include "hypermatch/substrates.hpp"

#include "hypermatch/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace hm {

namespace {

int mod(long a, long n) {
    long r = a % n;
    return static_cast<int>(r < 0 ? r + n : r);
}

std::vector<int> strides_of(const std::vector<int>& sides) {
    std::vector<int> st(sides.size(), 1);
    for (int i = static_cast<int>(sides.size()) - 2; i >= 0; --i) st[i] = st[i + 1] * sides[i + 1];
    return st;
}

// Adds u-w unless already present; returns true if the edge is new.
bool add_unique(BipartiteGraph& g, int u, int w) {
    if (g.has_edge(u, w)) return false;
    g.add_edge(u, w);
    return true;
}

}  // namespace

RotationGraph rotation_graph(int n, int p) {
    if (n < 3 || p < 1 || p >= n) throw std::invalid_argument("rotation_graph needs n >= 3 and 1 <= p < n");
    RotationGraph r;
    r.n = n;
    r.p = p;
    r.components = std::gcd(n, p);
    r.cycle_length = n / r.components;
    if (r.cycle_length == 2) throw std::invalid_argument("degenerate step: cycles of length 2 would need parallel edges");
    r.bipartite = r.cycle_length % 2 == 0;
    r.position.assign(n, 0);
    for (int root = 0; root < r.components; ++root)
        for (int j = 0; j < r.cycle_length; ++j) r.position[mod(root + static_cast<long>(j) * p, n)] = j;
    r.g = BipartiteGraph(r.bipartite);
    for (int x = 0; x < n; ++x) r.g.add_vertex(r.bipartite && r.position[x] % 2 ? Side::right : Side::left);
    for (int x = 0; x < n; ++x) r.g.add_edge(x, mod(x + p, n));
    return r;
}

GadgetGraph gadget_graph(const RotationGraph& base, int q, int max_gadgets) {
    if (!base.bipartite) throw std::invalid_argument("gadget_graph needs a bipartite base");
    int n = base.n;
    if (mod(q, n) == 0) throw std::invalid_argument("beta step is 0 mod n");
    GadgetGraph out;
    out.g = base.g;
    for (int e = 0; e < base.g.num_edges(); ++e) out.base_edges.push_back(e);
    std::vector<char> used(n, 0);
    for (int x = 0; x < n; ++x) {
        if (max_gadgets >= 0 && static_cast<int>(out.gadgets.size()) >= max_gadgets) break;
        int y = mod(x + q, n);
        if (used[x] || used[y]) continue;
        if (base.g.side(x) != base.g.side(y))
            throw std::invalid_argument("beta step joins opposite colours; the gadget would break bipartiteness");
        used[x] = used[y] = 1;
        Gadget gd;
        gd.x = x;
        gd.y = y;
        Side far = base.g.side(x) == Side::left ? Side::right : Side::left;
        Side near = base.g.side(x);
        gd.cycle = {out.g.add_vertex(far), out.g.add_vertex(near), out.g.add_vertex(far), out.g.add_vertex(near)};
        for (int i = 0; i < 4; ++i) gd.cycle_edges[i] = out.g.add_edge(gd.cycle[i], gd.cycle[(i + 1) % 4]);
        gd.connectors = {out.g.add_edge(x, gd.cycle[0]), out.g.add_edge(gd.cycle[2], y)};
        out.forced_edges.push_back(gd.connectors[0]);
        out.forced_edges.push_back(gd.connectors[1]);
        out.gadgets.push_back(gd);
    }
    out.forced_edges = make_edge_set(out.forced_edges);
    out.tau.assign(out.g.num_edges(), Rational(0));
    for (int e : out.base_edges) out.tau[e] = Rational(1, 2);
    for (const auto& gd : out.gadgets) out.tau[gd.cycle_edges[0]] = out.tau[gd.cycle_edges[2]] = 1;
    return out;
}

WindowGraph grid_torus(const std::vector<int>& sides) {
    if (sides.empty()) throw std::invalid_argument("grid_torus needs at least one axis");
    bool bip = true;
    long total = 1;
    for (int s : sides) {
        if (s < 2) throw std::invalid_argument("grid_torus side must be >= 2");
        bip = bip && s % 2 == 0;
        total *= s;
    }
    WindowGraph w;
    w.dim = static_cast<int>(sides.size());
    w.g = BipartiteGraph(bip);
    auto st = strides_of(sides);
    for (long id = 0; id < total; ++id) {
        Point c(w.dim);
        long rest = id;
        int sum = 0;
        for (int i = 0; i < w.dim; ++i) {
            c[i] = static_cast<int>(rest / st[i]);
            rest %= st[i];
            sum += c[i];
        }
        w.g.add_vertex(bip && sum % 2 ? Side::right : Side::left);
        w.coords.push_back(std::move(c));
    }
    for (long id = 0; id < total; ++id) {
        for (int i = 0; i < w.dim; ++i) {
            Point nb = w.coords[id];
            nb[i] = (nb[i] + 1) % sides[i];
            long other = 0;
            for (int j = 0; j < w.dim; ++j) other += static_cast<long>(nb[j]) * st[j];
            if (add_unique(w.g, static_cast<int>(id), static_cast<int>(other))) {
                Point lab(w.dim, 0);
                lab[i] = 1;
                w.labels.push_back(std::move(lab));
            } else {
                ++w.collapsed_edges;
            }
        }
    }
    return w;
}

WindowGraph grid_torus(int d, int n) { return grid_torus(std::vector<int>(d, n)); }

WindowGraph grid_ball_window(int d, int r) {
    if (d < 1 || r < 0) throw std::invalid_argument("grid_ball_window needs d >= 1 and r >= 0");
    WindowGraph w;
    w.dim = d;
    Point c(d, -r);
    std::unordered_map<std::string, int> index;
    auto key = [](const Point& p) { return std::string(reinterpret_cast<const char*>(p.data()), p.size() * sizeof(int)); };
    for (;;) {
        int l1 = 0, sum = 0;
        for (int x : c) l1 += std::abs(x), sum += x;
        if (l1 <= r) {
            int id = w.g.add_vertex(((sum % 2) + 2) % 2 ? Side::right : Side::left, l1 == r);
            index[key(c)] = id;
            w.coords.push_back(c);
        }
        int i = d - 1;
        while (i >= 0 && c[i] == r) c[i--] = -r;
        if (i < 0) break;
        ++c[i];
    }
    for (int v = 0; v < w.g.num_vertices(); ++v)
        for (int i = 0; i < d; ++i) {
            Point nb = w.coords[v];
            ++nb[i];
            auto it = index.find(key(nb));
            if (it == index.end()) continue;
            w.g.add_edge(v, it->second);
            Point lab(d, 0);
            lab[i] = 1;
            w.labels.push_back(std::move(lab));
        }
    return w;
}

WindowGraph grid_box(int width, int height) {
    if (width < 1 || height < 1) throw std::invalid_argument("grid_box needs positive sides");
    WindowGraph w;
    w.dim = 2;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            bool frame = x == 0 || y == 0 || x == width - 1 || y == height - 1;
            w.g.add_vertex((x + y) % 2 ? Side::right : Side::left, frame);
            w.coords.push_back({x, y});
            w.strip.push_back(x);
        }
    auto id = [&](int x, int y) { return y * width + x; };
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            if (x + 1 < width) w.g.add_edge(id(x, y), id(x + 1, y)), w.labels.push_back({1, 0});
            if (y + 1 < height) w.g.add_edge(id(x, y), id(x, y + 1)), w.labels.push_back({0, 1});
        }
    return w;
}

WindowGraph bipartite_circulant(int n, const std::vector<int>& offsets) {
    if (n < 1) throw std::invalid_argument("circulant needs n >= 1");
    std::set<int> seen;
    for (int s : offsets)
        if (!seen.insert(((s % n) + n) % n).second) throw std::invalid_argument("circulant offsets must be distinct mod n");
    WindowGraph w;
    w.dim = 1;
    for (int i = 0; i < n; ++i) w.g.add_vertex(Side::left), w.coords.push_back({i});
    for (int i = 0; i < n; ++i) w.g.add_vertex(Side::right), w.coords.push_back({i});
    for (int i = 0; i < n; ++i)
        for (int s : seen) w.g.add_edge(i, n + (i + s) % n), w.labels.push_back({s});
    w.strip.assign(2 * n, 0);
    return w;
}

std::vector<int> random_offsets(int n, int d, std::uint64_t seed) {
    if (d > n) throw std::invalid_argument("more offsets than residues");
    Rng rng(seed);
    std::set<int> s;
    while (static_cast<int>(s.size()) < d) s.insert(static_cast<int>(rng.below(n)));
    return {s.begin(), s.end()};
}

LineSubstrate ladder_ring_substrate(int n, int h) {
    if (n < 4 || n % 2 || h < 4 || h % 2) throw std::invalid_argument("ladder ring needs even n >= 4 and even h >= 4");
    LineSubstrate s;
    s.w = grid_torus({n, h});
    s.cyclic_period = n;
    const auto& g = s.w.g;
    s.w.strip.clear();
    for (const auto& c : s.w.coords) s.w.strip.push_back(c[0]);
    s.tau.assign(g.num_edges(), 0);
    s.chi.assign(g.num_edges(), 0);
    std::vector<std::vector<int>> rails(2);
    for (int e = 0; e < g.num_edges(); ++e) {
        const auto& a = s.w.coords[g.edge(e).u];
        const auto& b = s.w.coords[g.edge(e).w];
        int ya = a[1], yb = b[1];
        if (ya == yb && ya <= 1) {
            s.tau[e] = Rational(1, 3), s.chi[e] = Rational(1, 2);
            rails[ya].push_back(e);
        } else if (a[0] == b[0] && std::min(ya, yb) == 0 && std::max(ya, yb) == 1) {
            s.tau[e] = Rational(1, 3);
        } else if (a[0] == b[0] && std::min(ya, yb) >= 2 && std::min(ya, yb) % 2 == 0 && std::abs(ya - yb) == 1) {
            s.tau[e] = 1, s.chi[e] = 1;
        }
    }
    for (auto& r : rails) {
        std::sort(r.begin(), r.end());
        s.lines.insert(s.lines.end(), r.begin(), r.end());
        s.marks.push_back(r);
    }
    s.lines = make_edge_set(std::move(s.lines));
    return s;
}

LineSubstrate ladder_box_substrate(int length, int rails) {
    if (rails != 2 && rails != 3) throw std::invalid_argument("ladder box supports 2 or 3 rails");
    LineSubstrate s;
    s.w = ladder(length, rails);
    const auto& g = s.w.g;
    s.tau.assign(g.num_edges(), Rational(1, 3));
    s.chi.assign(g.num_edges(), 0);
    for (int e = 0; e < g.num_edges(); ++e) {
        const auto& a = s.w.coords[g.edge(e).u];
        const auto& b = s.w.coords[g.edge(e).w];
        if (a[1] != b[1]) continue;
        s.chi[e] = Rational(1, 2);
        s.lines.push_back(e);
        if (rails == 3 && a[1] == 1) s.tau[e] = Rational(1, 6);
    }
    return s;
}

LineSubstrate ladder_chord_substrate(int n, int rails_per_class) {
    if (n < 4 || n % 2) throw std::invalid_argument("ladder chord substrate needs even n >= 4");
    if (rails_per_class < 1) throw std::invalid_argument("need at least one rail per class");
    LineSubstrate s;
    auto& g = s.w.g;
    s.w.dim = 2;
    s.cyclic_period = n;
    for (int i = 0; i < n; ++i) g.add_vertex(i % 2 ? Side::right : Side::left), s.w.coords.push_back({i, 0});
    std::vector<Rational> chi;
    std::vector<int> line;
    for (int i = 0; i < n; ++i) line.push_back(g.add_edge(i, (i + 1) % n)), chi.push_back(Rational(1, 2));
    int row = 1;
    for (int c = 0; c < 2; ++c)
        for (int r = 0; r < rails_per_class; ++r, ++row) {
            int base = g.num_vertices();
            for (int i = 0; i < n; ++i) g.add_vertex(i % 2 ? Side::left : Side::right), s.w.coords.push_back({i, row});
            for (int i = 0; i < n; ++i) g.add_edge(i, base + i), chi.push_back(0);
            for (int i = 0; i < n; ++i) g.add_edge(base + i, base + (i + 1) % n), chi.push_back(i % 2 == c ? 1 : 0);
        }
    for (const auto& c : s.w.coords) s.w.strip.push_back(c[0]);
    s.chi = chi;
    s.tau = chi;
    s.lines = make_edge_set(line);
    s.marks = {line};
    return s;
}

EdgeSet staircase_lines(const WindowGraph& box, int count, std::uint64_t seed) {
    int width = 0, height = 0;
    for (const auto& c : box.coords) width = std::max(width, c[0] + 1), height = std::max(height, c[1] + 1);
    if (width * height != box.g.num_vertices()) throw std::invalid_argument("staircase_lines needs a grid_box window");
    // line c visits vertices with x + y in {c, c + 1}; even c keeps lines apart
    int slots = (width + height - 3) / 2;
    if (count > slots) throw std::invalid_argument("too many staircase lines for the box");
    Rng rng(seed);
    std::set<int> cs;
    while (static_cast<int>(cs.size()) < count) cs.insert(2 * (1 + static_cast<int>(rng.below(slots))));
    EdgeSet out;
    for (int c : cs) {
        int x = std::max(0, c - (height - 1)), y = c - x;
        for (bool right = true;; right = !right) {
            int nx = x + (right ? 1 : 0), ny = y - (right ? 0 : 1);
            if (nx >= width || ny < 0) break;
            out.push_back(box.g.find_edge(y * width + x, ny * width + nx));
            x = nx, y = ny;
        }
    }
    return make_edge_set(std::move(out));
}

WindowGraph ladder(int length, int rails) {
    if (length < 2 || rails < 1) throw std::invalid_argument("ladder needs length >= 2 and rails >= 1");
    WindowGraph w;
    w.dim = 2;
    for (int y = 0; y < rails; ++y)
        for (int x = 0; x < length; ++x) {
            w.g.add_vertex((x + y) % 2 ? Side::right : Side::left, x == 0 || x == length - 1);
            w.coords.push_back({x, y});
            w.strip.push_back(x);
        }
    auto id = [&](int x, int y) { return y * length + x; };
    for (int y = 0; y < rails; ++y)
        for (int x = 0; x + 1 < length; ++x) w.g.add_edge(id(x, y), id(x + 1, y)), w.labels.push_back({1, 0});
    for (int y = 0; y + 1 < rails; ++y)
        for (int x = 0; x < length; ++x) w.g.add_edge(id(x, y), id(x, y + 1)), w.labels.push_back({0, 1});
    return w;
}

FiniteGroup trivial_group() { return cyclic_group(1); }

FiniteGroup cyclic_group(int m) {
    if (m < 1) throw std::invalid_argument("cyclic group order must be positive");
    FiniteGroup g;
    g.name = "Z/" + std::to_string(m);
    g.order = m;
    g.mul.assign(m, std::vector<int>(m));
    g.inv.assign(m, 0);
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) g.mul[a][b] = (a + b) % m;
        g.inv[a] = (m - a) % m;
    }
    return g;
}

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
    FiniteGroup g;
    g.name = a.name + "x" + b.name;
    g.order = a.order * b.order;
    g.identity = a.identity * b.order + b.identity;
    g.mul.assign(g.order, std::vector<int>(g.order));
    g.inv.assign(g.order, 0);
    for (int x = 0; x < g.order; ++x) {
        int xa = x / b.order, xb = x % b.order;
        g.inv[x] = a.inv[xa] * b.order + b.inv[xb];
        for (int y = 0; y < g.order; ++y) {
            int ya = y / b.order, yb = y % b.order;
            g.mul[x][y] = a.mul[xa][ya] * b.order + b.mul[xb][yb];
        }
    }
    return g;
}

int CayleyGraph::id(int copy, int d) const { return mod(copy, spec.period) * spec.delta.order + d; }
int CayleyGraph::copy_of(int v) const { return v / spec.delta.order; }
int CayleyGraph::delta_of(int v) const { return v % spec.delta.order; }

int CayleyGraph::apply_action(int d, int power) const {
    if (spec.action.empty()) return d;
    int order = spec.period;
    int p = mod(power, order);
    for (int i = 0; i < p; ++i) d = spec.action[d];
    return d;
}

// (i, d)(j, e) = (i + j, action^{-j}(d) e)
int CayleyGraph::multiply(int v, const CayleyGenerator& s) const {
    int i = copy_of(v), d = delta_of(v);
    int moved = apply_action(d, -s.shift);
    return id(i + s.shift, spec.delta.mul[moved][s.delta]);
}

CayleyGenerator inverse_generator(const CayleySpec& spec, const CayleyGenerator& s) {
    // (j, e)^{-1} = (-j, action^{j}(e^{-1}))
    CayleyGraph tmp;
    tmp.spec = spec;
    return {-s.shift, tmp.apply_action(spec.delta.inv[s.delta], s.shift)};
}

CayleyGraph cayley_z_semidirect(const CayleySpec& spec, bool allow_general) {
    const auto& dg = spec.delta;
    if (spec.period < 1) throw std::invalid_argument("period must be positive");
    if (!spec.action.empty()) {
        if (static_cast<int>(spec.action.size()) != dg.order) throw std::invalid_argument("action has wrong size");
        std::vector<int> seen(dg.order, 0);
        for (int x : spec.action) {
            if (x < 0 || x >= dg.order || seen[x]++) throw std::invalid_argument("action is not a permutation");
        }
        for (int a = 0; a < dg.order; ++a)
            for (int b = 0; b < dg.order; ++b)
                if (spec.action[dg.mul[a][b]] != dg.mul[spec.action[a]][spec.action[b]])
                    throw std::invalid_argument("action is not an automorphism");
        std::vector<int> p(dg.order);
        std::iota(p.begin(), p.end(), 0);
        for (int i = 0; i < spec.period; ++i)
            for (int& x : p) x = spec.action[x];
        for (int a = 0; a < dg.order; ++a)
            if (p[a] != a) throw std::invalid_argument("action^N must be the identity for the Z/N quotient");
    }
    auto same = [&](const CayleyGenerator& a, const CayleyGenerator& b) {
        return mod(a.shift - b.shift, spec.period) == 0 && a.delta == b.delta;
    };
    for (const auto& s : spec.generators) {
        if (s.delta < 0 || s.delta >= dg.order) throw std::invalid_argument("generator outside Delta");
        auto inv = inverse_generator(spec, s);
        bool found = false;
        for (const auto& t : spec.generators) found = found || same(t, inv);
        if (!found) throw std::invalid_argument("generating set is not symmetric");
    }
    CayleyGraph c;
    c.spec = spec;
    BipartiteGraph gen(false);
    int nv = spec.period * dg.order;
    for (int v = 0; v < nv; ++v) gen.add_vertex(Side::left);
    for (int v = 0; v < nv; ++v)
        for (const auto& s : spec.generators) {
            int u = c.multiply(v, s);
            if (u == v) throw std::invalid_argument("generator acts trivially (loop)");
            add_unique(gen, v, u);
        }
    c.odd_vertex_count = nv % 2 == 1;
    if (auto col = two_colouring(gen)) {
        c.bipartite = true;
        c.g = as_bipartite(gen, *col);
    } else {
        c.odd_cycle = find_odd_cycle(gen);
        if (!allow_general) {
            std::string msg = "Cayley quotient is not bipartite; odd cycle:";
            for (int v : *c.odd_cycle) msg += " " + std::to_string(v);
            throw std::invalid_argument(msg);
        }
        c.g = std::move(gen);
    }
    return c;
}

namespace {

// Integer norm comparison against k after unscaling: |v| <= k * scale.
bool within(const Point& v, Norm norm, const Rational& kscaled) {
    if (norm == Norm::l1) {
        long s = 0;
        for (int x : v) s += std::abs(x);
        return Rational(s) <= kscaled;
    }
    if (norm == Norm::linf) {
        long s = 0;
        for (int x : v) s = std::max<long>(s, std::abs(x));
        return Rational(s) <= kscaled;
    }
    long s = 0;
    for (int x : v) s += static_cast<long>(x) * x;
    return Rational(s) <= kscaled * kscaled;
}

Rational norm_value(const Point& v, Norm norm) {
    long s = 0;
    for (int x : v) {
        if (norm == Norm::l1) s += std::abs(x);
        else if (norm == Norm::linf) s = std::max<long>(s, std::abs(x));
        else s += static_cast<long>(x) * x;
    }
    return Rational(s);
}

std::string point_key(const Point& p) {
    return std::string(reinterpret_cast<const char*>(p.data()), p.size() * sizeof(int));
}

}  // namespace

PointSet displacement_ball(int d, const MetricSpec& metric, const Rational& k) {
    if (k < 0) return {};
    Rational ks = k * metric.scale;
    long reach = floor_of(ks).get_si();
    if (metric.modulus > 0) reach = std::min<long>(reach, metric.modulus / 2);
    PointSet out;
    Point v(d, static_cast<int>(-reach));
    if (d == 0) return out;
    for (;;) {
        if (within(v, metric.norm, ks)) out.push_back(v);
        int i = d - 1;
        while (i >= 0 && v[i] == reach) v[i--] = static_cast<int>(-reach);
        if (i < 0) break;
        ++v[i];
    }
    std::stable_sort(out.begin(), out.end(), [&](const Point& a, const Point& b) {
        Rational na = norm_value(a, metric.norm), nb = norm_value(b, metric.norm);
        if (na != nb) return na < nb;
        return a < b;
    });
    if (metric.modulus > 0) {
        PointSet uniq;
        std::unordered_map<std::string, char> seen;
        for (auto& v2 : out) {
            Point r = v2;
            for (int& x : r) x = mod(x, metric.modulus);
            if (seen.emplace(point_key(r), 1).second) uniq.push_back(v2);
        }
        out = std::move(uniq);
    }
    return out;
}

WindowGraph distance_bipartite_graph(const PointSet& a, const PointSet& b, const MetricSpec& metric,
                                     const Rational& k) {
    WindowGraph w;
    int d = a.empty() ? (b.empty() ? 0 : static_cast<int>(b[0].size())) : static_cast<int>(a[0].size());
    w.dim = d;
    auto reduce = [&](Point p) {
        if (metric.modulus > 0)
            for (int& x : p) x = mod(x, metric.modulus);
        return p;
    };
    std::unordered_map<std::string, int> bindex;
    for (const auto& p : a) w.g.add_vertex(Side::left), w.coords.push_back(p);
    for (std::size_t j = 0; j < b.size(); ++j) {
        int v = w.g.add_vertex(Side::right);
        w.coords.push_back(b[j]);
        if (!bindex.emplace(point_key(reduce(b[j])), v).second) throw std::invalid_argument("duplicate point in b");
    }
    auto ball = displacement_ball(d, metric, k);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (const auto& v : ball) {
            Point q = a[i];
            for (int t = 0; t < d; ++t) q[t] += v[t];
            auto it = bindex.find(point_key(reduce(q)));
            if (it == bindex.end()) continue;
            if (add_unique(w.g, static_cast<int>(i), it->second)) w.labels.push_back(v);
        }
    }
    return w;
}

namespace {

long det_mod(const PointSet& m, long n) {
    // columns are the translation vectors; d <= 3 via cofactor expansion
    int d = static_cast<int>(m.size());
    if (d == 1) return mod(m[0][0], n);
    if (d == 2) return mod(static_cast<long>(m[0][0]) * m[1][1] - static_cast<long>(m[1][0]) * m[0][1], n);
    throw std::invalid_argument("torus specs support d <= 2");
}

long inverse_mod(long a, long n) {
    long t = 0, nt = 1, r = n, nr = mod(a, n);
    while (nr) {
        long qt = r / nr;
        std::tie(t, nt) = std::make_pair(nt, t - qt * nt);
        std::tie(r, nr) = std::make_pair(nr, r - qt * nr);
    }
    if (r != 1) throw std::invalid_argument("determinant is not invertible mod n");
    return mod(t, n);
}

}  // namespace

TorusSpec random_torus_spec(int n, std::uint64_t seed, int d) {
    if (d < 1 || d > 2) throw std::invalid_argument("torus specs support d in {1, 2}");
    if (n < 2) throw std::invalid_argument("torus side must be >= 2");
    Rng rng(seed);
    TorusSpec spec;
    spec.d = d;
    spec.n = n;
    for (;;) {
        spec.translations.assign(d, Point(d));
        for (auto& u : spec.translations)
            for (int& x : u) x = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        spec.determinant = det_mod(spec.translations, n);
        if (std::gcd(spec.determinant, static_cast<long>(n)) == 1) break;
    }
    spec.transitive = true;
    return spec;
}

Point word_to_translation(const Point& word, const TorusSpec& spec) {
    Point p(spec.d, 0);
    for (int i = 0; i < spec.d; ++i)
        for (int j = 0; j < spec.d; ++j)
            p[j] = mod(p[j] + static_cast<long>(word[i]) * spec.translations[i][j], spec.n);
    return p;
}

PointSet to_orbit_coordinates(const PointSet& pts, const TorusSpec& spec) {
    long n = spec.n;
    long inv = inverse_mod(spec.determinant, n);
    PointSet out;
    out.reserve(pts.size());
    if (spec.d == 1) {
        for (const auto& p : pts) out.push_back({mod(p[0] * inv, n)});
        return out;
    }
    // p = q1 u1 + q2 u2 with columns u1, u2: M = [[u1x, u2x], [u1y, u2y]]
    const auto& u1 = spec.translations[0];
    const auto& u2 = spec.translations[1];
    for (const auto& p : pts) {
        long q1 = mod(inv * mod(static_cast<long>(u2[1]) * p[0] - static_cast<long>(u2[0]) * p[1], n), n);
        long q2 = mod(inv * mod(static_cast<long>(u1[0]) * p[1] - static_cast<long>(u1[1]) * p[0], n), n);
        out.push_back({static_cast<int>(q1), static_cast<int>(q2)});
    }
    return out;
}

namespace {

// Exact angular order around the origin starting from the positive x axis.
bool angle_less(long ax, long ay, long bx, long by) {
    auto half = [](long x, long y) { return y < 0 || (y == 0 && x < 0) ? 1 : 0; };
    int ha = half(ax, ay), hb = half(bx, by);
    if (ha != hb) return ha < hb;
    return ax * by - ay * bx > 0;
}

}  // namespace

DiscSquare disc_square_sets(int n, const Rational& alpha, std::uint64_t seed) {
    if (alpha <= 0 || alpha >= 1) throw std::invalid_argument("density must lie in (0, 1)");
    Rational inv = 1 / alpha;
    if (!is_integer(inv)) throw std::invalid_argument("density must be 1/s^2");
    long s2 = inv.get_num().get_si();
    long s = std::lround(std::sqrt(static_cast<double>(s2)));
    if (s * s != s2) throw std::invalid_argument("density must be 1/s^2");
    if (n % s != 0 || n % 2 != 0) throw std::invalid_argument("torus side must be even and divisible by s");
    DiscSquare out;
    out.side = static_cast<int>(n / s);
    long target = static_cast<long>(out.side) * out.side;
    long c = n / 2;
    long lo = c - out.side / 2;
    for (long y = lo; y < lo + out.side; ++y)
        for (long x = lo; x < lo + out.side; ++x) out.b.push_back({static_cast<int>(x), static_cast<int>(y)});
    // disc of the same area: r^2 = target / pi
    double r2 = static_cast<double>(target) / M_PI;
    struct Cand {
        long dx, dy, d2;
    };
    std::vector<Cand> cand;
    for (long y = 0; y < n; ++y)
        for (long x = 0; x < n; ++x) {
            long dx = x - c, dy = y - c;
            cand.push_back({dx, dy, dx * dx + dy * dy});
        }
    std::sort(cand.begin(), cand.end(), [](const Cand& p, const Cand& q) {
        if (p.d2 != q.d2) return p.d2 < q.d2;
        return angle_less(p.dx, p.dy, q.dx, q.dy);
    });
    for (const auto& p : cand)
        if (static_cast<double>(p.d2) <= r2) ++out.disc_raw;
    out.moved = std::labs(out.disc_raw - target);
    if (out.moved > n) throw std::runtime_error("disc/square equalization needs more than n moved points");
    for (long i = 0; i < target; ++i)
        out.a.push_back({static_cast<int>(cand[i].dx + c), static_cast<int>(cand[i].dy + c)});
    out.spec = random_torus_spec(n, seed, 2);
    return out;
}

}  // namespace hm
