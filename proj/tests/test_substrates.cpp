#include "doctest.h"

#include "hypermatch/flow.hpp"
#include "hypermatch/substrates.hpp"

#include <numeric>
#include <set>

using namespace hm;

namespace {

// Exhaustive perfect matchings of a small graph, as edge lists.
void enumerate_matchings(const BipartiteGraph& g, std::vector<int>& mate, std::vector<int>& chosen,
                         std::vector<std::vector<int>>& out) {
    int v = -1;
    for (int i = 0; i < g.num_vertices(); ++i)
        if (mate[i] < 0) {
            v = i;
            break;
        }
    if (v < 0) {
        out.push_back(chosen);
        return;
    }
    for (int e : g.incident(v)) {
        int u = g.other(e, v);
        if (mate[u] >= 0) continue;
        mate[u] = v, mate[v] = u;
        chosen.push_back(e);
        enumerate_matchings(g, mate, chosen, out);
        chosen.pop_back();
        mate[u] = mate[v] = -1;
    }
}

std::vector<std::vector<int>> all_perfect_matchings(const BipartiteGraph& g) {
    std::vector<int> mate(g.num_vertices(), -1), chosen;
    std::vector<std::vector<int>> out;
    enumerate_matchings(g, mate, chosen, out);
    return out;
}

}  // namespace

TEST_CASE("rotation graphs") {
    auto r = rotation_graph(8, 2);
    CHECK(r.components == 2);
    CHECK(r.cycle_length == 4);
    CHECK(r.bipartite);
    CHECK(r.g.num_edges() == 8);
    int comps = 0;
    component_labels(r.g, nullptr, &comps);
    CHECK(comps == 2);

    auto odd = rotation_graph(5, 1);
    CHECK_FALSE(odd.bipartite);
    CHECK(find_odd_cycle(odd.g));

    CHECK_THROWS(rotation_graph(6, 3));
    for (int n = 3; n <= 12; ++n)
        for (int p = 1; p < n; ++p) {
            if (n / std::gcd(n, p) == 2) continue;
            auto rg = rotation_graph(n, p);
            int c = 0;
            component_labels(rg.g, nullptr, &c);
            CHECK(c == std::gcd(n, p));
            CHECK(rg.bipartite == ((n / std::gcd(n, p)) % 2 == 0));
        }
}

TEST_CASE("gadget graphs") {
    auto base = rotation_graph(4, 1);
    auto one = gadget_graph(base, 2, 1);
    CHECK(one.g.num_vertices() == 8);
    CHECK(one.gadgets.size() == 1);

    auto none = gadget_graph(base, 2, 0);
    CHECK(none.g.num_vertices() == 4);
    CHECK(none.g.num_edges() == 4);

    auto big = gadget_graph(rotation_graph(8, 2), 4);
    CHECK(big.g.num_vertices() == 8 + 4 * static_cast<int>(big.gadgets.size()));
    CHECK(big.gadgets.size() == 4);
    for (int v = 0; v < big.g.num_vertices(); ++v) CHECK((big.g.degree(v) == 2 || big.g.degree(v) == 3));
    CHECK(validate_perfect_fractional_matching(big.g, unit_demand(big.g), unit_capacity(big.g), big.tau).ok);

    // odd step on an even cycle joins opposite colours
    CHECK_THROWS(gadget_graph(rotation_graph(8, 1), 1));

    // every perfect matching is perfect on each inserted 4-cycle
    for (int gadgets : {1, 2}) {
        auto gg = gadget_graph(rotation_graph(8, 1), 2, gadgets);
        auto ms = all_perfect_matchings(gg.g);
        CHECK(!ms.empty());
        for (const auto& m : ms) {
            std::set<int> in(m.begin(), m.end());
            for (const auto& gd : gg.gadgets) {
                int on = 0;
                for (int e : gd.cycle_edges) on += static_cast<int>(in.count(e));
                CHECK(on == 2);
                CHECK_FALSE(in.count(gd.connectors[0]));
                CHECK_FALSE(in.count(gd.connectors[1]));
            }
        }
    }
}

TEST_CASE("grid tori and windows") {
    auto t = grid_torus(2, 4);
    CHECK(t.g.num_vertices() == 16);
    CHECK(t.g.num_edges() == 32);
    for (int v = 0; v < 16; ++v) CHECK(t.g.degree(v) == 4);
    CHECK(t.collapsed_edges == 0);

    auto ball = grid_ball_window(2, 1);
    CHECK(ball.g.num_vertices() == 5);
    CHECK(ball.g.boundary_vertices().size() == 4);

    auto cube = grid_torus(3, 2);
    CHECK(cube.g.num_vertices() == 8);
    for (int v = 0; v < 8; ++v) CHECK(cube.g.degree(v) == 3);
    CHECK(cube.collapsed_edges == 12);

    auto odd = grid_torus(2, 3);
    CHECK_FALSE(odd.g.bipartite_mode());

    // interior vertices of windows keep their full neighbourhood
    auto b = grid_ball_window(2, 4);
    for (int v = 0; v < b.g.num_vertices(); ++v)
        if (!b.g.is_boundary(v)) CHECK(b.g.degree(v) == 4);
    auto box = grid_box(6, 5);
    for (int v = 0; v < box.g.num_vertices(); ++v)
        if (!box.g.is_boundary(v)) CHECK(box.g.degree(v) == 4);

    auto lad = ladder(40, 2);
    CHECK(lad.g.num_vertices() == 80);
    CHECK(lad.g.num_edges() == 2 * 39 + 40);
    CHECK(lad.g.boundary_vertices().size() == 4);
}

TEST_CASE("Cayley quotients of Z/N semidirect Delta") {
    CayleySpec spec;
    spec.delta = cyclic_group(2);
    spec.period = 4;
    spec.generators = {{1, 0}, {-1, 0}, {1, 1}, {-1, 1}};
    auto c = cayley_z_semidirect(spec);
    CHECK(c.bipartite);
    CHECK(c.g.num_vertices() == 8);
    for (int v = 0; v < 8; ++v) CHECK(c.g.degree(v) == 4);

    CayleySpec triv;
    triv.delta = trivial_group();
    triv.period = 6;
    triv.generators = {{1, 0}, {-1, 0}};
    auto cyc = cayley_z_semidirect(triv);
    CHECK(cyc.g.num_vertices() == 6);
    CHECK(cyc.g.num_edges() == 6);

    CayleySpec z3;
    z3.delta = cyclic_group(3);
    z3.period = 5;
    z3.generators = {{1, 0}, {-1, 0}, {1, 1}, {-1, 2}};
    CHECK_THROWS(cayley_z_semidirect(z3));
    auto gen = cayley_z_semidirect(z3, true);
    CHECK(gen.odd_vertex_count);
    CHECK(gen.odd_cycle);

    // nontrivial action: gamma acts on Z/4 by negation
    CayleySpec twisted;
    twisted.delta = cyclic_group(4);
    twisted.action = {0, 3, 2, 1};
    twisted.period = 6;
    twisted.generators = {{1, 0}, {-1, 0}, {1, 1}, inverse_generator(twisted, {1, 1})};
    auto tw = cayley_z_semidirect(twisted);
    CHECK(tw.g.num_vertices() == 24);
    // vertex transitivity spot check: left multiplication permutes edges
    for (int v = 0; v < tw.g.num_vertices(); ++v) CHECK(tw.g.degree(v) == tw.g.degree(0));

    CayleySpec asym = spec;
    asym.generators = {{1, 0}};
    CHECK_THROWS(cayley_z_semidirect(asym));
}

TEST_CASE("distance graphs") {
    MetricSpec line;
    auto g2 = distance_bipartite_graph({{0}}, {{3}}, line, Rational(2));
    CHECK(g2.g.num_edges() == 0);
    auto g3 = distance_bipartite_graph({{0}}, {{3}}, line, Rational(3));
    REQUIRE(g3.g.num_edges() == 1);
    CHECK(g3.labels[0] == Point{3});

    // A = Z^2 and B = Z^2 + (1/2, 1/2) in doubled coordinates
    MetricSpec half;
    half.scale = 2;
    PointSet a, b;
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) a.push_back({2 * x, 2 * y}), b.push_back({2 * x + 1, 2 * y + 1});
    auto w = distance_bipartite_graph(a, b, half, Rational(1));
    for (int i = 0; i < 16; ++i) {
        int x = i % 4, y = i / 4;
        int expect = (x > 0 ? 1 : 0) * (y > 0 ? 1 : 0) + (x > 0 ? 1 : 0) * 1 + 1 * (y > 0 ? 1 : 0) + 1;
        CHECK(w.g.degree(i) == expect);
    }
    CHECK(w.g.degree(5) == 4);

    // monotone in k
    MetricSpec torus;
    torus.modulus = 16;
    PointSet pa, pb;
    for (int i = 0; i < 8; ++i) pa.push_back({(5 * i) % 16, (3 * i + 1) % 16}), pb.push_back({(7 * i + 2) % 16, (i * 11) % 16});
    std::set<std::pair<int, int>> prev;
    for (int k = 0; k <= 16; ++k) {
        auto gk = distance_bipartite_graph(pa, pb, torus, Rational(k));
        std::set<std::pair<int, int>> cur;
        for (int e = 0; e < gk.g.num_edges(); ++e) cur.insert({gk.g.edge(e).u, gk.g.edge(e).w});
        CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
        prev = cur;
    }
    CHECK(prev.size() == 64);
}

TEST_CASE("disc and square sets") {
    auto ds = disc_square_sets(64, Rational(1, 16), 1);
    CHECK(ds.a.size() == ds.b.size());
    CHECK(ds.a.size() == 256);
    CHECK(ds.moved <= 64);
    std::set<Point> pts(ds.a.begin(), ds.a.end());
    CHECK(pts.size() == ds.a.size());
    CHECK(ds.spec.transitive);
    // orbit coordinates turn u_i into unit translations
    auto q = to_orbit_coordinates({ds.spec.translations[0], ds.spec.translations[1]}, ds.spec);
    CHECK(q[0] == Point{1, 0});
    CHECK(q[1] == Point{0, 1});
    auto back = word_to_translation({3, -2}, ds.spec);
    auto qb = to_orbit_coordinates({back}, ds.spec);
    CHECK(qb[0] == Point{3, 62});
    CHECK_THROWS(disc_square_sets(64, Rational(1, 3), 1));
}

TEST_CASE("staircase lines") {
    auto box = grid_box(30, 20);
    auto l = staircase_lines(box, 12, 5);
    auto lines = line_decomposition(l, box.g);
    CHECK(lines.size() == 12);
    for (const auto& c : lines) {
        CHECK_FALSE(c.cycle);
        CHECK(box.g.is_boundary(c.vertices.front()));
        CHECK(box.g.is_boundary(c.vertices.back()));
        std::set<int> sums;
        for (int v : c.vertices) sums.insert(box.coords[v][0] + box.coords[v][1]);
        CHECK(sums.size() == 2);
        CHECK(*sums.rbegin() == *sums.begin() + 1);
    }
    CHECK(staircase_lines(box, 12, 5) == l);
    CHECK_THROWS_AS(staircase_lines(box, 100, 1), std::invalid_argument);
}
