#include "doctest.h"
#include "helpers.hpp"

#include "hypermatch/cycle_cover.hpp"
#include "hypermatch/substrates.hpp"
#include "hypermatch/toast.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace hm;
using namespace hm::testing;

namespace {

int vertex_at(const WindowGraph& w, int x, int y) {
    for (int v = 0; v < w.g.num_vertices(); ++v)
        if (w.coords[v][0] == x && w.coords[v][1] == y) return v;
    return -1;
}

EdgeSet rail_edges(const WindowGraph& w, int rail) {
    EdgeSet out;
    for (int e = 0; e < w.g.num_edges(); ++e) {
        const auto& a = w.coords[w.g.edge(e).u];
        const auto& b = w.coords[w.g.edge(e).w];
        if (a[1] == rail && b[1] == rail) out.push_back(e);
    }
    return out;
}

void check_family_shape(const CycleFamily& fam, const BipartiteGraph& g, const EdgeSet& l) {
    auto a = audit_cover(fam, g, l);
    CHECK(a.disjoint_within_families);
    CHECK(a.cycles_simple);
    CHECK(a.max_offline <= 1);
    for (const auto& f : fam.families)
        for (const auto& c : f) {
            CHECK(c.length() % 2 == 0);
            for (int i = 0; i < c.length(); ++i) {
                const auto& e = g.edge(c.edges[i]);
                int x = c.vertices[i], y = c.vertices[(i + 1) % c.length()];
                CHECK(((e.u == x && e.w == y) || (e.u == y && e.w == x)));
            }
        }
}

}  // namespace

TEST_CASE("cycle decomposition") {
    auto c6 = cycle_graph(6);
    auto cs = cycle_decomposition(c6, {0, 1, 2, 3, 4, 5});
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].length() == 6);

    // two 4-cycles sharing vertex 0 (figure eight)
    BipartiteGraph g;
    for (int i = 0; i < 7; ++i) g.add_vertex(i % 2 ? Side::right : Side::left);
    for (int i = 0; i < 4; ++i) g.add_edge(i, (i + 1) % 4);
    g.add_edge(0, 5), g.add_edge(5, 6), g.add_edge(6, 3);
    // edges 0..3 form a square, 4..6 a second path from 0 to 3
    CHECK_THROWS_AS(cycle_decomposition(g, {0, 1, 2, 3, 4, 5, 6}), std::invalid_argument);
    auto two = cycle_decomposition(g, {0, 1, 2, 4, 5, 6});
    REQUIRE(two.size() == 1);
    CHECK(two[0].length() == 6);
    CHECK(cycle_decomposition(g, {}).empty());
}

TEST_CASE("audit counts") {
    auto c4 = cycle_graph(4);
    CycleFamily fam;
    fam.families = {{cycle_from_edges(c4, {0, 1, 2, 3})}, {}};
    auto a = audit_cover(fam, c4, {0, 1});
    CHECK(a.line_edges == 2);
    CHECK(a.joint_covered == 0);
    CHECK(a.family_covered == std::vector<long>{2, 0});
    CHECK(a.max_offline == 1);
    CHECK(a.offline_edges_used == 2);
    fam.families[1] = fam.families[0];
    auto b = audit_cover(fam, c4, {0, 1});
    CHECK(b.joint_covered == 2);
    CHECK(b.max_offline == 2);
    fam.families[0].push_back(fam.families[0][0]);
    CHECK_FALSE(audit_cover(fam, c4, {0, 1}).disjoint_within_families);
}

TEST_CASE("one-ended cover of a marked cycle inside a tile") {
    auto box = grid_box(12, 12);
    auto fh = frame_hierarchy(box, {3});
    REQUIRE(fh.toast.depth() == 2);
    auto levels = toast_levels(fh.toast);
    const auto& tile = fh.toast.tiles[levels[0][0]];
    int x0 = box.coords[tile.front()][0], y0 = box.coords[tile.front()][1];
    std::vector<int> ring{vertex_at(box, x0, y0), vertex_at(box, x0 + 1, y0), vertex_at(box, x0 + 1, y0 + 1),
                          vertex_at(box, x0, y0 + 1)};
    EdgeSet l;
    for (int i = 0; i < 4; ++i) l.push_back(box.g.find_edge(ring[i], ring[(i + 1) % 4]));
    l = make_edge_set(l);
    auto r = cover_lines_one_ended(box.g, l, fh.toast, 1, Rational(1, 2));
    REQUIRE(r.fam.families.size() == 1);
    REQUIRE(r.fam.families[0].size() == 1);
    auto edges = r.fam.families[0][0].edges;
    std::sort(edges.begin(), edges.end());
    CHECK(edges == l);
    CHECK(r.stats.coverage_ok);

    auto empty = cover_lines_one_ended(box.g, {}, fh.toast, 2, Rational(1, 2));
    CHECK(empty.fam.k() == 2);
    CHECK(empty.fam.families[0].empty());
    CHECK(audit_cover(empty.fam, box.g, {}).joint_covered == 0);
}

TEST_CASE("one-ended cover of straight lines through a deep frame toast") {
    auto box = grid_box(64, 64);
    auto fh = frame_hierarchy(box, {5, 13, 29});
    REQUIRE(fh.toast.depth() == 4);
    EdgeSet l;
    for (int y : {10, 31, 50})
        for (int x = 0; x + 1 < 64; ++x) l.push_back(box.g.find_edge(vertex_at(box, x, y), vertex_at(box, x + 1, y)));
    l = make_edge_set(l);
    auto r = cover_lines_one_ended(box.g, l, fh.toast, 3, Rational(1, 10));
    CHECK(r.stats.depth_ok);
    CHECK(r.stats.base_level == 1);
    check_family_shape(r.fam, box.g, l);
    auto a = audit_cover(r.fam, box.g, l);
    CHECK(a.line_edges == 189);
    if (r.stats.skipped_units == 0) CHECK(a.joint_covered >= r.stats.base_covered);
    CHECK(a.joint_covered > 0);
    MESSAGE("joint coverage " << a.joint_covered << " / " << a.line_edges << ", base " << r.stats.base_covered);

    auto shallow = cover_lines_one_ended(box.g, l, fh.toast, 5, Rational(1, 10));
    CHECK_FALSE(shallow.stats.depth_ok);
    CHECK_FALSE(shallow.stats.coverage_ok);
}

TEST_CASE("one-ended cover of staircase lines crossing tile cores") {
    auto box = grid_box(335, 335);
    auto fh = frame_hierarchy(box, {39, 81, 165});
    REQUIRE(fh.toast.depth() == 4);
    auto l = staircase_lines(box, 20, 1);
    auto r = cover_lines_one_ended(box.g, l, fh.toast, 3, Rational(1, 10));
    check_family_shape(r.fam, box.g, l);
    auto a = audit_cover(r.fam, box.g, l);
    CHECK(r.stats.skipped_units == 0);
    CHECK(r.stats.dropped_pieces == 0);
    CHECK(a.joint_covered >= r.stats.base_covered);
    CHECK(10 * a.joint_covered > 9 * a.line_edges);
}

TEST_CASE("two-ended cover on ladders") {
    auto w = ladder(40, 2);
    auto l = set_union(rail_edges(w, 0), rail_edges(w, 1));
    auto r = cover_lines_two_ended(w.g, w.strip, l, 2, Rational(1, 4));
    CHECK(r.stats.period == 8);
    check_family_shape(r.fam, w.g, l);
    auto a = audit_cover(r.fam, w.g, l);
    // oracle: family i covers exactly the rail edges inside [s, s+7], s = 2i+1 + 8j, s+7 <= 39
    for (int i = 0; i < 2; ++i) {
        std::set<int> want;
        for (int s = 2 * i + 1; s + 7 <= 39; s += 8)
            for (int e : l) {
                int xa = w.strip[w.g.edge(e).u], xb = w.strip[w.g.edge(e).w];
                if (std::min(xa, xb) >= s && std::max(xa, xb) <= s + 7) want.insert(e);
            }
        std::set<int> got;
        for (const auto& c : r.fam.families[i])
            for (int e : c.edges)
                if (std::binary_search(l.begin(), l.end(), e)) got.insert(e);
        CHECK(got == want);
        CHECK(a.family_covered[i] == static_cast<long>(want.size()));
    }
    CHECK(r.stats.coverage_ok);
    CHECK(r.stats.dropped_pieces == 0);

    auto w3 = ladder(80, 3);
    auto l3 = set_union(set_union(rail_edges(w3, 0), rail_edges(w3, 1)), rail_edges(w3, 2));
    auto r3 = cover_lines_two_ended(w3.g, w3.strip, l3, 2, Rational(1, 4));
    check_family_shape(r3.fam, w3.g, l3);
    auto a3 = audit_cover(r3.fam, w3.g, l3);
    CHECK(r3.stats.dropped_pieces == 18);
    CHECK(a3.family_covered[0] == 2 * 9 * 7);
    CHECK(r3.stats.coverage_ok);

    auto w1 = ladder(20, 2);
    CHECK_THROWS_WITH_AS(cover_lines_two_ended(w1.g, w1.strip, rail_edges(w1, 0), 1, Rational(1, 4)),
                         doctest::Contains("one-lined"), std::invalid_argument);
    CHECK(cover_lines_two_ended(w1.g, w1.strip, {}, 1, Rational(1, 4)).fam.families[0].empty());
}

TEST_CASE("two-ended cover on a ring of columns") {
    // torus 24 x 2: both rows are cyclic lines; strip = x with period 24
    auto t = grid_torus({24, 4});
    std::vector<int> strip;
    for (int v = 0; v < t.g.num_vertices(); ++v) strip.push_back(t.coords[v][0]);
    EdgeSet l;
    for (int e = 0; e < t.g.num_edges(); ++e) {
        const auto& a = t.coords[t.g.edge(e).u];
        const auto& b = t.coords[t.g.edge(e).w];
        if (a[1] == b[1] && (a[1] == 0 || a[1] == 1)) l.push_back(e);
    }
    l = make_edge_set(l);
    std::vector<char> allowed(t.g.num_edges(), 0);
    for (int e = 0; e < t.g.num_edges(); ++e) {
        const auto& a = t.coords[t.g.edge(e).u];
        const auto& b = t.coords[t.g.edge(e).w];
        allowed[e] = a[0] == b[0] && std::min(a[1], b[1]) == 0 && std::max(a[1], b[1]) == 1;
    }
    auto r = cover_lines_two_ended(t.g, strip, l, 2, Rational(1, 4), 24, &allowed);
    check_family_shape(r.fam, t.g, l);
    auto a = audit_cover(r.fam, t.g, l);
    CHECK(a.family_covered[0] == 2 * 3 * 7);
    CHECK(a.family_covered[1] == 2 * 3 * 7);
    CHECK(a.joint_covered == 2 * 18);
}

TEST_CASE("threshold cover picks the first working theta") {
    auto w = ladder(40, 2);
    auto l = set_union(rail_edges(w, 0), rail_edges(w, 1));
    auto mask = mask_of(l, w.g.num_edges());
    FractionalAssignment t(w.g.num_edges());
    for (int e = 0; e < w.g.num_edges(); ++e) t[e] = mask[e] ? Rational(1, 2) : Rational(1, 3);
    ThresholdInput in;
    in.strip = &w.strip;
    auto r = cover_lines_threshold(w.g, t, l, 2, in);
    CHECK(r.theta == Rational(1, 4));
    CHECK(r.target_met);
    CHECK(r.joint_covered == 2 * 23);
    REQUIRE(r.components.size() == 1);
    CHECK(r.components[0].kind == EndKind::two_ended);
    CHECK(r.components[0].lines == 2);
    check_family_shape(r.fam, w.g, l);

    for (int e = 0; e < w.g.num_edges(); ++e)
        if (!mask[e]) t[e] = Rational(1, 5);
    auto r2 = cover_lines_threshold(w.g, t, l, 2, in);
    CHECK(r2.theta == Rational(1, 8));
    CHECK(r2.target_met);

    for (int e = 0; e < w.g.num_edges(); ++e)
        if (!mask[e]) t[e] = 0;
    auto r3 = cover_lines_threshold(w.g, t, l, 2, in);
    CHECK_FALSE(r3.target_met);
    CHECK(r3.joint_covered == 0);
}

TEST_CASE("helly prune") {
    std::vector<std::pair<int, int>> iv{{0, 5}, {1, 3}, {2, 8}, {4, 10}, {9, 12}, {20, 25}};
    CHECK(helly_prune(iv) == std::vector<int>{0, 3, 4, 5});
    CHECK(helly_prune({}).empty());

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::pair<int, int>> xs;
        int n = 1 + static_cast<int>(rng() % 15);
        for (int i = 0; i < n; ++i) {
            int a = static_cast<int>(rng() % 40);
            xs.push_back({a, a + static_cast<int>(rng() % 10)});
        }
        auto kept = helly_prune(xs);
        for (int p = 0; p < 60; ++p) {
            int all = 0, some = 0;
            for (auto& [a, b] : xs) all += a <= p && p <= b;
            for (int i : kept) some += xs[i].first <= p && p <= xs[i].second;
            CHECK((all > 0) == (some > 0));
            CHECK(some <= 2);
        }
    }
}
