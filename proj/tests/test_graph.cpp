#include "doctest.h"
#include "helpers.hpp"

#include "hypermatch/graph.hpp"

#include <sstream>

using namespace hm;
using namespace hm::testing;

TEST_CASE("rational helpers") {
    CHECK(parse_rational("6/4") == Rational(3, 2));
    CHECK(to_string(parse_rational("-2/4")) == "-1/2");
    CHECK(floor_of(parse_rational("-1/2")) == -1);
    CHECK(frac_of(parse_rational("5/2")) == Rational(1, 2));
    CHECK(common_denominator({Rational(1, 4), Rational(1, 6)}) == 12);
    CHECK_THROWS(parse_rational("1/0"));
    CHECK_THROWS(parse_rational("abc"));
}

TEST_CASE("graph invariants are enforced") {
    BipartiteGraph g;
    int a = g.add_vertex(Side::left), b = g.add_vertex(Side::right), c = g.add_vertex(Side::left);
    g.add_edge(a, b);
    CHECK_THROWS(g.add_edge(b, a));
    CHECK_THROWS(g.add_edge(a, c));
    CHECK_THROWS(g.add_edge(a, a));
    BipartiteGraph h(false);
    h.add_vertex(Side::left);
    h.add_vertex(Side::left);
    CHECK_NOTHROW(h.add_edge(0, 1));
}

TEST_CASE("validator: single edge and 4-cycle") {
    auto k2 = path_graph(2);
    CHECK(validate_perfect_fractional_matching(k2, unit_demand(k2), unit_capacity(k2), {Rational(1)}).ok);

    auto c4 = cycle_graph(4);
    auto half = constant_assignment(c4, Rational(1, 2));
    CHECK(validate_perfect_fractional_matching(c4, unit_demand(c4), unit_capacity(c4), half).ok);

    auto third = constant_assignment(c4, Rational(1, 3));
    auto rep = validate_perfect_fractional_matching(c4, unit_demand(c4), unit_capacity(c4), third);
    CHECK_FALSE(rep.ok);
    CHECK(rep.vertices() == std::vector<int>{0, 1, 2, 3});
    for (const auto& v : rep.violations) CHECK(v.value == Rational(2, 3));
}

TEST_CASE("validator: boundary vertices are relaxed, capacities are checked") {
    auto p = path_graph(3);
    p.set_boundary(2, true);
    FractionalAssignment t{Rational(1), Rational(0)};
    CHECK(validate_perfect_fractional_matching(p, unit_demand(p), unit_capacity(p), t).ok);
    FractionalAssignment bad{Rational(3, 2), Rational(-1, 2)};
    auto rep = validate_perfect_fractional_matching(p, unit_demand(p), unit_capacity(p), bad);
    CHECK(rep.edges() == std::vector<int>{0, 1});
}

TEST_CASE("support") {
    auto c4 = cycle_graph(4);
    CHECK(support({Rational(1), Rational(0), Rational(1), Rational(0)}, unit_capacity(c4)).empty());
    CHECK(support(constant_assignment(c4, Rational(1, 2)), unit_capacity(c4)) == EdgeSet{0, 1, 2, 3});
    auto c6 = cycle_graph(6);
    FractionalAssignment t;
    for (int i = 0; i < 6; ++i) t.push_back(i % 2 ? Rational(2, 3) : Rational(1, 3));
    CHECK(support(t, unit_capacity(c6)).size() == 6);
}

TEST_CASE("unit capacity reduction") {
    // single edge carrying 5/2 with f = 5: the residual demand 3 cannot be met
    auto k2 = path_graph(2);
    DemandProfile f{5, 5};
    auto r = reduce_to_unit_capacity(k2, f, {Rational(5, 2)});
    CHECK(r.t[0] == Rational(1, 2));
    CHECK(r.f == DemandProfile{3, 3});
    CHECK_FALSE(validate_perfect_fractional_matching(k2, r.f, unit_capacity(k2), r.t).ok);

    auto p3 = path_graph(3);
    DemandProfile fp{1, 2, 1};
    auto rp = reduce_to_unit_capacity(p3, fp, {Rational(1), Rational(1)});
    CHECK(rp.f == DemandProfile{0, 0, 0});
    CHECK(rp.t == FractionalAssignment{Rational(0), Rational(0)});
    CHECK(reassemble(rp, rp.t) == FractionalAssignment{Rational(1), Rational(1)});

    CHECK_THROWS(reduce_to_unit_capacity(k2, DemandProfile{1, 1}, {Rational(2)}));
}

TEST_CASE("line decomposition") {
    auto c4 = cycle_graph(4);
    auto d = line_decomposition({0, 1, 2, 3}, c4);
    REQUIRE(d.size() == 1);
    CHECK(d[0].cycle);
    CHECK(d[0].length() == 4);
    CHECK(d[0].color == std::vector<int>{0, 1, 0, 1});

    auto p4 = path_graph(4);
    auto two = line_decomposition({0, 2}, p4);
    REQUIRE(two.size() == 2);
    CHECK(!two[0].cycle);
    CHECK(two[0].length() == 1);
    CHECK(two[1].length() == 1);

    // 6-edge path on vertices 0..6 plus a disjoint 4-cycle on 7..10
    BipartiteGraph g;
    for (int i = 0; i < 11; ++i) g.add_vertex(i % 2 ? Side::right : Side::left);
    for (int i = 0; i < 6; ++i) g.add_edge(i, i + 1);
    g.add_edge(7, 8), g.add_edge(8, 9), g.add_edge(9, 10), g.add_edge(10, 7);
    EdgeSet all;
    for (int e = 0; e < g.num_edges(); ++e) all.push_back(e);
    auto pc = line_decomposition(all, g);
    REQUIRE(pc.size() == 2);
    CHECK((!pc[0].cycle && pc[0].length() == 6));
    CHECK((pc[1].cycle && pc[1].length() == 4));
    CHECK(pc[0].vertices.front() == 0);
    EdgeSet again;
    for (const auto& comp : pc) again.insert(again.end(), comp.edges.begin(), comp.edges.end());
    CHECK(make_edge_set(again) == all);

    auto k23 = complete_bipartite(2, 3);
    CHECK_THROWS(line_decomposition({0, 1, 2}, k23));
}

TEST_CASE("boundary edges") {
    auto k2 = path_graph(2);
    CHECK(boundary_edges(k2, {0, 1}).empty());
    CHECK(boundary_edges(k2, {0}) == EdgeSet{0});
    auto k23 = complete_bipartite(2, 3);
    CHECK(boundary_edges(k23, {0, 1}).size() == 6);
}

TEST_CASE("odd cycle detection") {
    BipartiteGraph tri(false);
    for (int i = 0; i < 3; ++i) tri.add_vertex(Side::left);
    tri.add_edge(0, 1), tri.add_edge(1, 2), tri.add_edge(2, 0);
    auto cyc = find_odd_cycle(tri);
    REQUIRE(cyc);
    CHECK(cyc->size() == 3);
    CHECK_FALSE(find_odd_cycle(cycle_graph(6)));
}

TEST_CASE("text format round trip") {
    GraphBundle b;
    b.g = cycle_graph(4);
    b.g.set_boundary(3, true);
    b.t = constant_assignment(b.g, Rational(1, 2));
    b.f = DemandProfile{1, 1, 1, 2};
    auto text = graph_to_string(b);
    std::istringstream in(text);
    auto back = read_graph(in);
    CHECK(graph_to_string(back) == text);
    CHECK(back.g.is_boundary(3));
    CHECK((*back.t)[2] == Rational(1, 2));
    CHECK(back.capacity() == CapacityProfile{1, 1, 1, 1});

    std::istringstream bad("bipartite 1 1 1\nv 0 L\nv 1 L\ne 0 0 1\n");
    CHECK_THROWS(read_graph(bad));
}
