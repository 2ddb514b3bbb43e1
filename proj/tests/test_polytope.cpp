#include "doctest.h"
#include "helpers.hpp"

#include "hypermatch/flow.hpp"
#include "hypermatch/polytope.hpp"

#include <random>

using namespace hm;
using namespace hm::testing;

namespace {

BipartiteGraph random_bipartite(std::mt19937_64& rng, int nl, int nr, double p) {
    BipartiteGraph g;
    for (int i = 0; i < nl; ++i) g.add_vertex(Side::left);
    for (int j = 0; j < nr; ++j) g.add_vertex(Side::right);
    std::bernoulli_distribution coin(p);
    for (int i = 0; i < nl; ++i)
        for (int j = 0; j < nr; ++j)
            if (coin(rng)) g.add_edge(i, nl + j);
    return g;
}

EdgeSet all_edges(const BipartiteGraph& g) {
    EdgeSet s;
    for (int e = 0; e < g.num_edges(); ++e) s.push_back(e);
    return s;
}

}  // namespace

TEST_CASE("disjoint cycles") {
    auto tree = path_graph(6);
    CHECK(find_disjoint_cycles(all_edges(tree), tree).empty());

    BipartiteGraph two;
    for (int i = 0; i < 8; ++i) two.add_vertex(i % 2 ? Side::right : Side::left);
    for (int b : {0, 4})
        for (int i = 0; i < 4; ++i) two.add_edge(b + i, b + (i + 1) % 4);
    auto cs = find_disjoint_cycles(all_edges(two), two);
    REQUIRE(cs.size() == 2);
    CHECK(cs[0].length() == 4);
    CHECK(cs[0].edges.front() == 0);

    // theta graph: poles 0 and 1 joined by three 2-paths through 2, 3, 4
    BipartiteGraph theta;
    theta.add_vertex(Side::left), theta.add_vertex(Side::left);
    for (int i = 0; i < 3; ++i) theta.add_vertex(Side::right);
    for (int m = 2; m <= 4; ++m) theta.add_edge(0, m), theta.add_edge(m, 1);
    auto tc = find_disjoint_cycles(all_edges(theta), theta);
    REQUIRE(tc.size() == 1);
    CHECK(tc[0].vertices == std::vector<int>{0, 2, 1, 3});
}

TEST_CASE("alternating circuits") {
    auto c4 = cycle_graph(4);
    auto cyc = cycle_from_edges(c4, {0, 1, 2, 3});
    auto half = constant_assignment(c4, Rational(1, 2));
    auto plus = apply_alternating_circuit(half, {cyc, Rational(1, 2), 1});
    CHECK(plus == FractionalAssignment{1, 0, 1, 0});
    auto minus = apply_alternating_circuit(half, {cyc, Rational(1, 2), -1});
    CHECK(minus == FractionalAssignment{0, 1, 0, 1});
    CHECK(apply_alternating_circuit(plus, {cyc, Rational(1, 2), -1}) == half);

    auto c6 = cycle_graph(6);
    auto third = constant_assignment(c6, Rational(1, 3));
    auto r = apply_alternating_circuit(third, {cycle_from_edges(c6, {0, 1, 2, 3, 4, 5}), Rational(1, 3), 1});
    CHECK(r == FractionalAssignment{Rational(2, 3), 0, Rational(2, 3), 0, Rational(2, 3), 0});

    try {
        apply_alternating_circuit(third, {cycle_from_edges(c6, {0, 1, 2, 3, 4, 5}), Rational(1, 2), 1});
        FAIL("expected a range error");
    } catch (const RangeError& err) {
        CHECK(err.edge == 1);
    }
}

TEST_CASE("descent on random bipartite graphs ends integral") {
    std::mt19937_64 rng(3);
    int feasible = 0;
    for (int trial = 0; trial < 300; ++trial) {
        int nl = 2 + static_cast<int>(rng() % 12);
        auto g = random_bipartite(rng, nl, nl, 0.2 + 0.1 * static_cast<double>(trial % 6));
        auto f = unit_demand(g);
        auto c = unit_capacity(g);
        auto fr = perfect_fractional_f_matching(g, f, c);
        bool perfect = 2 * maximum_matching_size(g) == g.num_vertices();
        REQUIRE(fr.ok() == perfect);
        if (!fr.ok()) continue;
        ++feasible;
        auto rep = descend_to_extreme(*fr.assignment, g, f, c);
        CHECK(support(rep.chi, c).empty());
        CHECK(validate_perfect_fractional_matching(g, f, c, rep.chi).ok);
        for (int e = 0; e < g.num_edges(); ++e) CHECK(abs(rep.chi[e] - (*fr.assignment)[e]) < 1);
    }
    CHECK(feasible > 50);
}

TEST_CASE("descent with boundary paths and marked cycles") {
    auto p = path_graph(4);
    p.set_boundary(0, true);
    p.set_boundary(3, true);
    auto half = constant_assignment(p, Rational(1, 2));
    auto rep = descend_to_extreme(half, p, unit_demand(p), unit_capacity(p));
    CHECK(support(rep.chi, unit_capacity(p)).empty());
    CHECK(validate_perfect_fractional_matching(p, unit_demand(p), unit_capacity(p), rep.chi).ok);

    auto c8 = cycle_graph(8);
    DescentOptions opts;
    opts.half_snap = true;
    opts.marked_cycles = {all_edges(c8)};
    auto fixed = descend_to_extreme(constant_assignment(c8, Rational(1, 2)), c8, unit_demand(c8), unit_capacity(c8), opts);
    CHECK(fixed.chi == constant_assignment(c8, Rational(1, 2)));
    CHECK(fixed.lines == all_edges(c8));
    REQUIRE(fixed.one_lined.size() == 1);
    CHECK(fixed.one_lined[0]);

    // alternating 1/3, 2/3 on a marked cycle snaps to 1/2
    FractionalAssignment alt;
    for (int i = 0; i < 8; ++i) alt.push_back(i % 2 ? Rational(2, 3) : Rational(1, 3));
    auto snapped = descend_to_extreme(alt, c8, unit_demand(c8), unit_capacity(c8), opts);
    CHECK(snapped.snapped == 1);
    CHECK(snapped.chi == constant_assignment(c8, Rational(1, 2)));
    opts.half_snap = false;
    auto kept = descend_to_extreme(alt, c8, unit_demand(c8), unit_capacity(c8), opts);
    CHECK(kept.chi == alt);
    CHECK(kept.lines.empty());

    // unmarked: integral
    auto plain = descend_to_extreme(alt, c8, unit_demand(c8), unit_capacity(c8));
    CHECK(support(plain.chi, unit_capacity(c8)).empty());
}

TEST_CASE("random sign rule keeps the mean") {
    auto c4 = cycle_graph(4);
    FractionalAssignment t{Rational(1, 4), Rational(3, 4), Rational(1, 4), Rational(3, 4)};
    int ones = 0;
    const int trials = 4000;
    for (int s = 0; s < trials; ++s) {
        Rng rng(s);
        DescentOptions o;
        o.rule = SignRule::random;
        o.rng = &rng;
        auto r = descend_to_extreme(t, c4, unit_demand(c4), unit_capacity(c4), o);
        ones += r.chi[0] == 1;
    }
    double freq = static_cast<double>(ones) / trials;
    CHECK(freq == doctest::Approx(0.25).epsilon(0.15));
}

TEST_CASE("half lines and one-lined flags") {
    BipartiteGraph g;
    for (int i = 0; i < 8; ++i) g.add_vertex(i % 2 ? Side::right : Side::left);
    for (int b : {0, 4})
        for (int i = 0; i < 4; ++i) g.add_edge(b + i, b + (i + 1) % 4);
    g.add_edge(1, 4);
    FractionalAssignment chi(g.num_edges(), Rational(1, 2));
    chi[8] = 0;
    auto rep = make_report(g, chi);
    auto h = extract_half_lines(rep, g);
    CHECK(h.lines.size() == 2);
    REQUIRE(h.one_lined.size() == 1);
    CHECK_FALSE(h.one_lined[0]);

    auto c4 = cycle_graph(4);
    auto one = extract_half_lines(make_report(c4, constant_assignment(c4, Rational(1, 2))), c4);
    CHECK(one.one_lined[0]);
    auto none = extract_half_lines(make_report(c4, FractionalAssignment{1, 0, 1, 0}), c4);
    CHECK(none.lines.empty());
    CHECK_FALSE(none.one_lined[0]);
}
