#include "doctest.h"
#include "helpers.hpp"

#include "hypermatch/flow.hpp"

#include <random>

using namespace hm;
using namespace hm::testing;

namespace {

std::vector<int> parity_degrees(const BipartiteGraph& g, const EdgeSet& h) {
    std::vector<int> deg(g.num_vertices(), 0);
    for (int e : h) ++deg[g.edge(e).u], ++deg[g.edge(e).w];
    return deg;
}

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

}  // namespace

TEST_CASE("integral perfect matching") {
    auto k33 = complete_bipartite(3, 3);
    auto r = perfect_f_matching(k33, unit_demand(k33), unit_capacity(k33));
    REQUIRE(r.ok());
    int ones = 0;
    for (const auto& v : *r.assignment) ones += v == 1;
    CHECK(ones == 3);
    CHECK(validate_perfect_fractional_matching(k33, unit_demand(k33), unit_capacity(k33), *r.assignment).ok);

    auto c4 = cycle_graph(4);
    auto a = perfect_f_matching(c4, unit_demand(c4), unit_capacity(c4));
    auto b = perfect_f_matching(c4, unit_demand(c4), unit_capacity(c4));
    REQUIRE(a.ok());
    CHECK(*a.assignment == *b.assignment);
}

TEST_CASE("star K13 yields a Hall certificate") {
    auto star = complete_bipartite(1, 3);
    auto r = perfect_f_matching(star, unit_demand(star), unit_capacity(star));
    REQUIRE_FALSE(r.ok());
    CHECK(r.certificate->side == Side::right);
    CHECK(r.certificate->s.size() == 2);
    CHECK(r.certificate->deficit == 1);
    CHECK(deficiency_of(star, unit_demand(star), unit_capacity(star), r.certificate->s) == 1);

    auto fr = perfect_fractional_f_matching(star, unit_demand(star), unit_capacity(star));
    CHECK_FALSE(fr.ok());
}

TEST_CASE("fractional matching by scaling") {
    auto c4 = cycle_graph(4);
    FractionalOptions opt;
    opt.denominator = 2;
    auto r = perfect_fractional_f_matching(c4, unit_demand(c4), unit_capacity(c4), opt);
    REQUIRE(r.ok());
    CHECK(*r.assignment == constant_assignment(c4, Rational(1, 2)));

    auto k33 = complete_bipartite(3, 3);
    FractionalOptions uni;
    uni.uniform = true;
    auto u = perfect_fractional_f_matching(k33, unit_demand(k33), unit_capacity(k33), uni);
    REQUIRE(u.ok());
    CHECK(*u.assignment == constant_assignment(k33, Rational(1, 3)));
    // the default denominator 2*maxdeg with the min-max rule also lands on 1/3
    auto d = perfect_fractional_f_matching(k33, unit_demand(k33), unit_capacity(k33));
    CHECK(*d.assignment == constant_assignment(k33, Rational(1, 3)));
}

TEST_CASE("boundary vertices may stay unsaturated") {
    auto p = path_graph(3);
    p.set_boundary(2, true);
    auto r = perfect_f_matching(p, unit_demand(p), unit_capacity(p));
    REQUIRE(r.ok());
    CHECK(validate_perfect_fractional_matching(p, unit_demand(p), unit_capacity(p), *r.assignment).ok);
}

TEST_CASE("parity subgraph examples") {
    auto p3 = path_graph(3);
    CHECK(parity_subgraph(p3, {}).empty());
    CHECK(parity_subgraph(p3, {0, 2}) == EdgeSet{0, 1});

    BipartiteGraph tri(false);
    for (int i = 0; i < 3; ++i) tri.add_vertex(Side::left);
    tri.add_edge(0, 1), tri.add_edge(1, 2), tri.add_edge(2, 0);
    auto h = parity_subgraph(tri, {0, 1});
    auto deg = parity_degrees(tri, h);
    CHECK(deg[0] % 2 == 1);
    CHECK(deg[1] % 2 == 1);
    CHECK(deg[2] % 2 == 0);

    CHECK_THROWS(parity_subgraph(p3, {0}));
    BipartiteGraph two;
    two.add_vertex(Side::left), two.add_vertex(Side::right);
    CHECK_THROWS(parity_subgraph(two, {0, 1}));
}

TEST_CASE("parity subgraph on all connected graphs with five vertices") {
    const int n = 5;
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    int checked = 0;
    for (int mask = 0; mask < (1 << pairs.size()); ++mask) {
        BipartiteGraph g(false);
        for (int i = 0; i < n; ++i) g.add_vertex(Side::left);
        for (std::size_t k = 0; k < pairs.size(); ++k)
            if (mask >> k & 1) g.add_edge(pairs[k].first, pairs[k].second);
        int comps = 0;
        component_labels(g, nullptr, &comps);
        if (comps != 1) continue;
        for (int s = 0; s < (1 << n); ++s) {
            if (__builtin_popcount(s) % 2) continue;
            VertexSet ns;
            for (int v = 0; v < n; ++v)
                if (s >> v & 1) ns.push_back(v);
            auto deg = parity_degrees(g, parity_subgraph(g, ns));
            for (int v = 0; v < n; ++v) REQUIRE(deg[v] % 2 == (s >> v & 1));
            ++checked;
        }
    }
    CHECK(checked == 728 * 16);
}

TEST_CASE("flow agrees with augmenting-path matching") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        int nl = 1 + static_cast<int>(rng() % 8), nr = nl + static_cast<int>(rng() % 2);
        auto g = random_bipartite(rng, nl, nr, 0.35);
        auto r = perfect_f_matching(g, unit_demand(g), unit_capacity(g));
        bool perfect = 2 * maximum_matching_size(g) == g.num_vertices();
        REQUIRE(r.ok() == perfect);
        if (r.ok()) CHECK(validate_perfect_fractional_matching(g, unit_demand(g), unit_capacity(g), *r.assignment).ok);
        else CHECK(deficiency_of(g, unit_demand(g), unit_capacity(g), r.certificate->s) > 0);
    }
}

TEST_CASE("vertex-set accounting identity") {
    std::mt19937_64 rng(11);
    int tested = 0;
    for (int trial = 0; trial < 100 && tested < 25; ++trial) {
        auto g = random_bipartite(rng, 5, 5, 0.6);
        auto r = perfect_fractional_f_matching(g, unit_demand(g), unit_capacity(g));
        if (!r.ok()) continue;
        ++tested;
        const auto& t = *r.assignment;
        for (int w = 0; w < (1 << 10); w += 37) {
            VertexSet ws;
            for (int v = 0; v < 10; ++v)
                if (w >> v & 1) ws.push_back(v);
            auto in = mask_of(ws, 10);
            Rational lhs = static_cast<long>(ws.size()), rhs = 0;
            for (int e : boundary_edges(g, ws)) rhs += t[e];
            for (int e = 0; e < g.num_edges(); ++e)
                if (in[g.edge(e).u] && in[g.edge(e).w]) rhs += 2 * t[e];
            CHECK(lhs == rhs);
        }
    }
    CHECK(tested > 0);
}

TEST_CASE("maximal support") {
    auto c4 = cycle_graph(4);
    auto ms = maximal_support(c4, unit_demand(c4), unit_capacity(c4));
    CHECK(ms.edges == EdgeSet{0, 1, 2, 3});
    CHECK(ms.witness == constant_assignment(c4, Rational(1, 2)));

    auto k2 = path_graph(2);
    CHECK(maximal_support(k2, unit_demand(k2), unit_capacity(k2)).edges.empty());

    // a 4-cycle hanging off a pendant path forces the pendant edges
    BipartiteGraph g;
    for (int i = 0; i < 6; ++i) g.add_vertex(i % 2 ? Side::right : Side::left);
    g.add_edge(0, 1), g.add_edge(1, 2), g.add_edge(2, 3), g.add_edge(3, 4), g.add_edge(4, 1);
    g.add_edge(0, 5);
    auto ms2 = maximal_support(g, unit_demand(g), unit_capacity(g));
    CHECK(ms2.edges == EdgeSet{1, 2, 3, 4});
    CHECK(ms2.edges == support(ms2.witness, unit_capacity(g)));
    CHECK_THROWS_AS(maximal_support(complete_bipartite(1, 3), DemandProfile(4, 1), CapacityProfile(3, 1)),
                    InfeasibleError);
}
