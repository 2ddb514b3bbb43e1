#include "doctest.h"

#include "hypermatch/cayley.hpp"

#include <functional>
#include <set>

using namespace hm;

namespace {

CayleyGraph make(const FiniteGroup& d, int n, std::vector<CayleyGenerator> gens, bool general = false) {
    CayleySpec s;
    s.delta = d;
    s.period = n;
    s.generators = std::move(gens);
    return cayley_z_semidirect(s, general);
}

bool is_perfect(const BipartiteGraph& g, const EdgeSet& m) {
    std::vector<int> deg(g.num_vertices(), 0);
    for (int e : m) ++deg[g.edge(e).u], ++deg[g.edge(e).w];
    return std::all_of(deg.begin(), deg.end(), [](int d) { return d == 1; });
}

void all_perfect_matchings(const BipartiteGraph& g, const std::function<void(const EdgeSet&)>& visit) {
    std::vector<char> used(g.num_vertices(), 0);
    EdgeSet cur;
    std::function<void()> rec = [&] {
        int v = 0;
        while (v < g.num_vertices() && used[v]) ++v;
        if (v == g.num_vertices()) {
            visit(cur);
            return;
        }
        used[v] = 1;
        for (int e : g.incident(v)) {
            int w = g.other(e, v);
            if (used[w]) continue;
            used[w] = 1;
            cur.push_back(e);
            rec();
            cur.pop_back();
            used[w] = 0;
        }
        used[v] = 0;
    };
    rec();
}

}  // namespace

TEST_CASE("classification of Delta against the bipartition") {
    auto z2 = cyclic_group(2);
    auto split = classify_delta_bipartition(make(z2, 6, {{1, 0}, {-1, 0}, {0, 1}}));
    CHECK(split.tag == DeltaCase::split);
    CHECK(split.delta_prime == std::vector<int>{0});
    auto whole = classify_delta_bipartition(make(z2, 6, {{1, 0}, {-1, 0}, {1, 1}, {-1, 1}}));
    CHECK(whole.tag == DeltaCase::whole);
    CHECK(whole.delta_prime.size() == 2);
    CHECK(classify_delta_bipartition(make(trivial_group(), 6, {{1, 0}, {-1, 0}})).tag == DeltaCase::whole);
    // word-length parity oracle: BFS distance parity from the identity
    auto c = make(cyclic_group(4), 8, {{1, 0}, {-1, 0}, {0, 1}, {0, 3}});
    auto cls = classify_delta_bipartition(c);
    std::vector<int> dist(c.g.num_vertices(), -1);
    std::vector<int> q{c.id(0, 0)};
    dist[q[0]] = 0;
    for (std::size_t i = 0; i < q.size(); ++i)
        for (int e : c.g.incident(q[i])) {
            int w = c.g.other(e, q[i]);
            if (dist[w] < 0) dist[w] = dist[q[i]] + 1, q.push_back(w);
        }
    std::vector<int> even;
    for (int d = 0; d < 4; ++d)
        if (dist[c.id(0, d)] % 2 == 0) even.push_back(d);
    for (int d = 0; d < 4; ++d) CHECK(dist[c.id(0, d)] >= 0);
    CHECK(cls.delta_prime == even);
    CHECK(cls.tag == DeltaCase::split);
}

TEST_CASE("block templates") {
    auto z2 = cyclic_group(2);
    // split case, l = 1, m = 2: four copies matched 0-1 and 2-3 along sigma
    auto s = make(z2, 12, {{1, 0}, {-1, 0}, {0, 1}, {2, 1}, {-2, 1}});
    auto t1 = build_block(s, 1, 2);
    CHECK(t1.tag == DeltaCase::split);
    CHECK_FALSE(t1.half_copies);
    CHECK(t1.span() == 4);
    CHECK(t1.vertices.size() == 8);
    std::set<std::pair<int, int>> copies;
    for (auto [a, b] : t1.matching) copies.insert({s.copy_of(a), s.copy_of(b)});
    CHECK(copies == std::set<std::pair<int, int>>{{0, 1}, {2, 3}});
    CHECK(validate_block(s, t1).empty());

    // whole case, l = 1, m = 2: four full copies plus half copies at both ends
    auto w = make(z2, 12, {{1, 0}, {-1, 0}, {1, 1}, {-1, 1}});
    auto t2 = build_block(w, 1, 2);
    CHECK(t2.tag == DeltaCase::whole);
    CHECK(t2.half_copies);
    CHECK(t2.first_copy == -1);
    CHECK(t2.last_copy == 4);
    CHECK(t2.vertices.size() == 10);
    // each full copy: one vertex matched forward, one backward; end copies only inward
    for (int copy = -1; copy <= 4; ++copy) {
        int fwd = 0, bwd = 0;
        for (auto [a, b] : t2.matching) {
            int ca = w.copy_of(a), cb = w.copy_of(b);
            int ref = ((copy % 12) + 12) % 12;
            if (ca == ref) (cb == (ref + 1) % 12 ? fwd : bwd)++;
            if (cb == ref) (ca == (ref + 1) % 12 ? fwd : bwd)++;
        }
        if (copy == -1) CHECK((fwd == 1 && bwd == 0));
        else if (copy == 4) CHECK((fwd == 0 && bwd == 1));
        else CHECK((fwd == 1 && bwd == 1));
    }

    // trivial Delta, sigma = gamma: an even path block of consecutive pairs
    auto p = make(trivial_group(), 10, {{1, 0}, {-1, 0}});
    auto t3 = build_block(p, 1, 2);
    CHECK(t3.vertices == std::vector<int>{0, 1, 2, 3});
    CHECK(t3.matching == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}});

    CHECK_THROWS_AS(build_block(p, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(build_block(p, 0, 1), std::invalid_argument);
}

TEST_CASE("blocks and gaps") {
    auto z2 = cyclic_group(2);
    auto c = make(z2, 200, {{1, 0}, {-1, 0}, {0, 1}});
    auto [l, m] = generator_reach(c);
    auto t = build_block(c, l, m);
    auto r = blocks_and_gaps_matching(c, 20, t);
    CHECK(r.ok);
    CHECK(r.anchors.size() == 10);
    CHECK(r.gaps == 10);
    CHECK(is_perfect(c.g, r.matching));

    // Z/4 with shifts 1 and 3: spacing 9 leaves gaps that fail Hall
    auto z4 = make(cyclic_group(4), 200, {{1, 1}, {-1, 3}, {3, 2}, {-3, 2}});
    auto [l4, m4] = generator_reach(z4);
    auto t4 = build_block(z4, l4, m4);
    auto bad = blocks_and_gaps_matching(z4, 9, t4);
    CHECK_FALSE(bad.ok);
    REQUIRE_FALSE(bad.failures.empty());
    const auto& cert = bad.failures[0].certificate;
    std::set<int> gap(bad.failures[0].vertices.begin(), bad.failures[0].vertices.end());
    std::set<int> nb;
    for (int v : cert.s) {
        CHECK(gap.count(v));
        for (int e : z4.g.incident(v))
            if (gap.count(z4.g.other(e, v))) nb.insert(z4.g.other(e, v));
    }
    CHECK(nb.size() < cert.s.size());
    auto sp = find_spacing(z4, t4, 200);
    CHECK(sp.k0 > 0);
    for (int k = sp.k0; k <= 2 * sp.k0; ++k) CHECK(blocks_and_gaps_matching(z4, k, t4).ok);

    // trivial Delta on an even cycle: consecutive pairs everywhere
    auto cyc = make(trivial_group(), 40, {{1, 0}, {-1, 0}});
    auto tc = build_block(cyc, 1, 1);
    auto rc = blocks_and_gaps_matching(cyc, 4, tc);
    CHECK(rc.ok);
    CHECK(is_perfect(cyc.g, rc.matching));
    CHECK_THROWS_AS(blocks_and_gaps_matching(c, 1, t), std::invalid_argument);
}

TEST_CASE("odd Delta parity obstruction") {
    auto z3 = cyclic_group(3);
    auto odd = make(z3, 5, {{1, 1}, {-1, 2}}, true);
    auto r = odd_delta_obstruction(odd);
    CHECK(r.applies);
    CHECK(r.vertex_count_odd);
    REQUIRE(r.matching_exists);
    CHECK_FALSE(*r.matching_exists);

    auto even = make(z3, 4, {{1, 1}, {-1, 2}});
    auto e = odd_delta_obstruction(even);
    CHECK(e.applies);
    REQUIRE(e.matching_exists);
    CHECK(*e.matching_exists);
    CHECK(e.induced_valid);
    CHECK(e.induced.size() == 2);

    // exhaustive: every perfect matching of small odd-Delta quotients induces
    // a perfect matching of the copy cycle
    for (auto gens : std::vector<std::vector<CayleyGenerator>>{{{1, 1}, {-1, 2}}, {{1, 0}, {-1, 0}, {1, 1}, {-1, 2}}}) {
        for (int n : {4, 6}) {
            auto c = make(z3, n, gens);
            int count = 0;
            all_perfect_matchings(c.g, [&](const EdgeSet& m) {
                ++count;
                auto par = cut_parities(c, m);
                for (int i = 0; i < n; ++i) CHECK(par[(i + n - 1) % n] + par[i] == 1);
            });
            CHECK(count > 0);
        }
    }

    auto z2 = odd_delta_obstruction(make(cyclic_group(2), 6, {{1, 0}, {-1, 0}, {0, 1}}));
    CHECK_FALSE(z2.applies);
}
