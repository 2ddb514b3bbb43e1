#include "doctest.h"
#include "helpers.hpp"

#include "hypermatch/equidecomp.hpp"
#include "hypermatch/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

using namespace hm;

namespace {

TorusSpec identity_spec(int n) {
    TorusSpec s;
    s.d = 2;
    s.n = n;
    s.translations = {{1, 0}, {0, 1}};
    s.determinant = 1;
    s.transitive = true;
    return s;
}

PointSet shifted(PointSet p, int dx, int dy, int n) {
    for (auto& q : p) q[0] = (q[0] + dx + n) % n, q[1] = (q[1] + dy + n) % n;
    return p;
}

// Independent partition check: multiset equality of A and of translated pieces with B.
bool partitions(const PointSet& a, const PointSet& b, const PieceDecomposition& dec) {
    std::multiset<Point> from_a, to_b, bset(b.begin(), b.end()), aset(a.begin(), a.end());
    for (const auto& pc : dec.pieces)
        for (int i : pc.members) {
            from_a.insert(a[i]);
            Point q = a[i];
            for (std::size_t t = 0; t < q.size(); ++t) q[t] = ((q[t] + pc.translation[t]) % dec.n + dec.n) % dec.n;
            to_b.insert(q);
        }
    return from_a == aset && to_b == bset;
}

}  // namespace

TEST_CASE("uniform spread witness") {
    int n = 16;
    auto lat = density_lattice(2, n, Rational(1, 16));
    CHECK(lat.size() == 16);
    auto w0 = uniform_spread_witness(lat, n, Rational(1, 16), 4);
    CHECK(w0.ok);
    CHECK(w0.radius == 0);
    auto w1 = uniform_spread_witness(shifted(lat, 1, 0, n), n, Rational(1, 16), 4);
    CHECK(w1.ok);
    CHECK(w1.radius == 1);
    CHECK(w1.max_sq == 1);

    auto far = shifted(lat, 2, 2, n);
    auto bad = uniform_spread_witness(far, n, Rational(1, 16), 2);
    CHECK_FALSE(bad.ok);
    REQUIRE(bad.certificate);
    CHECK(bad.sweep.size() == 3);

    CHECK_THROWS_AS(uniform_spread_witness(lat, n, Rational(1, 8), 4), std::invalid_argument);
    CHECK_THROWS_AS(uniform_spread_witness(lat, n, Rational(1, 4), 4), std::invalid_argument);

    // brute force over all bijections on a 4x4 torus with spacing 2
    Rng rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        std::set<Point> pick;
        while (pick.size() < 4) pick.insert(Point{static_cast<int>(rng.below(4)), static_cast<int>(rng.below(4))});
        PointSet a(pick.begin(), pick.end());
        auto l4 = density_lattice(2, 4, Rational(1, 4));
        std::vector<int> perm{0, 1, 2, 3};
        long best = -1;
        do {
            long worst = 0;
            for (int i = 0; i < 4; ++i) {
                long s = 0;
                for (int t = 0; t < 2; ++t) {
                    int x = ((l4[perm[i]][t] - a[i][t]) % 4 + 4) % 4;
                    x = std::min(x, 4 - x);
                    s += x * x;
                }
                worst = std::max(worst, s);
            }
            if (best < 0 || worst < best) best = worst;
        } while (std::next_permutation(perm.begin(), perm.end()));
        int radius = 0;
        while (radius * radius < best) ++radius;
        auto w = uniform_spread_witness(a, 4, Rational(1, 4), 4);
        REQUIRE(w.ok);
        CHECK(w.radius == radius);
    }
}

TEST_CASE("component ends heuristic") {
    auto cyc = testing::cycle_graph(200);
    auto e1 = classify_components(cyc, nullptr);
    REQUIRE(e1.size() == 1);
    CHECK(e1[0] == EndKind::two_ended);
    auto grid = grid_torus(2, 40);
    auto e2 = classify_components(grid.g, nullptr);
    REQUIRE(e2.size() == 1);
    CHECK(e2[0] == EndKind::one_ended);
    CHECK(classify_components(testing::cycle_graph(10), nullptr)[0] == EndKind::finite);
}

TEST_CASE("constant fractional matching") {
    int n = 32;
    Rational alpha(1, 16);
    auto lat = density_lattice(2, n, alpha);
    auto w = uniform_spread_witness(lat, n, alpha, 4);
    auto id = constant_fractional_matching(lat, lat, n, w, w, 0);
    REQUIRE(id.ok);
    CHECK(id.chain.k == 0);
    CHECK(id.chain.l == 0);
    CHECK(id.r == 1);
    CHECK(id.gl.g.num_edges() == 64);
    for (const auto& x : id.phi) CHECK(x == 1);

    auto a = shifted(lat, 1, 0, n);
    auto wa = uniform_spread_witness(a, n, alpha, 4);
    auto cm = constant_fractional_matching(a, lat, n, wa, w);
    REQUIRE(cm.ok);
    CHECK(cm.chain.spread == 1);
    CHECK(cm.chain.k > 1);
    CHECK(cm.chain.n2 == cm.chain.k + 1);
    CHECK(cm.chain.l == cm.chain.k + 2);
    // lattice kissing count at n2, counted directly
    int count = 0;
    for (int x = -n; x <= n; x += 4)
        for (int y = -n; y <= n; y += 4) count += x * x + y * y <= cm.chain.n2 * cm.chain.n2;
    CHECK(cm.r == count);
    CHECK(cm.value == Rational(1, count));
    CHECK(cm.valid);
    CHECK(cm.constant_on_gk);
    CHECK(cm.gk_edges > 0);
    CHECK(cm.gk_components == 1);
    // every a sees exactly r partners at value 1/r
    std::vector<int> seen(a.size(), 0);
    for (int e = 0; e < cm.gl.g.num_edges(); ++e)
        if (cm.phi[e] > 0) ++seen[cm.gl.g.edge(e).u];
    for (int s : seen) CHECK(s == cm.r);

    auto tiny = constant_fractional_matching(a, lat, n, wa, w, 14);
    CHECK_FALSE(tiny.ok);
    CHECK(tiny.reason.find("window too small") != std::string::npos);
}

TEST_CASE("equidecompose trivial cases") {
    int n = 32;
    auto spec = identity_spec(n);
    SquaringOptions o;
    o.alpha = Rational(1, 16);
    o.k = 0;
    auto lat = density_lattice(2, n, o.alpha);
    auto id = equidecompose(lat, lat, spec, o);
    REQUIRE(id.ok);
    REQUIRE(id.dec.pieces.size() == 1);
    CHECK(id.dec.pieces[0].word == Point{0, 0});
    CHECK(id.dec.pieces[0].translation == Point{0, 0});

    auto a = shifted(lat, 1, 0, n);
    auto sh = equidecompose(a, lat, spec, o);
    REQUIRE(sh.ok);
    REQUIRE(sh.dec.pieces.size() == 1);
    CHECK(sh.dec.pieces[0].word == Point{-1, 0});
    CHECK(sh.dec.pieces[0].translation == Point{n - 1, 0});
    CHECK(partitions(a, lat, sh.dec));
}

TEST_CASE("disc and square equidecomposition") {
    auto ds = disc_square_sets(64, Rational(1, 4), 1);
    SquaringOptions o;
    o.alpha = Rational(1, 4);
    o.seed = 1;
    auto e = equidecompose(ds.a, ds.b, ds.spec, o);
    REQUIRE(e.ok);
    CHECK(e.integral);
    CHECK(e.partition_error.empty());
    CHECK(partitions(ds.a, ds.b, e.dec));
    CHECK(e.words_in_ball);
    CHECK(static_cast<long>(e.dec.pieces.size()) <= e.ball_size);
    CHECK(e.cfm.constant_on_gk);
    CHECK(e.cfm.chain.spread < e.cfm.chain.k);
    CHECK(e.cfm.chain.k < e.cfm.chain.n2);
    CHECK(e.cfm.chain.n2 < e.cfm.chain.l);
    // every piece translation is its word applied to the generators
    for (const auto& pc : e.dec.pieces) {
        Point t(2, 0);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) t[j] = (int)((t[j] + (long)pc.word[i] * ds.spec.translations[i][j] % 64 + 64 * 64) % 64);
        CHECK(t == pc.translation);
    }
    // rerun is identical
    auto again = equidecompose(ds.a, ds.b, ds.spec, o);
    CHECK(again.dec.matching == e.dec.matching);

    // tampering breaks the partition check
    auto bad = e.dec;
    bad.pieces[0].translation[0] = (bad.pieces[0].translation[0] + 1) % 64;
    CHECK_FALSE(validate_pieces(ds.a, ds.b, bad).empty());

    std::ostringstream svg;
    write_pieces_svg(svg, ds.a, e.dec);
    auto text = svg.str();
    CHECK(text.rfind("<svg", 0) == 0);
    long circles = 0;
    for (std::size_t p = text.find("<circle"); p != std::string::npos; p = text.find("<circle", p + 1)) ++circles;
    CHECK(circles == static_cast<long>(ds.a.size()));
}

TEST_CASE("combining two equidecompositions") {
    auto ds = disc_square_sets(64, Rational(1, 4), 1);
    SquaringOptions o;
    o.alpha = Rational(1, 4);
    auto s2 = random_torus_spec(64, 99);
    auto e1 = equidecompose(ds.a, ds.b, ds.spec, o);
    auto e2 = equidecompose(ds.a, ds.b, s2, o);
    REQUIRE(e1.ok);
    REQUIRE(e2.ok);

    auto same = combine_equidecompositions(ds.a, ds.b, e1, ds.spec, e1, ds.spec);
    CHECK(same.ok);
    CHECK(same.same_as_first);
    CHECK(same.h_edges == static_cast<long>(ds.a.size()));

    for (bool relax : {false, true}) {
        auto c = combine_equidecompositions(ds.a, ds.b, e1, ds.spec, e2, s2, relax);
        REQUIRE(c.ok);
        CHECK(c.integral);
        CHECK(partitions(ds.a, ds.b, c.dec));
        CHECK(c.generators_used.size() <= 4);
        for (const auto& u : c.generators_used)
            CHECK((std::find(ds.spec.translations.begin(), ds.spec.translations.end(), u) != ds.spec.translations.end() ||
                   std::find(s2.translations.begin(), s2.translations.end(), u) != s2.translations.end()));
        CHECK(c.finite + c.two_ended + c.one_ended > 0);
    }
}

TEST_CASE("spread radii on the disc and square family") {
    // frozen regression table for density 1/16; per-n translation vectors are
    // drawn independently, so the radius need not shrink as n grows
    const std::map<int, std::vector<std::pair<int, int>>> frozen{
        {1, {{8, 8}, {5, 5}, {5, 4}}},
        {2, {{5, 5}, {5, 5}, {7, 7}}},
        {3, {{6, 6}, {5, 6}, {8, 7}}},
    };
    for (const auto& [seed, radii] : frozen) {
        int i = 0;
        for (int n : {64, 128, 256}) {
            auto ds = disc_square_sets(n, Rational(1, 16), seed);
            auto wa = uniform_spread_witness(to_orbit_coordinates(ds.a, ds.spec), n, Rational(1, 16), 32);
            auto wb = uniform_spread_witness(to_orbit_coordinates(ds.b, ds.spec), n, Rational(1, 16), 32);
            CHECK(wa.radius == radii[i].first);
            CHECK(wb.radius == radii[i].second);
            ++i;
        }
    }
}
