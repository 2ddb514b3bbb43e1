#pragma once

#include "hypermatch/graph.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hm {

using Point = std::vector<int>;
using PointSet = std::vector<Point>;

// A graph plus optional geometry: integer coordinates per vertex, a
// displacement label per edge and a linear "strip" coordinate per vertex
// (used as the sweep order for cutsets on two-ended pieces).
struct WindowGraph {
    BipartiteGraph g;
    int dim = 0;
    PointSet coords;
    PointSet labels;
    std::vector<int> strip;
    int collapsed_edges = 0;
};

struct RotationGraph {
    BipartiteGraph g;  // general mode unless every cycle is even
    int n = 0;
    int p = 0;
    bool bipartite = false;
    int components = 0;
    int cycle_length = 0;
    std::vector<int> position;  // index of x along its cycle
};

// x ~ x+p on Z/n. Throws when the cycles would have length 2.
RotationGraph rotation_graph(int n, int p);

struct Gadget {
    int x = 0;
    int y = 0;                     // x + q mod n
    std::array<int, 4> cycle{};    // a, b, c, d in cyclic order; a joined to x, c to y
    std::array<int, 4> cycle_edges{};
    std::array<int, 2> connectors{};
};

struct GadgetGraph {
    BipartiteGraph g;
    std::vector<Gadget> gadgets;
    EdgeSet base_edges;
    EdgeSet forced_edges;      // connectors: zero in every perfect (fractional) matching
    FractionalAssignment tau;  // 1/2 on base edges, a perfect matching on each 4-cycle
};

// Replaces the beta-edges (x, x+q), taken greedily as a matching in order of
// x, by 4-cycles attached through two opposite vertices. max_gadgets < 0
// means no limit.
GadgetGraph gadget_graph(const RotationGraph& base, int q, int max_gadgets = -1);

// Periodic grid on prod Z/sides[i]. Bipartite mode iff every side is even.
// A side of 2 makes the +1 and -1 neighbours coincide; such edges are kept
// once and counted in collapsed_edges. Sides of 1 are rejected.
WindowGraph grid_torus(const std::vector<int>& sides);
WindowGraph grid_torus(int d, int n);

// L1 ball of radius r in Z^d; the sphere |x|_1 = r is the boundary.
WindowGraph grid_ball_window(int d, int r);

// w x h grid with its outer frame marked as boundary; strip = x.
WindowGraph grid_box(int w, int h);

// count vertex-disjoint staircase lines on a grid_box window, each running
// down and to the right along an anti-diagonal from boundary to boundary.
EdgeSet staircase_lines(const WindowGraph& box, int count, std::uint64_t seed);

// rails parallel paths of the given length joined by rungs; the two end
// columns are boundary; strip = position along the rails.
WindowGraph ladder(int length, int rails);

// Bipartite circulant: left i joined to right (i + s) mod n for each offset s.
WindowGraph bipartite_circulant(int n, const std::vector<int>& offsets);

// d distinct offsets drawn uniformly from Z/n.
std::vector<int> random_offsets(int n, int d, std::uint64_t seed);

// A fractional matching tau together with an extreme point chi whose
// half-valued part is a set of lines.
struct LineSubstrate {
    WindowGraph w;
    FractionalAssignment tau;
    FractionalAssignment chi;
    EdgeSet lines;
    std::vector<std::vector<int>> marks;  // lines closed into cycles (line-quotient marks)
    int cyclic_period = 0;                // > 0 when strip coordinates wrap
};

// n x h torus (n, h even, h >= 4). Rows 0 and 1 form a ladder ring with tau
// 1/3 on its rails and rungs; chi is 1/2 on both rails (marked cycles) and
// 0 on the rungs. The other rows carry vertical dominoes with tau = chi.
LineSubstrate ladder_ring_substrate(int n, int h);

// ladder(length, rails) with rails in {2, 3}: chi is 1/2 on every rail (lines
// ending on the boundary columns) and 0 on the rungs; tau is 1/3 on rungs and
// outer rails and 1/6 on a middle rail.
LineSubstrate ladder_box_substrate(int length, int rails);

// Pseudo-line with chords: a marked ring v_0..v_{n-1} (chi = 1/2) and, for
// each class c in {0, 1}, rails_per_class rings u_0..u_{n-1} joined to the
// line by rungs v_i u_i. Rail edges u_i u_{i+1} with i = c mod 2 carry chi = 1,
// the rest 0, so every chi-augmenting path runs along one rail and class c
// cycles close over intervals starting at positions of parity c. tau = chi.
LineSubstrate ladder_chord_substrate(int n, int rails_per_class);

struct FiniteGroup {
    std::string name;
    int order = 1;
    int identity = 0;
    std::vector<std::vector<int>> mul;
    std::vector<int> inv;
};

FiniteGroup trivial_group();
FiniteGroup cyclic_group(int m);
FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);

struct CayleyGenerator {
    int shift = 0;  // power of gamma
    int delta = 0;  // element of Delta
};

// Z/N semidirect Delta with gamma delta gamma^-1 = action(delta).
struct CayleySpec {
    FiniteGroup delta;
    std::vector<int> action;  // automorphism as a permutation; empty = identity
    std::vector<CayleyGenerator> generators;
    int period = 0;
};

struct CayleyGraph {
    BipartiteGraph g;
    CayleySpec spec;
    bool bipartite = false;
    std::optional<std::vector<int>> odd_cycle;
    bool odd_vertex_count = false;

    int id(int copy, int d) const;
    int copy_of(int v) const;
    int delta_of(int v) const;
    int multiply(int v, const CayleyGenerator& s) const;
    int apply_action(int d, int power) const;
};

CayleyGenerator inverse_generator(const CayleySpec& spec, const CayleyGenerator& s);

// Right Cayley graph x ~ x s. Throws on a non-bipartite result (message
// carries the odd cycle) unless allow_general is set.
CayleyGraph cayley_z_semidirect(const CayleySpec& spec, bool allow_general = false);

enum class Norm { l1, linf, euclid };

// Points carry integer coordinates equal to scale times their position;
// modulus > 0 makes every axis periodic with that (scaled) period.
struct MetricSpec {
    Norm norm = Norm::l1;
    int scale = 1;
    int modulus = 0;
};

// Every displacement v with |v| <= k (after unscaling), sorted by norm then
// lexicographically, reduced to one representative per residue when periodic.
PointSet displacement_ball(int d, const MetricSpec& metric, const Rational& k);

// Left vertices are a (in order), right vertices are b. Each edge is labelled
// with the shortest displacement b - a (lexicographically first on ties).
WindowGraph distance_bipartite_graph(const PointSet& a, const PointSet& b, const MetricSpec& metric,
                                     const Rational& k);

struct TorusSpec {
    int d = 2;
    int n = 0;
    PointSet translations;  // u_1..u_d in (Z/n)^d
    long determinant = 0;
    bool transitive = false;  // gcd(det, n) == 1: Z^d acts transitively
    int k = 0;
    int l = 0;
};

// Pseudo-random translation vectors whose matrix is invertible mod n.
TorusSpec random_torus_spec(int n, std::uint64_t seed, int d = 2);

// q = M^{-1} p mod n: the Z^d action becomes the standard translation action.
PointSet to_orbit_coordinates(const PointSet& p, const TorusSpec& spec);
Point word_to_translation(const Point& word, const TorusSpec& spec);

struct DiscSquare {
    PointSet a;  // disc
    PointSet b;  // square
    TorusSpec spec;
    int side = 0;          // square side, n / s
    long disc_raw = 0;     // lattice points in the disc of equal area
    long moved = 0;        // |disc_raw - |A||
};

// Density alpha = 1/s^2 with s | n. The square has exactly (n/s)^2 points;
// the disc takes the same number of points closest to the centre, ties
// broken by angle.
DiscSquare disc_square_sets(int n, const Rational& alpha, std::uint64_t seed);

}  // namespace hm
