#pragma once

#include "hypermatch/flow.hpp"
#include "hypermatch/substrates.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace hm {

// Shortest representative of q - p on (Z/n)^d, coordinates in (-n/2, n/2].
Point torus_delta(const Point& p, const Point& q, int n);
long squared_norm(const Point& v);

// The lattice s Z^d on (Z/n)^d, s^d = 1/alpha.
PointSet density_lattice(int d, int n, const Rational& alpha);

struct SpreadWitness {
    bool ok = false;
    int spacing = 0;               // s
    PointSet lattice;
    std::vector<int> h;            // point index -> lattice index
    int radius = -1;               // minimal feasible integer radius
    long max_sq = 0;               // max |h(x) - x|^2
    std::vector<std::pair<int, bool>> sweep;
    std::optional<DeficiencyCertificate> certificate;  // at the budget when infeasible
};

// Bounded-displacement bijection onto the density lattice, radii 0, 1, ..., budget.
// Points are in orbit coordinates on (Z/n)^d. Throws invalid_argument when
// alpha is not 1/s^d with s | n or |a| differs from the lattice size.
SpreadWitness uniform_spread_witness(const PointSet& a, int n, const Rational& alpha, int budget);

const char* end_kind_name(EndKind e);

// Ball-growth heuristic per component of the masked graph: components with
// fewer than 32 vertices or eccentricity below 4 are finite; otherwise a
// growth ratio of at most 9/4 means two-ended.
std::vector<EndKind> classify_components(const BipartiteGraph& g, const std::vector<char>* mask,
                                         std::vector<int>* label = nullptr);

struct RadiiChain {
    int spread = 0;  // max spread radius of the two witnesses
    int k = 0;       // G^k(A, B) carries the constant value
    int n2 = 0;      // lattice graph radius, k + rA + rB
    int l = 0;       // G^l(A, B) carries phi, n2 + rA + rB
};

struct ConstantMatching {
    bool ok = false;
    std::string reason;
    RadiiChain chain;
    int r = 0;         // degree of the lattice graph at radius n2
    Rational value;    // 1 / r
    WindowGraph gl;    // G^l(A, B), edge labels are words
    FractionalAssignment phi;
    long gk_edges = 0;
    bool constant_on_gk = false;
    bool valid = false;
    int gk_components = 0;
    std::vector<EndKind> gk_ends;
};

// phi(a, b) = 1/r when |hA(a) - hB(b)| <= n2. k < 0 picks the least k above
// the spread radius with G^k(A, B) connected.
ConstantMatching constant_fractional_matching(const PointSet& a, const PointSet& b, int n, const SpreadWitness& wa,
                                              const SpreadWitness& wb, int k = -1);

struct Piece {
    int generator_set = 0;  // 0: first torus spec, 1: second
    Point word;
    Point translation;      // ambient, reduced mod n
    std::vector<int> members;  // indices into A
};

struct PieceDecomposition {
    int n = 0;
    std::vector<Piece> pieces;
    std::vector<std::pair<int, int>> matching;  // (A index, B index)
};

// Empty string when the pieces partition A and their translates partition B.
std::string validate_pieces(const PointSet& a, const PointSet& b, const PieceDecomposition& dec);

struct SquaringOptions {
    Rational alpha = Rational(1, 16);
    int radius_budget = 64;
    int k = -1;
    std::uint64_t seed = 0;
};

struct Equidecomposition {
    bool ok = false;
    std::string reason;
    SpreadWitness wa;
    SpreadWitness wb;
    ConstantMatching cfm;
    long support_edges = 0;
    long rounding_iterations = 0;
    bool integral = false;
    long ball_size = 0;     // |{words w : |w| <= l}|
    bool words_in_ball = false;
    PieceDecomposition dec;
    std::string partition_error;
};

// a, b in ambient torus coordinates; the Z^d action is given by spec.
Equidecomposition equidecompose(const PointSet& a, const PointSet& b, const TorusSpec& spec, const SquaringOptions& o);

struct CombineReport {
    bool ok = false;
    std::string reason;
    long h_edges = 0;
    long finite = 0;  // components of the fractional part of tau
    long two_ended = 0;
    long one_ended = 0;
    bool integral = false;
    PieceDecomposition dec;
    std::string partition_error;
    std::vector<Point> generators_used;  // ambient generator vectors behind the output words
    bool same_as_first = false;
};

// tau = tau1/2 + tau2/2 on H = supp(tau1) u supp(tau2), rounded on H. With
// relaxations the tau_i are the constant fractional matchings, otherwise the
// given matchings.
CombineReport combine_equidecompositions(const PointSet& a, const PointSet& b, const Equidecomposition& e1,
                                         const TorusSpec& s1, const Equidecomposition& e2, const TorusSpec& s2,
                                         bool relaxations = false);

// A coloured by piece with one translation arrow per piece.
void write_pieces_svg(std::ostream& out, const PointSet& a, const PieceDecomposition& dec);

}  // namespace hm
