#pragma once

#include "hypermatch/cycle_cover.hpp"
#include "hypermatch/graph.hpp"
#include "hypermatch/polytope.hpp"
#include "hypermatch/random.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hm {

struct DistortionParams {
    int k = 1;
    Rational theta;
    Rational eps;     // 1 / (2k + 4/theta)
    Rational lambda;  // 2 eps / theta
    std::uint64_t seed = 0;
};

// Throws invalid_argument unless k >= 1 and 0 < theta <= 1.
DistortionParams distortion_params(int k, const Rational& theta, std::uint64_t seed = 0);

// zeta_i: +eps on even positions of each cycle of family i, -eps on odd ones.
FractionalAssignment family_circuit(const BipartiteGraph& g, const std::vector<Cycle>& family, const Rational& eps);

// rho = lambda tau + (1 - lambda) chi.
FractionalAssignment barycenter(const FractionalAssignment& tau, const FractionalAssignment& chi, const Rational& lambda);

// Y = rho + sum_i z_i zeta_i; throws RangeError for the first edge outside [0, 1].
FractionalAssignment distorted(const FractionalAssignment& rho, const std::vector<FractionalAssignment>& zetas,
                               const std::vector<int>& signs);

struct DistortionSample {
    std::vector<int> signs;
    FractionalAssignment rho;
    FractionalAssignment y;
    ExtremeReport next;
};

// Draws the signs, forms Y and descends from it with the random sign rule.
DistortionSample random_distortion_step(const BipartiteGraph& g, const DemandProfile& f, const CapacityProfile& c,
                                        const FractionalAssignment& chi, const FractionalAssignment& tau,
                                        const CycleFamily& fams, const DistortionParams& p, Rng& rng,
                                        const std::vector<std::vector<int>>& marks = {});

struct AccountingReport {
    long l_before = 0;
    long l_after = 0;
    long off_line_changed = 0;  // |A|
    long on_line_changed = 0;   // |B|
    long changed = 0;
    bool decreased = false;     // (i)
    bool factor_three = false;  // (ii): changed <= 3 (|L| - |L'|)
    bool hypothesis = false;    // |A| < |B| / 2
};

AccountingReport accounting_check(const FractionalAssignment& chi, const FractionalAssignment& next, const EdgeSet& l_before,
                                  const EdgeSet& l_after);

struct RoundingIteration {
    long l_before = 0;
    long l_after = 0;
    long changed = 0;
    bool ok_i = false;
    bool ok_ii = false;
    bool hypothesis = false;
    int redraws = 0;
    bool fallback = false;
    Rational theta;
    Rational eps;
    Rational lambda;
    long joint_covered = 0;
    std::vector<int> signs;  // of the accepted draw (empty on fallback)
};

struct RoundingOptions {
    int k = 2;
    std::vector<Rational> theta_grid;  // default 1/2, 1/4, ..., 1/64
    std::uint64_t seed = 0;
    int max_redraws = 32;
    int max_iterations = 1000;
    std::vector<std::vector<int>> marks;
    ThresholdInput cover;
    const FractionalAssignment* initial = nullptr;  // extreme point to start from; default: descend from tau
};

struct RoundingResult {
    FractionalAssignment sigma;
    bool integral = false;
    bool close_to_tau = false;  // |sigma - tau| < 1 on every edge
    std::vector<RoundingIteration> trace;
    std::string diagnosis;
};

RoundingResult round_until_integral(const BipartiteGraph& g, const DemandProfile& f, const CapacityProfile& c,
                                    const FractionalAssignment& tau, const RoundingOptions& opts);

struct OddRegularTrace {
    long circuits = 0;
    long rounds = 0;
    long terminal_cycles = 0;
    bool alternating_ok = true;  // every terminal cycle alternates k/d, (d-k)/d
    bool fallback = false;
    std::vector<std::pair<Rational, Rational>> terminal_values;
};

struct OddRegularResult {
    EdgeSet matching;
    OddRegularTrace trace;
};

// tau = 1/d; random +-1/d circuits on disjoint cycle families of the
// components that are not yet simple cycles; each terminal cycle alternates
// k/d and (d-k)/d and contributes the edges carrying the larger value.
OddRegularResult odd_regular_matching(const BipartiteGraph& g, std::uint64_t seed, long max_rounds = 100000);

}  // namespace hm
