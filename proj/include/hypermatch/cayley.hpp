#pragma once

#include "hypermatch/flow.hpp"
#include "hypermatch/substrates.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hm {

enum class DeltaCase { split, whole };

struct DeltaClassification {
    DeltaCase tag = DeltaCase::whole;
    std::vector<int> delta_prime;  // elements of Delta in the class of the identity
};

// Throws invalid_argument on a non-bipartite quotient.
DeltaClassification classify_delta_bipartition(const CayleyGraph& c);

// Generator shift normalised to (-N/2, N/2].
int normalized_shift(const CayleyGraph& c, const CayleyGenerator& s);

// l: smallest positive shift of a generator, m: largest one.
std::pair<int, int> generator_reach(const CayleyGraph& c);

struct BlockTemplate {
    DeltaCase tag = DeltaCase::whole;
    bool half_copies = false;  // half copies of Delta at both ends
    int l = 0;
    int m = 0;
    CayleyGenerator sigma;
    int first_copy = 0;  // copies first_copy..last_copy meet the block
    int last_copy = 0;
    std::vector<int> vertices;
    std::vector<std::pair<int, int>> matching;
    int span() const { return last_copy - first_copy + 1; }
};

// Block Phi anchored at copy 0 with its internal perfect matching along sigma
// (a generator of shift l). Split case and odd |Delta|: 2lm whole copies,
// copy j paired with copy j + l inside each run of 2l copies. Whole case with
// even |Delta|: the same copies plus half copies of the l copies before and
// after, sigma-chains through the first half of Delta being shifted by one.
// Throws invalid_argument for infeasible parameters.
BlockTemplate build_block(const CayleyGraph& c, int l, int m);

// Empty string when the matching is a perfect matching of the block.
std::string validate_block(const CayleyGraph& c, const BlockTemplate& t);

struct GapFailure {
    std::vector<int> vertices;
    DeficiencyCertificate certificate;  // in Cayley vertex ids
};

struct BlocksAndGaps {
    bool ok = false;
    EdgeSet matching;
    std::vector<int> anchors;
    int gaps = 0;
    int largest_gap = 0;
    std::vector<GapFailure> failures;
};

// Anchors 0, k, 2k, ... (maximal k-discrete on the copy cycle), block
// matchings translated to each anchor, each gap matched by flow. Throws
// invalid_argument if k is smaller than the block span.
BlocksAndGaps blocks_and_gaps_matching(const CayleyGraph& c, int k, const BlockTemplate& t);

// Doubling k = span+1, 2(span+1), ... until every spacing in [k, 2k] matches all gaps.
struct SpacingSearch {
    int k0 = 0;  // 0 if no window up to k_max passes
    std::vector<std::pair<int, bool>> tried;
};

SpacingSearch find_spacing(const CayleyGraph& c, const BlockTemplate& t, int k_max);

struct ObstructionReport {
    int delta_order = 1;
    int period = 0;
    bool applies = false;           // |Delta| odd
    bool vertex_count_odd = false;
    std::optional<bool> matching_exists;
    std::vector<int> cut_parity;    // per cut between copies i and i+1
    std::vector<int> induced;       // cuts with odd crossing count
    bool induced_valid = false;     // induced cuts form a perfect matching of the N-cycle
    std::string reason;
};

// Crossing parity of a perfect matching over the cuts of the copy cycle.
std::vector<int> cut_parities(const CayleyGraph& c, const EdgeSet& matching);

ObstructionReport odd_delta_obstruction(const CayleyGraph& c);

}  // namespace hm
