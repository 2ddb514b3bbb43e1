#pragma once

#include "hypermatch/rational.hpp"

#include <cstdint>
#include <random>

namespace hm {

// mt19937_64 has a standard-defined output sequence; all derived draws use
// explicit rejection sampling so results do not depend on the library's
// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform integer in [0, n), n >= 1.
    std::uint64_t below(std::uint64_t n);

    // Uniform integer in [0, n) for an arbitrary-precision bound.
    Integer below(const Integer& n);

    // True with probability p (0 <= p <= 1), exactly.
    bool bernoulli(const Rational& p);

    int sign() { return (next() >> 63) ? 1 : -1; }

private:
    std::mt19937_64 engine_;
};

// Derives an independent stream seed from a master seed and a stream index.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace hm
