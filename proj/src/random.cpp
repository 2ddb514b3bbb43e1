#include "hypermatch/random.hpp"

#include <stdexcept>

namespace hm {

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("empty range");
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
        std::uint64_t x = next();
        if (x < limit) return x % n;
    }
}

Integer Rng::below(const Integer& n) {
    if (n <= 0) throw std::invalid_argument("empty range");
    if (n.fits_ulong_p()) return Integer(static_cast<unsigned long>(below(static_cast<std::uint64_t>(n.get_ui()))));
    std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    for (;;) {
        Integer x = 0;
        std::size_t have = 0;
        while (have < bits) {
            x <<= 64;
            Integer word;
            std::uint64_t w = next();
            mpz_import(word.get_mpz_t(), 1, 1, sizeof(w), 0, 0, &w);
            x += word;
            have += 64;
        }
        x >>= static_cast<mp_bitcnt_t>(have - bits);
        if (x < n) return x;
    }
}

bool Rng::bernoulli(const Rational& p) {
    if (p <= 0) return false;
    if (p >= 1) return true;
    return below(Integer(p.get_den())) < p.get_num();
}

std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream) {
    // splitmix64 finalizer over (master, stream)
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace hm
