#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace hm {

// GMP rationals are canonicalized after every arithmetic operation.
using Rational = mpq_class;
using Integer = mpz_class;

Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

Rational make_rational(long num, long den = 1);
Integer floor_of(const Rational& q);
Rational frac_of(const Rational& q);
bool is_integer(const Rational& q);
double to_double(const Rational& q);

// Least common multiple of the denominators (1 for an empty list).
Integer common_denominator(const std::vector<Rational>& values);

}  // namespace hm
