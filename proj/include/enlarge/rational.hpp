#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace enlarge {

// Every probability, process value and certificate entry is an exact rational.
using Rational = mpq_class;
using Vec = std::vector<Rational>;

/// Parses "p/q", "p" or "-p/q". Throws Error(SchemaError) on malformed input or q == 0.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form; integers print without a denominator.
std::string to_string(const Rational& value);

inline Rational make_rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Rational pow2_inverse(int exponent) {
    Rational r(1);
    mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<mp_bitcnt_t>(exponent));
    return r;
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b);

double to_double(const Rational& value);

}  // namespace enlarge
