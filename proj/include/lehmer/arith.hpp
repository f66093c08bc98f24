#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "lehmer/numeric.hpp"

namespace lehmer {

// Non-negative integer up to 2^64-1. Intermediate products are taken at
// 128-bit width; operations that would leave the representable range throw
// std::overflow_error instead of wrapping.
using Natural = std::uint64_t;

Natural checked_add(Natural a, Natural b);
Natural checked_mul(Natural a, Natural b);
Natural checked_pow(Natural base, unsigned exponent);

struct PrimePower {
    Natural prime;
    unsigned exponent;

    bool operator==(const PrimePower&) const = default;
};

// Prime factorization: entries strictly increasing by prime, exponents >= 1.
// factorize(1) yields the empty list.
struct Factorization {
    std::vector<PrimePower> factors;

    Natural value() const;  // reassembles n; throws on overflow
    bool square_free() const;
    std::size_t distinct_count() const;
    Natural largest_prime() const;  // 0 for the empty factorization
    std::string to_string() const;  // "3*5*17*257", "2^16", "" for 1

    bool operator==(const Factorization&) const = default;
};

Natural gcd(Natural a, Natural b);  // gcd(0,0) = 0
Factorization factorize(Natural n);

Natural euler_phi(Natural n);
Natural euler_phi(const Factorization& f);

bool is_square_free(Natural n);
int mobius(Natural n);      // in {-1, 0, 1}
Natural omega(Natural n);   // distinct prime factor count

// Exact non-negative rational, always reduced, denominator >= 1.
// Products/differences go through 128-bit intermediates with cross-cancelling;
// a result that cannot be reduced back into 64/64 bits throws.
struct Rational {
    Natural num = 0;
    Natural den = 1;

    Rational() = default;
    Rational(Natural numerator, Natural denominator);

    Rational operator*(const Rational& other) const;
    Rational operator-(const Rational& other) const;  // requires *this >= other
    bool operator==(const Rational&) const = default;

    double to_double() const;
    std::string to_string() const;  // "num/den", or "num" when den == 1
};

}  // namespace lehmer
