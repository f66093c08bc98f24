#pragma once
#include <functional>
#include <vector>

#include "lehmer/arith.hpp"

namespace lehmer {

// Cache-resident odd-only segment, in sieve entries. Overridable per call.
inline constexpr std::size_t kDefaultSieveSegment = std::size_t(1) << 18;

// All primes in [lo, hi), complete and strictly increasing.
struct PrimeRange {
    Natural lo = 0;
    Natural hi = 0;
    std::vector<Natural> primes;
};

// Primes up to `limit` inclusive, by a simple in-memory sieve.
std::vector<Natural> simple_sieve(Natural limit);

// Static table of primes below 2^16 (trial-division base).
const std::vector<Natural>& small_prime_table();

// Segmented sieve over [lo, hi); memory stays O(segment + sqrt(hi)).
PrimeRange sieve_range(Natural lo, Natural hi,
                       std::size_t segment = kDefaultSieveSegment);

// Streams every prime in [lo, hi) in increasing order without storing them.
void visit_primes(Natural lo, Natural hi, const std::function<void(Natural)>& fn,
                  std::size_t segment = kDefaultSieveSegment);

// Deterministic Miller-Rabin, correct for all n < 2^64.
bool is_prime(Natural n);

// Chebyshev theta(x) = sum of log p over primes p <= x, compensated summation.
double chebyshev_theta(double x);

}  // namespace lehmer
