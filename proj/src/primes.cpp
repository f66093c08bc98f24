#include "lehmer/primes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lehmer/numeric.hpp"

namespace lehmer {

std::vector<Natural> simple_sieve(Natural limit) {
    std::vector<Natural> primes;
    if (limit < 2) return primes;
    std::vector<char> composite(limit + 1, 0);
    for (Natural i = 2; i * i <= limit; ++i)
        if (!composite[i])
            for (Natural j = i * i; j <= limit; j += i) composite[j] = 1;
    for (Natural i = 2; i <= limit; ++i)
        if (!composite[i]) primes.push_back(i);
    return primes;
}

const std::vector<Natural>& small_prime_table() {
    static const std::vector<Natural> table = simple_sieve((Natural(1) << 16) - 1);
    return table;
}

void visit_primes(Natural lo, Natural hi, const std::function<void(Natural)>& fn,
                  std::size_t segment) {
    if (lo > hi) throw std::domain_error("visit_primes: lo > hi");
    if (segment < 2) throw std::domain_error("visit_primes: segment too small");
    if (hi <= 2) return;
    if (lo < 2) lo = 2;
    if (lo <= 2 && hi > 2) fn(2);

    const std::vector<Natural> base = simple_sieve(isqrt(hi - 1));

    // odd-only segments: flags[i] covers the odd number seg_lo + 2*i
    std::vector<char> flags;
    Natural seg_lo = std::max<Natural>(lo, 3) | 1;
    while (seg_lo < hi) {
        Natural span = 2 * static_cast<Natural>(segment);
        Natural seg_hi = (hi - seg_lo < span) ? hi : seg_lo + span;
        std::size_t count = static_cast<std::size_t>((seg_hi - seg_lo + 1) / 2);
        flags.assign(count, 1);
        for (Natural p : base) {
            if (p == 2) continue;
            if (p * p >= seg_hi) break;
            Natural rem = seg_lo % p;
            Natural first = rem == 0 ? seg_lo : seg_lo + (p - rem);
            if (first < seg_lo) continue;  // wrapped past 2^64: nothing in range
            first = std::max(p * p, first);
            if (first % 2 == 0) first += p;
            for (Natural m = first; m < seg_hi;) {
                flags[static_cast<std::size_t>((m - seg_lo) / 2)] = 0;
                Natural next = m + 2 * p;
                if (next < m) break;
                m = next;
            }
        }
        for (std::size_t i = 0; i < count; ++i)
            if (flags[i]) fn(seg_lo + 2 * i);
        if (hi - seg_lo <= span) break;
        seg_lo += span;
    }
}

PrimeRange sieve_range(Natural lo, Natural hi, std::size_t segment) {
    if (lo > hi) throw std::domain_error("sieve_range: lo > hi");
    PrimeRange range;
    range.lo = lo;
    range.hi = hi;
    visit_primes(lo, hi, [&](Natural p) { range.primes.push_back(p); }, segment);
    return range;
}

bool is_prime(Natural n) {
    if (n < 2) return false;
    for (Natural p : {Natural(2), Natural(3), Natural(5), Natural(7), Natural(11),
                      Natural(13), Natural(17), Natural(19), Natural(23), Natural(29),
                      Natural(31), Natural(37)})
        if (n % p == 0) return n == p;
    if (n < 41 * 41) return true;

    Natural d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // witness set deterministic for all n < 2^64
    for (Natural a : {Natural(2), Natural(325), Natural(9375), Natural(28178),
                      Natural(450775), Natural(9780504), Natural(1795265022)}) {
        Natural x = powmod(a % n, d, n);
        if (x == 0 || x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

double chebyshev_theta(double x) {
    if (x < 0) throw std::domain_error("chebyshev_theta: x must be >= 0");
    if (x < 2) return 0.0;
    Natural limit = static_cast<Natural>(std::floor(x));
    KahanSum sum;
    visit_primes(2, limit + 1, [&](Natural p) { sum.add(std::log(static_cast<double>(p))); });
    return sum.value();
}

}  // namespace lehmer
