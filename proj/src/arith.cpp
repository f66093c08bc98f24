#include "lehmer/arith.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "lehmer/primes.hpp"

namespace lehmer {

Natural checked_add(Natural a, Natural b) {
    Natural s = a + b;
    if (s < a) throw std::overflow_error("checked_add: result exceeds 2^64-1");
    return s;
}

Natural checked_mul(Natural a, Natural b) {
    u128 p = u128(a) * b;
    if (p >> 64) throw std::overflow_error("checked_mul: result exceeds 2^64-1");
    return static_cast<Natural>(p);
}

Natural checked_pow(Natural base, unsigned exponent) {
    Natural result = 1;
    for (unsigned i = 0; i < exponent; ++i) result = checked_mul(result, base);
    return result;
}

Natural Factorization::value() const {
    Natural n = 1;
    for (const auto& pp : factors) n = checked_mul(n, checked_pow(pp.prime, pp.exponent));
    return n;
}

bool Factorization::square_free() const {
    return std::all_of(factors.begin(), factors.end(),
                       [](const PrimePower& pp) { return pp.exponent == 1; });
}

std::size_t Factorization::distinct_count() const { return factors.size(); }

Natural Factorization::largest_prime() const {
    return factors.empty() ? 0 : factors.back().prime;
}

std::string Factorization::to_string() const {
    std::string s;
    for (const auto& pp : factors) {
        if (!s.empty()) s += '*';
        s += std::to_string(pp.prime);
        if (pp.exponent > 1) s += '^' + std::to_string(pp.exponent);
    }
    return s;
}

Natural gcd(Natural a, Natural b) { return std::gcd(a, b); }

namespace {

// Brent's cycle variant of Pollard rho; n must be composite, odd, with no
// factor below the trial-division bound. Returns a non-trivial factor.
Natural pollard_brent(Natural n) {
    for (Natural c = 1;; ++c) {
        auto step = [&](Natural v) { return (mulmod(v, v, n) + c) % n; };
        Natural y = 2, saved = 2, d = 1;
        Natural power = 1, lam = 0;
        Natural steps = 0;
        const Natural step_cap = Natural(1) << 24;  // stalled walk: retry with new c
        while (d == 1 && steps < step_cap) {
            if (lam == power) {
                saved = y;
                power <<= 1;
                lam = 0;
            }
            // batch the |saved - y| values into one product per gcd
            Natural batch = std::min<Natural>(128, power - lam);
            Natural y_backup = y;
            Natural prod = 1;
            for (Natural i = 0; i < batch; ++i) {
                y = step(y);
                Natural diff = saved > y ? saved - y : y - saved;
                if (diff != 0) prod = mulmod(prod, diff, n);
            }
            lam += batch;
            steps += batch;
            d = std::gcd(prod, n);
            if (d == n) {
                // replay singly to isolate the factor the batch collapsed over
                y = y_backup;
                d = 1;
                for (Natural i = 0; i < batch && d == 1; ++i) {
                    y = step(y);
                    Natural diff = saved > y ? saved - y : y - saved;
                    d = std::gcd(diff, n);  // diff 0 gives n: degenerate, retry
                }
                if (d == 1) d = n;
                break;
            }
        }
        if (d != n && d != 1) return d;
    }
}

void factor_recursive(Natural n, std::vector<Natural>& primes_out) {
    if (n == 1) return;
    if (is_prime(n)) {
        primes_out.push_back(n);
        return;
    }
    Natural d = pollard_brent(n);
    factor_recursive(d, primes_out);
    factor_recursive(n / d, primes_out);
}

}  // namespace

Factorization factorize(Natural n) {
    if (n == 0) throw std::domain_error("factorize: n must be >= 1");
    Factorization result;
    if (n == 1) return result;

    for (Natural p : small_prime_table()) {
        if (p * p > n) break;
        if (n % p == 0) {
            unsigned e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            result.factors.push_back({p, e});
        }
    }
    if (n > 1) {
        // cofactor has no prime below the table bound (2^16), so any composite
        // remainder is a product of at most two primes above it
        std::vector<Natural> rest;
        factor_recursive(n, rest);
        std::sort(rest.begin(), rest.end());
        for (std::size_t i = 0; i < rest.size();) {
            std::size_t j = i;
            while (j < rest.size() && rest[j] == rest[i]) ++j;
            result.factors.push_back({rest[i], static_cast<unsigned>(j - i)});
            i = j;
        }
    }
    return result;
}

Natural euler_phi(const Factorization& f) {
    // phi is multiplicative and every partial product divides phi(n) <= n,
    // so plain 64-bit products cannot overflow
    Natural result = 1;
    for (const auto& pp : f.factors) {
        Natural contrib = pp.prime - 1;
        for (unsigned i = 1; i < pp.exponent; ++i) contrib *= pp.prime;
        result *= contrib;
    }
    return result;
}

Natural euler_phi(Natural n) {
    if (n == 0) throw std::domain_error("euler_phi: n must be >= 1");
    return euler_phi(factorize(n));
}

bool is_square_free(Natural n) {
    if (n == 0) throw std::domain_error("is_square_free: n must be >= 1");
    return factorize(n).square_free();
}

int mobius(Natural n) {
    if (n == 0) throw std::domain_error("mobius: n must be >= 1");
    Factorization f = factorize(n);
    if (!f.square_free()) return 0;
    return f.distinct_count() % 2 == 0 ? 1 : -1;
}

Natural omega(Natural n) {
    if (n == 0) throw std::domain_error("omega: n must be >= 1");
    return factorize(n).distinct_count();
}

Rational::Rational(Natural numerator, Natural denominator) {
    if (denominator == 0) throw std::domain_error("Rational: zero denominator");
    Natural g = std::gcd(numerator, denominator);
    num = numerator / g;
    den = denominator / g;
}

Rational Rational::operator*(const Rational& other) const {
    Natural g1 = std::gcd(num, other.den);
    Natural g2 = std::gcd(other.num, den);
    u128 n128 = u128(num / g1) * (other.num / g2);
    u128 d128 = u128(den / g2) * (other.den / g1);
    if ((n128 >> 64) || (d128 >> 64))
        throw std::overflow_error("Rational::operator*: result exceeds 64-bit");
    Rational r;
    r.num = static_cast<Natural>(n128);
    r.den = static_cast<Natural>(d128);
    return r;  // already reduced: the cross-cancelled parts share no factor
}

Rational Rational::operator-(const Rational& other) const {
    Natural g = std::gcd(den, other.den);
    u128 scale_a = other.den / g;
    u128 scale_b = den / g;
    u128 lhs = u128(num) * scale_a;
    u128 rhs = u128(other.num) * scale_b;
    if (lhs < rhs) throw std::domain_error("Rational::operator-: negative result");
    u128 n128 = lhs - rhs;
    u128 d128 = u128(den) * scale_a;
    // reduce in 128 bits, then require the result to fit
    auto gcd128 = [](u128 a, u128 b) {
        while (b != 0) {
            u128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    };
    u128 g3 = gcd128(n128, d128);
    n128 /= g3;
    d128 /= g3;
    if ((n128 >> 64) || (d128 >> 64))
        throw std::overflow_error("Rational::operator-: result exceeds 64-bit");
    Rational r;
    r.num = static_cast<Natural>(n128);
    r.den = static_cast<Natural>(d128);
    return r;
}

double Rational::to_double() const {
    return static_cast<double>(num) / static_cast<double>(den);
}

std::string Rational::to_string() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

}  // namespace lehmer
