#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <random>

#include "lehmer/arith.hpp"

using namespace lehmer;

TEST_CASE("gcd") {
    CHECK(gcd(0, 0) == 0);
    CHECK(gcd(65535, 65534) == 1);
    CHECK(gcd(65535, 32768) == 1);
    CHECK(gcd(12, 18) == 6);
    CHECK(gcd(0, 7) == 7);

    // consecutive integers are coprime
    std::mt19937_64 rng(12345);
    for (int i = 0; i < 200; ++i) {
        Natural n = rng() % 1000000 + 1;
        CHECK(gcd(n, n - 1) == 1);
    }
}

TEST_CASE("factorize basics") {
    CHECK(factorize(1).factors.empty());
    CHECK(factorize(65535).factors ==
          std::vector<PrimePower>{{3, 1}, {5, 1}, {17, 1}, {257, 1}});
    CHECK(factorize(65536).factors == std::vector<PrimePower>{{2, 16}});
    CHECK(factorize(45).factors == std::vector<PrimePower>{{3, 2}, {5, 1}});
    CHECK_THROWS_AS(factorize(0), std::domain_error);
}

TEST_CASE("factorize large cofactors") {
    // both factors above the trial-division table
    Natural n = Natural(1000003) * 1000033;
    CHECK(factorize(n).factors == std::vector<PrimePower>{{1000003, 1}, {1000033, 1}});
    // large prime
    CHECK(factorize(4294967291ULL).factors ==
          std::vector<PrimePower>{{4294967291ULL, 1}});
    // prime square above the table
    Natural p = 1000003;
    CHECK(factorize(p * p).factors == std::vector<PrimePower>{{p, 2}});
    // wide semiprimes keep the rho path honest
    Natural q1 = 2147483647ULL, q2 = 2147483629ULL;
    CHECK(factorize(q1 * q2).factors == std::vector<PrimePower>{{q2, 1}, {q1, 1}});
    CHECK(factorize(Natural(99990001) * 100003).factors ==
          std::vector<PrimePower>{{100003, 1}, {99990001, 1}});
}

TEST_CASE("factorize round-trip") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 300; ++i) {
        Natural n = rng() % 1000000000000ULL + 1;
        CHECK(factorize(n).value() == n);
    }
    for (Natural n = 1; n <= 2000; ++n) CHECK(factorize(n).value() == n);
}

TEST_CASE("euler_phi examples") {
    CHECK(euler_phi(1) == 1);
    CHECK(euler_phi(65535) == 32768);
    CHECK(euler_phi(4294967295ULL) == 2147483648ULL);
    CHECK(euler_phi(10) == 4);
    CHECK_THROWS_AS(euler_phi(0), std::domain_error);
}

TEST_CASE("euler_phi brute-force oracle") {
    auto brute = [](Natural n) {
        Natural count = 0;
        for (Natural i = 1; i <= n; ++i)
            if (std::gcd(i, n) == 1) ++count;
        return count;
    };
    for (Natural n = 1; n <= 2000; ++n) CHECK(euler_phi(n) == brute(n));
    std::mt19937_64 rng(7);
    for (int i = 0; i < 150; ++i) {
        Natural n = rng() % 100000 + 1;
        CHECK(euler_phi(n) == brute(n));
    }
}

TEST_CASE("euler_phi multiplicativity") {
    std::mt19937_64 rng(42);
    int checked = 0;
    while (checked < 500) {
        Natural a = rng() % 10000 + 1;
        Natural b = rng() % 10000 + 1;
        if (std::gcd(a, b) != 1) continue;
        CHECK(euler_phi(a * b) == euler_phi(a) * euler_phi(b));
        ++checked;
    }
}

TEST_CASE("divisor-sum and Mobius-totient identities") {
    constexpr Natural kLimit = 10000;
    std::vector<Natural> phi(kLimit + 1);
    for (Natural n = 1; n <= kLimit; ++n) phi[n] = euler_phi(n);

    // sum of phi(d) over d | n equals n
    std::vector<Natural> divisor_sum(kLimit + 1, 0);
    for (Natural d = 1; d <= kLimit; ++d)
        for (Natural m = d; m <= kLimit; m += d) divisor_sum[m] += phi[d];
    for (Natural n = 1; n <= kLimit; ++n) CHECK(divisor_sum[n] == n);

    // phi(n) = sum over d | n of mu(d) * n/d
    std::vector<int> mu(kLimit + 1);
    for (Natural n = 1; n <= kLimit; ++n) mu[n] = mobius(n);
    for (Natural n = 1; n <= kLimit; ++n) {
        std::int64_t total = 0;
        for (Natural d = 1; d * d <= n; ++d) {
            if (n % d != 0) continue;
            total += std::int64_t(mu[d]) * std::int64_t(n / d);
            Natural e = n / d;
            if (e != d) total += std::int64_t(mu[e]) * std::int64_t(d);
        }
        CHECK(total == std::int64_t(phi[n]));
    }
}

TEST_CASE("square-free, mobius, omega") {
    CHECK(is_square_free(1));
    CHECK(is_square_free(65535));
    CHECK_FALSE(is_square_free(45));
    CHECK_THROWS_AS(is_square_free(0), std::domain_error);

    CHECK(mobius(1) == 1);
    CHECK(mobius(4) == 0);
    CHECK(mobius(6) == 1);
    CHECK(mobius(30) == -1);
    CHECK_THROWS_AS(mobius(0), std::domain_error);

    CHECK(omega(1) == 0);
    CHECK(omega(65535) == 4);
    CHECK(omega(30) == 3);
    CHECK_THROWS_AS(omega(0), std::domain_error);
}

TEST_CASE("checked arithmetic") {
    CHECK(checked_add(1, 2) == 3);
    CHECK(checked_mul(Natural(1) << 32, (Natural(1) << 32) - 1) ==
          (Natural(1) << 32) * ((Natural(1) << 32) - 1));
    CHECK_THROWS_AS(checked_add(~Natural(0), 1), std::overflow_error);
    CHECK_THROWS_AS(checked_mul(Natural(1) << 33, Natural(1) << 33),
                    std::overflow_error);
    CHECK(checked_pow(3, 4) == 81);
    CHECK_THROWS_AS(checked_pow(10, 20), std::overflow_error);
}

TEST_CASE("Rational") {
    Rational r(32768, 65535);
    CHECK(r.num == 32768);
    CHECK(r.den == 65535);
    CHECK(r.to_string() == "32768/65535");

    Rational psi(32767, 32768);
    Rational left_plus = psi * r;
    CHECK(left_plus == Rational(32767, 65535));

    Rational one(1, 1);
    Rational left_minus = (one - psi) * r;
    CHECK(left_minus == Rational(1, 65535));

    CHECK(Rational(6, 4) == Rational(3, 2));
    CHECK(Rational(5, 1).to_string() == "5");
    CHECK(Rational(3, 4).to_double() == doctest::Approx(0.75));
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
    CHECK_THROWS_AS(Rational(1, 3) - Rational(1, 2), std::domain_error);

    // cross-cancelling keeps huge intermediates inside 128 bits
    Natural big = Natural(1) << 62;
    CHECK(Rational(big, big + 1) * Rational(big + 1, big) == Rational(1, 1));
}

TEST_CASE("Factorization helpers") {
    Factorization f = factorize(65535);
    CHECK(f.square_free());
    CHECK(f.distinct_count() == 4);
    CHECK(f.largest_prime() == 257);
    CHECK(f.to_string() == "3*5*17*257");
    CHECK(factorize(65536).to_string() == "2^16");
    CHECK(factorize(1).to_string().empty());
    CHECK(factorize(1).largest_prime() == 0);
}
