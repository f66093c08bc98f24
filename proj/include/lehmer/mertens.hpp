#pragma once
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lehmer/arith.hpp"

namespace lehmer {

// Named constants used across the Mertens evaluators and bound checks.
struct MathConstants {
    double euler_gamma = 0.57721566490153286;
    double exp_neg_gamma = 0.56145948356688517;  // exp(-euler_gamma)
    double mertens_a = 0.2614972128;             // Meissel-Mertens constant
    double c_small = 0.09;                       // valid for x >= 3
    double c_large = 0.3;                        // valid for x >= x_threshold_large
    Natural x_threshold_large = 2973;
    double dusart_c_2973 = 0.46842432;           // stronger bound above 2973
};

inline constexpr MathConstants constants{};

// Raw sum/product against its asymptotic model at one point x.
struct MertensEvaluation {
    double x = 0;
    double raw_value = 0;
    double model_value = 0;
    double residual = 0;         // raw_value - model_value
    double scaled_residual = 0;  // residual * log(x)

    double raw_times_log_x() const;  // convergence view for the Euler product
};

struct LowerBoundCheck {
    bool holds = false;
    double margin = 0;  // raw_value * log(x) - c
};

struct PowerProductBounds {
    double lower = 0;    // (1 - 1/p_lo)^M
    double product = 0;  // prod over the subset
    double upper = 0;    // (1 - 1/p_hi)^M
};

struct AbelComparison {
    double direct = 0;
    double abel = 0;
};

struct WeightedPoint {
    Natural position;
    double value;
};

// Sum of 1/p over primes p <= x vs log log x + a.
MertensEvaluation prime_reciprocal_sum(double x);

// Sum of (log p)/p over primes p <= x vs 1 + log x.
MertensEvaluation log_p_over_p_sum(double x);

// Product of (1 - 1/p) over primes p <= x vs exp(-gamma)/log x.
MertensEvaluation euler_product(double x);

// Checks both sides of summation by parts: the direct weighted sum and the
// boundary-term-plus-integral form. The integral runs piecewise between
// consecutive weight positions, where the partial-sum function is constant.
AbelComparison abel_check(std::span<const WeightedPoint> weights,
                          const std::function<double(double)>& smooth_fn,
                          const std::function<double(double)>& smooth_fn_deriv,
                          double x);

// Truncated sum of mu(n)/n for n <= N, from a sieved Mobius table.
double mobius_series_partial(Natural N);

// M(N) = sum of mu(n) for n <= N, exact.
std::int64_t mertens_function(Natural N);

// Does prod_{p<=x}(1-1/p) exceed c/log x? include_two=false drops the p=2
// factor for the odd-primes-only reading.
LowerBoundCheck lower_bound_check(double x, double c, bool include_two = true);

// Empirical estimate of the constant a: sum 1/p - log log x.
double estimate_mertens_constant(double x);

// Bracket prod_{p in subset}(1-1/p) between the all-p_lo and all-p_hi powers.
PowerProductBounds power_product_bounds(Natural p_lo, Natural p_hi,
                                        std::span<const Natural> subset);

}  // namespace lehmer
