#pragma once
#include <optional>
#include <string>
#include <vector>

#include "lehmer/arith.hpp"

namespace lehmer {

// Distinct-prime-count thresholds for a composite solution, by source result.
struct OmegaPresets {
    Natural lehmer = 7;
    Natural cohen_hagis_div5_index2 = 13;
    Natural cohen_hagis_general = 14;
    Natural kishore_index3 = 33;
    Natural lieuwens_div3 = 212;
};

inline constexpr OmegaPresets omega_presets{};

struct LehmerVerdict {
    Natural n = 0;
    bool is_composite = false;
    Natural phi = 0;
    Natural index_numerator = 0;  // n - 1
    bool divides = false;         // phi | n - 1
    std::optional<Natural> m;     // (n-1)/phi when divides
};

enum class FilterReason { even, has_square_factor, prime, too_few_factors, pass };

const char* to_string(FilterReason reason);

struct FilterVerdict {
    bool eligible = false;
    FilterReason reason = FilterReason::pass;
    Natural k_min = 0;
    Natural omega = 0;  // 0 when rejected before factor counting
};

// Full analysis record for the bounded (finite p_k) pipeline. Quantities that
// the decisive residual comparisons depend on are carried as exact rationals
// alongside their binary64 renderings.
struct LehmerAnalysis {
    Natural n = 0;
    Factorization factors;
    Natural p_k = 0;
    Rational r;          // phi(n)/n, exact
    double A = 0;        // complement product over primes <= p_k not dividing n
    double c_used = 0;
    double l_k = 0;      // scaling making c*l_k/(A*log p_k) equal r
    Natural m_plus = 0;  // floor(1/r)
    Rational psi_exact;  // fractional part of 1/r
    double psi = 0;
    Natural j = 1;
    Rational left_plus_exact;   // psi * r
    double left_plus = 0;       // floating path: psi*c*l_k/(A*log p_k)
    Rational left_minus_exact;  // (j - psi) * r
    double left_minus = 0;
    Rational rhs;  // 1/n, exact
    bool plus_feasible = false;
    bool minus_feasible = false;
};

enum class ProductMode { full_product, partial_product };

struct AsymptoticAnalysis {
    Natural n = 0;
    Natural p_k = 0;
    ProductMode mode = ProductMode::full_product;
    double A = 1.0;  // 1 in full_product mode
    Natural m_plus = 0;
    double alpha_or_beta = 0;  // fractional part of A*e^gamma*log p_k
    Natural j = 1;
    double left_plus = 0;
    double left_minus = 0;
    Rational rhs;
};

struct ExampleRow {
    std::string name;
    double computed = 0;
    double reference = 0;
    double abs_diff = 0;
    double tolerance = 0;
    bool relative = false;  // tolerance interpreted relative to reference
    bool pass = false;
};

struct ExampleReport {
    std::vector<ExampleRow> rows;
    bool minus_solution = false;  // expected: true
    bool plus_solution = false;   // expected: false
    double max_abs_deviation = 0;
    bool all_within_tolerance = false;
};

// phi(n) | n-1 congruence verdict; a conjecture counterexample is exactly
// {divides = true, is_composite = true}.
LehmerVerdict lehmer_check(Natural n);

// m with n - m*phi(n) = -1, if any (phi(n) | n+1).
std::optional<Natural> minus_check(Natural n);

// Necessary-condition gate: odd, square-free, composite, omega >= k_min.
// The reason names the first failed test in that fixed order.
FilterVerdict structural_filter(Natural n, Natural k_min = omega_presets.lehmer);

// Product of (1 - 1/q) over primes q <= p_k(n) that do not divide n.
// The default ranges over odd primes; include_two adds the (1 - 1/2) factor.
double compute_A(Natural n, bool include_two = false);
double compute_A(const Factorization& factors, bool include_two = false);

inline constexpr double kFeasibilityRelTol = 1e-3;

LehmerAnalysis analyze_bounded(Natural n, double c, Natural j = 1,
                               double feasibility_rel_tol = kFeasibilityRelTol);

AsymptoticAnalysis analyze_asymptotic(Natural n, ProductMode mode, Natural j = 1);

// Recomputes the reference worked example (n = 65535 = 3*5*17*257, c = 0.09)
// and compares every quantity against its pinned 8-digit reference value.
ExampleReport reproduce_example();

}  // namespace lehmer
