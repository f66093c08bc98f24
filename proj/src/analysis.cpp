#include "lehmer/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "lehmer/mertens.hpp"
#include "lehmer/numeric.hpp"
#include "lehmer/primes.hpp"

namespace lehmer {

const char* to_string(FilterReason reason) {
    switch (reason) {
        case FilterReason::even: return "even";
        case FilterReason::has_square_factor: return "has_square_factor";
        case FilterReason::prime: return "prime";
        case FilterReason::too_few_factors: return "too_few_factors";
        case FilterReason::pass: return "pass";
    }
    return "?";
}

LehmerVerdict lehmer_check(Natural n) {
    if (n < 2) throw std::domain_error("lehmer_check: n must be >= 2");
    LehmerVerdict v;
    v.n = n;
    v.phi = euler_phi(n);
    v.is_composite = v.phi != n - 1;  // phi(n) = n-1 exactly for primes
    v.index_numerator = n - 1;
    v.divides = (n - 1) % v.phi == 0;
    if (v.divides) v.m = (n - 1) / v.phi;
    return v;
}

std::optional<Natural> minus_check(Natural n) {
    if (n < 2) throw std::domain_error("minus_check: n must be >= 2");
    Natural phi = euler_phi(n);
    Natural target = checked_add(n, 1);
    if (target % phi == 0) return target / phi;
    return std::nullopt;
}

FilterVerdict structural_filter(Natural n, Natural k_min) {
    if (n < 2) throw std::domain_error("structural_filter: n must be >= 2");
    FilterVerdict v;
    v.k_min = k_min;
    if (n % 2 == 0) {
        v.reason = FilterReason::even;
        return v;
    }
    Factorization f = factorize(n);
    v.omega = f.distinct_count();
    if (!f.square_free()) {
        v.reason = FilterReason::has_square_factor;
        return v;
    }
    if (f.distinct_count() <= 1) {  // square-free with one factor: prime
        v.reason = FilterReason::prime;
        return v;
    }
    if (f.distinct_count() < k_min) {
        v.reason = FilterReason::too_few_factors;
        return v;
    }
    v.eligible = true;
    v.reason = FilterReason::pass;
    return v;
}

namespace {

void require_odd_squarefree_composite(const Factorization& f, const char* who) {
    if (!f.factors.empty() && f.factors.front().prime == 2)
        throw std::domain_error(std::string(who) + ": n is even");
    if (!f.square_free())
        throw std::domain_error(std::string(who) + ": n has a square factor");
    if (f.distinct_count() < 2)
        throw std::domain_error(std::string(who) + ": n is prime (or 1)");
}

double complement_product(const Factorization& f, bool include_two) {
    Natural p_k = f.largest_prime();
    double product = 1.0;
    std::size_t next = 0;
    visit_primes(include_two ? 2 : 3, p_k + 1, [&](Natural q) {
        while (next < f.factors.size() && f.factors[next].prime < q) ++next;
        if (next < f.factors.size() && f.factors[next].prime == q) return;
        product *= 1.0 - 1.0 / static_cast<double>(q);
    });
    return product;
}

}  // namespace

double compute_A(const Factorization& f, bool include_two) {
    require_odd_squarefree_composite(f, "compute_A");
    return complement_product(f, include_two);
}

double compute_A(Natural n, bool include_two) {
    if (n < 2) throw std::domain_error("compute_A: n must be >= 2");
    Factorization f = factorize(n);
    require_odd_squarefree_composite(f, "compute_A");
    return complement_product(f, include_two);
}

LehmerAnalysis analyze_bounded(Natural n, double c, Natural j,
                               double feasibility_rel_tol) {
    if (n < 2) throw std::domain_error("analyze_bounded: n must be >= 2");
    Factorization f = factorize(n);
    require_odd_squarefree_composite(f, "analyze_bounded");

    bool c_is_small = std::abs(c - constants.c_small) < 1e-12;
    bool c_is_large = std::abs(c - constants.c_large) < 1e-12;
    if (!c_is_small && !c_is_large)
        throw std::domain_error("analyze_bounded: c must be 0.09 or 0.3");
    Natural p_k = f.largest_prime();
    if (c_is_large && p_k < constants.x_threshold_large)
        throw std::domain_error("analyze_bounded: c = 0.3 requires p_k >= 2973");
    if (j < 1) throw std::domain_error("analyze_bounded: j must be >= 1");

    LehmerAnalysis a;
    a.n = n;
    a.factors = f;
    a.p_k = p_k;
    a.c_used = c;
    a.j = j;

    Natural phi = euler_phi(f);
    a.r = Rational(phi, n);
    a.A = complement_product(f, /*include_two=*/false);

    double log_pk = std::log(static_cast<double>(p_k));
    // l_k is defined by c*l_k/(A*log p_k) = r
    a.l_k = a.r.to_double() * a.A * log_pk / c;

    a.m_plus = n / phi;  // floor(1/r) = floor(n/phi)
    a.psi_exact = Rational(n % phi, phi);
    a.psi = a.psi_exact.to_double();

    a.left_plus_exact = a.psi_exact * a.r;
    a.left_minus_exact = (Rational(j, 1) - a.psi_exact) * a.r;
    a.rhs = Rational(1, n);

    // floating path, evaluated exactly as written
    double scale = c * a.l_k / (a.A * log_pk);
    a.left_plus = a.psi * scale;
    a.left_minus = (static_cast<double>(j) - a.psi) * scale;

    double rhs_d = a.rhs.to_double();
    a.plus_feasible = std::abs(a.left_plus_exact.to_double() - rhs_d) <=
                      feasibility_rel_tol * rhs_d;
    a.minus_feasible = std::abs(a.left_minus_exact.to_double() - rhs_d) <=
                       feasibility_rel_tol * rhs_d;
    return a;
}

AsymptoticAnalysis analyze_asymptotic(Natural n, ProductMode mode, Natural j) {
    if (n < 2) throw std::domain_error("analyze_asymptotic: n must be >= 2");
    Factorization f = factorize(n);
    require_odd_squarefree_composite(f, "analyze_asymptotic");
    if (j < 1) throw std::domain_error("analyze_asymptotic: j must be >= 1");

    AsymptoticAnalysis a;
    a.n = n;
    a.p_k = f.largest_prime();
    a.mode = mode;
    a.j = j;
    a.A = mode == ProductMode::full_product ? 1.0
                                            : complement_product(f, /*include_two=*/false);

    double base = a.A * std::exp(constants.euler_gamma) *
                  std::log(static_cast<double>(a.p_k));
    a.m_plus = static_cast<Natural>(std::floor(base));
    a.alpha_or_beta = base - std::floor(base);
    a.left_plus = a.alpha_or_beta / base;
    a.left_minus = (static_cast<double>(j) - a.alpha_or_beta) / base;
    a.rhs = Rational(1, n);
    return a;
}

namespace {

ExampleRow make_row(std::string name, double computed, double reference,
                    double tolerance, bool relative = false) {
    ExampleRow row;
    row.name = std::move(name);
    row.computed = computed;
    row.reference = reference;
    row.abs_diff = std::abs(computed - reference);
    row.tolerance = tolerance;
    row.relative = relative;
    double bound = relative ? tolerance * std::abs(reference) : tolerance;
    row.pass = row.abs_diff <= bound;
    return row;
}

}  // namespace

ExampleReport reproduce_example() {
    constexpr Natural kN = 65535;  // 3*5*17*257
    LehmerAnalysis a = analyze_bounded(kN, constants.c_small, 1);

    ExampleReport report;
    report.rows.push_back(make_row("A", a.A, 0.39984516, 1e-6));
    report.rows.push_back(make_row("prime_product", a.r.to_double(), 0.50000763, 1e-7));
    report.rows.push_back(
        make_row("log_p_k", std::log(static_cast<double>(a.p_k)), 5.54907608, 1e-7));
    report.rows.push_back(make_row("l_k", a.l_k, 12.3266964, 1e-5, /*relative=*/true));
    report.rows.push_back(make_row("psi", a.psi, 0.99996922, 5e-7));
    report.rows.push_back(make_row("plus_left_side", a.left_plus, 0.49999238, 1e-6));
    report.rows.push_back(make_row("minus_left_side", a.left_minus, 1.526023e-5, 1e-8));
    report.rows.push_back(make_row("rhs", a.rhs.to_double(), 1.525902e-5, 1e-11));

    double rhs_d = a.rhs.to_double();
    double rel_residual = std::abs(a.left_minus_exact.to_double() - rhs_d) / rhs_d;
    report.rows.push_back(make_row("minus_rel_residual", rel_residual, 0.0, 1e-3));

    report.minus_solution = a.minus_feasible;
    report.plus_solution = a.plus_feasible;

    report.max_abs_deviation = 0;
    report.all_within_tolerance = report.minus_solution && !report.plus_solution;
    for (const ExampleRow& row : report.rows) {
        if (row.name != "minus_rel_residual")
            report.max_abs_deviation = std::max(report.max_abs_deviation, row.abs_diff);
        report.all_within_tolerance = report.all_within_tolerance && row.pass;
    }
    return report;
}

}  // namespace lehmer
