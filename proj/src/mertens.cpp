#include "lehmer/mertens.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lehmer/numeric.hpp"
#include "lehmer/primes.hpp"

namespace lehmer {

double MertensEvaluation::raw_times_log_x() const { return raw_value * std::log(x); }

namespace {

constexpr std::size_t kLogSpaceThreshold = 10000;  // factor count

MertensEvaluation make_eval(double x, double raw, double model) {
    MertensEvaluation e;
    e.x = x;
    e.raw_value = raw;
    e.model_value = model;
    e.residual = raw - model;
    e.scaled_residual = e.residual * std::log(x);
    return e;
}

// Sieved Mobius values for [lo, hi), segmented so N is not a memory bound.
std::vector<std::int8_t> mobius_segment(Natural lo, Natural hi,
                                        const std::vector<Natural>& base) {
    std::size_t count = static_cast<std::size_t>(hi - lo);
    std::vector<std::int8_t> mu(count, 1);
    std::vector<Natural> rem(count);
    for (std::size_t i = 0; i < count; ++i) rem[i] = lo + i;
    if (lo == 0) mu[0] = 0;

    for (Natural p : base) {
        if (p * p >= hi) break;
        Natural first = lo == 0 ? 0 : ((lo + p - 1) / p) * p;
        if (first < p) first = p;
        for (Natural m = first; m < hi; m += p) {
            std::size_t i = static_cast<std::size_t>(m - lo);
            rem[i] /= p;
            if (rem[i] % p == 0) {
                mu[i] = 0;  // square factor
                while (rem[i] % p == 0) rem[i] /= p;
            } else {
                mu[i] = static_cast<std::int8_t>(-mu[i]);
            }
        }
    }
    for (std::size_t i = 0; i < count; ++i)
        if (rem[i] > 1 && mu[i] != 0) mu[i] = static_cast<std::int8_t>(-mu[i]);
    return mu;
}

template <typename Fn>
void visit_mobius(Natural N, Fn&& fn) {
    const std::vector<Natural> base = simple_sieve(isqrt(N));
    constexpr Natural kSegment = Natural(1) << 20;
    for (Natural lo = 1; lo <= N; lo += kSegment) {
        Natural hi = std::min(N + 1, lo + kSegment);
        std::vector<std::int8_t> mu = mobius_segment(lo, hi, base);
        for (Natural n = lo; n < hi; ++n) fn(n, mu[static_cast<std::size_t>(n - lo)]);
    }
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double eps,
                        int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double eps) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, eps, 40);
}

}  // namespace

MertensEvaluation prime_reciprocal_sum(double x) {
    if (x < 2) throw std::domain_error("prime_reciprocal_sum: x must be >= 2");
    KahanSum sum;
    Natural limit = static_cast<Natural>(std::floor(x));
    visit_primes(2, limit + 1, [&](Natural p) { sum.add(1.0 / static_cast<double>(p)); });
    return make_eval(x, sum.value(), std::log(std::log(x)) + constants.mertens_a);
}

MertensEvaluation log_p_over_p_sum(double x) {
    if (x < 2) throw std::domain_error("log_p_over_p_sum: x must be >= 2");
    KahanSum sum;
    Natural limit = static_cast<Natural>(std::floor(x));
    visit_primes(2, limit + 1, [&](Natural p) {
        double pd = static_cast<double>(p);
        sum.add(std::log(pd) / pd);
    });
    return make_eval(x, sum.value(), 1.0 + std::log(x));
}

MertensEvaluation euler_product(double x) {
    if (x < 2) throw std::domain_error("euler_product: x must be >= 2");
    Natural limit = static_cast<Natural>(std::floor(x));

    // count first to pick the evaluation route
    std::size_t count = 0;
    visit_primes(2, limit + 1, [&](Natural) { ++count; });

    double raw;
    if (count <= kLogSpaceThreshold) {
        double product = 1.0;
        visit_primes(2, limit + 1,
                     [&](Natural p) { product *= 1.0 - 1.0 / static_cast<double>(p); });
        raw = product;
    } else {
        // log-space with compensation avoids drift over many factors
        KahanSum logs;
        visit_primes(2, limit + 1,
                     [&](Natural p) { logs.add(std::log1p(-1.0 / static_cast<double>(p))); });
        raw = std::exp(logs.value());
    }
    return make_eval(x, raw, constants.exp_neg_gamma / std::log(x));
}

AbelComparison abel_check(std::span<const WeightedPoint> weights,
                          const std::function<double(double)>& smooth_fn,
                          const std::function<double(double)>& smooth_fn_deriv,
                          double x) {
    for (std::size_t i = 1; i < weights.size(); ++i)
        if (weights[i].position < weights[i - 1].position)
            throw std::domain_error("abel_check: weights must be sorted by position");

    AbelComparison cmp;
    KahanSum direct;
    std::vector<double> positions;
    std::vector<double> partial;  // A(position_k) after absorbing the jump
    KahanSum running;
    for (const WeightedPoint& w : weights) {
        double pos = static_cast<double>(w.position);
        if (pos > x) break;
        direct.add(w.value * smooth_fn(pos));
        running.add(w.value);
        if (!positions.empty() && positions.back() == pos) {
            partial.back() = running.value();
        } else {
            positions.push_back(pos);
            partial.push_back(running.value());
        }
    }
    cmp.direct = direct.value();
    if (positions.empty()) return cmp;  // nothing at or below x: both sides 0

    // A(u) is constant on [positions[k], positions[k+1]), so each piece of the
    // integral is A_k times an exact quadrature of the smooth derivative.
    KahanSum integral;
    for (std::size_t k = 0; k < positions.size(); ++k) {
        double a = positions[k];
        double b = k + 1 < positions.size() ? positions[k + 1] : x;
        if (b <= a) continue;
        double piece = integrate(smooth_fn_deriv, a, b, 1e-14);
        integral.add(partial[k] * piece);
    }
    cmp.abel = running.value() * smooth_fn(x) - integral.value();
    return cmp;
}

double mobius_series_partial(Natural N) {
    if (N == 0) throw std::domain_error("mobius_series_partial: N must be >= 1");
    KahanSum sum;
    visit_mobius(N, [&](Natural n, std::int8_t mu) {
        if (mu != 0) sum.add(static_cast<double>(mu) / static_cast<double>(n));
    });
    return sum.value();
}

std::int64_t mertens_function(Natural N) {
    if (N == 0) throw std::domain_error("mertens_function: N must be >= 1");
    std::int64_t total = 0;
    visit_mobius(N, [&](Natural, std::int8_t mu) { total += mu; });
    return total;
}

LowerBoundCheck lower_bound_check(double x, double c, bool include_two) {
    if (x < 3) throw std::domain_error("lower_bound_check: x must be >= 3");
    if (c <= 0) throw std::domain_error("lower_bound_check: c must be positive");
    MertensEvaluation eval = euler_product(x);
    double raw = eval.raw_value;
    if (!include_two) raw *= 2.0;  // drop the (1 - 1/2) factor
    LowerBoundCheck check;
    check.holds = raw > c / std::log(x);
    check.margin = raw * std::log(x) - c;
    return check;
}

double estimate_mertens_constant(double x) {
    if (x < 100) throw std::domain_error("estimate_mertens_constant: x must be >= 100");
    return prime_reciprocal_sum(x).raw_value - std::log(std::log(x));
}

PowerProductBounds power_product_bounds(Natural p_lo, Natural p_hi,
                                        std::span<const Natural> subset) {
    for (Natural p : subset)
        if (!is_prime(p))
            throw std::domain_error("power_product_bounds: subset member " +
                                    std::to_string(p) + " is not prime");
    if (!subset.empty()) {
        auto [mn, mx] = std::minmax_element(subset.begin(), subset.end());
        if (p_lo > *mn || *mx > p_hi)
            throw std::domain_error("power_product_bounds: subset outside [p_lo, p_hi]");
    }

    // all three products are evaluated by the same M-fold multiplication loop
    // so the collapsed case (p_lo == p == p_hi) stays bit-identical
    double f_lo = 1.0 - 1.0 / static_cast<double>(p_lo);
    double f_hi = 1.0 - 1.0 / static_cast<double>(p_hi);
    PowerProductBounds b;
    b.lower = 1.0;
    b.product = 1.0;
    b.upper = 1.0;
    for (Natural p : subset) {
        b.lower *= f_lo;
        b.product *= 1.0 - 1.0 / static_cast<double>(p);
        b.upper *= f_hi;
    }
    return b;
}

}  // namespace lehmer
