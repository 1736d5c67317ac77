#pragma once
// verify.hpp - independent checks on the iteration: a Machin-formula pi,
// digit agreement, empirical convergence order and error constant, and the
// exact Taylor-coefficient check of S about pi.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pifix/error.hpp"
#include "pifix/iterator.hpp"
#include "pifix/numerics.hpp"
#include "pifix/rational.hpp"
#include "pifix/series.hpp"

namespace pifix {

namespace detail {

struct ArctanSplit {
    mpz_class p, q, b, t;
};

// Binary splitting of sum_{k in [lo,hi)} (-1)^k / ((2k+1) n^(2k)).
inline ArctanSplit arctan_split(unsigned long n2, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) {
        ArctanSplit leaf;
        leaf.p = lo == 0 ? 1 : -1;
        leaf.q = lo == 0 ? 1 : n2;
        leaf.b = static_cast<unsigned long>(2 * lo + 1);
        leaf.t = leaf.p;
        return leaf;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    ArctanSplit l = arctan_split(n2, lo, mid);
    ArctanSplit r = arctan_split(n2, mid, hi);
    ArctanSplit out;
    out.t = r.b * r.q * l.t + l.b * l.p * r.t;
    out.p = l.p * r.p;
    out.q = l.q * r.q;
    out.b = l.b * r.b;
    return out;
}

/// arctan(1/n) * 10^scale, truncated, integer arithmetic only.
inline mpz_class arctan_inverse(unsigned long n, std::size_t scale) {
    // n^(2k+1) (2k+1) > 10^(scale+2) bounds the first omitted term.
    const double per_term = 2.0 * std::log10(double(n));
    const auto terms = static_cast<std::size_t>(double(scale + 2) / per_term) + 2;
    ArctanSplit s = arctan_split(n * n, 0, terms);
    mpz_class num = s.t * pow10(scale);
    mpz_class den = s.b * s.q * n;
    return tdiv(num, den);
}

} // namespace detail

/// pi with |result - pi| < 10^-digits from pi/4 = 4 arctan(1/5) - arctan(1/239).
inline BigFixed machin_pi(std::size_t digits) {
    if (digits == 0) throw InvalidArgument("machin_pi needs digits >= 1");
    const std::size_t work = digits + 10;
    mpz_class pi = 4 * (4 * detail::arctan_inverse(5, work) - detail::arctan_inverse(239, work));
    return round_to(BigFixed(pi, work), digits);
}

/// Largest m with |a - b| < 10^-m, capped at the smaller fractional width.
inline std::size_t count_matching_digits(const BigFixed& a, const BigFixed& b) {
    const std::size_t cap = std::min(a.frac_digits(), b.frac_digits());
    auto e = magnitude_exponent(a - b);
    if (!e) return cap;
    if (*e >= -1) return 0;
    return std::min(cap, static_cast<std::size_t>(-*e - 1));
}

/// Empirical order from the pair of steps (from_step, from_step + 1).
struct OrderEstimate {
    std::size_t from_step = 0;
    double value = 0;
};

namespace detail {

inline double log10_magnitude(long exponent, const std::string& leading) {
    return static_cast<double>(exponent) + std::log10(std::stod(leading));
}

/// log10 |a| from the exact exponent and the first 17 significant digits.
inline double log10_abs(const BigFixed& a) {
    return log10_magnitude(*magnitude_exponent(a), leading_digits(a, 17));
}

} // namespace detail

/// q_n = log10(delta_{n+1}) / log10(delta_n) for consecutive nonzero deltas.
inline std::vector<OrderEstimate> estimate_orders(const IterationTrace& trace) {
    if (trace.steps.size() < 3) throw InsufficientData("order estimation needs at least 3 steps");
    std::vector<OrderEstimate> out;
    for (std::size_t i = 0; i + 1 < trace.steps.size(); ++i) {
        const auto& a = trace.steps[i];
        const auto& b = trace.steps[i + 1];
        if (!a.delta_exponent || !b.delta_exponent) continue;
        const double la = detail::log10_magnitude(*a.delta_exponent, a.delta_leading);
        const double lb = detail::log10_magnitude(*b.delta_exponent, b.delta_leading);
        if (la == 0.0) continue;
        out.push_back({a.index, lb / la});
    }
    return out;
}

/// |e_{n+1}| / |e_n|^(2P+1) with e_n = x_n - pi_ref, for the latest pair whose
/// errors sit at least three orders above both the reference and the
/// iterates' own rounding. Runs shorter than 3 steps are still pre-asymptotic
/// and are rejected.
inline double estimate_error_constant(const IterationTrace& trace, const BigFixed& pi_ref, std::size_t order) {
    if (trace.steps.size() < 3) throw InsufficientData("error constant estimation needs at least 3 steps");
    const long ref_floor = -static_cast<long>(pi_ref.frac_digits());
    auto resolvable = [&](const StepRecord& s) -> std::optional<double> {
        BigFixed err = s.value - pi_ref;
        auto e = magnitude_exponent(err);
        const long own_floor = -static_cast<long>(s.value.frac_digits());
        if (!e || *e < std::max(ref_floor, own_floor) + 3) return std::nullopt;
        return detail::log10_abs(err);
    };
    for (std::size_t i = trace.steps.size(); i-- > 1;) {
        auto next = resolvable(trace.steps[i]);
        auto prev = resolvable(trace.steps[i - 1]);
        if (next && prev)
            return std::pow(10.0, *next - static_cast<double>(2 * order + 1) * *prev);
    }
    throw InsufficientData("no step pair has errors resolvable above the reference precision");
}

struct TheoremOrderResult {
    std::size_t order = 0;
    Rational leading;           // a_(2P+1) of S(pi+t) - pi
    Rational expected;          // error_constant(P)
    bool lower_terms_vanish = false;
    bool passed = false;
};

struct TheoremCheck {
    bool passed = true;
    std::vector<TheoremOrderResult> per_order;
};

/// For P = 1..max_order: a_1..a_2P vanish and a_(2P+1) equals the error
/// constant, exactly. Since S^(k)(pi) = k! a_k this is the derivative statement.
inline TheoremCheck verify_theorem(std::size_t max_order) {
    if (max_order == 0) throw InvalidArgument("max order must be >= 1");
    TheoremCheck check;
    for (std::size_t p = 1; p <= max_order; ++p) {
        const FormalSeries series = taylor_of_S(p, 2 * p + 1);
        TheoremOrderResult r;
        r.order = p;
        r.leading = series[2 * p + 1];
        r.expected = error_constant(p);
        r.lower_terms_vanish = true;
        for (std::size_t k = 0; k <= 2 * p; ++k) r.lower_terms_vanish = r.lower_terms_vanish && series[k].is_zero();
        r.passed = r.lower_terms_vanish && r.leading == r.expected;
        check.passed = check.passed && r.passed;
        check.per_order.push_back(std::move(r));
    }
    return check;
}

struct ConvergenceReport {
    std::vector<OrderEstimate> order_estimates;
    std::optional<double> error_constant_estimate;
    Rational error_constant_exact;
    std::optional<std::size_t> matched_digits;
    bool theorem_check_passed = false;
};

/// Aggregates the estimators for a finished trace. pi_ref may be absent
/// (no oracle run); the estimators that need it are then left empty.
inline ConvergenceReport summarize(const IterationTrace& trace, const std::optional<BigFixed>& pi_ref) {
    ConvergenceReport rep;
    const std::size_t order = trace.config.order;
    rep.error_constant_exact = error_constant(order);
    rep.theorem_check_passed = verify_theorem(order).passed;
    if (trace.steps.size() >= 3) rep.order_estimates = estimate_orders(trace);
    if (pi_ref) {
        rep.matched_digits = std::min(count_matching_digits(trace.final_value, *pi_ref), trace.config.target_digits);
        try {
            rep.error_constant_estimate = estimate_error_constant(trace, *pi_ref, order);
        } catch (const InsufficientData&) {
        }
    }
    return rep;
}

} // namespace pifix
