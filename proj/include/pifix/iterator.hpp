#pragma once
// iterator.hpp - the fixed-point iteration x_n = S(x_{n-1}) driven by a
// precision ladder, with epsilon termination and divergence detection.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pifix/error.hpp"
#include "pifix/numerics.hpp"
#include "pifix/series.hpp"

namespace pifix {

/// Working precisions per step, in significant digits: entry n (1-based) is
/// d0 * (2P+1)^n until an entry reaches target + guard; that entry is then
/// repeated once. Steps past the end reuse the last entry.
inline std::vector<std::size_t> plan_precision_ladder(std::size_t start_digits, std::size_t order,
                                                      std::size_t target, std::size_t guard) {
    const std::size_t goal = target + guard;
    const std::size_t factor = 2 * order + 1;
    std::vector<std::size_t> ladder;
    std::size_t d = start_digits;
    do {
        if (d > std::numeric_limits<std::size_t>::max() / factor) throw InvalidArgument("precision ladder overflows");
        d *= factor;
        ladder.push_back(d);
    } while (d < goal);
    ladder.push_back(d);
    return ladder;
}

struct RunConfig {
    std::size_t order = 4;
    BigFixed x0;
    std::string x0_text;
    std::size_t target_digits = 0;
    std::size_t epsilon_exponent = 0;  // epsilon = 10^-E
    std::size_t start_digits = 18;
    std::size_t guard_digits = 10;
    std::size_t max_steps = 64;
    /// Explicit per-step digits replacing the planned ladder (e.g. a flat run).
    std::vector<std::size_t> ladder_override;

    void validate() const {
        if (order == 0) throw InvalidArgument("order must be >= 1");
        if (target_digits == 0) throw InvalidArgument("target digits must be >= 1");
        if (epsilon_exponent == 0) throw InvalidArgument("epsilon exponent must be >= 1");
        if (epsilon_exponent > target_digits) throw InvalidArgument("epsilon exponent exceeds target digits");
        if (start_digits == 0) throw InvalidArgument("start digits must be >= 1");
        if (max_steps == 0) throw InvalidArgument("max steps must be >= 1");
        for (auto d : ladder_override)
            if (d == 0) throw InvalidArgument("ladder entries must be >= 1");
    }

    std::vector<std::size_t> ladder() const {
        if (!ladder_override.empty()) return ladder_override;
        return plan_precision_ladder(start_digits, order, target_digits, guard_digits);
    }
};

enum class Termination { epsilon, max_steps, divergence };

inline const char* to_string(Termination t) {
    switch (t) {
    case Termination::epsilon: return "epsilon";
    case Termination::max_steps: return "max_steps";
    case Termination::divergence: return "divergence";
    }
    return "unknown";
}

struct StepRecord {
    std::size_t index = 0;
    std::size_t working_digits = 0;
    std::optional<long> delta_exponent;  // none when x_n == x_{n-1}
    std::string delta_leading;           // first 10 significant digits, "d.ddddddddd"
    BigFixed value;                      // x_n as produced by the step
    std::chrono::nanoseconds wall_time{0};
};

struct IterationTrace {
    RunConfig config;
    std::vector<std::size_t> ladder;
    std::vector<StepRecord> steps;
    BigFixed final_value;
    Termination terminated_by = Termination::max_steps;

    /// Working digits the ladder assigns to step n (1-based).
    std::size_t working_digits(std::size_t n) const {
        return ladder.at(std::min(n, ladder.size()) - 1);
    }
};

class DivergenceError : public Error {
public:
    DivergenceError(const std::string& why, IterationTrace trace)
        : Error("iteration diverged: " + why), trace_(std::move(trace)) {}
    const IterationTrace& trace() const noexcept { return trace_; }

private:
    IterationTrace trace_;
};

/// Called after step n with the new iterate; may modify it (fault injection).
using StepHook = std::function<void(std::size_t step, BigFixed& x)>;

inline constexpr std::size_t kDeltaLeadingDigits = 10;

namespace detail {

inline constexpr std::size_t kMinEvalGuard = 10;

// Evaluates S at the step's precision plus guard, then rounds the iterate
// to `working` significant digits.
inline BigFixed fixed_point_step(const BigFixed& x, const CoefficientTable& table, std::size_t working,
                                 std::size_t guard) {
    const std::size_t eval = working + std::max(guard, kMinEvalGuard);
    const BigFixed xin = x.frac_digits() > working ? round_to(x, working) : x;
    const BigFixed s = sin_eval_wide(xin, Precision(eval + 2));
    return round_significant(s_eval_with_sine(xin, s, table, Precision(eval)), working);
}

inline void advance(IterationTrace& trace, const StepHook& hook) {
    using clock = std::chrono::steady_clock;
    const RunConfig& cfg = trace.config;
    const CoefficientTable table = make_coefficients(cfg.order);
    const auto low = BigFixed(mpz_class(5), 1);
    const auto high = BigFixed::from_integer(6);
    const long eps = -static_cast<long>(cfg.epsilon_exponent);

    BigFixed x = trace.final_value;
    for (std::size_t n = trace.steps.size() + 1; n <= cfg.max_steps; ++n) {
        const auto t0 = clock::now();
        StepRecord rec;
        rec.index = n;
        rec.working_digits = trace.working_digits(n);
        BigFixed next = fixed_point_step(x, table, rec.working_digits, cfg.guard_digits);
        BigFixed delta = abs(next - x);
        rec.delta_exponent = magnitude_exponent(delta);
        rec.delta_leading = leading_digits(delta, kDeltaLeadingDigits);
        rec.value = next;
        rec.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(clock::now() - t0);

        constexpr long kNone = std::numeric_limits<long>::max();
        const long prev_exp = trace.steps.empty() ? kNone : trace.steps.back().delta_exponent.value_or(kNone);
        trace.steps.push_back(std::move(rec));
        x = std::move(next);
        if (hook) hook(n, x);
        trace.final_value = x;

        const auto& cur = trace.steps.back();
        if (x < low || x > high) {
            trace.terminated_by = Termination::divergence;
            throw DivergenceError("x_" + std::to_string(n) + " left [0.5, 6.0]", trace);
        }
        if (!cur.delta_exponent || *cur.delta_exponent < eps) {
            trace.terminated_by = Termination::epsilon;
            return;
        }
        if (n >= 3 && prev_exp != kNone && *cur.delta_exponent >= prev_exp) {
            trace.terminated_by = Termination::divergence;
            throw DivergenceError("delta exponent did not decrease at step " + std::to_string(n), trace);
        }
    }
    trace.terminated_by = Termination::max_steps;
}

} // namespace detail

/// Runs the iteration from config.x0. Throws DomainError when x0 lies
/// outside the accepted start interval [2.0, 4.3] and DivergenceError
/// (carrying the partial trace) when the run diverges.
inline IterationTrace iterate(const RunConfig& config, const StepHook& hook = {}) {
    config.validate();
    if (config.x0 < BigFixed::from_integer(2) || config.x0 > BigFixed(mpz_class(43), 1))
        throw DomainError("start value must lie in [2.0, 4.3]");
    IterationTrace trace;
    trace.config = config;
    trace.ladder = config.ladder();
    trace.final_value = config.x0;
    detail::advance(trace, hook);
    return trace;
}

/// Continues a max_steps-terminated run for up to extra_steps more steps.
inline IterationTrace resume(const IterationTrace& trace, std::size_t extra_steps, const StepHook& hook = {}) {
    if (trace.terminated_by != Termination::max_steps)
        throw InvalidArgument(std::string("cannot resume a trace terminated by ") + to_string(trace.terminated_by));
    if (extra_steps == 0) throw InvalidArgument("extra steps must be >= 1");
    IterationTrace next = trace;
    next.config.max_steps += extra_steps;
    detail::advance(next, hook);
    return next;
}

} // namespace pifix
