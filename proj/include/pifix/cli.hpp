#pragma once
// cli.hpp - command-line front end: compute, verify-theorem, bench.
//
// Exit codes: 0 success, 2 divergence, 3 invalid flags or other failure,
// 4 oracle disagreement.

#include <CLI11.hpp>

#include <chrono>
#include <cstddef>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pifix/error.hpp"
#include "pifix/iterator.hpp"
#include "pifix/numerics.hpp"
#include "pifix/report.hpp"
#include "pifix/series.hpp"
#include "pifix/verify.hpp"

namespace pifix::cli {

enum ExitCode : int { kOk = 0, kDiverged = 2, kInvalid = 3, kMismatch = 4 };

inline constexpr std::size_t kMachinVerifyLimit = 100000;

struct ComputeOptions {
    std::size_t order = 4;
    std::size_t digits = 0;
    std::string x0 = "3.14159265358979324";
    std::optional<std::size_t> epsilon_exp;
    std::size_t start_digits = 18;
    std::size_t guard = 10;
    std::size_t max_steps = 64;
    std::string out;
    std::string report;
    std::string verify;  // empty: machin up to kMachinVerifyLimit digits
};

struct BenchOptions {
    std::vector<std::size_t> orders;
    std::size_t digits = 10000;
    std::size_t repeat = 1;
    std::string out;
};

inline RunConfig make_config(const ComputeOptions& o) {
    RunConfig cfg;
    cfg.order = o.order;
    cfg.x0_text = o.x0;
    cfg.x0 = parse(o.x0, Precision(o.x0.size() + 64));
    cfg.target_digits = o.digits;
    cfg.epsilon_exponent = o.epsilon_exp.value_or(o.digits);
    cfg.start_digits = o.start_digits;
    cfg.guard_digits = o.guard;
    cfg.max_steps = o.max_steps;
    if (cfg.epsilon_exponent > cfg.target_digits) throw InvalidArgument("--epsilon-exp must not exceed --digits");
    return cfg;
}

inline std::string step_line(const StepRecord& s) {
    std::ostringstream os;
    os << "step " << s.index << "  digits=" << s.working_digits << "  |dx|=";
    if (s.delta_exponent)
        os << s.delta_leading << "e" << *s.delta_exponent;
    else
        os << "0";
    os << "  " << static_cast<long long>(to_ms(s.wall_time)) << "ms";
    return os.str();
}

inline int run_compute(const ComputeOptions& o, std::ostream& out, std::ostream& err) {
    using clock = std::chrono::steady_clock;
    const RunConfig cfg = make_config(o);
    const bool use_machin = o.verify.empty() ? o.digits <= kMachinVerifyLimit : o.verify == "machin";

    const auto t0 = clock::now();
    IterationTrace trace;
    try {
        trace = iterate(cfg);
    } catch (const DivergenceError& e) {
        for (const auto& s : e.trace().steps) out << step_line(s) << "\n";
        err << "error: " << e.what() << "\n";
        if (!o.report.empty())
            write_text_file(o.report, make_report(e.trace(), std::nullopt, clock::now() - t0).dump(2) + "\n");
        return kDiverged;
    }
    for (const auto& s : trace.steps) out << step_line(s) << "\n";

    std::optional<BigFixed> pi_ref;
    if (use_machin) pi_ref = machin_pi(o.digits + o.guard);
    const ConvergenceReport conv = summarize(trace, pi_ref);
    const auto total = clock::now() - t0;

    if (!o.out.empty()) write_text_file(o.out, format_digits(trace.final_value, o.digits));
    if (!o.report.empty()) write_text_file(o.report, make_report(trace, conv, total).dump(2) + "\n");

    out << "terminated_by=" << to_string(trace.terminated_by) << "  steps=" << trace.steps.size()
        << "  total=" << static_cast<long long>(to_ms(total)) << "ms\n";
    if (pi_ref) {
        if (to_fixed_string(trace.final_value, o.digits) != to_fixed_string(*pi_ref, o.digits)) {
            err << "error: digits disagree with the Machin reference (matched " << conv.matched_digits.value_or(0)
                << " of " << o.digits << ")\n";
            return kMismatch;
        }
        out << "verified " << o.digits << " digits against Machin reference\n";
    }
    return kOk;
}

inline int run_verify_theorem(std::size_t max_order, std::ostream& out) {
    const TheoremCheck check = verify_theorem(max_order);
    for (const auto& r : check.per_order) {
        // Printed in the unreduced (prod (2l-1))^2 / (2P+1)! form.
        const auto terms = error_constant_terms(r.order);
        out << "P=" << r.order << " a" << 2 * r.order + 1 << "=" << terms.odd_product_squared.get_str() << "/"
            << terms.factorial.get_str() << " " << (r.passed ? "PASS" : "FAIL") << "\n";
    }
    return check.passed ? kOk : kInvalid;
}

inline int run_bench(const BenchOptions& o, std::ostream& out) {
    using clock = std::chrono::steady_clock;
    if (o.orders.empty()) throw InvalidArgument("--order-list must not be empty");
    std::ostringstream csv;
    csv << "order,digits,steps,total_ms,ms_per_step,matched_digits\n";
    const BigFixed pi_ref = machin_pi(o.digits + 10);
    for (std::size_t order : o.orders) {
        ComputeOptions co;
        co.order = order;
        co.digits = o.digits;
        const RunConfig cfg = make_config(co);
        for (std::size_t r = 0; r < o.repeat; ++r) {
            const auto t0 = clock::now();
            const IterationTrace trace = iterate(cfg);
            const double ms = to_ms(clock::now() - t0);
            const std::size_t matched = std::min(count_matching_digits(trace.final_value, pi_ref), o.digits);
            csv << order << "," << o.digits << "," << trace.steps.size() << "," << std::fixed << std::setprecision(3)
                << ms << "," << ms / static_cast<double>(trace.steps.size()) << "," << matched << "\n";
        }
    }
    if (!o.out.empty()) write_text_file(o.out, csv.str());
    out << csv.str();
    return kOk;
}

/// Parses argv and dispatches. Never returns a code outside {0, 2, 3, 4}.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"pifix - pi by a fixed-point iteration of odd order 2P+1"};
    app.require_subcommand(1);

    ComputeOptions co;
    auto* compute = app.add_subcommand("compute", "compute digits of pi");
    compute->add_option("--order", co.order, "order P (convergence order 2P+1)")->check(CLI::Range(1, 1000));
    compute->add_option("--digits", co.digits, "fractional digits to produce")->required()->check(CLI::PositiveNumber);
    compute->add_option("--x0", co.x0, "start value");
    compute->add_option("--epsilon-exp", co.epsilon_exp, "stop when |dx| < 10^-E (default: --digits)")
        ->check(CLI::PositiveNumber);
    compute->add_option("--start-digits", co.start_digits, "digits trusted in x0")->check(CLI::PositiveNumber);
    compute->add_option("--guard", co.guard, "guard digits");
    compute->add_option("--max-steps", co.max_steps, "step limit")->check(CLI::PositiveNumber);
    compute->add_option("--out", co.out, "digit file");
    compute->add_option("--report", co.report, "JSON report file");
    compute->add_option("--verify", co.verify, "machin or none")->check(CLI::IsMember({"machin", "none"}));

    std::size_t max_order = 0;
    auto* theorem = app.add_subcommand("verify-theorem", "exact check of the Taylor coefficients of S at pi");
    theorem->add_option("--order-max", max_order, "largest P to check")->required()->check(CLI::Range(1, 64));

    BenchOptions bo;
    auto* bench = app.add_subcommand("bench", "time runs per order, CSV output");
    bench->add_option("--order-list", bo.orders, "comma separated orders")
        ->required()
        ->delimiter(',')
        ->check(CLI::Range(1, 1000));
    bench->add_option("--digits", bo.digits, "fractional digits")->check(CLI::PositiveNumber);
    bench->add_option("--repeat", bo.repeat, "runs per order")->check(CLI::PositiveNumber);
    bench->add_option("--out", bo.out, "CSV file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << "\n";
        return kInvalid;
    }

    try {
        if (*compute) return run_compute(co, out, err);
        if (*theorem) return run_verify_theorem(max_order, out);
        if (*bench) return run_bench(bo, out);
    } catch (const DivergenceError& e) {
        err << "error: " << e.what() << "\n";
        return kDiverged;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInvalid;
    }
    return kInvalid;
}

} // namespace pifix::cli
