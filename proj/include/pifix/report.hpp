#pragma once
// report.hpp - the JSON run report and the ASCII digit file.

#include <json.hpp>

#include <chrono>
#include <cstddef>
#include <fstream>
#include <optional>
#include <string>

#include "pifix/error.hpp"
#include "pifix/iterator.hpp"
#include "pifix/numerics.hpp"
#include "pifix/verify.hpp"

namespace pifix {

inline constexpr std::size_t kDigitFileWidth = 80;

inline double to_ms(std::chrono::nanoseconds d) { return static_cast<double>(d.count()) / 1e6; }

inline nlohmann::json delta_json(const StepRecord& s) {
    nlohmann::json d;
    d["leading"] = s.delta_leading;
    d["exponent"] = s.delta_exponent ? nlohmann::json(*s.delta_exponent) : nlohmann::json(nullptr);
    return d;
}

/// Report document for one run. Timing fields are the only
/// non-deterministic content.
inline nlohmann::json make_report(const IterationTrace& trace, const std::optional<ConvergenceReport>& conv,
                                  std::chrono::nanoseconds total) {
    using nlohmann::json;
    const RunConfig& cfg = trace.config;
    json run;
    run["order"] = cfg.order;
    run["x0"] = cfg.x0_text;
    run["target_digits"] = cfg.target_digits;
    run["epsilon_exponent"] = cfg.epsilon_exponent;
    run["start_digits"] = cfg.start_digits;
    run["guard_digits"] = cfg.guard_digits;
    run["max_steps"] = cfg.max_steps;
    run["ladder"] = trace.ladder;

    json steps = json::array();
    for (const auto& s : trace.steps) {
        steps.push_back({{"index", s.index},
                         {"working_digits", s.working_digits},
                         {"delta", delta_json(s)},
                         {"wall_ms", to_ms(s.wall_time)}});
    }

    json doc;
    doc["run"] = std::move(run);
    doc["steps"] = std::move(steps);
    doc["terminated_by"] = to_string(trace.terminated_by);
    if (conv) {
        json orders = json::array();
        for (const auto& q : conv->order_estimates) orders.push_back({{"from_step", q.from_step}, {"value", q.value}});
        doc["convergence"] = {
            {"order_estimates", std::move(orders)},
            {"error_constant_estimate",
             conv->error_constant_estimate ? json(*conv->error_constant_estimate) : json(nullptr)},
            {"error_constant_exact", conv->error_constant_exact.str()},
            {"matched_digits", conv->matched_digits ? json(*conv->matched_digits) : json(nullptr)},
            {"theorem_check_passed", conv->theorem_check_passed},
        };
    } else {
        doc["convergence"] = nullptr;
    }
    doc["total_wall_ms"] = to_ms(total);
    return doc;
}

/// "3." on the first line, then the first `frac` fractional digits
/// (truncated) in lines of 80, newline terminated.
inline std::string format_digits(const BigFixed& value, std::size_t frac) {
    const std::string fixed = to_fixed_string(value, frac);
    const auto point = fixed.find('.');
    std::string out = fixed.substr(0, point) + ".\n";
    if (point == std::string::npos) return out;
    for (std::size_t i = point + 1; i < fixed.size(); i += kDigitFileWidth)
        out += fixed.substr(i, kDigitFileWidth) + "\n";
    return out;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path + " for writing");
    f << text;
    if (!f) throw Error("write to " + path + " failed");
}

/// Reads a digit file back into a BigFixed with as many fractional digits
/// as the file holds.
inline BigFixed read_digit_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path);
    std::string line, text;
    std::getline(f, line);
    text = line;
    while (std::getline(f, line)) text += line;
    const auto point = text.find('.');
    const std::size_t frac = point == std::string::npos ? 0 : text.size() - point - 1;
    return parse(text, Precision(std::max<std::size_t>(frac, 1)));
}

} // namespace pifix
