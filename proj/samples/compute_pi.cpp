// Library usage without the CLI: 2000 digits of pi with order 5 (P = 2),
// checked against the Machin reference.
#include <iostream>

#include "pifix/pifix.hpp"

int main() {
    pifix::RunConfig cfg;
    cfg.order = 2;
    cfg.x0_text = "3.14";
    cfg.x0 = pifix::parse(cfg.x0_text, pifix::Precision(2));
    cfg.start_digits = 3;
    cfg.target_digits = 2000;
    cfg.epsilon_exponent = 2000;

    const pifix::IterationTrace trace = pifix::iterate(cfg);
    for (const auto& s : trace.steps)
        std::cout << "step " << s.index << " digits=" << s.working_digits << " |dx|=" << s.delta_leading << "e"
                  << s.delta_exponent.value_or(0) << "\n";

    const auto pi = pifix::machin_pi(2010);
    std::cout << "matched " << pifix::count_matching_digits(trace.final_value, pi) << " digits\n";
    std::cout << pifix::to_decimal_string(trace.final_value, 60) << "\n";
}
