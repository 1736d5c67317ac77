#include <gtest/gtest.h>

#include <vector>

#include "pifix/iterator.hpp"
#include "pifix/verify.hpp"

using namespace pifix;

namespace {

RunConfig reference_p1_config() {
    RunConfig cfg;
    cfg.order = 1;
    cfg.x0_text = "3";
    cfg.x0 = BigFixed::from_integer(3);
    cfg.target_digits = 1000;
    cfg.epsilon_exponent = 900;
    cfg.guard_digits = 0;
    cfg.ladder_override = {1000};
    return cfg;
}

RunConfig p4_config(std::size_t target) {
    RunConfig cfg;
    cfg.order = 4;
    cfg.x0_text = "3.14159265358979324";
    cfg.x0 = parse(cfg.x0_text, Precision(17));
    cfg.start_digits = 18;
    cfg.target_digits = target;
    cfg.epsilon_exponent = target;
    return cfg;
}

std::vector<long> exponents(const IterationTrace& t) {
    std::vector<long> out;
    for (const auto& s : t.steps) out.push_back(s.delta_exponent.value_or(0));
    return out;
}

} // namespace

TEST(Ladder, OrderFourSchedule) {
    EXPECT_EQ(plan_precision_ladder(18, 4, 1'000'000, 0),
              (std::vector<std::size_t>{162, 1458, 13122, 118098, 1062882, 1062882}));
}

TEST(Ladder, StopsAtFirstEntryReachingTarget) {
    EXPECT_EQ(plan_precision_ladder(40, 1, 1000, 10), (std::vector<std::size_t>{120, 360, 1080, 1080}));
    EXPECT_EQ(plan_precision_ladder(18, 4, 100, 0), (std::vector<std::size_t>{162, 162}));
    EXPECT_EQ(plan_precision_ladder(18, 4, 13000, 10), (std::vector<std::size_t>{162, 1458, 13122, 13122}));
}

TEST(Ladder, Properties) {
    for (std::size_t d0 : {1u, 7u, 18u, 40u})
        for (std::size_t p : {1u, 2u, 4u, 9u})
            for (std::size_t target : {1u, 50u, 999u, 123456u})
                for (std::size_t g : {0u, 10u}) {
                    auto l = plan_precision_ladder(d0, p, target, g);
                    ASSERT_GE(l.size(), 2u);
                    EXPECT_EQ(l[l.size() - 1], l[l.size() - 2]);
                    EXPECT_GE(l.back(), target + g);
                    EXPECT_LT(l.back(), (target + g) * (2 * p + 1) + d0 * (2 * p + 1));
                    for (std::size_t i = 0; i + 2 < l.size(); ++i) EXPECT_EQ(l[i + 1], l[i] * (2 * p + 1));
                }
}

TEST(Iterate, ReferenceTraceOrderOne) {
    const IterationTrace t = iterate(reference_p1_config());
    EXPECT_EQ(t.terminated_by, Termination::epsilon);
    EXPECT_EQ(exponents(t), (std::vector<long>{-1, -4, -11, -34, -100, -301, -903}));
    EXPECT_EQ(t.steps.back().delta_leading, "5.699518230");
    for (const auto& s : t.steps) EXPECT_EQ(s.working_digits, 1000u);
}

TEST(Iterate, ReferenceTraceOrderFourFirstThreeSteps) {
    RunConfig cfg = p4_config(1'000'000);
    cfg.max_steps = 3;
    const IterationTrace t = iterate(cfg);
    EXPECT_EQ(t.terminated_by, Termination::max_steps);
    ASSERT_EQ(t.steps.size(), 3u);
    EXPECT_EQ(t.steps[0].delta_leading, "1.537356616");
    EXPECT_EQ(t.steps[1].delta_leading, "5.897298061");
    EXPECT_EQ(t.steps[2].delta_leading, "2.621201614");
    EXPECT_EQ(exponents(t), (std::vector<long>{-18, -162, -1453}));
    EXPECT_EQ(t.steps[2].working_digits, 13122u);
}

TEST(Iterate, StartAtFixedPoint) {
    RunConfig cfg;
    cfg.order = 1;
    cfg.x0 = machin_pi(50);
    cfg.target_digits = 50;
    cfg.epsilon_exponent = 40;
    cfg.start_digits = 50;
    const IterationTrace t = iterate(cfg);
    EXPECT_EQ(t.steps.size(), 1u);
    EXPECT_EQ(t.terminated_by, Termination::epsilon);
    if (t.steps[0].delta_exponent) {
        EXPECT_LE(*t.steps[0].delta_exponent, -40);
    }
}

TEST(Iterate, ConvergesToOracle) {
    for (std::size_t p : {1u, 2u, 3u, 5u}) {
        RunConfig cfg;
        cfg.order = p;
        cfg.x0 = parse("2.5", Precision(1));
        cfg.start_digits = 2;
        cfg.target_digits = 600;
        cfg.epsilon_exponent = 600;
        const IterationTrace t = iterate(cfg);
        EXPECT_EQ(t.terminated_by, Termination::epsilon);
        EXPECT_GE(count_matching_digits(t.final_value, machin_pi(700)), 598u) << "P=" << p;
    }
}

TEST(Iterate, MonotoneApproachAndOrderBound) {
    RunConfig cfg = reference_p1_config();
    const IterationTrace t = iterate(cfg);
    const BigFixed pi = machin_pi(1100);
    for (std::size_t i = 1; i < t.steps.size(); ++i)
        EXPECT_LT(abs(t.steps[i].value - pi), abs(t.steps[i - 1].value - pi)) << "step " << i + 1;
    for (std::size_t i = 2; i + 1 < t.steps.size(); ++i)
        EXPECT_LE(*t.steps[i + 1].delta_exponent, 3 * *t.steps[i].delta_exponent + 4);
}

TEST(Iterate, WorkingDigitsFollowLadder) {
    RunConfig cfg = p4_config(5000);
    const IterationTrace t = iterate(cfg);
    for (const auto& s : t.steps) EXPECT_EQ(s.working_digits, t.working_digits(s.index));
    EXPECT_EQ(t.ladder, plan_precision_ladder(18, 4, 5000, 10));
}

TEST(Iterate, Deterministic) {
    const IterationTrace a = iterate(reference_p1_config());
    const IterationTrace b = iterate(reference_p1_config());
    ASSERT_EQ(a.steps.size(), b.steps.size());
    for (std::size_t i = 0; i < a.steps.size(); ++i) {
        EXPECT_EQ(a.steps[i].delta_leading, b.steps[i].delta_leading);
        EXPECT_EQ(a.steps[i].delta_exponent, b.steps[i].delta_exponent);
        EXPECT_EQ(a.steps[i].value.mantissa(), b.steps[i].value.mantissa());
    }
    EXPECT_EQ(a.final_value.mantissa(), b.final_value.mantissa());
}

TEST(Iterate, SelfCorrectsAfterTruncation) {
    const IterationTrace clean = iterate(reference_p1_config());
    RunConfig cfg = reference_p1_config();
    cfg.max_steps = 8;
    const IterationTrace faulted = iterate(cfg, [](std::size_t n, BigFixed& x) {
        if (n == 2) x = round_to(x, 20);
    });
    EXPECT_EQ(faulted.terminated_by, Termination::epsilon);
    EXPECT_LE(faulted.steps.size(), clean.steps.size() + 1);
    EXPECT_GE(count_matching_digits(faulted.final_value, clean.final_value), 900u);
}

TEST(Iterate, RejectsStartOutsideBasin) {
    RunConfig cfg = reference_p1_config();
    cfg.x0 = parse("1.99", Precision(2));
    EXPECT_THROW(iterate(cfg), DomainError);
    cfg.x0 = parse("4.31", Precision(2));
    EXPECT_THROW(iterate(cfg), DomainError);
}

TEST(Iterate, UpperBasinEdgeConverges) {
    RunConfig cfg;
    cfg.order = 1;
    cfg.x0 = parse("4.3", Precision(1));
    cfg.start_digits = 1;
    cfg.target_digits = 100;
    cfg.epsilon_exponent = 100;
    const IterationTrace t = iterate(cfg);
    EXPECT_EQ(t.terminated_by, Termination::epsilon);
    EXPECT_GE(count_matching_digits(t.final_value, machin_pi(120)), 100u);
}

TEST(Iterate, InvalidConfig) {
    RunConfig cfg = reference_p1_config();
    cfg.epsilon_exponent = 1001;
    EXPECT_THROW(iterate(cfg), InvalidArgument);
    cfg = reference_p1_config();
    cfg.order = 0;
    EXPECT_THROW(iterate(cfg), InvalidArgument);
    cfg = reference_p1_config();
    cfg.max_steps = 0;
    EXPECT_THROW(iterate(cfg), InvalidArgument);
}

TEST(Iterate, DivergenceWhenDeltasStopShrinking) {
    // Pinning x back to 3 after every step makes every delta equal.
    RunConfig cfg = reference_p1_config();
    try {
        iterate(cfg, [](std::size_t, BigFixed& x) { x = BigFixed::from_integer(3); });
        FAIL() << "expected divergence";
    } catch (const DivergenceError& e) {
        EXPECT_EQ(e.trace().terminated_by, Termination::divergence);
        EXPECT_EQ(e.trace().steps.size(), 3u);
    }
}

TEST(Iterate, DivergenceWhenLeavingRange) {
    RunConfig cfg = reference_p1_config();
    try {
        iterate(cfg, [](std::size_t n, BigFixed& x) {
            if (n == 2) x = BigFixed::from_integer(7);
        });
        FAIL() << "expected divergence";
    } catch (const DivergenceError& e) {
        EXPECT_EQ(e.trace().steps.size(), 2u);
    }
}

TEST(Resume, SplitRunMatchesSingleRun) {
    RunConfig cfg = reference_p1_config();
    cfg.max_steps = 3;
    const IterationTrace first = iterate(cfg);
    EXPECT_EQ(first.terminated_by, Termination::max_steps);
    const IterationTrace resumed = resume(first, 4);

    RunConfig full = reference_p1_config();
    full.max_steps = 7;
    const IterationTrace single = iterate(full);
    EXPECT_EQ(resumed.final_value.mantissa(), single.final_value.mantissa());
    EXPECT_EQ(resumed.final_value.frac_digits(), single.final_value.frac_digits());
    EXPECT_EQ(exponents(resumed), exponents(single));
    EXPECT_EQ(resumed.terminated_by, single.terminated_by);
}

TEST(Resume, ReferenceRunSplitTwoPlusFive) {
    RunConfig cfg = reference_p1_config();
    cfg.max_steps = 2;
    const IterationTrace t = resume(iterate(cfg), 5);
    ASSERT_EQ(t.steps.size(), 7u);
    EXPECT_EQ(t.steps.back().delta_leading, "5.699518230");
    EXPECT_EQ(t.steps.back().delta_exponent, -903);
}

TEST(Resume, RejectsFinishedTrace) {
    const IterationTrace done = iterate(reference_p1_config());
    EXPECT_THROW(resume(done, 1), InvalidArgument);
}
