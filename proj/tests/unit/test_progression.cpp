#include "curriculum/progression.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace curriculum {
namespace {

TEST(Complexity, RejectsOutOfRange) {
  EXPECT_THROW(Complexity(-0.01), std::invalid_argument);
  EXPECT_THROW(Complexity(1.01), std::invalid_argument);
  EXPECT_THROW(Complexity(std::nan("")), std::invalid_argument);
  EXPECT_DOUBLE_EQ(Complexity(0.25).value(), 0.25);
  EXPECT_DOUBLE_EQ(Complexity::clamped(3.0).value(), 1.0);
  EXPECT_DOUBLE_EQ(Complexity::clamped(-3.0).value(), 0.0);
}

TEST(LinearProgress, RampsThenSaturates) {
  const LinearParams p{100};
  EXPECT_DOUBLE_EQ(linear_progress(0, p).value(), 0.0);
  EXPECT_DOUBLE_EQ(linear_progress(25, p).value(), 0.25);
  EXPECT_DOUBLE_EQ(linear_progress(100, p).value(), 1.0);
  EXPECT_DOUBLE_EQ(linear_progress(1000, p).value(), 1.0);
}

TEST(LinearProgress, RejectsBadInput) {
  EXPECT_THROW(linear_progress(0, LinearParams{0}), std::invalid_argument);
  EXPECT_THROW(linear_progress(-1, LinearParams{10}), std::invalid_argument);
}

TEST(ExponentialProgress, MatchesReferenceValues) {
  EXPECT_NEAR(exponential_progress(50, ExponentialParams(100, 1.0)).value(), 0.3775406687981455,
              1e-12);
  EXPECT_NEAR(exponential_progress(25, ExponentialParams(100, 0.5)).value(), 0.1015363240915518,
              1e-12);
  EXPECT_NEAR(exponential_progress(50, ExponentialParams(100, -1.0)).value(), 0.6224593312018546,
              1e-12);
}

TEST(ExponentialProgress, PositiveSlopeLiesBelowLinearNegativeAbove) {
  const LinearParams lin{1000};
  for (double s : {0.2, 1.0, 5.0}) {
    for (std::int64_t t = 1; t < 1000; t += 37) {
      EXPECT_LT(exponential_progress(t, ExponentialParams(1000, s)).value(),
                linear_progress(t, lin).value());
      EXPECT_GT(exponential_progress(t, ExponentialParams(1000, -s)).value(),
                linear_progress(t, lin).value());
    }
  }
}

TEST(ExponentialProgress, SaturatesAfterEnd) {
  const ExponentialParams p(10, 0.3);
  EXPECT_DOUBLE_EQ(exponential_progress(10, p).value(), 1.0);
  EXPECT_DOUBLE_EQ(exponential_progress(11, p).value(), 1.0);
  EXPECT_DOUBLE_EQ(exponential_progress(1'000'000, p).value(), 1.0);
}

TEST(ExponentialProgress, ExtremeSlopesStayFinite) {
  for (double s : {1e-3, -1e-3, 1e-9, 1e12, -1e12}) {
    const ExponentialParams p(1000, s);
    for (std::int64_t t = 0; t <= 1000; t += 50) {
      const double v = exponential_progress(t, p).value();
      EXPECT_TRUE(std::isfinite(v)) << "s=" << s << " t=" << t;
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(ExponentialProgress, RejectsZeroSlope) {
  EXPECT_THROW(ExponentialParams(10, 0.0), std::invalid_argument);
  EXPECT_THROW(ExponentialParams(0, 1.0), std::invalid_argument);
}

TEST(ExponentialProgress, PropertyMonotoneAndBounded) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> te_draw(1, 5000);
  std::uniform_real_distribution<double> log_s(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto te = te_draw(rng);
    const double s = std::pow(10.0, log_s(rng)) * (trial % 2 ? -1.0 : 1.0);
    const ExponentialParams p(te, s);
    double prev = 0.0;
    for (std::int64_t t = 0; t <= te + 5; t += std::max<std::int64_t>(1, te / 40)) {
      const double v = exponential_progress(t, p).value();
      ASSERT_GE(v, prev - 1e-15);
      ASSERT_LE(v, 1.0);
      prev = v;
    }
  }
}

TEST(Friction, InitialStateHoldsBaseline) {
  const FrictionParams params{0.1, kGravity, 3, FrictionFormulation::speed};
  const auto state = init_friction_state(params, 4.0, 1);
  EXPECT_EQ(state.step, 3);
  EXPECT_EQ(state.window, (std::vector<double>{4.0, 4.0, 4.0}));
  EXPECT_DOUBLE_EQ(state.prev_speed, 1.0);
  EXPECT_DOUBLE_EQ(state.min_speed, 1.0);
}

TEST(Friction, SpeedTraceMatchesHandComputation) {
  const FrictionParams params{0.05, kGravity, 2, FrictionFormulation::speed};
  auto state = init_friction_state(params, 0.0, 1);
  const std::vector<double> perf{0.0, 0.5, 1.0, 2.0, 2.0, 1.0, 3.0};
  const std::vector<double> expected{0.0,     0.122625, 0.367875, 0.73575,
                                     0.981,   0.73575,  0.981};
  for (std::size_t k = 0; k < perf.size(); ++k) {
    EXPECT_NEAR(friction_step(state, params, perf[k]).value(), expected[k], 1e-12) << k;
  }
  EXPECT_EQ(state.step, 2 + 7);
}

TEST(Friction, ConstantPerformanceNeverMoves) {
  for (auto f : {FrictionFormulation::uniform, FrictionFormulation::monotonic,
                 FrictionFormulation::speed}) {
    const FrictionParams params{0.3, kGravity, 5, f};
    auto state = init_friction_state(params, 7.0, 3);
    for (int k = 0; k < 100; ++k) {
      EXPECT_DOUBLE_EQ(friction_step(state, params, 7.0).value(), 0.0);
    }
  }
}

TEST(Friction, FallingPerformanceKeepsSpeedClampedAtOne) {
  const FrictionParams params{1.0, kGravity, 2, FrictionFormulation::speed};
  auto state = init_friction_state(params, 10.0, 3);
  for (int k = 0; k < 20; ++k) {
    EXPECT_DOUBLE_EQ(friction_step(state, params, 10.0 - k).value(), 0.0);
    EXPECT_DOUBLE_EQ(state.prev_speed, 1.0);
  }
}

TEST(Friction, MonotonicNeverDecreases) {
  const FrictionParams params{0.02, kGravity, 4, FrictionFormulation::monotonic};
  auto state = init_friction_state(params, 0.0, 3);
  double prev = 0.0;
  for (int k = 0; k < 400; ++k) {
    const double p = 0.1 * k + 5.0 * std::sin(0.3 * k);
    const double c = friction_step(state, params, p).value();
    ASSERT_GE(c, prev);
    prev = c;
  }
  EXPECT_GT(prev, 0.0);
}

TEST(Friction, UniformStaysBetweenReadouts) {
  const FrictionParams params{0.02, kGravity, 4, FrictionFormulation::uniform};
  auto state = init_friction_state(params, 0.0, 11);
  for (int k = 0; k < 400; ++k) {
    const double p = 0.1 * k + 5.0 * std::sin(0.3 * k);
    const double c = friction_step(state, params, p).value();
    ASSERT_GE(c, 1.0 - state.prev_speed - 1e-12);
    ASSERT_LE(c, 1.0 - state.min_speed + 1e-12);
  }
}

TEST(Friction, UniformDrawsCoverTheBracket) {
  // Drive speed down, then back up, so that s_min < s_t and the draw is non-degenerate.
  const FrictionParams params{0.05, kGravity, 1, FrictionFormulation::uniform};
  auto state = init_friction_state(params, 0.0, 5);
  friction_step(state, params, 1.0);
  friction_step(state, params, 0.0);
  const double lo = 1.0 - state.prev_speed;
  const double hi = 1.0 - state.min_speed;
  ASSERT_LT(lo, hi);

  double sum = 0.0;
  double smallest = 1.0;
  double largest = 0.0;
  const int draws = 20000;
  for (int k = 0; k < draws; ++k) {
    // Equal consecutive performances leave the speed where it is.
    const double c = friction_step(state, params, 0.0).value();
    sum += c;
    smallest = std::min(smallest, c);
    largest = std::max(largest, c);
  }
  EXPECT_NEAR(sum / draws, 0.5 * (lo + hi), 0.01 * (hi - lo) + 1e-9);
  EXPECT_LT(smallest - lo, 0.01 * (hi - lo));
  EXPECT_LT(hi - largest, 0.01 * (hi - lo));
}

TEST(Friction, TheoremEndsWhenWindowMeanRisesByInverseMassGravity) {
  // s_t = 1 + m g (mean(initial window) - mean(current window)) while unclamped.
  const double rise = 12.0;
  const int interval = 5;
  const double m = solve_mass(rise);
  const FrictionParams params{m, kGravity, interval, FrictionFormulation::speed};
  auto state = init_friction_state(params, 3.0, 1);
  std::vector<double> history(static_cast<std::size_t>(interval), 3.0);
  for (int k = 1; k <= 200; ++k) {
    const double p = 3.0 + 0.1 * k;
    friction_step(state, params, p);
    history.push_back(p);
    double window_mean = 0.0;
    for (std::size_t j = history.size() - interval; j < history.size(); ++j) {
      window_mean += history[j];
    }
    window_mean /= interval;
    const double predicted = 1.0 + m * kGravity * (3.0 - window_mean);
    EXPECT_NEAR(state.prev_speed, std::clamp(predicted, 0.0, 1.0), 1e-9) << k;
  }
  EXPECT_DOUBLE_EQ(state.prev_speed, 0.0);
}

TEST(Friction, SolveMass) {
  EXPECT_NEAR(solve_mass(10.0), 0.01019367991845056, 1e-15);
  EXPECT_THROW(solve_mass(0.0), std::invalid_argument);
  EXPECT_THROW(solve_mass(-1.0), std::invalid_argument);
}

TEST(Friction, ParamsValidate) {
  EXPECT_THROW(init_friction_state({0.0, kGravity, 1, {}}, 0.0, 1), std::invalid_argument);
  EXPECT_THROW(init_friction_state({1.0, kGravity, 0, {}}, 0.0, 1), std::invalid_argument);
  EXPECT_THROW(init_friction_state({1.0, -1.0, 1, {}}, 0.0, 1), std::invalid_argument);
}

TEST(Friction, FormulationNamesRoundTrip) {
  for (auto f : {FrictionFormulation::uniform, FrictionFormulation::monotonic,
                 FrictionFormulation::speed}) {
    EXPECT_EQ(parse_friction_formulation(to_string(f)), f);
  }
  EXPECT_THROW(parse_friction_formulation("sideways"), std::invalid_argument);
}

TEST(Progression, FrictionIsAdaptiveAndDeterministic) {
  const FrictionParams params{0.05, kGravity, 3, FrictionFormulation::uniform};
  auto a = Progression::friction(params, 0.0, 42);
  auto b = Progression::friction(params, 0.0, 42);
  EXPECT_TRUE(a.adaptive());
  EXPECT_DOUBLE_EQ(a.current(0).value(), 0.0);
  for (int k = 0; k < 50; ++k) {
    const double p = 0.3 * k - (k % 7);
    a.record(p);
    b.record(p);
    ASSERT_EQ(a.current(k).value(), b.current(k).value());
  }
  ASSERT_NE(a.friction_state(), nullptr);
  EXPECT_EQ(a.friction_params()->interval, 3);
}

TEST(Progression, FixedKindsIgnorePerformance) {
  auto lin = Progression::linear(LinearParams{10});
  lin.record(1e9);
  EXPECT_FALSE(lin.adaptive());
  EXPECT_DOUBLE_EQ(lin.current(5).value(), 0.5);
  EXPECT_EQ(lin.friction_state(), nullptr);
  auto constant = Progression::constant(Complexity(1.0));
  EXPECT_DOUBLE_EQ(constant.current(0).value(), 1.0);
}

} // namespace
} // namespace curriculum
