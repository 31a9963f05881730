#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "tclab/errors.hpp"
#include "tclab/localtime.hpp"
#include "tclab/stats.hpp"
#include "tclab/timechange.hpp"
#include "unit/oracles.hpp"

using namespace tclab;

namespace {

Path unit_path() { return sample_brownian({21, 0, 0}, 1.0, 1e-3); }

std::vector<double> terminal_values(const IntensityModel& m, double t, std::size_t count,
                                    std::uint64_t seed, double dt) {
  std::vector<double> out(count);
  const double times[] = {t};
  for (std::size_t r = 0; r < count; ++r) {
    out[r] = simulate_time_changed({seed, r, 0}, m, times, dt).observed.values.back();
  }
  return out;
}

}  // namespace

TEST(AdditiveFunctional, UnitIntensityIsIdentity) {
  const Path p = unit_path();
  const auto S = additive_functional(p, IntensityModel::constant(1.0));
  for (std::size_t k = 0; k < p.values.size(); k += 97) EXPECT_NEAR(S(p.time(k)), p.time(k), 1e-12);
}

TEST(AdditiveFunctional, ConstantIntensityScales) {
  const Path p = unit_path();
  const auto S = additive_functional(p, IntensityModel::constant(4.0));
  EXPECT_NEAR(S.max_value(), 0.25, 1e-12);
  EXPECT_NEAR(S(0.5), 0.125, 1e-12);
}

TEST(AdditiveFunctional, RejectsLimitPaths) {
  Path p = unit_path();
  p.kind = PathKind::Limit;
  EXPECT_THROW(additive_functional(p, IntensityModel::constant(1.0)), KindMismatch);
}

TEST(AdditiveFunctional, VanishingIntensityIsDegenerate) {
  CustomIntensity spec;
  spec.lambda = [](double) { return 0.0; };
  spec.antiderivative = [](double) { return 0.0; };
  const auto m = IntensityModel::custom(spec);
  EXPECT_THROW(additive_functional(unit_path(), m), DegenerateFunctional);
}

TEST(AdditiveFunctional, StrictlyIncreasingWithZeroOfLambda) {
  const auto m = degenerate_at_zero(IntensityModel::asymptotic_constant(1.5, 0.5));
  Path p = unit_path();
  p.values[10] = 0.0;  // hit the zero set exactly
  EXPECT_TRUE(additive_functional(p, m).strictly_increasing());
}

TEST(AdditiveFunctional, MatchesLocalTimeDomain) {
  const auto m = IntensityModel::periodic(2.0, 1.0);
  const Path p = sample_brownian({33, 0, 0}, 1.0, 1e-4);
  const double time_domain = additive_functional(p, m).max_value();
  const double space_domain = functional_via_localtime(occupation_density(p, 1.0, 1e-2), m);
  EXPECT_LT(std::abs(time_domain - space_domain) / time_domain, 0.02);
}

TEST(AdditiveFunctional, RefinementDifferenceShrinksWithStep) {
  const auto m = IntensityModel::periodic(2.0, 1.0);
  double previous = INFINITY;
  for (double dt : {1e-2, 1e-3, 1e-4}) {
    double total = 0.0;
    for (std::uint64_t r = 0; r < 20; ++r) {
      const Path coarse = sample_brownian({44, r, 0}, 1.0, dt);
      const Path fine = refine(coarse, 4, {45, r, 0});
      total += std::abs(additive_functional(fine, m).max_value() - additive_functional(coarse, m).max_value());
    }
    EXPECT_LT(total, previous) << "dt = " << dt;
    previous = total;
  }
}

TEST(InverseTimeChange, IdentityFunctional) {
  const MonotoneFunction S({0.0, 1.0}, {0.0, 1.0});
  EXPECT_NEAR(inverse_time_change(S, 0.7), 0.7, 1e-15);
  EXPECT_EQ(inverse_time_change(S, 0.0), 0.0);
}

TEST(InverseTimeChange, ScaledFunctional) {
  const MonotoneFunction S({0.0, 4.0}, {0.0, 2.0});
  EXPECT_NEAR(inverse_time_change(S, 1.0), 2.0, 1e-15);
}

TEST(InverseTimeChange, RoundTripOnGrid) {
  const Path p = unit_path();
  const auto S = additive_functional(p, IntensityModel::periodic(2.0, 1.0));
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, p.steps());
  for (int i = 0; i < 100; ++i) {
    const double x = p.time(pick(rng));
    EXPECT_NEAR(inverse_time_change(S, S(x)), x, 1e-9);
  }
}

TEST(InverseTimeChange, PastRangeThrows) {
  const MonotoneFunction S({0.0, 1.0}, {0.0, 1.0});
  EXPECT_THROW(inverse_time_change(S, 1.5), HorizonExceeded);
}

TEST(TimeChangedPath, UnitIntensityReturnsBasePath) {
  const Path p = unit_path();
  const std::vector<double> times = {0.0, 0.25, 0.5, 0.999};
  const auto tc = time_changed_path(p, IntensityModel::constant(1.0), times);
  for (std::size_t i = 0; i < times.size(); ++i) EXPECT_NEAR(tc.observed.values[i], p.at(times[i]), 1e-9);
}

TEST(TimeChangedPath, TimeZeroIsStart) {
  Path p = sample_brownian({21, 0, 0}, 1.0, 1e-3, 0.75);
  const double zero[] = {0.0};
  const auto tc = time_changed_path(p, IntensityModel::periodic(2.0, 1.0), zero);
  ASSERT_EQ(tc.observed.values.size(), 1u);
  EXPECT_EQ(tc.observed.values[0], 0.75);
  EXPECT_EQ(tc.tau(0.0), 0.0);
}

TEST(TimeChangedPath, HorizonExceeded) {
  const double far[] = {5.0};
  EXPECT_THROW(time_changed_path(unit_path(), IntensityModel::constant(1.0), far), HorizonExceeded);
}

TEST(TimeChangedPath, ConstantIntensityVariance) {
  const auto values = terminal_values(IntensityModel::constant(3.0), 1.0, 10000, 8, 1e-3);
  const auto m = oracle::moments(values);
  EXPECT_NEAR(m.variance, 3.0, 4.0 * 3.0 * std::sqrt(2.0 / 9999.0));
  EXPECT_NEAR(m.mean, 0.0, 4.0 * m.std_error);
}

TEST(TimeChange, TauIsMonotoneAndStartsAtZero) {
  const auto m = IntensityModel::asymptotic_constant(1.5, 0.5);
  const double times[] = {2.0};
  const auto tc = simulate_time_changed({3, 0, 0}, m, times, 1e-3);
  const auto& tau = tc.tau;
  EXPECT_EQ(tau.arguments().front(), 0.0);
  EXPECT_EQ(tau.values().front(), 0.0);
  for (std::size_t i = 1; i < tau.size(); ++i) EXPECT_GT(tau.values()[i], tau.values()[i - 1]);
}

TEST(TimeChange, ClockBoundsFromIntensityBounds) {
  // c_lo <= lambda <= c_hi gives c_lo t <= tau_t <= c_hi t pathwise.
  const auto m = gaussian_bump(1.0);
  for (std::uint64_t r = 0; r < 50; ++r) {
    const double times[] = {1.0};
    const auto tc = simulate_time_changed({12, r, 0}, m, times, 1e-3);
    const double tau1 = tc.tau(1.0);
    EXPECT_GE(tau1, 1.0 - 1e-9);
    EXPECT_LE(tau1, 2.0 + 1e-9);
  }
}

TEST(TimeChange, ConstantIntensityClockIsLinear) {
  const double times[] = {1.5};
  const auto tc = simulate_time_changed({13, 0, 0}, IntensityModel::constant(2.0), times, 1e-3);
  for (double t : {0.3, 0.9, 1.5}) EXPECT_NEAR(tc.tau(t), 2.0 * t, 1e-9);
}

TEST(TimeChange, AdaptiveSimulationIsPrefixOfFixedPath) {
  const auto m = IntensityModel::periodic(2.0, 1.0);
  const double times[] = {0.5};
  const auto adaptive = simulate_time_changed({14, 2, 0}, m, times, 1e-3);
  const Path fixed = sample_brownian({14, 2, 0}, 10.0, 1e-3);
  const auto direct = time_changed_path(fixed, m, times);
  EXPECT_NEAR(adaptive.observed.values[0], direct.observed.values[0], 1e-9);
}

TEST(Normalized, UnitIntensityIsBrownianScaling) {
  const Path p = sample_brownian({15, 0, 0}, 100.0, 1e-2);
  const double one[] = {1.0};
  const auto x = normalized_process(p, IntensityModel::constant(1.0), 100.0, one);
  EXPECT_NEAR(x.values[0], p.values.back() / 10.0, 1e-9);
}

TEST(Normalized, ConstantIntensityMarginalIsGaussian) {
  const auto m = IntensityModel::constant(2.0);
  const double one[] = {1.0};
  std::vector<double> xs(10000);
  for (std::size_t r = 0; r < xs.size(); ++r) xs[r] = sample_normalized_process({16, r, 0}, m, 50.0, one, 1e-2).values[0];
  const auto ref = oracle::gaussian_sample(xs.size(), 2.0, 77);
  EXPECT_LT(ks_two_sample(xs, ref), dkw_threshold(xs.size(), ref.size(), 0.01));
}

TEST(Normalized, PowerTailExponentSelection) {
  EXPECT_NEAR(IntensityModel::power_tail(1.0, 1.0, 1.0).normalization(8.0), 2.0, 1e-14);
  EXPECT_NEAR(IntensityModel::constant(1.0).normalization(9.0), 3.0, 1e-14);
}

TEST(Cauchy, MartingaleMean) {
  const auto est = cauchy_estimate(IntensityModel::constant(1.0), [](double y) { return y; }, 0.8, 0.5,
                                   4000, {5, 0, 0}, {.dt = 1e-3});
  EXPECT_NEAR(est.estimate, 0.5, 3.0 * est.std_error);
}

TEST(Cauchy, SecondMomentOfConstantIntensity) {
  const auto est = cauchy_estimate(IntensityModel::constant(2.0), [](double y) { return y * y; }, 1.0, 0.0,
                                   10000, {6, 0, 0}, {.dt = 1e-3});
  EXPECT_NEAR(est.estimate, 2.0, 3.0 * est.std_error);
}

TEST(Cauchy, ConstantFunctionHasNoError) {
  const auto est = cauchy_estimate(IntensityModel::constant(1.0), [](double) { return 1.0; }, 1.0, 0.0, 50,
                                   {7, 0, 0});
  EXPECT_EQ(est.estimate, 1.0);
  EXPECT_EQ(est.std_error, 0.0);
}

TEST(Cauchy, IndependentOfWorkerCount) {
  const auto m = IntensityModel::asymptotic_constant(2.0, 0.5);
  auto f = [](double y) { return std::tanh(y); };
  const auto one = cauchy_estimate(m, f, 0.5, 0.1, 200, {8, 0, 0}, {.dt = 1e-3, .jobs = 1});
  const auto four = cauchy_estimate(m, f, 0.5, 0.1, 200, {8, 0, 0}, {.dt = 1e-3, .jobs = 4});
  EXPECT_EQ(one.estimate, four.estimate);
  EXPECT_EQ(one.std_error, four.std_error);
}
