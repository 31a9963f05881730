#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "tclab/errors.hpp"
#include "tclab/stochcalc.hpp"

using namespace tclab;

TEST(C1ae, DerivativesMatchFiniteDifferences) {
  const double h = 1e-4;
  for (const auto& fn : {C1aeFunction::square(), C1aeFunction::linear(3.0, -1.0),
                         C1aeFunction::positive_power(1.0), C1aeFunction::positive_power(0.5)}) {
    for (double x : {-1.3, -0.2, 0.4, 1.7}) {
      const double fd1 = (fn.f(x + h) - fn.f(x - h)) / (2 * h);
      const double fd2 = (fn.f1(x + h) - fn.f1(x - h)) / (2 * h);
      EXPECT_NEAR(fd1, fn.f1(x), 1e-6) << fn.name << " at " << x;
      EXPECT_NEAR(fd2, fn.second(x), 1e-5) << fn.name << " at " << x;
    }
  }
}

TEST(C1ae, SingularPointsEvaluateToZero) {
  const auto fn = C1aeFunction::positive_power(-0.5);
  EXPECT_EQ(fn.second(0.0), 0.0);
  EXPECT_THROW(C1aeFunction::positive_power(-1.0), std::invalid_argument);
}

TEST(ItoSum, ConstantIntegrandsTelescope) {
  const Path p = sample_brownian({1, 0, 0}, 1.0, 1e-3);
  const std::vector<double> ones(p.values.size(), 1.0);
  const std::vector<double> zeros(p.values.size(), 0.0);
  EXPECT_NEAR(ito_sum(p, ones), p.values.back() - p.values.front(), 1e-12);
  EXPECT_EQ(ito_sum(p, zeros), 0.0);
}

TEST(ItoSum, LengthMismatch) {
  const Path p = sample_brownian({1, 0, 0}, 1.0, 1e-2);
  const std::vector<double> short_integrand(p.values.size() - 1, 1.0);
  EXPECT_THROW(ito_sum(p, short_integrand), LengthMismatch);
}

TEST(ItoSum, IsLinearInIntegrand) {
  const Path p = sample_brownian({2, 0, 0}, 1.0, 1e-3);
  std::vector<double> f(p.values.size()), g(p.values.size()), h(p.values.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    f[k] = std::sin(p.values[k]);
    g[k] = p.values[k] * p.values[k];
    h[k] = 2.0 * f[k] - 3.0 * g[k];
  }
  EXPECT_NEAR(ito_sum(p, h), 2.0 * ito_sum(p, f) - 3.0 * ito_sum(p, g), 1e-12);
}

TEST(ItoSum, BrownianAgainstItself) {
  // sum W dW = (W_T^2 - T) / 2 up to the quadratic-variation error.
  double ss = 0.0;
  const int reps = 500;
  for (int r = 0; r < reps; ++r) {
    const Path p = sample_brownian({3, static_cast<std::uint64_t>(r), 0}, 1.0, 1e-3);
    const double err = ito_sum(p, p.values) - 0.5 * (p.values.back() * p.values.back() - 1.0);
    ss += err * err;
  }
  // The error is (QV - T) / 2 with standard deviation sqrt(dt / 2).
  EXPECT_LT(std::sqrt(ss / reps), 3.0 * std::sqrt(1e-3 / 2.0));
}

TEST(ItoResidual, LinearIsExact) {
  const Path p = sample_brownian({4, 0, 0}, 1.0, 1e-3);
  EXPECT_NEAR(ito_residual(p, C1aeFunction::linear(2.5, 1.0)), 0.0, 1e-12);
}

TEST(ItoResidual, SquareIsQuadraticVariationGap) {
  const Path p = sample_brownian({5, 0, 0}, 1.0, 1e-3);
  double qv = 0.0;
  for (std::size_t k = 0; k + 1 < p.values.size(); ++k) {
    qv += (p.values[k + 1] - p.values[k]) * (p.values[k + 1] - p.values[k]);
  }
  EXPECT_NEAR(ito_residual(p, C1aeFunction::square()), qv - 1.0, 1e-10);
}

TEST(ItoLadder, SquareScalesLikeRootStep) {
  const std::vector<double> dts = {4e-3, 1e-3};
  const auto ladder = ito_residual_ladder(C1aeFunction::square(), dts, 1.0, 1000, 6, 2);
  ASSERT_EQ(ladder.ratios.size(), 1u);
  EXPECT_GE(ladder.ratios[0], 1.5);
  EXPECT_LE(ladder.ratios[0], 2.8);
  EXPECT_LT(ladder.rms[1], 3.0 * std::sqrt(2e-3));
}

TEST(ItoLadder, PositivePowerDecreases) {
  const std::vector<double> dts = {1e-2, 1e-3, 1e-4};
  const auto ladder = ito_residual_ladder(C1aeFunction::positive_power(1.0), dts, 1.0, 300, 7, 2);
  EXPECT_GT(ladder.rms[0], ladder.rms[1]);
  EXPECT_GT(ladder.rms[1], ladder.rms[2]);
}

TEST(ItoLadder, IndependentOfWorkers) {
  const std::vector<double> dts = {1e-2, 1e-3};
  const auto a = ito_residual_ladder(C1aeFunction::square(), dts, 1.0, 50, 8, 1);
  const auto b = ito_residual_ladder(C1aeFunction::square(), dts, 1.0, 50, 8, 3);
  EXPECT_EQ(a.rms, b.rms);
}

TEST(ItoLadder, RejectsNonNestedSteps) {
  const std::vector<double> dts = {3e-3, 2e-3};
  EXPECT_THROW(ito_residual_ladder(C1aeFunction::square(), dts, 1.0, 10, 1), std::invalid_argument);
}

TEST(Phi, ConstantIntensityHasNoGap) {
  const auto m = IntensityModel::constant(2.0);
  for (double u : {-1.5, 0.0, 0.7}) EXPECT_NEAR(phi_n(m, 1e3, u), phi_limit(m, u), 1e-12);
  const std::vector<double> ladder = {10.0, 1e3};
  const auto res = integral_convergence_check(m, ladder, 1.0, 50, {.dt = 1e-3, .master_seed = 1});
  for (double g : res.median_gaps) EXPECT_LT(g, 1e-12);
}

TEST(Kurtz, PowerTailGapsDecrease) {
  const auto m = IntensityModel::power_tail(1.0, 1.0, 1.0);
  const std::vector<double> ladder = {10.0, 1e3, 1e5};
  const auto res = integral_convergence_check(m, ladder, 1.0, 200, {.dt = 1e-3, .master_seed = 2, .jobs = 2});
  EXPECT_GT(res.median_gaps[0], res.median_gaps[1]);
  EXPECT_GT(res.median_gaps[1], res.median_gaps[2]);
  EXPECT_TRUE(res.bound_checked);
  EXPECT_EQ(res.bound_violations, 0u);
}

TEST(Kurtz, AsymptoticConstantSmallGap) {
  const auto m = IntensityModel::asymptotic_constant(1.5, 0.5);
  const std::vector<double> ladder = {1e5};
  const auto res = integral_convergence_check(m, ladder, 1.0, 200, {.dt = 1e-4, .master_seed = 3, .jobs = 2});
  EXPECT_LE(res.median_gaps[0], 0.05);
  EXPECT_EQ(res.bound_violations, 0u);
}

TEST(Kurtz, CustomModelsSkipBound) {
  const auto m = gaussian_bump(1.0);
  const std::vector<double> ladder = {10.0};
  const auto res = integral_convergence_check(m, ladder, 0.5, 10, {.dt = 1e-2});
  EXPECT_FALSE(res.bound_checked);
}
