#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "tclab/parallel.hpp"
#include "tclab/stats.hpp"
#include "unit/oracles.hpp"

using namespace tclab;

TEST(Ecdf, Examples) {
  const std::vector<double> v = {1.0, 2.0, 3.0};
  EXPECT_DOUBLE_EQ(ecdf(v, 2.0), 2.0 / 3.0);
  EXPECT_EQ(ecdf(v, -1e300), 0.0);
  EXPECT_EQ(ecdf(v, 3.0), 1.0);
  EXPECT_EQ(ecdf(v, 1e300), 1.0);
}

TEST(Ks, Examples) {
  const std::vector<double> a = {0.0};
  const std::vector<double> b = {1.0};
  EXPECT_EQ(ks_two_sample(a, b), 1.0);
  const auto x = oracle::gaussian_sample(500, 1.0, 1);
  EXPECT_EQ(ks_two_sample(x, x), 0.0);
}

TEST(Ks, MatchesBruteForceWithTies) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> pick(0, 20);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> a(40 + trial), b(25 + 2 * trial);
    for (double& v : a) v = pick(rng) * 0.5;
    for (double& v : b) v = pick(rng) * 0.5 + 0.25 * (trial % 2);
    EXPECT_NEAR(ks_two_sample(a, b), oracle::ks_bruteforce(a, b), 1e-15);
  }
}

TEST(Ks, MatchesBruteForceOnContinuousData) {
  const auto a = oracle::gaussian_sample(700, 1.0, 4);
  const auto b = oracle::gaussian_sample(900, 1.3, 5, 0.1);
  EXPECT_NEAR(ks_two_sample(a, b), oracle::ks_bruteforce(a, b), 1e-15);
}

TEST(Ks, IsSymmetric) {
  const auto a = oracle::gaussian_sample(1000, 1.0, 6);
  const auto b = oracle::gaussian_sample(800, 2.0, 7);
  EXPECT_EQ(ks_two_sample(a, b), ks_two_sample(b, a));
}

TEST(Ks, EmptySampleThrows) {
  const std::vector<double> a;
  const std::vector<double> b = {1.0};
  EXPECT_THROW(ks_two_sample(a, b), std::invalid_argument);
}

TEST(Dkw, Formula) {
  EXPECT_NEAR(dkw_threshold(10000, 10000, 0.01), 0.02302, 5e-6);
  EXPECT_NEAR(dkw_threshold(1, 1, 0.01), std::sqrt(std::log(200.0) / 2.0) * std::sqrt(2.0), 1e-12);
  EXPECT_GT(dkw_threshold(1, 1, 0.01), 1.0);
  EXPECT_NEAR(dkw_threshold(100, 300, 1.0 - 1e-12), std::sqrt(std::log(2.0) / 2.0) * std::sqrt(1.0 / 100 + 1.0 / 300),
              1e-9);
  EXPECT_THROW(dkw_threshold(0, 1, 0.01), std::invalid_argument);
  EXPECT_THROW(dkw_threshold(1, 1, 1.0), std::invalid_argument);
}

TEST(Dkw, NullTestPassesAtNominalRate) {
  int passes = 0;
  const double thr = dkw_threshold(10000, 10000, 0.01);
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    const auto a = oracle::gaussian_sample(10000, 1.0, 1000 + 2 * trial);
    const auto b = oracle::gaussian_sample(10000, 1.0, 1001 + 2 * trial);
    passes += ks_two_sample(a, b) < thr;
  }
  EXPECT_GE(passes, 95);
}

TEST(Trend, DecreasingWithOneInversion) {
  const double strict[] = {0.3, 0.2, 0.1};
  EXPECT_TRUE(summarize_trend("a", strict).decreasing);
  const double one[] = {0.3, 0.35, 0.1};
  const auto t1 = summarize_trend("b", one);
  EXPECT_TRUE(t1.decreasing);
  EXPECT_EQ(t1.inversions, 1u);
  const double two[] = {0.1, 0.2, 0.3};
  EXPECT_FALSE(summarize_trend("c", two).decreasing);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double gappy[] = {0.3, nan, 0.1};
  EXPECT_TRUE(summarize_trend("d", gappy).decreasing);
}

TEST(Report, UnitIntensityHasLimitLawAtEveryScale) {
  const auto m = IntensityModel::constant(1.0);
  const auto spec = LimitSpec::eta(1.0, 1.0);
  const std::vector<double> ladder = {1.0, 10.0};
  const std::vector<double> grid = {0.5, 1.0};
  // Each report holds 6 correlated cells at alpha = 0.01; allow one false alarm.
  int clean = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto rep = convergence_report(m, spec, ladder, grid, 2000, seed, {.dt = 1e-3, .jobs = 4});
    ASSERT_EQ(rep.cells.size(), 6u);
    clean += rep.all_pass();
    for (const auto& c : rep.cells) {
      EXPECT_GE(c.ks, 0.0);
      EXPECT_LE(c.ks, 1.0);
      EXPECT_NEAR(c.threshold, dkw_threshold(2000, 2000, 0.01), 1e-15);
    }
  }
  EXPECT_GE(clean, 4);
}

TEST(Report, DeterministicAcrossWorkerCounts) {
  const auto m = IntensityModel::asymptotic_constant(1.5, 0.5);
  const auto spec = LimitSpec::eta(1.5, 0.5);
  const std::vector<double> ladder = {10.0, 100.0};
  const std::vector<double> grid = {1.0};
  const auto a = convergence_report(m, spec, ladder, grid, 200, 9, {.dt = 1e-3, .jobs = 1});
  const auto b = convergence_report(m, spec, ladder, grid, 200, 9, {.dt = 1e-3, .jobs = 5});
  ASSERT_EQ(a.cells.size(), b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) EXPECT_EQ(a.cells[i].ks, b.cells[i].ks);
}

TEST(Report, HeadlineAsymmetricExperiment) {
  const auto m = IntensityModel::asymptotic_constant(1.5, 0.5);
  const auto spec = LimitSpec::eta(1.5, 0.5);
  const std::vector<double> ladder = {10.0, 100.0, 1000.0};
  const std::vector<double> grid = {0.5, 1.0};
  const auto rep = convergence_report(m, spec, ladder, grid, 10000, 1, {.dt = 1e-3, .jobs = default_jobs()});
  EXPECT_TRUE(rep.trends_decreasing());
  EXPECT_TRUE(rep.final_cells_pass());
}

TEST(Report, CellsPastStepCapAreIncomplete) {
  const auto m = IntensityModel::constant(1.0);
  const auto spec = LimitSpec::eta(1.0, 1.0);
  const std::vector<double> ladder = {1.0};
  const std::vector<double> grid = {1.0};
  ReportOptions opts;
  opts.dt = 1e-3;
  opts.policy.initial_block = 16;
  opts.policy.max_steps = 100;
  const auto rep = convergence_report(m, spec, ladder, grid, 20, 1, opts);
  for (const auto& c : rep.cells) EXPECT_EQ(c.verdict, Verdict::Incomplete);
  EXPECT_FALSE(rep.final_cells_pass());
}
