#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tclab/clock.hpp"
#include "tclab/intensity.hpp"
#include "tclab/limitproc.hpp"

namespace tclab {

struct SampleMeta {
  double n = 0.0;
  double t = 0.0;
  std::string sampler_tag;
};

// One marginal (fixed n, t, sampler) across replicates.
struct EmpiricalSample {
  std::vector<double> values;
  SampleMeta meta;
};

// Fraction of values <= x.
double ecdf(const EmpiricalSample& sample, double x);
double ecdf(std::span<const double> values, double x);

// sup_x |F_a(x) - F_b(x)| over the pooled sample, by sorted merge (ties handled).
double ks_two_sample(const EmpiricalSample& a, const EmpiricalSample& b);
double ks_two_sample(std::span<const double> a, std::span<const double> b);

// sqrt(ln(2/alpha)/2) * sqrt(1/n_a + 1/n_b).
double dkw_threshold(std::size_t n_a, std::size_t n_b, double alpha);

enum class Verdict { Pass, Fail, Incomplete };
std::string_view to_string(Verdict v);

// One (n, observable) cell. The observable is the marginal at time t, or the
// path functional max_t |X_t| over the report grid when `functional` is set.
struct ReportCell {
  double n = 0.0;
  double t = 0.0;
  bool functional = false;
  double ks = 0.0;
  double threshold = 0.0;
  Verdict verdict = Verdict::Incomplete;
  std::string note;

  std::string label() const;
};

struct TrendSummary {
  std::string label;
  std::vector<double> ks;
  std::size_t inversions = 0;
  bool decreasing = false;
};

struct ConvergenceReport {
  std::vector<double> grid;
  std::vector<double> ladder;
  std::vector<ReportCell> cells;  // ladder-major, grid times then the sup functional
  std::vector<TrendSummary> trends;
  double alpha = 0.01;
  std::size_t replicates = 0;

  // Raw samples (ladder index, observable index) when requested.
  std::vector<std::vector<std::vector<double>>> prelimit_samples;
  std::vector<std::vector<double>> limit_samples;

  // Per observable: KS strictly decreasing along the ladder up to one inversion.
  bool trends_decreasing() const;
  // All cells for the largest n pass.
  bool final_cells_pass() const;
  bool all_pass() const;
  const ReportCell& cell(std::size_t ladder_index, std::size_t observable) const;
  std::size_t observables() const { return grid.size() + 1; }
};

// Strictly decreasing with at most one inversion; incomplete cells (NaN) skipped.
TrendSummary summarize_trend(std::string label, std::span<const double> ks);

struct ReportOptions {
  double dt = 1e-4;  // step of the normalized process and of the limit sampler
  double alpha = 0.01;
  unsigned jobs = 1;
  bool keep_samples = false;
  ExtensionPolicy policy{};
};

// For each n in `ladder`, samples `replicates` normalized paths at the grid
// times and `replicates` limit paths W(eta^{-1}(t)); fills KS distances, DKW
// thresholds, verdicts and per-observable trends. Cell seeds derive from
// master_seed and the cell index, so the report does not depend on `jobs`.
// A cell whose sampling hits HorizonExceeded is marked Incomplete.
ConvergenceReport convergence_report(const IntensityModel& model, const LimitSpec& spec,
                                     std::span<const double> ladder, std::span<const double> grid,
                                     std::size_t replicates, std::uint64_t master_seed,
                                     const ReportOptions& opts = {});

}  // namespace tclab
