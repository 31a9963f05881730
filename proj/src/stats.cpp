#include "tclab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "tclab/errors.hpp"
#include "tclab/parallel.hpp"
#include "tclab/timechange.hpp"

namespace tclab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double sup_abs(std::span<const double> values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

double ecdf(std::span<const double> values, double x) {
  if (values.empty()) return 0.0;
  const auto count = std::count_if(values.begin(), values.end(), [x](double v) { return v <= x; });
  return static_cast<double>(count) / static_cast<double>(values.size());
}

double ecdf(const EmpiricalSample& sample, double x) { return ecdf(sample.values, x); }

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: samples must be nonempty");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == x) ++i;
    while (j < sb.size() && sb[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  // Once one side is exhausted its ECDF is 1; the gap can only shrink from here.
  return d;
}

double ks_two_sample(const EmpiricalSample& a, const EmpiricalSample& b) {
  return ks_two_sample(a.values, b.values);
}

double dkw_threshold(std::size_t n_a, std::size_t n_b, double alpha) {
  if (n_a == 0 || n_b == 0) throw std::invalid_argument("dkw_threshold: sample sizes must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("dkw_threshold: alpha must be in (0,1)");
  return std::sqrt(std::log(2.0 / alpha) / 2.0) *
         std::sqrt(1.0 / static_cast<double>(n_a) + 1.0 / static_cast<double>(n_b));
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Incomplete: return "incomplete";
  }
  return "unknown";
}

std::string ReportCell::label() const {
  if (functional) return "sup";
  std::ostringstream os;
  os << "t=" << t;
  return os.str();
}

TrendSummary summarize_trend(std::string label, std::span<const double> ks) {
  TrendSummary trend;
  trend.label = std::move(label);
  trend.ks.assign(ks.begin(), ks.end());
  std::vector<double> finite;
  for (double v : ks) {
    if (!std::isnan(v)) finite.push_back(v);
  }
  for (std::size_t i = 0; i + 1 < finite.size(); ++i) {
    if (!(finite[i + 1] < finite[i])) ++trend.inversions;
  }
  trend.decreasing = finite.size() >= 2 && trend.inversions <= 1;
  return trend;
}

bool ConvergenceReport::trends_decreasing() const {
  return std::all_of(trends.begin(), trends.end(), [](const TrendSummary& t) { return t.decreasing; });
}

bool ConvergenceReport::final_cells_pass() const {
  if (ladder.empty()) return false;
  for (std::size_t o = 0; o < observables(); ++o) {
    if (cell(ladder.size() - 1, o).verdict != Verdict::Pass) return false;
  }
  return true;
}

bool ConvergenceReport::all_pass() const {
  return std::all_of(cells.begin(), cells.end(),
                     [](const ReportCell& c) { return c.verdict == Verdict::Pass; });
}

const ReportCell& ConvergenceReport::cell(std::size_t ladder_index, std::size_t observable) const {
  return cells.at(ladder_index * observables() + observable);
}

ConvergenceReport convergence_report(const IntensityModel& model, const LimitSpec& spec,
                                     std::span<const double> ladder, std::span<const double> grid,
                                     std::size_t replicates, std::uint64_t master_seed,
                                     const ReportOptions& opts) {
  spec.validate();
  check_regime_matches(model, spec);
  if (ladder.empty()) throw std::invalid_argument("convergence_report: ladder must be nonempty");
  if (grid.empty() || !std::is_sorted(grid.begin(), grid.end()) || grid.front() <= 0.0) {
    throw std::invalid_argument("convergence_report: grid must be positive and increasing");
  }
  if (replicates < 2) throw std::invalid_argument("convergence_report: need >= 2 replicates");

  ConvergenceReport report;
  report.grid.assign(grid.begin(), grid.end());
  report.ladder.assign(ladder.begin(), ladder.end());
  report.alpha = opts.alpha;
  report.replicates = replicates;
  const std::size_t observables = grid.size() + 1;

  // samples[observable][replicate]
  auto collect = [&](auto&& draw) {
    std::vector<std::vector<double>> samples(observables, std::vector<double>(replicates, kNaN));
    std::vector<std::string> failures(replicates);
    parallel_for(replicates, opts.jobs, [&](std::size_t r) {
      try {
        const Trajectory traj = draw(r);
        for (std::size_t o = 0; o < grid.size(); ++o) samples[o][r] = traj.values[o];
        samples[grid.size()][r] = sup_abs(traj.values);
      } catch (const HorizonExceeded& e) {
        failures[r] = e.what();
      }
    });
    std::string failure;
    for (std::size_t r = 0; r < replicates && failure.empty(); ++r) {
      if (!failures[r].empty()) failure = "replicate " + std::to_string(r) + ": " + failures[r];
    }
    return std::make_pair(std::move(samples), std::move(failure));
  };

  const std::uint64_t limit_seed = derive_seed(master_seed, 0);
  auto [limit, limit_failure] = collect([&](std::size_t r) {
    return sample_limit_timechange({limit_seed, r, 0}, spec, grid, opts.dt, opts.policy);
  });

  const double threshold = dkw_threshold(replicates, replicates, opts.alpha);
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const double n = ladder[i];
    const std::uint64_t cell_seed = derive_seed(master_seed, i + 1);
    auto [pre, failure] = collect([&](std::size_t r) {
      return sample_normalized_process({cell_seed, r, 0}, model, n, grid, opts.dt, opts.policy);
    });
    if (failure.empty()) failure = limit_failure;
    for (std::size_t o = 0; o < observables; ++o) {
      ReportCell cell;
      cell.n = n;
      cell.functional = o == grid.size();
      cell.t = cell.functional ? grid.back() : grid[o];
      cell.threshold = threshold;
      if (!failure.empty()) {
        cell.ks = kNaN;
        cell.verdict = Verdict::Incomplete;
        cell.note = "n=" + std::to_string(n) + ": " + failure;
      } else {
        cell.ks = ks_two_sample(pre[o], limit[o]);
        cell.verdict = cell.ks < threshold ? Verdict::Pass : Verdict::Fail;
      }
      report.cells.push_back(std::move(cell));
    }
    if (opts.keep_samples) report.prelimit_samples.push_back(std::move(pre));
  }
  if (opts.keep_samples) report.limit_samples = std::move(limit);

  for (std::size_t o = 0; o < observables; ++o) {
    std::vector<double> ks;
    for (std::size_t i = 0; i < ladder.size(); ++i) ks.push_back(report.cell(i, o).ks);
    report.trends.push_back(summarize_trend(report.cell(0, o).label(), ks));
  }
  return report;
}

}  // namespace tclab
