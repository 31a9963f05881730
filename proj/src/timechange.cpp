#include "tclab/timechange.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "tclab/errors.hpp"
#include "tclab/parallel.hpp"

namespace tclab {

namespace {

void require_clock_path(const Path& path, const char* op) {
  if (path.kind != PathKind::Brownian && path.kind != PathKind::Derived) {
    throw KindMismatch(std::string(op) + ": expected a Brownian path, got " +
                       std::string(to_string(path.kind)));
  }
  if (path.values.size() < 2) throw std::invalid_argument(std::string(op) + ": path too short");
}

double max_time(std::span<const double> out_times) {
  if (out_times.empty()) throw std::invalid_argument("out_times must be nonempty");
  if (!std::is_sorted(out_times.begin(), out_times.end()) || out_times.front() < 0.0) {
    throw std::invalid_argument("out_times must be nonnegative and nondecreasing");
  }
  return out_times.back();
}

Trajectory observe(const Path& base, const MonotoneFunction& S, std::span<const double> levels,
                   double scale, std::span<const double> report_times) {
  Trajectory out;
  out.kind = PathKind::TimeChanged;
  out.times.assign(report_times.begin(), report_times.end());
  out.values.reserve(levels.size());
  for (double level : levels) {
    const double tau = level == 0.0 ? 0.0 : S.inverse(level);
    out.values.push_back(base.at(tau) / scale);
  }
  return out;
}

}  // namespace

MonotoneFunction additive_functional(const Path& path, const IntensityModel& model) {
  require_clock_path(path, "additive_functional");
  std::vector<double> integrand(path.values.size());
  std::transform(path.values.begin(), path.values.end(), integrand.begin(),
                 [&model](double x) { return model.reciprocal(x); });
  MonotoneFunction S = cumulative_trapezoid(integrand, path.t0, path.dt);
  if (!S.strictly_increasing()) {
    throw DegenerateFunctional("additive functional is not strictly increasing; lambda vanishes on "
                               "a set the grid cannot resolve");
  }
  return S;
}

double inverse_time_change(const MonotoneFunction& S, double t) {
  if (t < 0.0) throw std::invalid_argument("inverse_time_change: t must be >= 0");
  if (t == 0.0) return S.arguments().front();
  return S.inverse(t);
}

TimeChangedPath time_changed_path(const Path& path, const IntensityModel& model,
                                  std::span<const double> out_times) {
  const double t_max = max_time(out_times);
  MonotoneFunction S = additive_functional(path, model);
  if (t_max > S.max_value()) {
    throw HorizonExceeded("time_changed_path: S_B reaches only " + std::to_string(S.max_value()) +
                          " < " + std::to_string(t_max) + "; extend the base path");
  }
  TimeChangedPath result;
  result.observed = observe(path, S, out_times, 1.0, out_times);
  result.tau = S.inverted();
  result.base = path;
  return result;
}

TimeChangedPath simulate_time_changed(const RngStream& stream, const IntensityModel& model,
                                      std::span<const double> out_times, double dt, double start,
                                      const ExtensionPolicy& policy) {
  if (!(dt > 0.0)) throw std::invalid_argument("simulate_time_changed: dt must be > 0");
  const double t_max = max_time(out_times);
  auto run = run_clock_until(stream, dt, start, [&model](double x) { return model.reciprocal(x); },
                             t_max, policy);
  TimeChangedPath result;
  result.observed = observe(run.path, run.clock, out_times, 1.0, out_times);
  result.tau = run.clock.inverted();
  result.base = std::move(run.path);
  return result;
}

Trajectory normalized_process(const Path& path, const IntensityModel& model, double n,
                              std::span<const double> out_times) {
  if (!(n > 0.0)) throw std::invalid_argument("normalized_process: n must be > 0");
  const double t_max = max_time(out_times);
  MonotoneFunction S = additive_functional(path, model);
  if (n * t_max > S.max_value()) {
    throw HorizonExceeded("normalized_process: need S_B >= " + std::to_string(n * t_max) +
                          ", base path reaches " + std::to_string(S.max_value()));
  }
  std::vector<double> levels(out_times.begin(), out_times.end());
  for (double& l : levels) l *= n;
  Trajectory out = observe(path, S, levels, model.normalization(n), out_times);
  return out;
}

Trajectory sample_normalized_process(const RngStream& stream, const IntensityModel& model,
                                     double n, std::span<const double> out_times, double dt,
                                     const ExtensionPolicy& policy) {
  if (!(n > 0.0)) throw std::invalid_argument("sample_normalized_process: n must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("sample_normalized_process: dt must be > 0");
  const double t_max = max_time(out_times);
  const double phi = model.normalization(n);
  const double base_dt = dt * phi * phi;
  auto run = run_clock_until(stream, base_dt, 0.0,
                             [&model](double x) { return model.reciprocal(x); }, n * t_max, policy);
  std::vector<double> levels(out_times.begin(), out_times.end());
  for (double& l : levels) l *= n;
  return observe(run.path, run.clock, levels, phi, out_times);
}

CauchyEstimate cauchy_estimate(const IntensityModel& model, const std::function<double(double)>& f,
                               double t, double x, std::size_t replicates,
                               const RngStream& stream, const CauchyOptions& opts) {
  if (!(t > 0.0)) throw std::invalid_argument("cauchy_estimate: t must be > 0");
  if (replicates == 0) throw std::invalid_argument("cauchy_estimate: replicates must be > 0");
  std::vector<double> samples(replicates);
  const double times[] = {t};
  parallel_for(replicates, opts.jobs, [&](std::size_t r) {
    const RngStream rs{stream.master_seed, stream.replicate + r, 0};
    auto run = simulate_time_changed(rs, model, times, opts.dt, x, opts.policy);
    samples[r] = f(run.observed.values.front());
  });

  // Welford, in replicate order.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double delta = samples[i] - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (samples[i] - mean);
  }
  CauchyEstimate est;
  est.estimate = mean;
  est.replicates = replicates;
  est.std_error = replicates > 1
                      ? std::sqrt(m2 / static_cast<double>(replicates - 1) / static_cast<double>(replicates))
                      : 0.0;
  return est;
}

}  // namespace tclab
