#include "tclab/stochcalc.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

#include "tclab/errors.hpp"
#include "tclab/parallel.hpp"
#include "tclab/rng.hpp"

namespace tclab {

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace

double C1aeFunction::second(double x) const {
  if (std::find(singular_points.begin(), singular_points.end(), x) != singular_points.end()) {
    return 0.0;
  }
  return f2(x);
}

C1aeFunction C1aeFunction::square() {
  return {"square", [](double x) { return x * x; }, [](double x) { return 2.0 * x; },
          [](double) { return 2.0; }, {}};
}

C1aeFunction C1aeFunction::linear(double slope, double intercept) {
  return {"linear", [=](double x) { return slope * x + intercept; }, [=](double) { return slope; },
          [](double) { return 0.0; }, {}};
}

C1aeFunction C1aeFunction::positive_power(double delta) {
  if (!(delta > -1.0)) throw std::invalid_argument("positive_power: delta must be > -1");
  const double p = 2.0 + delta;
  return {"positive_power",
          [=](double x) { return x > 0.0 ? std::pow(x, p) : 0.0; },
          [=](double x) { return x > 0.0 ? p * std::pow(x, p - 1.0) : 0.0; },
          [=](double x) { return x > 0.0 ? p * (p - 1.0) * std::pow(x, p - 2.0) : 0.0; },
          delta < 0.0 ? std::vector<double>{0.0} : std::vector<double>{}};
}

double ito_sum(const Path& path, std::span<const double> integrand) {
  if (integrand.size() != path.values.size()) {
    throw LengthMismatch("ito_sum: integrand has " + std::to_string(integrand.size()) +
                         " samples, path has " + std::to_string(path.values.size()));
  }
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < path.values.size(); ++k) {
    sum += integrand[k] * (path.values[k + 1] - path.values[k]);
  }
  return sum;
}

double ito_residual(const Path& path, const C1aeFunction& fn) {
  if (path.kind != PathKind::Brownian && path.kind != PathKind::Derived) {
    throw KindMismatch("ito_residual: expected a Brownian path");
  }
  if (path.values.size() < 2) throw std::invalid_argument("ito_residual: path too short");
  std::vector<double> first(path.values.size());
  std::transform(path.values.begin(), path.values.end(), first.begin(), fn.f1);
  double trap = 0.0;
  double prev = fn.second(path.values.front());
  for (std::size_t k = 1; k < path.values.size(); ++k) {
    const double cur = fn.second(path.values[k]);
    trap += 0.5 * path.dt * (prev + cur);
    prev = cur;
  }
  return fn.f(path.values.back()) - fn.f(path.values.front()) - ito_sum(path, first) - 0.5 * trap;
}

ResidualLadder ito_residual_ladder(const C1aeFunction& fn, std::span<const double> dts,
                                   double horizon, std::size_t replicates,
                                   std::uint64_t master_seed, unsigned jobs) {
  if (dts.empty()) throw std::invalid_argument("ito_residual_ladder: dts must be nonempty");
  if (replicates == 0) throw std::invalid_argument("ito_residual_ladder: replicates must be > 0");
  const double finest = dts.back();
  std::vector<std::size_t> strides;
  for (double dt : dts) {
    const double ratio = dt / finest;
    const auto stride = static_cast<std::size_t>(std::llround(ratio));
    if (stride == 0 || std::abs(ratio - static_cast<double>(stride)) > 1e-6 * ratio) {
      throw std::invalid_argument("ito_residual_ladder: each dt must be a multiple of the finest");
    }
    strides.push_back(stride);
  }

  std::vector<std::vector<double>> residuals(dts.size(), std::vector<double>(replicates));
  parallel_for(replicates, jobs, [&](std::size_t r) {
    const Path fine = sample_brownian({master_seed, r, 0}, horizon, finest);
    for (std::size_t level = 0; level < dts.size(); ++level) {
      Path coarse;
      coarse.dt = dts[level];
      coarse.kind = PathKind::Brownian;
      for (std::size_t k = 0; k < fine.values.size(); k += strides[level]) {
        coarse.values.push_back(fine.values[k]);
      }
      residuals[level][r] = ito_residual(coarse, fn);
    }
  });

  ResidualLadder out;
  out.dts.assign(dts.begin(), dts.end());
  for (const auto& level : residuals) {
    double ss = 0.0;
    for (double v : level) ss += v * v;
    out.rms.push_back(std::sqrt(ss / static_cast<double>(level.size())));
  }
  for (std::size_t i = 0; i + 1 < out.rms.size(); ++i) {
    out.ratios.push_back(out.rms[i] / out.rms[i + 1]);
  }
  return out;
}

double phi_n(const IntensityModel& model, double n, double u) {
  const double d = model.cesaro_delta();
  const double s = std::pow(n, 1.0 / (2.0 + d));
  return model.antiderivative(u * s) / std::pow(s, 1.0 + d);
}

double phi_limit(const IntensityModel& model, double u) {
  const double d = model.cesaro_delta();
  if (u > 0.0) return std::pow(u, 1.0 + d) / model.a_plus();
  if (u < 0.0) return -std::pow(-u, 1.0 + d) / model.a_minus();
  return 0.0;
}

IntegralConvergence integral_convergence_check(const IntensityModel& model,
                                               std::span<const double> n_ladder, double t,
                                               std::size_t replicates,
                                               const IntegralCheckOptions& opts) {
  if (n_ladder.empty()) throw std::invalid_argument("integral_convergence_check: empty ladder");
  if (replicates == 0) throw std::invalid_argument("integral_convergence_check: replicates must be > 0");
  const double d = model.cesaro_delta();
  const bool check_bound = model.kind() != ModelKind::Custom;
  if (!check_bound) {
    std::cerr << "warning: dominating bound |phi_n(u)| <= A(1+|u|^(1+delta)) not checked for custom model '"
              << model.name() << "'\n";
  }
  const double bound_a = 2.0 * (1.0 / model.a_plus() + 1.0 / model.a_minus());

  std::vector<std::vector<double>> gaps(n_ladder.size(), std::vector<double>(replicates));
  std::vector<std::size_t> violations(replicates, 0);
  parallel_for(replicates, opts.jobs, [&](std::size_t r) {
    const Path w = sample_brownian({opts.master_seed, r, 0}, t, opts.dt);
    std::vector<double> limit(w.values.size());
    std::transform(w.values.begin(), w.values.end(), limit.begin(),
                   [&](double u) { return phi_limit(model, u); });
    const double limit_integral = ito_sum(w, limit);
    std::vector<double> pre(w.values.size());
    for (std::size_t i = 0; i < n_ladder.size(); ++i) {
      for (std::size_t k = 0; k < w.values.size(); ++k) {
        const double u = w.values[k];
        pre[k] = phi_n(model, n_ladder[i], u);
        if (check_bound && std::abs(pre[k]) > bound_a * (1.0 + std::pow(std::abs(u), 1.0 + d))) {
          ++violations[r];
        }
      }
      gaps[i][r] = std::abs(ito_sum(w, pre) - limit_integral);
    }
  });

  IntegralConvergence out;
  out.ladder.assign(n_ladder.begin(), n_ladder.end());
  out.bound_checked = check_bound;
  for (auto& g : gaps) out.median_gaps.push_back(median(std::move(g)));
  for (std::size_t v : violations) out.bound_violations += v;
  return out;
}

}  // namespace tclab
