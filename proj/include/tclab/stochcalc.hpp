#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tclab/intensity.hpp"
#include "tclab/path.hpp"

namespace tclab {

// F with continuous F' and an a.e. defined, locally integrable F''.
// F'' is taken as 0 at the listed singular points.
struct C1aeFunction {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> f1;
  std::function<double(double)> f2;
  std::vector<double> singular_points;

  double second(double x) const;

  static C1aeFunction square();
  static C1aeFunction linear(double slope, double intercept = 0.0);
  // x^{2+delta} on (0, inf), 0 elsewhere.
  static C1aeFunction positive_power(double delta);
};

// Left-point sum  sum_k integrand[k] (W_{k+1} - W_k).
// LengthMismatch unless integrand has one sample per grid point.
double ito_sum(const Path& path, std::span<const double> integrand);

// F(W_T) - F(W_0) - ito_sum(F'(W)) - 1/2 trapezoid(F''(W)).
double ito_residual(const Path& path, const C1aeFunction& fn);

struct ResidualLadder {
  std::vector<double> dts;
  std::vector<double> rms;
  // rms[i] / rms[i + 1]
  std::vector<double> ratios;
};

// RMS of ito_residual over `replicates` Brownian paths on [0, horizon] for each
// step in `dts` (decreasing, each dividing the previous). Coarser grids are
// subsamples of the finest path, so all levels share the same Brownian motion.
ResidualLadder ito_residual_ladder(const C1aeFunction& fn, std::span<const double> dts,
                                   double horizon, std::size_t replicates,
                                   std::uint64_t master_seed, unsigned jobs = 1);

// phi_n(u) = n^{-(1+d)/(2+d)} int_0^{u n^{1/(2+d)}} dv / lambda(v).
double phi_n(const IntensityModel& model, double n, double u);
// Its limit |u|^{1+d} sgn(u) nu(u).
double phi_limit(const IntensityModel& model, double u);

struct IntegralConvergence {
  std::vector<double> ladder;
  std::vector<double> median_gaps;
  // Evaluations violating |phi_n(u)| <= A (1 + |u|^{1+d}), A = 2 (1/a_+ + 1/a_-).
  std::size_t bound_violations = 0;
  bool bound_checked = false;
};

struct IntegralCheckOptions {
  double dt = 1e-4;
  std::uint64_t master_seed = 0;
  unsigned jobs = 1;
};

// For each n, the median over replicates of
//   | int_0^t phi_n(W) dW - int_0^t phi_limit(W) dW |.
// d is the model's Cesaro exponent (0 for the Pointwise regime). The dominating
// bound is checked for built-in families; Custom models skip it with a warning
// on stderr.
IntegralConvergence integral_convergence_check(const IntensityModel& model,
                                               std::span<const double> n_ladder, double t,
                                               std::size_t replicates,
                                               const IntegralCheckOptions& opts = {});

}  // namespace tclab
