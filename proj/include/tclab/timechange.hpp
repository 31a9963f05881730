#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "tclab/clock.hpp"
#include "tclab/intensity.hpp"
#include "tclab/monotone.hpp"
#include "tclab/path.hpp"
#include "tclab/rng.hpp"

namespace tclab {

// S_B(t) = int_0^t ds / lambda(B_s) on the path's grid (trapezoid; a grid point
// where lambda vanishes takes the mean of its neighbours, per the 0/0 := 0
// convention for single points).
// KindMismatch unless the path is Brownian or Derived; DegenerateFunctional if
// the result is not strictly increasing.
MonotoneFunction additive_functional(const Path& path, const IntensityModel& model);

// tau_t = inf{x : S(x) > t}.
double inverse_time_change(const MonotoneFunction& S, double t);

struct TimeChangedPath {
  Path base;
  MonotoneFunction tau;  // t -> tau_t, sampled at the values of S
  Trajectory observed;   // Y_t = B_{tau_t} at the requested times
};

// Y_t = B_{tau_t} at `out_times` for an already simulated base path.
// HorizonExceeded if S_B does not reach max(out_times).
TimeChangedPath time_changed_path(const Path& path, const IntensityModel& model,
                                  std::span<const double> out_times);

// Same, simulating the base path from `start` with step dt and extending it
// until S_B covers max(out_times).
TimeChangedPath simulate_time_changed(const RngStream& stream, const IntensityModel& model,
                                      std::span<const double> out_times, double dt,
                                      double start = 0.0, const ExtensionPolicy& policy = {});

// X_n(t) = B_{tau_{n t}} / phi(n) with phi chosen by the model's declared regime.
Trajectory normalized_process(const Path& path, const IntensityModel& model, double n,
                              std::span<const double> out_times);

// Adaptive variant. The base path is simulated on step dt * phi(n)^2, which
// makes X_n live on step dt in normalized time; this keeps the step count of
// an experiment independent of n.
Trajectory sample_normalized_process(const RngStream& stream, const IntensityModel& model,
                                     double n, std::span<const double> out_times, double dt,
                                     const ExtensionPolicy& policy = {});

struct CauchyOptions {
  double dt = 1e-3;
  unsigned jobs = 1;
  ExtensionPolicy policy{};
};

struct CauchyEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t replicates = 0;
};

// Monte Carlo estimate of u(t, x) = E^x f(B_{tau_t}). With B a standard
// Brownian motion the generator is lambda(x)/2 d^2/dx^2, so u solves
// du/dt = lambda(x) u'' / 2 with u(0, .) = f. Replicate r uses stream
// {stream.master_seed, stream.replicate + r}.
CauchyEstimate cauchy_estimate(const IntensityModel& model, const std::function<double(double)>& f,
                               double t, double x, std::size_t replicates,
                               const RngStream& stream, const CauchyOptions& opts = {});

}  // namespace tclab
