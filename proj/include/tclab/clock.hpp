#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tclab/errors.hpp"
#include "tclab/monotone.hpp"
#include "tclab/path.hpp"
#include "tclab/rng.hpp"

namespace tclab {

// Adaptive horizon for random clocks: the driving path is extended in blocks
// that double in size until the clock passes its target.
struct ExtensionPolicy {
  std::size_t initial_block = 4096;
  std::size_t max_steps = 100'000'000;
};

// A Brownian path together with the running integral of g(path) along it.
struct ClockedPath {
  Path path;
  MonotoneFunction clock;
};

// Simulates Brownian motion from `start` on step dt, accumulating
// clock(t) = int_0^t g(B_s) ds by the trapezoid rule with the singular-point
// convention of cumulative_trapezoid, until clock > target. The result is a
// prefix of the same infinite path regardless of block sizes.
template <class Integrand>
ClockedPath run_clock_until(const RngStream& stream, double dt, double start, Integrand&& g,
                            double target, const ExtensionPolicy& policy = {}) {
  Path path;
  path.dt = dt;
  path.kind = PathKind::Brownian;
  path.values.push_back(start);
  RngStream cursor = stream;

  std::vector<double> samples{g(start)};
  std::vector<double> args{0.0};
  std::vector<double> clock{0.0};
  std::size_t block = policy.initial_block;

  while (true) {
    // Extend clock over every interval whose endpoint samples are settled.
    const std::size_t n = samples.size();
    const std::size_t settled = std::isfinite(samples.back()) ? n : n - 1;
    const std::span<const double> view(samples);
    bool reached = false;
    for (std::size_t k = clock.size(); k < settled; ++k) {
      const double left = regularized_sample(view, k - 1);
      const double right = regularized_sample(view, k);
      args.push_back(dt * static_cast<double>(k));
      clock.push_back(clock.back() + 0.5 * dt * (left + right));
      if (clock.back() > target) {
        reached = true;
        break;
      }
    }
    if (reached) break;

    if (path.values.size() - 1 >= policy.max_steps) {
      throw HorizonExceeded("clock did not reach " + std::to_string(target) + " within " +
                            std::to_string(policy.max_steps) + " steps");
    }
    const std::size_t grow = std::min(block, policy.max_steps - (path.values.size() - 1));
    const std::size_t old = path.values.size();
    extend_brownian(path, cursor, grow);
    samples.reserve(path.values.size());
    for (std::size_t k = old; k < path.values.size(); ++k) samples.push_back(g(path.values[k]));
    block *= 2;
  }

  path.values.resize(clock.size());
  for (std::size_t k = 1; k < clock.size(); ++k) {
    if (!(clock[k] > clock[k - 1])) {
      throw DegenerateFunctional("clock is not strictly increasing at t = " +
                                 std::to_string(args[k]));
    }
  }
  return {std::move(path), MonotoneFunction(std::move(args), std::move(clock))};
}

}  // namespace tclab
