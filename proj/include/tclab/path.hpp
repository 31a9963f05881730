#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "tclab/rng.hpp"

namespace tclab {

enum class PathKind { Brownian, TimeChanged, Limit, Derived };

std::string_view to_string(PathKind kind);

// Process sampled on the uniform grid t0 + k dt, k = 0..K.
struct Path {
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<double> values;
  PathKind kind = PathKind::Brownian;

  std::size_t steps() const noexcept { return values.empty() ? 0 : values.size() - 1; }
  double horizon() const noexcept { return dt * static_cast<double>(steps()); }
  double time(std::size_t k) const noexcept { return t0 + dt * static_cast<double>(k); }
  // Linear interpolation; t is clamped to the grid.
  double at(double t) const;
};

// Process values at arbitrary increasing observation times.
struct Trajectory {
  std::vector<double> times;
  std::vector<double> values;
  PathKind kind = PathKind::Derived;
};

// K = ceil(horizon / dt) steps of Brownian motion started at `start`. The
// increments are normals counter, counter+1, ... of `stream`.
Path sample_brownian(const RngStream& stream, double horizon, double dt, double start = 0.0);

// Appends `steps` increments drawn from `stream` (whose counter advances).
void extend_brownian(Path& path, RngStream& stream, std::size_t steps);

// Brownian-bridge refinement to step dt / factor. Original grid values are
// copied bit-exactly; bridge points use normals from `stream`.
Path refine(const Path& path, std::size_t factor, const RngStream& stream);

// W_n(t) = path(n t) / sqrt(n) on the grid dt / n, up to `target_horizon`
// (default: the whole path).
Path rescale_diffusive(const Path& path, double n, double target_horizon = -1.0);

}  // namespace tclab
