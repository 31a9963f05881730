#include "tclab/path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tclab/errors.hpp"

namespace tclab {

namespace {

// Grid steps needed to cover `span`; tolerates representation error in span/dt.
std::size_t steps_for(double span, double dt) {
  return static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
}

}  // namespace

std::string_view to_string(PathKind kind) {
  switch (kind) {
    case PathKind::Brownian: return "brownian";
    case PathKind::TimeChanged: return "time_changed";
    case PathKind::Limit: return "limit";
    case PathKind::Derived: return "derived";
  }
  return "unknown";
}

double Path::at(double t) const {
  if (values.empty()) throw std::invalid_argument("Path::at on empty path");
  const double u = (t - t0) / dt;
  if (u <= 0.0) return values.front();
  const auto k = static_cast<std::size_t>(u);
  if (k >= steps()) return values.back();
  const double w = u - static_cast<double>(k);
  return values[k] + w * (values[k + 1] - values[k]);
}

Path sample_brownian(const RngStream& stream, double horizon, double dt, double start) {
  if (!(dt > 0.0)) throw std::invalid_argument("sample_brownian: dt must be > 0");
  if (!(horizon >= dt)) throw std::invalid_argument("sample_brownian: need horizon >= dt");
  Path path;
  path.dt = dt;
  path.kind = PathKind::Brownian;
  path.values.push_back(start);
  RngStream cursor = stream;
  extend_brownian(path, cursor, steps_for(horizon, dt));
  return path;
}

void extend_brownian(Path& path, RngStream& stream, std::size_t steps) {
  if (path.values.empty()) path.values.push_back(0.0);
  const std::size_t old = path.values.size();
  path.values.resize(old + steps);
  std::span<double> fresh(path.values.data() + old, steps);
  stream.fill_normals(fresh);
  const double sd = std::sqrt(path.dt);
  double x = path.values[old - 1];
  for (double& v : fresh) {
    x += sd * v;
    v = x;
  }
}

Path refine(const Path& path, std::size_t factor, const RngStream& stream) {
  if (path.kind != PathKind::Brownian) {
    throw KindMismatch("refine: expected a Brownian path, got " + std::string(to_string(path.kind)));
  }
  if (factor == 0) throw std::invalid_argument("refine: factor must be >= 1");
  if (factor == 1) return path;

  Path out;
  out.t0 = path.t0;
  out.dt = path.dt / static_cast<double>(factor);
  out.kind = PathKind::Brownian;
  out.values.reserve(path.steps() * factor + 1);

  RngStream cursor = stream;
  std::vector<double> z(factor - 1);
  const double h = out.dt;
  for (std::size_t k = 0; k < path.steps(); ++k) {
    const double left = path.values[k];
    const double right = path.values[k + 1];
    out.values.push_back(left);
    cursor.fill_normals(z);
    double x = left;
    for (std::size_t j = 1; j < factor; ++j) {
      // Bridge from (s_{j-1}, x) to (dt, right), sampled at s_j = s_{j-1} + h.
      const double remaining = path.dt - static_cast<double>(j - 1) * h;
      const double mean = x + (right - x) * h / remaining;
      const double var = h * (remaining - h) / remaining;
      x = mean + std::sqrt(var) * z[j - 1];
      out.values.push_back(x);
    }
  }
  out.values.push_back(path.values.back());
  return out;
}

Path rescale_diffusive(const Path& path, double n, double target_horizon) {
  if (!(n > 0.0)) throw std::invalid_argument("rescale_diffusive: n must be > 0");
  if (target_horizon < 0.0) target_horizon = path.horizon() / n;
  if (n * target_horizon > path.horizon() * (1.0 + 1e-12)) {
    throw HorizonExceeded("rescale_diffusive: n * horizon = " + std::to_string(n * target_horizon) +
                          " exceeds path horizon " + std::to_string(path.horizon()));
  }
  Path out;
  out.t0 = path.t0 / n;
  out.dt = path.dt / n;
  out.kind = path.kind;
  const std::size_t k_max = std::min(path.steps(), steps_for(n * target_horizon, path.dt));
  const double scale = 1.0 / std::sqrt(n);
  out.values.reserve(k_max + 1);
  for (std::size_t k = 0; k <= k_max; ++k) out.values.push_back(path.values[k] * scale);
  return out;
}

}  // namespace tclab
