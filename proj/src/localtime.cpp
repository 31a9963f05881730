#include "tclab/localtime.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tclab/errors.hpp"

namespace tclab {

namespace {

class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

double LocalTimeProfile::total_time() const {
  NeumaierSum s;
  for (double m : masses) s.add(m * bin_width);
  return s.value();
}

LocalTimeProfile occupation_density(const Path& path, double upto, double bin_width) {
  if (!(bin_width > 0.0)) throw std::invalid_argument("occupation_density: bin_width must be > 0");
  if (upto < 0.0) throw std::invalid_argument("occupation_density: upto must be >= 0");
  if (upto > path.horizon() * (1.0 + 1e-12)) {
    throw HorizonExceeded("occupation_density: upto = " + std::to_string(upto) +
                          " beyond path horizon " + std::to_string(path.horizon()));
  }
  LocalTimeProfile profile;
  profile.bin_width = bin_width;
  profile.t = upto;
  if (upto == 0.0 || path.values.size() < 2) {
    profile.masses.assign(1, 0.0);
    profile.bin_left = std::floor(path.values.empty() ? 0.0 : path.values.front() / bin_width) * bin_width;
    return profile;
  }

  const auto full = std::min(path.steps(), static_cast<std::size_t>(std::floor(upto / path.dt)));
  const double remainder = std::max(0.0, upto - static_cast<double>(full) * path.dt);
  const std::size_t used = remainder > 0.0 && full < path.steps() ? full + 1 : full;

  std::vector<long long> index(used);
  long long lo = std::numeric_limits<long long>::max();
  long long hi = std::numeric_limits<long long>::min();
  for (std::size_t k = 0; k < used; ++k) {
    const double mid = 0.5 * (path.values[k] + path.values[k + 1]);
    index[k] = static_cast<long long>(std::floor(mid / bin_width));
    lo = std::min(lo, index[k]);
    hi = std::max(hi, index[k]);
  }

  // Integer step counts per bin keep the occupation identity exact up to one
  // rounding per bin.
  const auto bins = static_cast<std::size_t>(hi - lo + 1);
  std::vector<std::size_t> counts(bins, 0);
  for (std::size_t k = 0; k < full; ++k) ++counts[static_cast<std::size_t>(index[k] - lo)];
  profile.bin_left = static_cast<double>(lo) * bin_width;
  profile.masses.resize(bins);
  for (std::size_t j = 0; j < bins; ++j) {
    profile.masses[j] = static_cast<double>(counts[j]) * path.dt / bin_width;
  }
  if (used > full) {
    profile.masses[static_cast<std::size_t>(index[full] - lo)] += remainder / bin_width;
  }
  return profile;
}

double functional_via_localtime(const LocalTimeProfile& profile, const IntensityModel& model) {
  return scaled_localtime_limit(profile, model, 1.0);
}

double scaled_localtime_limit(const LocalTimeProfile& profile, const IntensityModel& model,
                              double n) {
  if (!(n > 0.0)) throw std::invalid_argument("scaled_localtime_limit: n must be > 0");
  NeumaierSum total;
  if (std::isinf(n)) {
    NeumaierSum below;
    NeumaierSum above;
    for (std::size_t j = 0; j < profile.masses.size(); ++j) {
      const double occupation = profile.masses[j] * profile.bin_width;
      if (profile.center(j) < 0.0) {
        below.add(occupation);
      } else {
        above.add(occupation);
      }
    }
    return below.value() / model.a_minus() + above.value() / model.a_plus();
  }
  const double scale = std::sqrt(n);
  for (std::size_t j = 0; j < profile.masses.size(); ++j) {
    if (profile.masses[j] == 0.0) continue;
    const double lam = model(scale * profile.center(j));
    if (lam > 0.0) total.add(profile.masses[j] * profile.bin_width / lam);
  }
  return total.value();
}

}  // namespace tclab
