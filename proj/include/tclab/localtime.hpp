#pragma once

#include <limits>
#include <vector>

#include "tclab/intensity.hpp"
#include "tclab/path.hpp"

namespace tclab {

// Binned occupation density: masses[j] * bin_width is the time the path spent
// in [bin_left + j w, bin_left + (j+1) w) up to time t. Bin edges sit on
// multiples of bin_width, so 0 is always an edge.
struct LocalTimeProfile {
  double bin_left = 0.0;
  double bin_width = 1.0;
  std::vector<double> masses;
  double t = 0.0;

  double center(std::size_t j) const noexcept {
    return bin_left + (static_cast<double>(j) + 0.5) * bin_width;
  }
  // Neumaier-compensated sum(masses) * bin_width.
  double total_time() const;
};

// Each grid step (or the final partial step) is charged to the bin containing
// the midpoint of its two endpoint values.
LocalTimeProfile occupation_density(const Path& path, double upto, double bin_width);

// sum_j masses[j] * w / lambda(a_j); bins where lambda vanishes contribute 0.
double functional_via_localtime(const LocalTimeProfile& profile, const IntensityModel& model);

// sum_j masses[j] * w / lambda(sqrt(n) a_j). With n = +infinity returns the
// limit (1/a_-) int_{a<0} L da + (1/a_+) int_{a>0} L da.
double scaled_localtime_limit(const LocalTimeProfile& profile, const IntensityModel& model,
                              double n);

inline constexpr double kInfiniteScale = std::numeric_limits<double>::infinity();

}  // namespace tclab
