#include "tclab/monotone.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tclab/errors.hpp"

namespace tclab {

MonotoneFunction::MonotoneFunction(std::vector<double> arguments, std::vector<double> values)
    : arguments_(std::move(arguments)), values_(std::move(values)) {
  if (arguments_.empty() || arguments_.size() != values_.size()) {
    throw std::invalid_argument("MonotoneFunction: arguments and values need equal nonzero length");
  }
  for (std::size_t i = 1; i < arguments_.size(); ++i) {
    if (!(arguments_[i] > arguments_[i - 1])) {
      throw std::invalid_argument("MonotoneFunction: arguments must be strictly increasing");
    }
    if (values_[i] < values_[i - 1]) {
      throw std::invalid_argument("MonotoneFunction: values must be nondecreasing");
    }
  }
}

bool MonotoneFunction::strictly_increasing() const noexcept {
  return std::adjacent_find(values_.begin(), values_.end(),
                            [](double a, double b) { return !(b > a); }) == values_.end();
}

double MonotoneFunction::operator()(double x) const {
  if (x <= arguments_.front()) return values_.front();
  if (x >= arguments_.back()) return values_.back();
  const auto hi = static_cast<std::size_t>(
      std::upper_bound(arguments_.begin(), arguments_.end(), x) - arguments_.begin());
  const std::size_t lo = hi - 1;
  const double w = (x - arguments_[lo]) / (arguments_[hi] - arguments_[lo]);
  return values_[lo] + w * (values_[hi] - values_[lo]);
}

double MonotoneFunction::inverse(double t) const {
  if (!(values_.back() > values_.front())) {
    throw DegenerateFunctional("monotone function is constant; no inverse");
  }
  if (t > values_.back()) {
    throw HorizonExceeded("inverse: level " + std::to_string(t) + " exceeds functional maximum " +
                          std::to_string(values_.back()));
  }
  if (t < values_.front()) return arguments_.front();
  const auto hi = static_cast<std::size_t>(
      std::upper_bound(values_.begin(), values_.end(), t) - values_.begin());
  if (hi == values_.size()) {
    // t equals the maximum: first argument attaining it.
    const auto first = std::lower_bound(values_.begin(), values_.end(), t) - values_.begin();
    return arguments_[static_cast<std::size_t>(first)];
  }
  const std::size_t lo = hi - 1;
  const double w = (t - values_[lo]) / (values_[hi] - values_[lo]);
  return arguments_[lo] + w * (arguments_[hi] - arguments_[lo]);
}

std::vector<double> MonotoneFunction::inverse(std::span<const double> levels) const {
  std::vector<double> out;
  out.reserve(levels.size());
  for (double t : levels) out.push_back(inverse(t));
  return out;
}

MonotoneFunction MonotoneFunction::inverted() const {
  if (!strictly_increasing()) {
    throw DegenerateFunctional("inverted: function is not strictly increasing");
  }
  return MonotoneFunction(values_, arguments_);
}

double regularized_sample(std::span<const double> integrand, std::size_t k) {
  const double v = integrand[k];
  if (std::isfinite(v)) return v;
  const bool has_left = k > 0 && std::isfinite(integrand[k - 1]);
  const bool has_right = k + 1 < integrand.size() && std::isfinite(integrand[k + 1]);
  if (has_left && has_right) return 0.5 * (integrand[k - 1] + integrand[k + 1]);
  if (has_left) return integrand[k - 1];
  if (has_right) return integrand[k + 1];
  return 0.0;
}

MonotoneFunction cumulative_trapezoid(std::span<const double> integrand, double x0, double dx) {
  if (integrand.empty()) throw std::invalid_argument("cumulative_trapezoid: empty integrand");
  std::vector<double> args(integrand.size());
  std::vector<double> vals(integrand.size());
  args[0] = x0;
  vals[0] = 0.0;
  double prev = regularized_sample(integrand, 0);
  for (std::size_t k = 1; k < integrand.size(); ++k) {
    const double cur = regularized_sample(integrand, k);
    args[k] = x0 + dx * static_cast<double>(k);
    vals[k] = vals[k - 1] + 0.5 * dx * (prev + cur);
    prev = cur;
  }
  return MonotoneFunction(std::move(args), std::move(vals));
}

}  // namespace tclab
