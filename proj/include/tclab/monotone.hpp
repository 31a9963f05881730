#pragma once

#include <span>
#include <vector>

namespace tclab {

// A sampled nondecreasing function x -> f(x) with linear interpolation between
// samples. Used for the additive functional S_B, the limit clock eta, and
// their inverses.
class MonotoneFunction {
 public:
  MonotoneFunction() = default;
  // Throws std::invalid_argument unless arguments are strictly increasing,
  // values nondecreasing, and both have the same length >= 1.
  MonotoneFunction(std::vector<double> arguments, std::vector<double> values);

  const std::vector<double>& arguments() const noexcept { return arguments_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double max_value() const noexcept { return values_.back(); }
  bool strictly_increasing() const noexcept;

  double operator()(double x) const;

  // Generalized right inverse inf{x : f(x) > t}, linearly interpolated.
  // DegenerateFunctional if f is constant; HorizonExceeded if t > max_value().
  double inverse(double t) const;
  // Inverse at each of `levels`.
  std::vector<double> inverse(std::span<const double> levels) const;

  // The sampled inverse function t -> f^{-1}(t); requires strict increase.
  MonotoneFunction inverted() const;

 private:
  std::vector<double> arguments_;
  std::vector<double> values_;
};

// Trapezoid cumulative integral on the uniform grid x_k = x0 + k dx of samples
// `integrand`. Non-finite samples (singular points) are replaced by the mean of
// their finite neighbours, or dropped (0) when no neighbour is finite.
MonotoneFunction cumulative_trapezoid(std::span<const double> integrand, double x0, double dx);

// Value used in place of integrand[k] under the singular-point convention.
double regularized_sample(std::span<const double> integrand, std::size_t k);

}  // namespace tclab
