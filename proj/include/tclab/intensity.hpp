#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace tclab {

enum class ModelKind { AsymptoticConstant, PowerTail, Periodic, Custom };

// The asymptotic regime the model is declared to be in.
//   Pointwise:        lambda(x) -> a_+/- at +/- infinity.
//   CesaroDelta:      x^{-(1+delta)} int_0^x 1/lambda -> 1/a_+ (and mirrored).
//   RegularlyVarying: same with x^{1+delta} replaced by psi^{-1}(x)/x, psi^{-1} of index gamma.
enum class Regime { Pointwise, CesaroDelta, RegularlyVarying };

std::string_view to_string(ModelKind kind);
std::string_view to_string(Regime regime);

// A user-supplied intensity. `antiderivative`, when set, must return the signed
// integral of 1/lambda from 0 to x; otherwise quadrature is used.
struct CustomIntensity {
  std::string name = "custom";
  std::function<double(double)> lambda;
  std::function<double(double)> antiderivative;
  double a_plus = 1.0;
  double a_minus = 1.0;
  Regime regime = Regime::Pointwise;
  double exponent = 0.0;
  std::vector<double> zero_set;
  // Points where lambda is not smooth; quadrature splits there as well.
  std::vector<double> breakpoints;
};

struct QuadratureOptions {
  double tolerance = 1e-10;
  // A partial integral larger than this is reported as divergence.
  double divergence_cutoff = 1e12;
  // Maximum subinterval length handed to a single tanh-sinh call.
  double chunk = 1.0;
};

// Intensity lambda(x) >= 0 with declared asymptotics. Immutable; cheap to copy.
class IntensityModel {
 public:
  // lambda(x) = a_- + (a_+ - a_-) (1 + tanh x) / 2.
  static IntensityModel asymptotic_constant(double a_plus, double a_minus);
  static IntensityModel constant(double c) { return asymptotic_constant(c, c); }

  // lambda(x) = a_+ |x|^{-delta} / (1 + delta) for x > x0, the a_- branch for
  // x < -x0, and the boundary value held constant on [-x0, x0].
  // `regime` must be CesaroDelta (exponent delta) or RegularlyVarying
  // (exponent gamma = 2 + delta).
  static IntensityModel power_tail(double delta, double a_plus, double a_minus, double x0 = 1.0,
                                   Regime regime = Regime::CesaroDelta);

  // lambda(x) = mean + amplitude * sin(2 pi x / period), |amplitude| < mean.
  static IntensityModel periodic(double mean, double amplitude, double period = 1.0);

  static IntensityModel custom(CustomIntensity spec);

  ModelKind kind() const noexcept { return kind_; }
  const std::vector<double>& params() const noexcept { return params_; }
  double a_plus() const noexcept { return a_plus_; }
  double a_minus() const noexcept { return a_minus_; }
  Regime regime() const noexcept { return regime_; }
  // delta for Pointwise/CesaroDelta, gamma for RegularlyVarying.
  double exponent() const noexcept { return exponent_; }
  // Exponent of the Cesaro scaling x^{1+d}: exponent for CesaroDelta,
  // gamma - 2 for RegularlyVarying, 0 for Pointwise.
  double cesaro_delta() const noexcept;
  const std::vector<double>& zero_set() const noexcept { return zero_set_; }
  std::string name() const;

  double operator()(double x) const;
  // 1/lambda(x); +infinity on the zero set.
  double reciprocal(double x) const;

  bool has_closed_form() const noexcept;
  // Signed integral of 1/lambda over [0, x].
  double antiderivative(double x, const QuadratureOptions& opts = {}) const;

  // Split points for quadrature: kinks and zeros of lambda.
  std::vector<double> breakpoints() const;

  // Normalizing factor phi(n) of B_{tau_{nt}} selected by the declared regime.
  double normalization(double n) const;

  // Overrides psi(n) for the RegularlyVarying regime (default n^{1/gamma}).
  IntensityModel with_psi(std::function<double(double)> psi) const;

 private:
  IntensityModel() = default;

  ModelKind kind_ = ModelKind::AsymptoticConstant;
  std::vector<double> params_;
  double a_plus_ = 1.0;
  double a_minus_ = 1.0;
  Regime regime_ = Regime::Pointwise;
  double exponent_ = 0.0;
  std::vector<double> zero_set_;
  std::shared_ptr<const CustomIntensity> custom_;
  std::shared_ptr<const std::function<double(double)>> psi_;
};

double evaluate(const IntensityModel& model, double x);

// int_a^b ds / lambda(s). Closed form for built-in families, tanh-sinh
// quadrature split at the model's breakpoints otherwise.
double reciprocal_integral(const IntensityModel& model, double a, double b,
                           const QuadratureOptions& opts = {});

// Always integrates numerically, even when a closed form exists.
double reciprocal_integral_quadrature(const IntensityModel& model, double a, double b,
                                      const QuadratureOptions& opts = {});

struct AsymptoticProbe {
  double x = 0.0;
  // x^{-(1+d)} int_0^x 1/lambda and x^{-(1+d)} int_{-x}^0 1/lambda.
  double scaled_plus = 0.0;
  double scaled_minus = 0.0;
  // scaled_plus * a_+ and scaled_minus * a_-; both -> 1 when the declaration holds.
  double agreement_plus = 0.0;
  double agreement_minus = 0.0;
};

struct AsymptoticSummary {
  double a_plus = 0.0;
  double a_minus = 0.0;
  Regime regime = Regime::Pointwise;
  double exponent = 0.0;
  std::vector<AsymptoticProbe> probes;
};

// Echoes the declared asymptotics and measures the Cesaro ratios at x = 1e2, 1e3.
AsymptoticSummary asymptotic_summary(const IntensityModel& model,
                                     const QuadratureOptions& opts = {});

// Named custom families used by the experiment presets.

// lambda(x) = min(1, sqrt|x|) * base(x); vanishes at 0, same asymptotics as base.
IntensityModel degenerate_at_zero(const IntensityModel& base);
// lambda(x) = a_+/- / (1 + eps sin(2 pi x)): no pointwise limit, Cesaro limits a_+/-.
IntensityModel oscillating_sides(double a_plus, double a_minus, double eps);
// lambda(x) = 1 + height * exp(-x^2), bounded below by 1.
IntensityModel gaussian_bump(double height);
// Piecewise-linear interpolation of (xs, lambdas), constant beyond the ends.
IntensityModel tabulated(std::vector<double> xs, std::vector<double> lambdas, double a_plus,
                         double a_minus, Regime regime = Regime::Pointwise, double exponent = 0.0);

}  // namespace tclab
