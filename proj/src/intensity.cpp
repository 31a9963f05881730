#include "tclab/intensity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "tclab/errors.hpp"

namespace tclab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// params layout per family:
//   AsymptoticConstant: {}
//   PowerTail:          {delta, x0}
//   Periodic:           {mean, amplitude, period}

double asymptotic_constant_value(double a_plus, double a_minus, double x) {
  return a_minus + (a_plus - a_minus) * (1.0 + std::tanh(x)) / 2.0;
}

// int_0^x 1/lambda = x/a_- + (1/a_+ - 1/a_-)/2 * [ln(a_+ e^{2x} + a_-) - ln(a_+ + a_-)].
double asymptotic_constant_antiderivative(double a_plus, double a_minus, double x) {
  if (a_plus == a_minus) return x / a_plus;
  auto log_mix = [&](double y) {
    // ln(a_+ e^{2y} + a_-) without overflow.
    if (y > 0.0) return 2.0 * y + std::log(a_plus + a_minus * std::exp(-2.0 * y));
    return std::log(a_minus + a_plus * std::exp(2.0 * y));
  };
  return x / a_minus +
         0.5 * (1.0 / a_plus - 1.0 / a_minus) * (log_mix(x) - std::log(a_plus + a_minus));
}

double power_tail_value(double delta, double x0, double a_plus, double a_minus, double x) {
  const double a = x >= 0.0 ? a_plus : a_minus;
  const double r = std::max(std::abs(x), x0);
  return a * std::pow(r, -delta) / (1.0 + delta);
}

double power_tail_antiderivative(double delta, double x0, double a_plus, double a_minus,
                                 double x) {
  const double a = x >= 0.0 ? a_plus : a_minus;
  const double r = std::abs(x);
  double value;
  if (r <= x0) {
    value = r * (1.0 + delta) * std::pow(x0, delta) / a;
  } else {
    value = (std::pow(r, 1.0 + delta) + delta * std::pow(x0, 1.0 + delta)) / a;
  }
  return x >= 0.0 ? value : -value;
}

// Continuous antiderivative of 1/(m + A sin(2 pi x / P)).
double periodic_antiderivative(double mean, double amp, double period, double x) {
  const double s = std::sqrt(mean * mean - amp * amp);
  const double cycles = std::floor(x / period);
  const double r = x - cycles * period;
  const double theta = std::numbers::pi * r / period;  // in [0, pi)
  const double scale = period / (std::numbers::pi * s);
  double partial = std::atan((mean * std::tan(theta) + amp) / s) - std::atan(amp / s);
  if (theta > std::numbers::pi / 2) partial += std::numbers::pi;
  return cycles * period / s + scale * partial;
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::AsymptoticConstant: return "asymptotic_constant";
    case ModelKind::PowerTail: return "power_tail";
    case ModelKind::Periodic: return "periodic";
    case ModelKind::Custom: return "custom";
  }
  return "unknown";
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::Pointwise: return "pointwise";
    case Regime::CesaroDelta: return "cesaro_delta";
    case Regime::RegularlyVarying: return "regularly_varying";
  }
  return "unknown";
}

IntensityModel IntensityModel::asymptotic_constant(double a_plus, double a_minus) {
  require(a_plus > 0.0 && a_minus > 0.0, "asymptotic_constant: a_plus and a_minus must be > 0");
  IntensityModel m;
  m.kind_ = ModelKind::AsymptoticConstant;
  m.a_plus_ = a_plus;
  m.a_minus_ = a_minus;
  m.regime_ = Regime::Pointwise;
  m.exponent_ = 0.0;
  return m;
}

IntensityModel IntensityModel::power_tail(double delta, double a_plus, double a_minus, double x0,
                                          Regime regime) {
  require(delta > -1.0, "power_tail: delta must be > -1");
  require(a_plus > 0.0 && a_minus > 0.0, "power_tail: a_plus and a_minus must be > 0");
  require(x0 > 0.0, "power_tail: x0 must be > 0");
  require(regime != Regime::Pointwise, "power_tail: regime must be cesaro_delta or regularly_varying");
  IntensityModel m;
  m.kind_ = ModelKind::PowerTail;
  m.params_ = {delta, x0};
  m.a_plus_ = a_plus;
  m.a_minus_ = a_minus;
  m.regime_ = regime;
  m.exponent_ = regime == Regime::RegularlyVarying ? 2.0 + delta : delta;
  return m;
}

IntensityModel IntensityModel::periodic(double mean, double amplitude, double period) {
  require(mean > 0.0 && std::abs(amplitude) < mean, "periodic: need |amplitude| < mean");
  require(period > 0.0, "periodic: period must be > 0");
  IntensityModel m;
  m.kind_ = ModelKind::Periodic;
  m.params_ = {mean, amplitude, period};
  // Effective constant: (mean of 1/lambda over a period)^{-1}.
  const double a = std::sqrt(mean * mean - amplitude * amplitude);
  m.a_plus_ = a;
  m.a_minus_ = a;
  m.regime_ = Regime::CesaroDelta;
  m.exponent_ = 0.0;
  return m;
}

IntensityModel IntensityModel::custom(CustomIntensity spec) {
  require(static_cast<bool>(spec.lambda), "custom: lambda evaluator is required");
  require(spec.a_plus > 0.0 && spec.a_minus > 0.0, "custom: a_plus and a_minus must be > 0");
  IntensityModel m;
  m.kind_ = ModelKind::Custom;
  m.a_plus_ = spec.a_plus;
  m.a_minus_ = spec.a_minus;
  m.regime_ = spec.regime;
  m.exponent_ = spec.exponent;
  m.zero_set_ = spec.zero_set;
  std::sort(m.zero_set_.begin(), m.zero_set_.end());
  m.custom_ = std::make_shared<const CustomIntensity>(std::move(spec));
  return m;
}

double IntensityModel::cesaro_delta() const noexcept {
  switch (regime_) {
    case Regime::Pointwise: return 0.0;
    case Regime::CesaroDelta: return exponent_;
    case Regime::RegularlyVarying: return exponent_ - 2.0;
  }
  return 0.0;
}

std::string IntensityModel::name() const {
  if (kind_ == ModelKind::Custom) return custom_->name;
  return std::string(to_string(kind_));
}

double IntensityModel::operator()(double x) const {
  if (!zero_set_.empty() && std::binary_search(zero_set_.begin(), zero_set_.end(), x)) return 0.0;
  switch (kind_) {
    case ModelKind::AsymptoticConstant:
      return asymptotic_constant_value(a_plus_, a_minus_, x);
    case ModelKind::PowerTail:
      return power_tail_value(params_[0], params_[1], a_plus_, a_minus_, x);
    case ModelKind::Periodic:
      return params_[0] + params_[1] * std::sin(2.0 * std::numbers::pi * x / params_[2]);
    case ModelKind::Custom:
      return custom_->lambda(x);
  }
  return 0.0;
}

double IntensityModel::reciprocal(double x) const {
  const double value = (*this)(x);
  return value > 0.0 ? 1.0 / value : kInf;
}

bool IntensityModel::has_closed_form() const noexcept {
  return kind_ != ModelKind::Custom || static_cast<bool>(custom_->antiderivative);
}

double IntensityModel::antiderivative(double x, const QuadratureOptions& opts) const {
  switch (kind_) {
    case ModelKind::AsymptoticConstant:
      return asymptotic_constant_antiderivative(a_plus_, a_minus_, x);
    case ModelKind::PowerTail:
      return power_tail_antiderivative(params_[0], params_[1], a_plus_, a_minus_, x);
    case ModelKind::Periodic:
      return periodic_antiderivative(params_[0], params_[1], params_[2], x);
    case ModelKind::Custom:
      if (custom_->antiderivative) return custom_->antiderivative(x);
      return x >= 0.0 ? reciprocal_integral_quadrature(*this, 0.0, x, opts)
                      : -reciprocal_integral_quadrature(*this, x, 0.0, opts);
  }
  return 0.0;
}

std::vector<double> IntensityModel::breakpoints() const {
  std::vector<double> points{0.0};
  if (kind_ == ModelKind::PowerTail) {
    points.push_back(params_[1]);
    points.push_back(-params_[1]);
  }
  if (kind_ == ModelKind::Custom) {
    points.insert(points.end(), custom_->breakpoints.begin(), custom_->breakpoints.end());
  }
  points.insert(points.end(), zero_set_.begin(), zero_set_.end());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

double IntensityModel::normalization(double n) const {
  require(n > 0.0, "normalization: n must be > 0");
  switch (regime_) {
    case Regime::Pointwise:
      return std::sqrt(n);
    case Regime::CesaroDelta:
      return exponent_ == 0.0 ? std::sqrt(n) : std::pow(n, 1.0 / (2.0 + exponent_));
    case Regime::RegularlyVarying:
      if (psi_) return (*psi_)(n);
      return std::pow(n, 1.0 / exponent_);
  }
  return std::sqrt(n);
}

IntensityModel IntensityModel::with_psi(std::function<double(double)> psi) const {
  IntensityModel copy = *this;
  copy.psi_ = std::make_shared<const std::function<double(double)>>(std::move(psi));
  return copy;
}

double evaluate(const IntensityModel& model, double x) { return model(x); }

double reciprocal_integral(const IntensityModel& model, double a, double b,
                           const QuadratureOptions& opts) {
  require(a <= b, "reciprocal_integral: need a <= b");
  require(std::isfinite(a) && std::isfinite(b), "reciprocal_integral: bounds must be finite");
  if (a == b) return 0.0;
  if (model.has_closed_form()) return model.antiderivative(b, opts) - model.antiderivative(a, opts);
  return reciprocal_integral_quadrature(model, a, b, opts);
}

double reciprocal_integral_quadrature(const IntensityModel& model, double a, double b,
                                      const QuadratureOptions& opts) {
  require(a <= b, "reciprocal_integral: need a <= b");
  require(std::isfinite(a) && std::isfinite(b), "reciprocal_integral: bounds must be finite");
  if (a == b) return 0.0;

  std::vector<double> cuts{a};
  for (double p : model.breakpoints()) {
    if (p > a && p < b) cuts.push_back(p);
  }
  cuts.push_back(b);

  // One instance per thread: this Boost version only offers non-const integrate().
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  auto f = [&model](double s) { return model.reciprocal(s); };

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    const auto pieces = static_cast<std::size_t>(std::ceil((hi - lo) / opts.chunk));
    for (std::size_t j = 0; j < pieces; ++j) {
      const double u = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(pieces);
      const double v = j + 1 == pieces
                           ? hi
                           : lo + (hi - lo) * static_cast<double>(j + 1) / static_cast<double>(pieces);
      double part = 0.0;
      double err = 0.0;
      try {
        part = integrator.integrate(f, u, v, opts.tolerance, &err);
      } catch (const std::exception& e) {
        throw NonIntegrableSingularity("1/lambda is not integrable on [" + std::to_string(u) + ", " +
                                       std::to_string(v) + "]: " + e.what());
      }
      if (!std::isfinite(part) || part > opts.divergence_cutoff ||
          err > std::max(1e-6, 1e-6 * std::abs(part))) {
        throw NonIntegrableSingularity("1/lambda quadrature diverges on [" + std::to_string(u) +
                                       ", " + std::to_string(v) + "]");
      }
      total += part;
    }
  }
  return total;
}

AsymptoticSummary asymptotic_summary(const IntensityModel& model, const QuadratureOptions& opts) {
  AsymptoticSummary summary;
  summary.a_plus = model.a_plus();
  summary.a_minus = model.a_minus();
  summary.regime = model.regime();
  summary.exponent = model.exponent();
  const double d = model.cesaro_delta();
  for (double x : {1e2, 1e3}) {
    AsymptoticProbe probe;
    probe.x = x;
    const double scale = std::pow(x, -(1.0 + d));
    probe.scaled_plus = scale * reciprocal_integral(model, 0.0, x, opts);
    probe.scaled_minus = scale * reciprocal_integral(model, -x, 0.0, opts);
    probe.agreement_plus = probe.scaled_plus * model.a_plus();
    probe.agreement_minus = probe.scaled_minus * model.a_minus();
    summary.probes.push_back(probe);
  }
  return summary;
}

IntensityModel degenerate_at_zero(const IntensityModel& base) {
  CustomIntensity spec;
  spec.name = "degenerate_at_zero(" + base.name() + ")";
  spec.lambda = [base](double x) { return std::min(1.0, std::sqrt(std::abs(x))) * base(x); };
  spec.a_plus = base.a_plus();
  spec.a_minus = base.a_minus();
  spec.regime = base.regime();
  spec.exponent = base.exponent();
  spec.zero_set = {0.0};
  spec.breakpoints = base.breakpoints();
  spec.breakpoints.push_back(1.0);
  spec.breakpoints.push_back(-1.0);
  return IntensityModel::custom(std::move(spec));
}

IntensityModel oscillating_sides(double a_plus, double a_minus, double eps) {
  require(std::abs(eps) < 1.0, "oscillating_sides: need |eps| < 1");
  CustomIntensity spec;
  spec.name = "oscillating_sides";
  spec.lambda = [=](double x) {
    const double a = x >= 0.0 ? a_plus : a_minus;
    return a / (1.0 + eps * std::sin(2.0 * std::numbers::pi * x));
  };
  // int_0^x (1 + eps sin 2 pi s) / a ds on each half line.
  spec.antiderivative = [=](double x) {
    const double a = x >= 0.0 ? a_plus : a_minus;
    return (x + eps * (1.0 - std::cos(2.0 * std::numbers::pi * x)) / (2.0 * std::numbers::pi)) / a;
  };
  spec.a_plus = a_plus;
  spec.a_minus = a_minus;
  spec.regime = Regime::CesaroDelta;
  spec.exponent = 0.0;
  return IntensityModel::custom(std::move(spec));
}

IntensityModel gaussian_bump(double height) {
  require(height >= 0.0, "gaussian_bump: height must be >= 0");
  CustomIntensity spec;
  spec.name = "gaussian_bump";
  spec.lambda = [=](double x) { return 1.0 + height * std::exp(-x * x); };
  spec.a_plus = 1.0;
  spec.a_minus = 1.0;
  spec.regime = Regime::Pointwise;
  return IntensityModel::custom(std::move(spec));
}

IntensityModel tabulated(std::vector<double> xs, std::vector<double> lambdas, double a_plus,
                         double a_minus, Regime regime, double exponent) {
  require(xs.size() == lambdas.size() && xs.size() >= 2, "tabulated: need >= 2 matching nodes");
  require(std::is_sorted(xs.begin(), xs.end()) &&
              std::adjacent_find(xs.begin(), xs.end()) == xs.end(),
          "tabulated: nodes must be strictly increasing");
  require(std::all_of(lambdas.begin(), lambdas.end(), [](double v) { return v >= 0.0; }),
          "tabulated: lambda values must be >= 0");
  CustomIntensity spec;
  spec.name = "tabulated";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (lambdas[i] == 0.0) spec.zero_set.push_back(xs[i]);
  }
  spec.breakpoints = xs;
  spec.lambda = [xs = std::move(xs), ls = std::move(lambdas)](double x) {
    if (x <= xs.front()) return ls.front();
    if (x >= xs.back()) return ls.back();
    const auto hi = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
    const std::size_t lo = hi - 1;
    const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return ls[lo] + w * (ls[hi] - ls[lo]);
  };
  spec.a_plus = a_plus;
  spec.a_minus = a_minus;
  spec.regime = regime;
  spec.exponent = exponent;
  return IntensityModel::custom(std::move(spec));
}

}  // namespace tclab
