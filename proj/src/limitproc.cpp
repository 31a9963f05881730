#include "tclab/limitproc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "tclab/errors.hpp"

namespace tclab {

std::string_view to_string(LimitFamily family) {
  switch (family) {
    case LimitFamily::Eta: return "eta";
    case LimitFamily::EtaDelta: return "eta_delta";
    case LimitFamily::EtaGamma: return "eta_gamma";
  }
  return "unknown";
}

std::string_view to_string(EtaConvention convention) {
  return convention == EtaConvention::Exact ? "exact" : "published";
}

double LimitSpec::prefactor() const {
  switch (family) {
    case LimitFamily::Eta:
      return 1.0;
    case LimitFamily::EtaDelta:
      return convention == EtaConvention::Exact ? 1.0 + exponent : 2.0 / (2.0 + exponent);
    case LimitFamily::EtaGamma:
      return convention == EtaConvention::Exact ? exponent - 1.0 : 2.0 / exponent;
  }
  return 1.0;
}

double LimitSpec::power() const {
  switch (family) {
    case LimitFamily::Eta: return 0.0;
    case LimitFamily::EtaDelta: return exponent;
    case LimitFamily::EtaGamma: return exponent - 2.0;
  }
  return 0.0;
}

void LimitSpec::validate() const {
  if (!(a_plus > 0.0) || !(a_minus > 0.0)) {
    throw std::invalid_argument("LimitSpec: a_plus and a_minus must be > 0");
  }
  if (family == LimitFamily::EtaDelta && !(exponent > -1.0)) {
    throw std::invalid_argument("LimitSpec: eta_delta needs delta > -1");
  }
  if (family == LimitFamily::EtaGamma && !(exponent > 1.0)) {
    throw std::invalid_argument("LimitSpec: eta_gamma needs gamma > 1");
  }
}

LimitSpec limit_spec_for(const IntensityModel& model, EtaConvention c) {
  switch (model.regime()) {
    case Regime::Pointwise:
      return LimitSpec::eta(model.a_plus(), model.a_minus());
    case Regime::CesaroDelta:
      if (model.exponent() == 0.0) return LimitSpec::eta(model.a_plus(), model.a_minus());
      return LimitSpec::eta_delta(model.a_plus(), model.a_minus(), model.exponent(), c);
    case Regime::RegularlyVarying:
      return LimitSpec::eta_gamma(model.a_plus(), model.a_minus(), model.exponent(), c);
  }
  return LimitSpec::eta(model.a_plus(), model.a_minus());
}

void check_regime_matches(const IntensityModel& model, const LimitSpec& spec) {
  const LimitSpec expected = limit_spec_for(model, spec.convention);
  // Eta, EtaDelta(0) and EtaGamma(2) are the same clock.
  const bool same_clock = expected.power() == spec.power() &&
                          expected.prefactor() == spec.prefactor();
  if (!same_clock) {
    throw RegimeMismatch("model regime " + std::string(to_string(model.regime())) +
                         " (exponent " + std::to_string(model.exponent()) +
                         ") does not lead to limit family " + std::string(to_string(spec.family)) +
                         " (exponent " + std::to_string(spec.exponent) + ")");
  }
}

double nu(double x, const LimitSpec& spec) {
  if (x > 0.0) return 1.0 / spec.a_plus;
  if (x < 0.0) return 1.0 / spec.a_minus;
  return 0.0;
}

double eta_integrand(double w, const LimitSpec& spec) {
  if (w == 0.0) return 0.0;
  const double p = spec.power();
  const double weight = p == 0.0 ? 1.0 : std::pow(std::abs(w), p);
  return spec.prefactor() * weight * nu(w, spec);
}

namespace {

// Grid samples with W exactly 0 are treated as singular, like zeros of lambda
// in S_B: the trapezoid takes the neighbour mean there.
double clock_sample(double w, const LimitSpec& spec) {
  return w == 0.0 ? std::numeric_limits<double>::infinity() : eta_integrand(w, spec);
}

}  // namespace

MonotoneFunction eta(const Path& wpath, const LimitSpec& spec) {
  spec.validate();
  if (wpath.kind != PathKind::Brownian && wpath.kind != PathKind::Derived) {
    throw KindMismatch("eta: expected a Brownian or Derived path, got " +
                       std::string(to_string(wpath.kind)));
  }
  std::vector<double> integrand(wpath.values.size());
  std::transform(wpath.values.begin(), wpath.values.end(), integrand.begin(),
                 [&spec](double w) { return clock_sample(w, spec); });
  return cumulative_trapezoid(integrand, wpath.t0, wpath.dt);
}

double eta_inverse(const MonotoneFunction& eta_fn, double t) {
  if (t < 0.0) throw std::invalid_argument("eta_inverse: t must be >= 0");
  if (!(eta_fn.max_value() > eta_fn.values().front())) {
    throw DegenerateFunctional("eta is constant; the limit clock cannot be inverted");
  }
  if (t == 0.0) return eta_fn.arguments().front();
  return eta_fn.inverse(t);
}

Trajectory sample_limit_timechange(const RngStream& stream, const LimitSpec& spec,
                                   std::span<const double> out_times, double dt,
                                   const ExtensionPolicy& policy) {
  spec.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("sample_limit_timechange: dt must be > 0");
  if (out_times.empty() || !std::is_sorted(out_times.begin(), out_times.end())) {
    throw std::invalid_argument("sample_limit_timechange: out_times must be nonempty and sorted");
  }
  auto run = run_clock_until(stream, dt, 0.0, [&spec](double w) { return clock_sample(w, spec); },
                             out_times.back(), policy);
  Trajectory out;
  out.kind = PathKind::Limit;
  out.times.assign(out_times.begin(), out_times.end());
  out.values.reserve(out_times.size());
  for (double t : out_times) {
    const double clock_time = t == 0.0 ? 0.0 : run.clock.inverse(t);
    out.values.push_back(run.path.at(clock_time));
  }
  return out;
}

Trajectory sample_limit_sde(const RngStream& stream, double a_plus, double a_minus,
                            std::span<const double> out_times, double dt,
                            SdeDiagnostics* diagnostics) {
  if (!(a_plus > 0.0) || !(a_minus > 0.0)) {
    throw std::invalid_argument("sample_limit_sde: a_plus and a_minus must be > 0");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("sample_limit_sde: dt must be > 0");
  if (out_times.empty() || !std::is_sorted(out_times.begin(), out_times.end()) ||
      out_times.front() < 0.0) {
    throw std::invalid_argument("sample_limit_sde: out_times must be nonempty, sorted, >= 0");
  }
  const double sigma_plus = std::sqrt(a_plus * dt);
  const double sigma_minus = std::sqrt(a_minus * dt);
  const auto steps = static_cast<std::size_t>(std::ceil(out_times.back() / dt - 1e-9));

  Trajectory out;
  out.kind = PathKind::Limit;
  out.times.assign(out_times.begin(), out_times.end());
  out.values.reserve(out_times.size());

  RngStream cursor = stream;
  std::vector<double> z(std::min<std::size_t>(steps, 8192));
  std::size_t zpos = z.size();
  std::size_t next_out = 0;
  std::size_t zero_hits = 0;
  double y = 0.0;
  double prev = 0.0;
  while (next_out < out_times.size() && out_times[next_out] == 0.0) {
    out.values.push_back(0.0);
    ++next_out;
  }
  for (std::size_t k = 1; k <= steps && next_out < out_times.size(); ++k) {
    if (zpos == z.size()) {
      cursor.fill_normals(z);
      zpos = 0;
    }
    prev = y;
    // sigma(0) = sqrt(a_+): the value on the null set {0} does not affect the law.
    y += (y >= 0.0 ? sigma_plus : sigma_minus) * z[zpos++];
    if (y == 0.0) ++zero_hits;
    const double t_hi = dt * static_cast<double>(k);
    while (next_out < out_times.size() && (out_times[next_out] <= t_hi || k == steps)) {
      const double w = std::clamp((out_times[next_out] - (t_hi - dt)) / dt, 0.0, 1.0);
      out.values.push_back(prev + w * (y - prev));
      ++next_out;
    }
  }
  if (diagnostics != nullptr) {
    diagnostics->steps = steps;
    diagnostics->zero_hits = zero_hits;
  }
  return out;
}

}  // namespace tclab
