#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "tclab/clock.hpp"
#include "tclab/intensity.hpp"
#include "tclab/monotone.hpp"
#include "tclab/path.hpp"
#include "tclab/rng.hpp"

namespace tclab {

enum class LimitFamily { Eta, EtaDelta, EtaGamma };

// Prefactor of the power-weighted clocks.
//   Exact:     (1 + delta) for EtaDelta, (gamma - 1) for EtaGamma. This is the
//              clock produced by the Brownian scaling of a pure power tail,
//              i.e. the weak limit the normalized process actually approaches.
//   Published: 2 / (2 + delta) and 2 / gamma.
// Both agree at the overlap delta = 0, gamma = 2.
enum class EtaConvention { Exact, Published };

std::string_view to_string(LimitFamily family);
std::string_view to_string(EtaConvention convention);

struct LimitSpec {
  double a_plus = 1.0;
  double a_minus = 1.0;
  LimitFamily family = LimitFamily::Eta;
  double exponent = 0.0;  // delta for EtaDelta, gamma for EtaGamma, unused for Eta
  EtaConvention convention = EtaConvention::Exact;

  static LimitSpec eta(double a_plus, double a_minus) {
    return {a_plus, a_minus, LimitFamily::Eta, 0.0, EtaConvention::Exact};
  }
  static LimitSpec eta_delta(double a_plus, double a_minus, double delta,
                             EtaConvention c = EtaConvention::Exact) {
    return {a_plus, a_minus, LimitFamily::EtaDelta, delta, c};
  }
  static LimitSpec eta_gamma(double a_plus, double a_minus, double gamma,
                             EtaConvention c = EtaConvention::Exact) {
    return {a_plus, a_minus, LimitFamily::EtaGamma, gamma, c};
  }

  double prefactor() const;
  // Power p in the clock integrand |W|^p nu(W).
  double power() const;
  // Throws std::invalid_argument on a_+/- <= 0, delta <= -1 or gamma <= 1.
  void validate() const;
};

// The limit family matching a model's declared regime and asymptotics.
LimitSpec limit_spec_for(const IntensityModel& model, EtaConvention c = EtaConvention::Exact);

// Throws RegimeMismatch unless `spec` is the family the model's regime leads to.
void check_regime_matches(const IntensityModel& model, const LimitSpec& spec);

// 1/a_+ on (0, inf), 1/a_- on (-inf, 0), 0 at 0.
double nu(double x, const LimitSpec& spec);

// Integrand of the limit clock at w: prefactor * |w|^power * nu(w).
double eta_integrand(double w, const LimitSpec& spec);

// eta(t) = int_0^t prefactor |W_s|^p nu(W_s) ds on the path's grid (trapezoid).
// Samples with W = 0 are singular and take the mean of their neighbours, as
// zeros of lambda do in S_B. Accepts Brownian or Derived paths.
MonotoneFunction eta(const Path& wpath, const LimitSpec& spec);

// eta^{-1}(t); DegenerateFunctional for a constant eta, HorizonExceeded past its range.
double eta_inverse(const MonotoneFunction& eta_fn, double t);

// W(eta^{-1}(t)) at out_times, with W extended until eta passes max(out_times).
Trajectory sample_limit_timechange(const RngStream& stream, const LimitSpec& spec,
                                   std::span<const double> out_times, double dt,
                                   const ExtensionPolicy& policy = {});

struct SdeDiagnostics {
  std::size_t steps = 0;
  std::size_t zero_hits = 0;  // grid points with state exactly 0 after the start
  double zero_fraction() const noexcept {
    return steps == 0 ? 0.0 : static_cast<double>(zero_hits) / static_cast<double>(steps);
  }
};

// Euler-Maruyama for dY = sigma(Y) dB, sigma = sqrt(a_+) on [0, inf) and
// sqrt(a_-) on (-inf, 0), Y_0 = 0. Values at out_times by linear interpolation.
Trajectory sample_limit_sde(const RngStream& stream, double a_plus, double a_minus,
                            std::span<const double> out_times, double dt,
                            SdeDiagnostics* diagnostics = nullptr);

}  // namespace tclab
