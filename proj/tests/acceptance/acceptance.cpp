// Desk-scale acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tclab/experiment.hpp"
#include "tclab/intensity.hpp"
#include "tclab/limitproc.hpp"
#include "tclab/localtime.hpp"
#include "tclab/parallel.hpp"
#include "tclab/stats.hpp"
#include "tclab/timechange.hpp"

using namespace tclab;
using Json = nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::vector<double> exact_gaussian(std::size_t count, double variance, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> dist(0.0, std::sqrt(variance));
  std::vector<double> out(count);
  for (double& v : out) v = dist(engine);
  return out;
}

struct PresetRun {
  Json doc;
  int code = 1;
};

PresetRun run_preset(const std::string& name) {
  PresetRun r;
  const auto config = resolve(preset(name), {});
  r.doc = Json::parse(run_report_text(config, &r.code));
  return r;
}

std::string converge_summary(const std::string& name, const PresetRun& r) {
  std::ostringstream os;
  os << name << ": trends " << (r.doc["trends_decreasing"].get<bool>() ? "decreasing" : "NOT decreasing")
     << ", final cells " << (r.doc["final_cells_pass"].get<bool>() ? "pass" : "FAIL") << " (ks";
  const auto& cells = r.doc["cells"];
  const std::size_t per_n = r.doc["grid"].size() + 1;
  for (std::size_t i = cells.size() - per_n; i < cells.size(); ++i) {
    os << " " << (cells[i]["ks"].is_null() ? std::string("n/a") : fmt(cells[i]["ks"].get<double>()));
  }
  os << " < " << fmt(cells[0]["threshold"].get<double>()) << ")";
  return os.str();
}

Outcome identity_time_change() {
  const double dt = 1e-4;
  double worst = 0.0;
  for (std::uint64_t r = 0; r < 100; ++r) {
    const Path p = sample_brownian({1, r, 0}, 2.0, dt);
    const auto S = additive_functional(p, IntensityModel::constant(1.0));
    for (std::size_t k = 0; k < p.values.size(); ++k) {
      const double t = p.time(k);
      if (t > S.max_value()) break;
      worst = std::max(worst, std::abs(inverse_time_change(S, t) - t));
    }
  }
  return {worst <= 2 * dt, "max |tau_t - t| = " + fmt(worst) + " (bound " + fmt(2 * dt) + ")"};
}

Outcome constant_intensity_law() {
  const auto m = IntensityModel::constant(2.0);
  const std::size_t count = 10000;
  const double one[] = {1.0};
  std::vector<double> xs(count);
  parallel_for(count, default_jobs(), [&](std::size_t r) {
    xs[r] = sample_normalized_process({2, r, 0}, m, 1e3, one, 1e-4).values[0];
  });
  const double ks = ks_two_sample(xs, exact_gaussian(count, 2.0, 20240611));
  const double thr = dkw_threshold(count, count, 0.01);
  return {ks < thr, "KS = " + fmt(ks) + " vs threshold " + fmt(thr)};
}

// Criteria 3 and 4 share the same profiles.
std::pair<Outcome, Outcome> occupation_and_cross_domain() {
  const auto m = IntensityModel::periodic(2.0, 1.0);
  double worst_identity = 0.0;
  int within = 0;
  double worst_gap = 0.0;
  for (std::uint64_t r = 0; r < 100; ++r) {
    const Path p = sample_brownian({4, r, 0}, 1.0, 1e-4);
    for (double upto : {0.25, 0.5, 1.0}) {
      const auto prof = occupation_density(p, upto, 1e-2);
      worst_identity = std::max(worst_identity, std::abs(prof.total_time() - upto));
    }
    const auto prof = occupation_density(p, 1.0, 1e-2);
    const double time_domain = additive_functional(p, m).max_value();
    const double gap = std::abs(functional_via_localtime(prof, m) - time_domain) / time_domain;
    worst_gap = std::max(worst_gap, gap);
    within += gap <= 0.02;
  }
  return {{worst_identity <= 1e-9, "max |sum(masses) w - t| = " + fmt(worst_identity) + " over 300 profiles"},
          {within >= 95, std::to_string(within) + "/100 replicates within 2% (worst " + fmt(worst_gap) + ")"}};
}

Outcome converge_presets(const std::vector<std::string>& names) {
  Outcome out{true, ""};
  for (const auto& name : names) {
    const auto r = run_preset(name);
    out.pass = out.pass && r.code == 0;
    if (!out.detail.empty()) out.detail += "; ";
    out.detail += converge_summary(name, r);
  }
  return out;
}

Outcome periodic_homogenization() {
  const auto m = IntensityModel::periodic(2.0, 1.0);
  const auto summary = asymptotic_summary(m);
  const double a = summary.a_plus;
  const auto spec = LimitSpec::eta(a, a);
  const std::size_t count = 10000;
  const double one[] = {1.0};
  std::vector<double> xs(count);
  parallel_for(count, default_jobs(), [&](std::size_t r) {
    xs[r] = sample_limit_timechange({7, r, 0}, spec, one, 1e-4).values[0];
  });
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= count;
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= count - 1;
  const double target = std::sqrt(3.0);
  const bool variance_ok = std::abs(var - target) / target <= 0.05;
  const bool constant_ok = std::abs(a - target) < 1e-9;
  const auto r = run_preset("periodic-homog");
  return {variance_ok && constant_ok && r.code == 0,
          "a = " + fmt(a) + ", limit variance " + fmt(var) + " vs " + fmt(target) + "; " +
              converge_summary("periodic-homog", r)};
}

Outcome skew_crosscheck() {
  const auto r = run_preset("skew-crosscheck");
  std::string detail = "KS";
  for (const auto& cell : r.doc["cells"]) {
    detail += " t=" + fmt(cell["t"].get<double>()) + ":" + fmt(cell["ks"].get<double>());
  }
  detail += " vs threshold " + fmt(r.doc["cells"][0]["threshold"].get<double>());
  return {r.code == 0, detail};
}

Outcome ito_ladder() {
  const auto r = run_preset("ito-check");
  std::string detail;
  for (const auto& f : r.doc["functions"]) {
    if (!detail.empty()) detail += "; ";
    detail += f["function"].get<std::string>() + " ratios/decade";
    for (const auto& v : f["ratio_per_decade"]) detail += " " + fmt(v.get<double>());
  }
  return {r.code == 0, detail + " (range [2.5, 4.5])"};
}

Outcome kurtz_ladder() {
  const auto r = run_preset("kurtz-check");
  std::string detail = "median gaps";
  for (const auto& v : r.doc["median_gaps"]) detail += " " + fmt(v.get<double>());
  return {r.code == 0, detail};
}

Outcome clock_mean_bound() {
  const auto m = gaussian_bump(1.0);
  const std::size_t count = 10000;
  const double one[] = {1.0};
  std::vector<double> tau(count);
  parallel_for(count, default_jobs(), [&](std::size_t r) {
    tau[r] = simulate_time_changed({11, r, 0}, m, one, 1e-3).tau(1.0);
  });
  double mean = 0.0;
  for (double v : tau) mean += v;
  mean /= count;
  double var = 0.0;
  for (double v : tau) var += (v - mean) * (v - mean);
  var /= count - 1;
  const double se = std::sqrt(var / count);
  const double min_tau = *std::min_element(tau.begin(), tau.end());
  return {mean <= 1.0 + 3.0 * se, "mean tau_1 = " + fmt(mean) + ", bound 1 + 3 SE = " + fmt(1.0 + 3.0 * se) +
                                      ", min tau_1 = " + fmt(min_tau)};
}

Outcome determinism() {
  Outcome out{true, ""};
  for (const char* name : {"thm23", "kurtz-check"}) {
    auto c = resolve(preset(name), {});
    if (c.experiment == ExperimentKind::Converge) c.replicates = 1000;
    c.jobs = 1;
    const std::string first = run_report_text(c);
    c.jobs = default_jobs() + 2;
    const std::string second = run_report_text(c);
    const bool same = first == second;
    out.pass = out.pass && same;
    if (!out.detail.empty()) out.detail += "; ";
    out.detail += std::string(name) + (same ? " identical" : " DIFFERENT") + " (" + std::to_string(first.size()) + " bytes)";
  }
  return out;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const std::function<Outcome()>& body) {
    const auto started = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    failures += !o.pass;
    std::printf("%s criterion %d: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str(), secs);
    std::fflush(stdout);
  };

  report(1, identity_time_change);
  report(2, constant_intensity_law);
  std::pair<Outcome, Outcome> shared;
  report(3, [&] {
    shared = occupation_and_cross_domain();
    return shared.first;
  });
  report(4, [&] { return shared.second; });
  report(5, [] { return converge_presets({"thm23", "thm25-degenerate"}); });
  report(6, [] { return converge_presets({"thm26-delta1"}); });
  report(7, periodic_homogenization);
  report(8, skew_crosscheck);
  report(9, ito_ladder);
  report(10, kurtz_ladder);
  report(11, clock_mean_bound);
  report(12, determinism);

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
