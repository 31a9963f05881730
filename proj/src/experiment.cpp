#include "tclab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "tclab/csv.hpp"
#include "tclab/errors.hpp"
#include "tclab/localtime.hpp"
#include "tclab/parallel.hpp"
#include "tclab/stats.hpp"
#include "tclab/stochcalc.hpp"
#include "tclab/timechange.hpp"

namespace tclab {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::uint64_t kDefaultSeed = 1;

// ---------------------------------------------------------------- enums

const std::map<std::string, ExperimentKind, std::less<>> kExperimentNames = {
    {"converge", ExperimentKind::Converge},
    {"limit-crosscheck", ExperimentKind::LimitCrosscheck},
    {"ito", ExperimentKind::Ito},
    {"kurtz", ExperimentKind::Kurtz},
    {"cauchy", ExperimentKind::Cauchy},
    {"localtime-identity", ExperimentKind::LocaltimeIdentity},
};

ExperimentKind parse_experiment(const std::string& s) {
  auto it = kExperimentNames.find(s);
  if (it == kExperimentNames.end()) throw ConfigInvalid("experiment", "unknown experiment '" + s + "'");
  return it->second;
}

OutputFormat parse_format(const std::string& s, const std::string& field = "format") {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw ConfigInvalid(field, "expected csv or json, got '" + s + "'");
}

std::string format_name(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

Regime parse_regime(const std::string& s) {
  if (s == "pointwise") return Regime::Pointwise;
  if (s == "cesaro_delta") return Regime::CesaroDelta;
  if (s == "regularly_varying") return Regime::RegularlyVarying;
  throw ConfigInvalid("model.regime", "unknown regime '" + s + "'");
}

EtaConvention parse_convention(const std::string& s) {
  if (s == "exact") return EtaConvention::Exact;
  if (s == "published") return EtaConvention::Published;
  throw ConfigInvalid("spec.convention", "expected exact or published, got '" + s + "'");
}

// ---------------------------------------------------------------- JSON helpers

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json number_array(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number_or_null(x));
  return a;
}

void reject_unknown(const Json& obj, const std::set<std::string>& allowed, const std::string& prefix) {
  if (!obj.is_object()) {
    throw ConfigInvalid(prefix.empty() ? "config" : prefix, "expected an object");
  }
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigInvalid(prefix.empty() ? it.key() : prefix + "." + it.key(), "unknown field");
    }
  }
}

template <class T>
T get_field(const Json& obj, const std::string& key, const std::string& field) {
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigInvalid(field, std::string("wrong type: ") + e.what());
  }
}

template <class T>
void read_if(const Json& obj, const std::string& key, T& out, const std::string& prefix = "") {
  if (obj.contains(key)) out = get_field<T>(obj, key, prefix.empty() ? key : prefix + "." + key);
}

// ---------------------------------------------------------------- model spec

Json model_to_json(const ModelSpec& m) {
  Json j;
  j["kind"] = m.kind;
  j["params"] = number_array(m.params);
  j["a_plus"] = m.a_plus;
  j["a_minus"] = m.a_minus;
  j["regime"] = m.regime;
  j["exponent"] = m.exponent;
  j["zero_set"] = number_array(m.zero_set);
  if (m.kind == "custom") {
    j["form"] = m.form;
    if (m.base) j["base"] = model_to_json(*m.base);
    if (!m.table_x.empty() || !m.table_lambda.empty()) {
      j["table_x"] = number_array(m.table_x);
      j["table_lambda"] = number_array(m.table_lambda);
    }
  }
  return j;
}

ModelSpec model_from_json(const Json& j, const std::string& prefix) {
  reject_unknown(j, {"kind", "params", "a_plus", "a_minus", "regime", "exponent", "zero_set", "form",
                     "base", "table_x", "table_lambda"},
                 prefix);
  ModelSpec m;
  read_if(j, "kind", m.kind, prefix);
  read_if(j, "params", m.params, prefix);
  read_if(j, "a_plus", m.a_plus, prefix);
  read_if(j, "a_minus", m.a_minus, prefix);
  read_if(j, "regime", m.regime, prefix);
  read_if(j, "exponent", m.exponent, prefix);
  read_if(j, "zero_set", m.zero_set, prefix);
  read_if(j, "form", m.form, prefix);
  read_if(j, "table_x", m.table_x, prefix);
  read_if(j, "table_lambda", m.table_lambda, prefix);
  if (j.contains("base")) m.base = std::make_shared<ModelSpec>(model_from_json(j.at("base"), prefix + ".base"));
  return m;
}

Json limit_to_json(const LimitConfig& l) {
  Json j;
  j["family"] = l.family;
  j["exponent"] = l.exponent;
  j["a_plus"] = l.a_plus;
  j["a_minus"] = l.a_minus;
  j["convention"] = l.convention;
  return j;
}

LimitConfig limit_from_json(const Json& j) {
  reject_unknown(j, {"family", "exponent", "a_plus", "a_minus", "convention"}, "spec");
  LimitConfig l;
  read_if(j, "family", l.family, "spec");
  read_if(j, "exponent", l.exponent, "spec");
  read_if(j, "a_plus", l.a_plus, "spec");
  read_if(j, "a_minus", l.a_minus, "spec");
  read_if(j, "convention", l.convention, "spec");
  return l;
}

Json config_to_json(const ExperimentConfig& c) {
  Json j;
  j["name"] = c.name;
  j["experiment"] = std::string(to_string(c.experiment));
  j["model"] = model_to_json(c.model);
  j["spec"] = limit_to_json(c.spec);
  j["ladder"] = number_array(c.ladder);
  j["grid"] = number_array(c.grid);
  j["replicates"] = c.replicates;
  j["dt"] = c.dt;
  j["master_seed"] = c.master_seed ? Json(*c.master_seed) : Json(nullptr);
  j["out_dir"] = c.out_dir;
  j["format"] = format_name(c.format);
  j["jobs"] = c.jobs;
  j["dt_ladder"] = number_array(c.dt_ladder);
  j["functions"] = c.functions;
  j["horizon"] = c.horizon;
  j["power_delta"] = c.power_delta;
  j["ratio_min"] = c.ratio_min;
  j["ratio_max"] = c.ratio_max;
  j["observable"] = c.observable;
  j["start"] = c.start;
  j["bin_width"] = c.bin_width;
  j["relative_tolerance"] = c.relative_tolerance;
  j["pass_fraction"] = c.pass_fraction;
  j["dump_paths"] = c.dump_paths;
  return j;
}

void apply_json(const Json& j, ExperimentConfig& c) {
  reject_unknown(j, {"preset", "name", "experiment", "model", "spec", "ladder", "grid", "replicates",
                     "dt", "master_seed", "out_dir", "format", "jobs", "dt_ladder", "functions",
                     "horizon", "power_delta", "ratio_min", "ratio_max", "observable", "start",
                     "bin_width", "relative_tolerance", "pass_fraction", "dump_paths"},
                 "");
  read_if(j, "name", c.name);
  if (j.contains("experiment")) c.experiment = parse_experiment(get_field<std::string>(j, "experiment", "experiment"));
  if (j.contains("model")) c.model = model_from_json(j.at("model"), "model");
  if (j.contains("spec")) c.spec = limit_from_json(j.at("spec"));
  read_if(j, "ladder", c.ladder);
  read_if(j, "grid", c.grid);
  if (j.contains("replicates")) {
    const auto& v = j.at("replicates");
    if (!v.is_number_integer()) throw ConfigInvalid("replicates", "expected an integer");
    if (v.get<long long>() < 0) throw ConfigInvalid("replicates", "must be >= 2");
    c.replicates = v.get<std::size_t>();
  }
  read_if(j, "dt", c.dt);
  if (j.contains("master_seed")) {
    const auto& v = j.at("master_seed");
    if (v.is_null()) {
      c.master_seed.reset();
    } else if (v.is_number_unsigned()) {
      c.master_seed = v.get<std::uint64_t>();
    } else {
      throw ConfigInvalid("master_seed", "expected a non-negative integer");
    }
  }
  read_if(j, "out_dir", c.out_dir);
  if (j.contains("format")) c.format = parse_format(get_field<std::string>(j, "format", "format"));
  read_if(j, "jobs", c.jobs);
  read_if(j, "dt_ladder", c.dt_ladder);
  read_if(j, "functions", c.functions);
  read_if(j, "horizon", c.horizon);
  read_if(j, "power_delta", c.power_delta);
  read_if(j, "ratio_min", c.ratio_min);
  read_if(j, "ratio_max", c.ratio_max);
  read_if(j, "observable", c.observable);
  read_if(j, "start", c.start);
  read_if(j, "bin_width", c.bin_width);
  read_if(j, "relative_tolerance", c.relative_tolerance);
  read_if(j, "pass_fraction", c.pass_fraction);
  read_if(j, "dump_paths", c.dump_paths);
}

// ---------------------------------------------------------------- presets

ModelSpec asym(double ap, double am) {
  ModelSpec m;
  m.kind = "asymptotic_constant";
  m.a_plus = ap;
  m.a_minus = am;
  return m;
}

ModelSpec power(double delta, double ap, double am, const std::string& regime) {
  ModelSpec m;
  m.kind = "power_tail";
  m.params = {delta, 1.0};
  m.a_plus = ap;
  m.a_minus = am;
  m.regime = regime;
  m.exponent = regime == "regularly_varying" ? 2.0 + delta : delta;
  return m;
}

ModelSpec periodic_spec(double mean, double amp, double period) {
  ModelSpec m;
  m.kind = "periodic";
  m.params = {mean, amp, period};
  const double a = std::sqrt(mean * mean - amp * amp);
  m.a_plus = a;
  m.a_minus = a;
  m.regime = "cesaro_delta";
  return m;
}

ExperimentConfig converge_base(std::string name, ModelSpec model) {
  ExperimentConfig c;
  c.name = std::move(name);
  c.experiment = ExperimentKind::Converge;
  c.model = std::move(model);
  c.ladder = {10, 100, 1000};
  c.grid = {0.5, 1.0};
  c.replicates = 10000;
  c.dt = 1e-4;
  return c;
}

struct PresetEntry {
  std::string name;
  std::string summary;
  std::function<ExperimentConfig()> make;
};

const std::vector<PresetEntry>& preset_table() {
  static const std::vector<PresetEntry> table = {
      {"thm23", "asymmetric constant asymptotics (1.5, 0.5): B_{tau_nt}/sqrt(n) => W(eta^{-1})",
       [] { return converge_base("thm23", asym(1.5, 0.5)); }},
      {"thm25-degenerate",
       "same limit with lambda = min(1, sqrt|x|) * envelope vanishing at 0 (no lower bound)",
       [] {
         ModelSpec m;
         m.kind = "custom";
         m.form = "degenerate_sqrt";
         m.a_plus = 1.5;
         m.a_minus = 0.5;
         m.zero_set = {0.0};
         m.base = std::make_shared<ModelSpec>(asym(1.5, 0.5));
         return converge_base("thm25-degenerate", m);
       }},
      {"thm26-delta1", "power tail 1/lambda(s) = 2|s|: normalization n^{1/3}, weighted clock eta_1",
       [] { return converge_base("thm26-delta1", power(1.0, 1.0, 1.0, "cesaro_delta")); }},
      {"cor27", "oscillating sides a_+/-/(1 + eps sin 2 pi x): Cesaro limits only, same limit as thm23",
       [] {
         ModelSpec m;
         m.kind = "custom";
         m.form = "oscillating";
         m.params = {0.5};
         m.a_plus = 1.5;
         m.a_minus = 0.5;
         m.regime = "cesaro_delta";
         return converge_base("cor27", m);
       }},
      {"thm28-rv", "regularly varying tail of index gamma = 2.5: normalization psi(n) = n^{1/gamma}",
       [] { return converge_base("thm28-rv", power(0.5, 1.0, 1.0, "regularly_varying")); }},
      {"periodic-homog", "periodic lambda = 2 + sin(2 pi x): homogenized constant a = sqrt(3)",
       [] { return converge_base("periodic-homog", periodic_spec(2.0, 1.0, 1.0)); }},
      {"skew-crosscheck",
       "limit process two ways: W(eta^{-1}) against the skew SDE Euler scheme, (a_+, a_-) = (2, 1)",
       [] {
         ExperimentConfig c;
         c.name = "skew-crosscheck";
         c.experiment = ExperimentKind::LimitCrosscheck;
         c.model = asym(2.0, 1.0);
         c.spec.family = "eta";
         c.grid = {0.25, 0.5, 1.0};
         c.replicates = 10000;
         c.dt = 1e-4;
         return c;
       }},
      {"ito-check", "Ito formula for F in C^1 with a.e. F'': residual RMS ~ sqrt(dt)",
       [] {
         ExperimentConfig c;
         c.name = "ito-check";
         c.experiment = ExperimentKind::Ito;
         c.dt_ladder = {1e-2, 1e-3, 1e-4};
         c.functions = {"square", "positive_power"};
         c.power_delta = 1.0;
         c.replicates = 1000;
         c.dt = 1e-4;
         return c;
       }},
      {"kurtz-check", "stochastic integrals of the rescaled antiderivative converge (power tail delta = 1)",
       [] {
         ExperimentConfig c;
         c.name = "kurtz-check";
         c.experiment = ExperimentKind::Kurtz;
         c.model = power(1.0, 1.0, 1.0, "cesaro_delta");
         c.ladder = {10, 1000, 100000};
         c.replicates = 500;
         c.dt = 1e-4;
         return c;
       }},
      {"cauchy-demo", "Monte Carlo solution of the Cauchy problem u_t = lambda u''/2 (diagnostic)",
       [] {
         ExperimentConfig c;
         c.name = "cauchy-demo";
         c.experiment = ExperimentKind::Cauchy;
         c.model = asym(2.0, 2.0);
         c.observable = "square";
         c.replicates = 10000;
         c.dt = 1e-3;
         return c;
       }},
      {"localtime-identity", "S_B(t) in the time domain against int L^a_t / lambda(a) da, lambda = 2 + sin",
       [] {
         ExperimentConfig c;
         c.name = "localtime-identity";
         c.experiment = ExperimentKind::LocaltimeIdentity;
         c.model = periodic_spec(2.0, 1.0, 1.0);
         c.replicates = 100;
         c.dt = 1e-4;
         c.bin_width = 1e-2;
         return c;
       }},
      {"identity-law", "lambda = 1: the normalized process has the limit law at every n",
       [] {
         auto c = converge_base("identity-law", asym(1.0, 1.0));
         c.replicates = 2000;
         return c;
       }},
  };
  return table;
}

// ---------------------------------------------------------------- run helpers

struct Artifact {
  std::string file;
  std::string content;
};

struct Outcome {
  Json body;
  bool pass = true;
  bool diagnostic = false;
  std::vector<Artifact> extra;
};

std::string csv_text(const std::function<void(std::ostream&)>& write) {
  std::ostringstream os;
  write(os);
  return os.str();
}

Json cell_to_json(const ReportCell& cell) {
  Json j;
  j["n"] = cell.n;
  j["t"] = cell.t;
  j["observable"] = cell.label();
  j["ks"] = number_or_null(cell.ks);
  j["threshold"] = cell.threshold;
  j["verdict"] = std::string(to_string(cell.verdict));
  if (!cell.note.empty()) j["note"] = cell.note;
  return j;
}

double sample_variance(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = v[i] - mean;
    mean += d / static_cast<double>(i + 1);
    m2 += d * (v[i] - mean);
  }
  return m2 / static_cast<double>(v.size() - 1);
}

Outcome run_converge(const ExperimentConfig& c, std::uint64_t seed, unsigned jobs, bool csv) {
  const IntensityModel model = build_model(c.model);
  const LimitSpec spec = build_limit(c.spec, model);
  ReportOptions opts;
  opts.dt = c.dt;
  opts.jobs = jobs;
  opts.keep_samples = csv;
  const ConvergenceReport report =
      convergence_report(model, spec, c.ladder, c.grid, c.replicates, seed, opts);

  Outcome out;
  Json& b = out.body;
  b["ladder"] = number_array(report.ladder);
  b["grid"] = number_array(report.grid);
  b["alpha"] = report.alpha;
  b["limit"] = {{"family", std::string(to_string(spec.family))},
                {"a_plus", spec.a_plus},
                {"a_minus", spec.a_minus},
                {"exponent", spec.exponent},
                {"prefactor", spec.prefactor()},
                {"convention", std::string(to_string(spec.convention))}};
  b["cells"] = Json::array();
  for (const auto& cell : report.cells) b["cells"].push_back(cell_to_json(cell));
  b["trends"] = Json::array();
  for (const auto& t : report.trends) {
    b["trends"].push_back({{"observable", t.label},
                           {"ks", number_array(t.ks)},
                           {"inversions", t.inversions},
                           {"trend", t.decreasing ? "decreasing" : "not-decreasing"}});
  }
  b["trends_decreasing"] = report.trends_decreasing();
  b["final_cells_pass"] = report.final_cells_pass();
  b["all_cells_pass"] = report.all_pass();
  // Equal laws at every n leave no trend to observe; passing every cell is the
  // stronger statement then.
  out.pass = report.final_cells_pass() && (report.trends_decreasing() || report.all_pass());

  if (csv) {
    std::vector<csv::SampleRow> rows;
    const std::string exp(to_string(c.experiment));
    auto push = [&](const std::vector<std::vector<double>>& samples, const std::string& tag, double n) {
      for (std::size_t o = 0; o < samples.size(); ++o) {
        const bool sup = o == c.grid.size();
        const double t = sup ? c.grid.back() : c.grid[o];
        for (std::size_t r = 0; r < samples[o].size(); ++r) {
          rows.push_back({exp, sup ? tag + "-sup" : tag, n, r, t, samples[o][r]});
        }
      }
    };
    for (std::size_t i = 0; i < report.prelimit_samples.size(); ++i) {
      push(report.prelimit_samples[i], "prelimit", c.ladder[i]);
    }
    push(report.limit_samples, "limit", kInfiniteScale);
    out.extra.push_back({"samples.csv", csv_text([&](std::ostream& os) { csv::write_samples(os, rows); })});

    // Time-changed paths behind the largest-n cell, same streams as the report.
    const std::size_t i = c.ladder.size() - 1;
    const double n = c.ladder[i];
    const double phi = model.normalization(n);
    std::vector<double> levels(c.grid);
    for (double& l : levels) l *= n;
    std::vector<csv::TimeChangeRow> tc;
    for (std::size_t r = 0; r < std::min(c.dump_paths, c.replicates); ++r) {
      const TimeChangedPath p =
          simulate_time_changed({derive_seed(seed, i + 1), r, 0}, model, levels, c.dt * phi * phi);
      for (std::size_t k = 0; k < levels.size(); ++k) {
        tc.push_back({r, c.grid[k], p.tau(levels[k]), p.observed.values[k], p.observed.values[k] / phi});
      }
    }
    out.extra.push_back({"timechange.csv", csv_text([&](std::ostream& os) { csv::write_timechange(os, tc); })});
  }
  return out;
}

Outcome run_crosscheck(const ExperimentConfig& c, std::uint64_t seed, unsigned jobs, bool csv) {
  const IntensityModel model = build_model(c.model);
  const LimitSpec spec = build_limit(c.spec, model);
  spec.validate();
  const std::size_t reps = c.replicates;
  const std::size_t m = c.grid.size();
  std::vector<std::vector<double>> tc(m, std::vector<double>(reps));
  std::vector<std::vector<double>> sde(m, std::vector<double>(reps));
  std::vector<SdeDiagnostics> diag(reps);
  const std::uint64_t tc_seed = derive_seed(seed, 0);
  const std::uint64_t sde_seed = derive_seed(seed, 1);
  parallel_for(reps, jobs, [&](std::size_t r) {
    const Trajectory a = sample_limit_timechange({tc_seed, r, 0}, spec, c.grid, c.dt);
    const Trajectory b = sample_limit_sde({sde_seed, r, 0}, spec.a_plus, spec.a_minus, c.grid, c.dt, &diag[r]);
    for (std::size_t k = 0; k < m; ++k) {
      tc[k][r] = a.values[k];
      sde[k][r] = b.values[k];
    }
  });

  Outcome out;
  Json& b = out.body;
  const double threshold = dkw_threshold(reps, reps, 0.01);
  b["grid"] = number_array(c.grid);
  b["a_plus"] = spec.a_plus;
  b["a_minus"] = spec.a_minus;
  b["alpha"] = 0.01;
  b["cells"] = Json::array();
  for (std::size_t k = 0; k < m; ++k) {
    const double ks = ks_two_sample(tc[k], sde[k]);
    const bool pass = ks < threshold;
    out.pass = out.pass && pass;
    b["cells"].push_back({{"t", c.grid[k]},
                          {"ks", ks},
                          {"threshold", threshold},
                          {"verdict", pass ? "pass" : "fail"},
                          {"variance_timechange", sample_variance(tc[k])},
                          {"variance_sde", sample_variance(sde[k])}});
  }
  std::size_t hits = 0;
  std::size_t steps = 0;
  for (const auto& d : diag) {
    hits += d.zero_hits;
    steps += d.steps;
  }
  b["sde_zero_fraction"] = steps == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(steps);

  if (csv) {
    std::vector<csv::SampleRow> rows;
    const std::string exp(to_string(c.experiment));
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t r = 0; r < reps; ++r) rows.push_back({exp, "limit-timechange", kInfiniteScale, r, c.grid[k], tc[k][r]});
      for (std::size_t r = 0; r < reps; ++r) rows.push_back({exp, "limit-sde", kInfiniteScale, r, c.grid[k], sde[k][r]});
    }
    out.extra.push_back({"samples.csv", csv_text([&](std::ostream& os) { csv::write_samples(os, rows); })});
  }
  return out;
}

C1aeFunction ito_function(const std::string& name, double delta) {
  if (name == "square") return C1aeFunction::square();
  if (name == "positive_power") return C1aeFunction::positive_power(delta);
  throw ConfigInvalid("functions", "unknown function '" + name + "'");
}

Outcome run_ito(const ExperimentConfig& c, std::uint64_t seed, unsigned jobs, bool csv) {
  Outcome out;
  Json& b = out.body;
  b["dt_ladder"] = number_array(c.dt_ladder);
  b["ratio_range"] = {c.ratio_min, c.ratio_max};
  b["functions"] = Json::array();
  for (std::size_t i = 0; i < c.functions.size(); ++i) {
    const C1aeFunction fn = ito_function(c.functions[i], c.power_delta);
    const ResidualLadder ladder =
        ito_residual_ladder(fn, c.dt_ladder, c.horizon, c.replicates, derive_seed(seed, i), jobs);
    bool decreasing = true;
    bool in_range = true;
    std::vector<double> per_decade;
    for (std::size_t k = 0; k < ladder.ratios.size(); ++k) {
      decreasing = decreasing && ladder.rms[k + 1] < ladder.rms[k];
      const double decades = std::log10(ladder.dts[k] / ladder.dts[k + 1]);
      const double r = std::pow(ladder.ratios[k], 1.0 / decades);
      per_decade.push_back(r);
      in_range = in_range && r >= c.ratio_min && r <= c.ratio_max;
    }
    const bool pass = decreasing && in_range;
    out.pass = out.pass && pass;
    b["functions"].push_back({{"function", fn.name},
                              {"rms", number_array(ladder.rms)},
                              {"ratios", number_array(ladder.ratios)},
                              {"ratio_per_decade", number_array(per_decade)},
                              {"decreasing", decreasing},
                              {"verdict", pass ? "pass" : "fail"}});
  }
  if (csv && !c.functions.empty()) {
    std::vector<Path> paths;
    for (std::size_t r = 0; r < std::min(c.dump_paths, c.replicates); ++r) {
      paths.push_back(sample_brownian({derive_seed(seed, 0), r, 0}, c.horizon, c.dt_ladder.back()));
    }
    out.extra.push_back({"paths.csv", csv_text([&](std::ostream& os) { csv::write_paths(os, paths); })});
  }
  return out;
}

Outcome run_kurtz(const ExperimentConfig& c, std::uint64_t seed, unsigned jobs) {
  const IntensityModel model = build_model(c.model);
  IntegralCheckOptions opts;
  opts.dt = c.dt;
  opts.master_seed = seed;
  opts.jobs = jobs;
  const IntegralConvergence res = integral_convergence_check(model, c.ladder, c.horizon, c.replicates, opts);
  bool decreasing = true;
  for (std::size_t i = 0; i + 1 < res.median_gaps.size(); ++i) {
    decreasing = decreasing && res.median_gaps[i + 1] < res.median_gaps[i];
  }
  Outcome out;
  out.pass = decreasing && res.bound_violations == 0;
  out.body["ladder"] = number_array(res.ladder);
  out.body["median_gaps"] = number_array(res.median_gaps);
  out.body["strictly_decreasing"] = decreasing;
  out.body["bound_checked"] = res.bound_checked;
  out.body["bound_violations"] = res.bound_violations;
  return out;
}

std::function<double(double)> cauchy_observable(const std::string& name) {
  if (name == "identity") return [](double y) { return y; };
  if (name == "square") return [](double y) { return y * y; };
  if (name == "positive_part") return [](double y) { return std::max(y, 0.0); };
  if (name == "constant") return [](double) { return 1.0; };
  throw ConfigInvalid("observable", "unknown observable '" + name + "'");
}

// E f(x + sqrt(c t) Z) for the built-in observables.
double gaussian_reference(const std::string& name, double x, double variance) {
  const double s = std::sqrt(variance);
  if (name == "identity") return x;
  if (name == "square") return x * x + variance;
  if (name == "constant") return 1.0;
  if (s == 0.0) return std::max(x, 0.0);
  const double z = x / s;
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
  return x * cdf + s * pdf;
}

Outcome run_cauchy(const ExperimentConfig& c, std::uint64_t seed, unsigned jobs) {
  const IntensityModel model = build_model(c.model);
  CauchyOptions opts;
  opts.dt = c.dt;
  opts.jobs = jobs;
  const CauchyEstimate est = cauchy_estimate(model, cauchy_observable(c.observable), c.horizon, c.start,
                                             c.replicates, {seed, 0, 0}, opts);
  Outcome out;
  out.diagnostic = true;
  Json& b = out.body;
  b["t"] = c.horizon;
  b["x"] = c.start;
  b["observable"] = c.observable;
  b["estimate"] = est.estimate;
  b["std_error"] = est.std_error;
  const bool constant = model.kind() == ModelKind::AsymptoticConstant && model.a_plus() == model.a_minus();
  if (constant) {
    const double ref = gaussian_reference(c.observable, c.start, model.a_plus() * c.horizon);
    b["reference"] = ref;
    b["z_score"] = est.std_error > 0.0 ? (est.estimate - ref) / est.std_error : 0.0;
  }
  return out;
}

Outcome run_localtime(const ExperimentConfig& c, std::uint64_t seed, unsigned jobs, bool csv) {
  const IntensityModel model = build_model(c.model);
  const std::size_t reps = c.replicates;
  std::vector<double> time_domain(reps);
  std::vector<double> space_domain(reps);
  std::vector<double> occupation_error(reps);
  const std::size_t dumps = csv ? std::min(c.dump_paths, reps) : 0;
  std::vector<LocalTimeProfile> profiles(dumps);
  parallel_for(reps, jobs, [&](std::size_t r) {
    const Path path = sample_brownian({seed, r, 0}, c.horizon, c.dt);
    const MonotoneFunction s = additive_functional(path, model);
    const LocalTimeProfile profile = occupation_density(path, c.horizon, c.bin_width);
    time_domain[r] = s(c.horizon);
    space_domain[r] = functional_via_localtime(profile, model);
    occupation_error[r] = std::abs(profile.total_time() - c.horizon);
    if (r < dumps) profiles[r] = profile;
  });
  std::size_t within = 0;
  double worst_gap = 0.0;
  std::vector<double> gaps(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    gaps[r] = std::abs(space_domain[r] - time_domain[r]) / time_domain[r];
    worst_gap = std::max(worst_gap, gaps[r]);
    if (gaps[r] <= c.relative_tolerance) ++within;
  }
  const double fraction = static_cast<double>(within) / static_cast<double>(reps);
  const double occ = *std::max_element(occupation_error.begin(), occupation_error.end());
  Outcome out;
  out.pass = fraction >= c.pass_fraction && occ <= 1e-9;
  Json& b = out.body;
  b["t"] = c.horizon;
  b["bin_width"] = c.bin_width;
  b["relative_tolerance"] = c.relative_tolerance;
  b["fraction_within"] = fraction;
  b["required_fraction"] = c.pass_fraction;
  b["worst_relative_gap"] = worst_gap;
  b["max_occupation_error"] = occ;
  if (csv) {
    out.extra.push_back({"localtime.csv", csv_text([&](std::ostream& os) { csv::write_profiles(os, profiles); })});
    std::vector<csv::SampleRow> rows;
    const std::string exp(to_string(c.experiment));
    for (std::size_t r = 0; r < reps; ++r) rows.push_back({exp, "time-domain", 1.0, r, c.horizon, time_domain[r]});
    for (std::size_t r = 0; r < reps; ++r) rows.push_back({exp, "localtime-domain", 1.0, r, c.horizon, space_domain[r]});
    out.extra.push_back({"samples.csv", csv_text([&](std::ostream& os) { csv::write_samples(os, rows); })});
  }
  return out;
}

Outcome execute(const ExperimentConfig& c, bool csv) {
  const std::uint64_t seed = c.master_seed.value_or(kDefaultSeed);
  const unsigned jobs = c.jobs == 0 ? default_jobs() : c.jobs;
  switch (c.experiment) {
    case ExperimentKind::Converge: return run_converge(c, seed, jobs, csv);
    case ExperimentKind::LimitCrosscheck: return run_crosscheck(c, seed, jobs, csv);
    case ExperimentKind::Ito: return run_ito(c, seed, jobs, csv);
    case ExperimentKind::Kurtz: return run_kurtz(c, seed, jobs);
    case ExperimentKind::Cauchy: return run_cauchy(c, seed, jobs);
    case ExperimentKind::LocaltimeIdentity: return run_localtime(c, seed, jobs, csv);
  }
  throw std::logic_error("unhandled experiment kind");
}

int exit_code_of(const Outcome& o) { return (o.diagnostic || o.pass) ? 0 : 2; }

std::string verdict_of(const Outcome& o) {
  if (o.diagnostic) return "diagnostic";
  return o.pass ? "pass" : "fail";
}

std::string report_text(const ExperimentConfig& c, const Outcome& o) {
  Json doc;
  // jobs and out_dir do not affect results; leaving them out keeps the report
  // identical across schedules and output locations.
  Json echo = config_to_json(c);
  echo.erase("jobs");
  echo.erase("out_dir");
  doc["config_echo"] = std::move(echo);
  doc["experiment"] = std::string(to_string(c.experiment));
  for (auto it = o.body.begin(); it != o.body.end(); ++it) doc[it.key()] = it.value();
  doc["verdict"] = verdict_of(o);
  doc["exit_code"] = exit_code_of(o);
  return doc.dump(2) + "\n";
}

void write_atomically(const std::filesystem::path& target, const std::string& content) {
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << content;
    if (!os) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

void check_positive_increasing(const std::vector<double>& v, const std::string& field) {
  if (v.empty()) throw ConfigInvalid(field, "must be nonempty");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) throw ConfigInvalid(field, "entries must be positive");
    if (i > 0 && !(v[i] > v[i - 1])) throw ConfigInvalid(field, "must be strictly increasing");
  }
}

}  // namespace

// ---------------------------------------------------------------- public API

std::string_view to_string(ExperimentKind kind) {
  for (const auto& [name, k] : kExperimentNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

IntensityModel build_model(const ModelSpec& m) {
  auto param = [&](std::size_t i, double fallback) { return i < m.params.size() ? m.params[i] : fallback; };
  auto arity = [&](std::size_t lo, std::size_t hi) {
    if (m.params.size() < lo || m.params.size() > hi) {
      throw ConfigInvalid("model.params", "kind " + m.kind + " takes " + std::to_string(lo) + ".." +
                                              std::to_string(hi) + " parameters");
    }
  };
  try {
    if (m.kind == "asymptotic_constant") {
      arity(0, 0);
      return IntensityModel::asymptotic_constant(m.a_plus, m.a_minus);
    }
    if (m.kind == "power_tail") {
      arity(1, 2);
      const Regime regime = parse_regime(m.regime);
      if (regime == Regime::Pointwise) {
        throw ConfigInvalid("model.regime", "power_tail needs cesaro_delta or regularly_varying");
      }
      return IntensityModel::power_tail(param(0, 0.0), m.a_plus, m.a_minus, param(1, 1.0), regime);
    }
    if (m.kind == "periodic") {
      arity(2, 3);
      return IntensityModel::periodic(param(0, 0.0), param(1, 0.0), param(2, 1.0));
    }
    if (m.kind == "custom") {
      if (m.form == "degenerate_sqrt") {
        if (!m.base) throw ConfigInvalid("model.base", "degenerate_sqrt needs a base model");
        return degenerate_at_zero(build_model(*m.base));
      }
      if (m.form == "oscillating") {
        arity(1, 1);
        return oscillating_sides(m.a_plus, m.a_minus, param(0, 0.0));
      }
      if (m.form == "gaussian_bump") {
        arity(1, 1);
        return gaussian_bump(param(0, 0.0));
      }
      if (m.form == "table") {
        if (m.table_x.size() != m.table_lambda.size() || m.table_x.size() < 2) {
          throw ConfigInvalid("model.table_x", "table_x and table_lambda need equal length >= 2");
        }
        return tabulated(m.table_x, m.table_lambda, m.a_plus, m.a_minus, parse_regime(m.regime), m.exponent);
      }
      throw ConfigInvalid("model.form", "unknown custom form '" + m.form + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigInvalid("model", e.what());
  }
  throw ConfigInvalid("model.kind", "unknown kind '" + m.kind + "'");
}

LimitSpec build_limit(const LimitConfig& l, const IntensityModel& model) {
  const EtaConvention conv = parse_convention(l.convention);
  LimitSpec spec = limit_spec_for(model, conv);
  if (l.family == "auto") {
    // keep the derived family
  } else if (l.family == "eta") {
    spec = LimitSpec::eta(spec.a_plus, spec.a_minus);
  } else if (l.family == "eta_delta") {
    spec = LimitSpec::eta_delta(spec.a_plus, spec.a_minus, l.exponent, conv);
  } else if (l.family == "eta_gamma") {
    spec = LimitSpec::eta_gamma(spec.a_plus, spec.a_minus, l.exponent, conv);
  } else {
    throw ConfigInvalid("spec.family", "unknown family '" + l.family + "'");
  }
  if (l.a_plus != 0.0) spec.a_plus = l.a_plus;
  if (l.a_minus != 0.0) spec.a_minus = l.a_minus;
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigInvalid("spec", e.what());
  }
  return spec;
}

void validate(const ExperimentConfig& c) {
  if (c.replicates < 2) throw ConfigInvalid("replicates", "must be >= 2, got " + std::to_string(c.replicates));
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw ConfigInvalid("dt", "must be > 0");
  if (!(c.horizon > 0.0)) throw ConfigInvalid("horizon", "must be > 0");
  if (!c.ladder.empty()) check_positive_increasing(c.ladder, "ladder");
  if (!c.grid.empty()) check_positive_increasing(c.grid, "grid");
  const IntensityModel model = build_model(c.model);
  switch (c.experiment) {
    case ExperimentKind::Converge:
      check_positive_increasing(c.ladder, "ladder");
      check_positive_increasing(c.grid, "grid");
      try {
        check_regime_matches(model, build_limit(c.spec, model));
      } catch (const RegimeMismatch& e) {
        throw ConfigInvalid("spec", e.what());
      }
      break;
    case ExperimentKind::LimitCrosscheck:
      check_positive_increasing(c.grid, "grid");
      build_limit(c.spec, model);
      break;
    case ExperimentKind::Ito: {
      if (c.dt_ladder.size() < 2) throw ConfigInvalid("dt_ladder", "needs at least two steps");
      for (std::size_t i = 0; i < c.dt_ladder.size(); ++i) {
        if (!(c.dt_ladder[i] > 0.0)) throw ConfigInvalid("dt_ladder", "entries must be positive");
        if (i > 0 && !(c.dt_ladder[i] < c.dt_ladder[i - 1])) {
          throw ConfigInvalid("dt_ladder", "must be strictly decreasing");
        }
      }
      if (c.functions.empty()) throw ConfigInvalid("functions", "must be nonempty");
      for (const auto& f : c.functions) ito_function(f, c.power_delta);
      if (!(c.ratio_min < c.ratio_max)) throw ConfigInvalid("ratio_min", "must be below ratio_max");
      break;
    }
    case ExperimentKind::Kurtz:
      check_positive_increasing(c.ladder, "ladder");
      break;
    case ExperimentKind::Cauchy:
      cauchy_observable(c.observable);
      break;
    case ExperimentKind::LocaltimeIdentity:
      if (!(c.bin_width > 0.0)) throw ConfigInvalid("bin_width", "must be > 0");
      if (!(c.relative_tolerance > 0.0)) throw ConfigInvalid("relative_tolerance", "must be > 0");
      if (!(c.pass_fraction > 0.0 && c.pass_fraction <= 1.0)) {
        throw ConfigInvalid("pass_fraction", "must be in (0, 1]");
      }
      break;
  }
}

ExperimentConfig config_from_json_text(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigInvalid("config", std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigInvalid("config", "expected a JSON object");
  ExperimentConfig c;
  if (j.contains("preset")) c = preset(get_field<std::string>(j, "preset", "preset"));
  apply_json(j, c);
  return c;
}

std::string config_to_json_text(const ExperimentConfig& config) { return config_to_json(config).dump(2) + "\n"; }

std::vector<PresetInfo> list_presets() {
  std::vector<PresetInfo> out;
  for (const auto& p : preset_table()) out.push_back({p.name, p.summary});
  return out;
}

ExperimentConfig preset(std::string_view name) {
  if (name == "thm23-default") {
    auto c = preset("thm23");
    c.name = "thm23-default";
    return c;
  }
  for (const auto& p : preset_table()) {
    if (p.name == name) return p.make();
  }
  throw ConfigInvalid("preset", "unknown preset '" + std::string(name) + "'");
}

ExperimentConfig resolve(ExperimentConfig c, const RunOverrides& o) {
  if (o.seed) {
    c.master_seed = o.seed;
  } else if (!c.master_seed) {
    if (const char* env = std::getenv("TCLAB_SEED"); env != nullptr && *env != '\0') {
      try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(env, &used, 10);
        if (used != std::string_view(env).size() || std::string_view(env).front() == '-') {
          throw std::invalid_argument("trailing characters");
        }
        c.master_seed = v;
      } catch (const std::exception&) {
        throw ConfigInvalid("TCLAB_SEED", std::string("not an unsigned integer: '") + env + "'");
      }
    } else {
      c.master_seed = kDefaultSeed;
    }
  }
  if (o.out_dir) c.out_dir = *o.out_dir;
  if (o.jobs) c.jobs = *o.jobs;
  if (o.format) c.format = *o.format;
  if (o.replicates) c.replicates = *o.replicates;
  return c;
}

std::string run_report_text(const ExperimentConfig& config, int* exit_code) {
  validate(config);
  const Outcome o = execute(config, false);
  if (exit_code) *exit_code = exit_code_of(o);
  return report_text(config, o);
}

RunResult run(const ExperimentConfig& config) {
  RunResult result;
  try {
    validate(config);
    const auto started = std::chrono::steady_clock::now();
    const Outcome o = execute(config, config.format == OutputFormat::Csv);
    const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    const std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);
    write_atomically(dir / "report.json", report_text(config, o));
    result.artifacts.push_back(dir / "report.json");
    for (const auto& a : o.extra) {
      write_atomically(dir / a.file, a.content);
      result.artifacts.push_back(dir / a.file);
    }
    Json timing;
    timing["runtime_sec"] = runtime;
    write_atomically(dir / "timing.json", timing.dump(2) + "\n");
    result.artifacts.push_back(dir / "timing.json");

    result.exit_code = exit_code_of(o);
    result.verdict = verdict_of(o);
    result.message = std::string(to_string(config.experiment)) + " " + config.name + ": " + result.verdict;
  } catch (const std::exception& e) {
    result.exit_code = 1;
    result.verdict = "error";
    result.message = config.name + ": " + e.what();
  }
  return result;
}

}  // namespace tclab
