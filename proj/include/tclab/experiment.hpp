#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tclab/intensity.hpp"
#include "tclab/limitproc.hpp"

namespace tclab {

// Plain-data description of an intensity model, as it appears in config files:
//   kind: asymptotic_constant | power_tail | periodic | custom
//   params: power_tail [delta, x0]; periodic [mean, amplitude, period];
//           custom "oscillating" [eps]; custom "gaussian_bump" [height]
//   a_plus, a_minus: declared limits (derived for periodic)
//   regime, exponent: declared regime; power_tail derives exponent from delta
//   zero_set: points where lambda vanishes (tabulated/custom only)
//   form: custom family: degenerate_sqrt | oscillating | gaussian_bump | table
//   base: model wrapped by degenerate_sqrt
//   table_x, table_lambda: nodes of the table form
struct ModelSpec {
  std::string kind = "asymptotic_constant";
  std::vector<double> params;
  double a_plus = 1.0;
  double a_minus = 1.0;
  std::string regime = "pointwise";
  double exponent = 0.0;
  std::vector<double> zero_set;
  std::string form;
  std::shared_ptr<ModelSpec> base;
  std::vector<double> table_x;
  std::vector<double> table_lambda;
};

IntensityModel build_model(const ModelSpec& spec);

// family "auto" derives the limit from the model's regime; a_plus/a_minus of
// zero mean "take them from the model".
struct LimitConfig {
  std::string family = "auto";
  double exponent = 0.0;
  double a_plus = 0.0;
  double a_minus = 0.0;
  std::string convention = "exact";
};

LimitSpec build_limit(const LimitConfig& config, const IntensityModel& model);

enum class ExperimentKind { Converge, LimitCrosscheck, Ito, Kurtz, Cauchy, LocaltimeIdentity };

std::string_view to_string(ExperimentKind kind);

enum class OutputFormat { Csv, Json };

struct ExperimentConfig {
  std::string name = "custom";
  ExperimentKind experiment = ExperimentKind::Converge;
  ModelSpec model;
  LimitConfig spec;
  std::vector<double> ladder;
  std::vector<double> grid;
  std::size_t replicates = 1000;
  double dt = 1e-4;
  std::optional<std::uint64_t> master_seed;
  std::string out_dir = "tclab-out";
  OutputFormat format = OutputFormat::Json;
  unsigned jobs = 0;  // 0: hardware concurrency

  // ito: step ladder and functions ("square", "positive_power"); kurtz/cauchy/
  // localtime-identity: horizon t.
  std::vector<double> dt_ladder;
  std::vector<std::string> functions;
  double horizon = 1.0;
  double power_delta = 1.0;
  double ratio_min = 2.5;
  double ratio_max = 4.5;
  // cauchy: f in {identity, square, positive_part, constant}, start point.
  std::string observable = "square";
  double start = 0.0;
  // localtime-identity
  double bin_width = 1e-2;
  double relative_tolerance = 0.02;
  double pass_fraction = 0.95;
  // Paths written to the auxiliary CSV files when format is csv.
  std::size_t dump_paths = 5;
};

// Throws ConfigInvalid naming the offending field.
void validate(const ExperimentConfig& config);

// JSON document <-> config. Unknown keys are rejected. A "preset" key selects
// a preset as the base that the remaining keys override.
ExperimentConfig config_from_json_text(std::string_view text);
std::string config_to_json_text(const ExperimentConfig& config);

struct PresetInfo {
  std::string name;
  std::string summary;
};

std::vector<PresetInfo> list_presets();
// Throws ConfigInvalid("preset", ...) for unknown names.
ExperimentConfig preset(std::string_view name);

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<unsigned> jobs;
  std::optional<OutputFormat> format;
  std::optional<std::size_t> replicates;
};

// Seed precedence: override flag, then config, then TCLAB_SEED, then 1.
ExperimentConfig resolve(ExperimentConfig config, const RunOverrides& overrides);

struct RunResult {
  int exit_code = 0;  // 0 pass or diagnostic, 2 verdict failure, 1 error
  std::string verdict;
  std::string message;
  std::vector<std::filesystem::path> artifacts;
};

// Executes a resolved config and writes report.json (+ CSV files for the csv
// format, + timing.json) into out_dir. Errors are caught and reported with
// exit_code 1.
RunResult run(const ExperimentConfig& config);

// The report document without writing anything; deterministic given the config.
std::string run_report_text(const ExperimentConfig& config, int* exit_code = nullptr);

}  // namespace tclab
