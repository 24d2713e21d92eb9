#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "pinnsird/forecast/forecaster.hpp"
#include "pinnsird/ident/daily.hpp"
#include "pinnsird/ident/weekly.hpp"
#include "pinnsird/pipeline/timeseries.hpp"

namespace pinnsird::pipeline {

/// Where the input series comes from.
enum class DataFormat {
  Cumulative,  // date,cumulative_positive,cumulative_recovered,cumulative_deaths
  Fractions,   // date,S,I,R,D
  Synthetic,   // generated from the synth_* keys
};

/// Shape of the synthetic rate trajectory.
enum class SynthKind {
  Constant,  // synth_beta = [beta]
  Linear,    // synth_beta = [first day, last day], linear in between
  Weekly,    // synth_beta = per-week values, cycled
};

/// Every tunable of a run. Read from a flat JSON object whose keys are the
/// field names below; unknown keys and nested objects are rejected.
struct PipelineConfig {
  std::string data_path;
  DataFormat data_format = DataFormat::Synthetic;
  double population = 1.0;
  std::string region = "synthetic";

  SynthKind synth_kind = SynthKind::Weekly;
  std::vector<double> synth_beta{0.4, 0.2};
  double synth_gamma = 0.1;
  double synth_mu = 0.01;
  std::array<double, 4> synth_initial{0.94, 0.05, 0.008, 0.002};
  std::size_t synth_days = 56;
  double synth_noise = 0.0;
  std::string synth_start_date = "2020-01-01";

  std::uint64_t seed = 0;

  bool run_daily = true;
  bool run_weekly = true;
  bool run_forecast = true;

  std::size_t daily_epochs = 50000;
  double daily_lr = 1e-3;
  std::vector<int> daily_hidden{60, 60, 60, 60};
  int collocation_per_day = 4;
  double daily_ob_weight = 1.0;
  double daily_ge_weight = 1.0;

  std::size_t weekly_epochs = 20000;
  double weekly_lr = 1e-3;
  std::vector<int> weekly_hidden{60, 60, 60, 60};
  std::size_t densify_points = 50;
  double weekly_ob_weight = 1.0;
  double weekly_ge_weight = 1.0;
  std::array<double, 3> weekly_initial_params{0.2, 0.1, 0.05};
  bool warm_start = false;
  unsigned threads = 1;

  std::size_t forecast_epochs = 2000;
  double forecast_lr = 1e-3;
  int forecast_layers = 3;
  int forecast_hidden = 80;
  std::size_t window = 3;
  std::size_t horizon = 4;

  double rk4_step = 0.1;
  std::size_t progress_every = 0;

  /// Throws UsageError on inconsistent settings (e.g. forecasting without
  /// the weekly stage).
  void validate() const;
};

/// Stream indices fed to ident::derive_seed for each stage.
enum SeedStream : std::uint64_t { kSynthStream = 0, kDailyStream = 1, kWeeklyStream = 2, kForecastStream = 3 };

struct StageSeeds {
  std::uint64_t synth;
  std::uint64_t daily;
  std::uint64_t weekly;
  std::uint64_t forecast;
};
StageSeeds stage_seeds(std::uint64_t global);

void to_json(nlohmann::json& j, const PipelineConfig& config);
/// Keys absent from `j` keep their defaults.
void from_json(const nlohmann::json& j, PipelineConfig& config);
PipelineConfig load_config(const std::filesystem::path& path);

ident::DailyConfig daily_config(const PipelineConfig& config);
ident::WeeklyConfig weekly_config(const PipelineConfig& config);
forecast::ForecastConfig forecast_config(const PipelineConfig& config);
SyntheticSpec synthetic_spec(const PipelineConfig& config);

}  // namespace pinnsird::pipeline
