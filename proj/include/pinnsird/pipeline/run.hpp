#pragma once

#include <filesystem>
#include <functional>
#include <nlohmann/json.hpp>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pinnsird/forecast/forecaster.hpp"
#include "pinnsird/pipeline/config.hpp"
#include "pinnsird/pipeline/timeseries.hpp"
#include "pinnsird/sird/rk4.hpp"

namespace pinnsird::pipeline {

/// A failure inside one pipeline stage; what() reads "<stage>: <cause>".
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& cause)
      : std::runtime_error(stage + ": " + cause), stage_(std::move(stage)), cause_(cause) {}

  const std::string& stage() const noexcept { return stage_; }
  const std::string& cause() const noexcept { return cause_; }

 private:
  std::string stage_;
  std::string cause_;
};

struct StageRecord {
  std::string name;
  std::string status;  // "ok" or "failed"
  double seconds = 0.0;
  nlohmann::json summary = nlohmann::json::object();
};

struct RunManifest {
  nlohmann::json config;
  StageSeeds seeds{};
  std::string started;
  std::string finished;
  std::string input_source;
  std::string input_checksum;  // SHA-256 of the input bytes, hex
  std::string status;          // "ok" or "failed"
  std::string error;
  std::vector<StageRecord> stages;
  std::vector<std::string> outputs;  // relative to the output directory

  const StageRecord* stage(std::string_view name) const;
  nlohmann::json to_json() const;
};

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

struct InputData {
  TimeSeriesData data;
  std::string source;    // file path, or "synthetic"
  std::string checksum;  // of the file bytes, or of the generated fraction CSV
  std::vector<std::string> warnings;
};

/// Reads or generates the input series described by the config.
InputData load_input(const PipelineConfig& config);

/// Piecewise-constant rates for a forecast that starts from the fitted
/// state on day `last_day` (the last fitted day): the last fitted week's
/// rates hold up to the next week boundary, then one forecast triple per week.
/// The fitted state is rescaled to sum to one before integration, since the
/// network outputs are not constrained to the simplex.
sird::Trajectory simulate_forecast(const sird::SirdState& last_state, double last_day,
                                   const sird::ParamTriple& last_params,
                                   std::span<const sird::ParamTriple> forecast, double step);

/// Full run: ingest, identify (daily and/or weekly), RK4 verification, R_e,
/// forecasting and the forecast simulation, writing every artifact and
/// manifest.json into `out_dir`. Stage failures throw StageError after the
/// manifest (status "failed") and earlier outputs have been written.
/// `log`, when set, receives stage boundaries and training progress
/// (every config.progress_every epochs).
RunManifest run_pipeline(const PipelineConfig& config, const std::filesystem::path& out_dir,
                         const std::function<void(const std::string&)>& log = {});

}  // namespace pinnsird::pipeline
