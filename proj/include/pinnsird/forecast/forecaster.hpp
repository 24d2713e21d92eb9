#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <nlohmann/json_fwd.hpp>
#include <span>
#include <string>
#include <vector>

#include "pinnsird/forecast/lstm.hpp"
#include "pinnsird/ident/weekly.hpp"
#include "pinnsird/neural/adam.hpp"
#include "pinnsird/sird/model.hpp"

namespace pinnsird::forecast {

/// (beta, gamma, mu) as a plain vector, usually in normalized units.
using Feature = std::array<double, 3>;

Feature to_feature(const sird::ParamTriple& p);
sird::ParamTriple to_params(const Feature& f);

/// Per-feature min-max scaling. A feature whose training values are all
/// equal is flagged constant: it normalizes to 0.5 and denormalizes to the
/// stored value.
struct Normalizer {
  Feature min{};
  Feature max{};
  std::array<bool, 3> constant{};

  Feature normalize(const Feature& raw) const;
  Feature denormalize(const Feature& scaled) const;
  bool any_constant() const { return constant[0] || constant[1] || constant[2]; }
};

struct NormalizedSeries {
  std::vector<Feature> values;
  Normalizer normalizer;
};

/// Fits the normalizer on `series` and applies it. Throws UsageError for
/// fewer than 2 points.
NormalizedSeries normalize(std::span<const sird::ParamTriple> series);
std::vector<sird::ParamTriple> denormalize(std::span<const Feature> values,
                                           const Normalizer& normalizer);

struct WindowSample {
  std::vector<Feature> inputs;
  Feature target{};
};

struct WindowedDataset {
  std::size_t window = 3;
  std::vector<WindowSample> samples;
};

/// Stride-1 sliding windows: `window` consecutive points predict the next.
/// Throws UsageError unless series.size() > window.
WindowedDataset make_windows(std::span<const Feature> series, std::size_t window = 3);

/// Batch layout for the LSTM: steps[t] is (3 x samples), targets (3 x samples).
struct SequenceBatch {
  std::vector<Eigen::MatrixXd> steps;
  Eigen::MatrixXd targets;
};
SequenceBatch to_batch(const WindowedDataset& data);

struct ForecastModel {
  LstmStack stack;
  Normalizer normalizer;
  std::size_t window = 3;

  /// One-step prediction in normalized units from `window` normalized points.
  Feature predict_normalized(std::span<const Feature> recent) const;
};

struct ForecastConfig {
  int layers = 3;
  int hidden_size = 80;
  std::size_t window = 3;
  std::size_t epochs = 2000;
  neural::AdamConfig adam{};
  std::uint64_t seed = 0;
  std::size_t min_points = 8;

  std::size_t progress_every = 0;
  std::function<void(std::size_t epoch, double loss)> on_progress;
};

struct ForecastTrainingReport {
  double initial_loss = 0.0;
  double final_loss = 0.0;
  std::size_t samples = 0;
};

/// Normalizes, windows and trains the stack with full-batch MSE and Adam.
/// Throws UsageError below config.min_points and TrainingDiverged if the
/// loss becomes non-finite.
ForecastModel train_forecaster(std::span<const sird::ParamTriple> series,
                               const ForecastConfig& config,
                               ForecastTrainingReport* report = nullptr);
ForecastModel train_forecaster(const ident::WeeklyParams& weekly, const ForecastConfig& config,
                               ForecastTrainingReport* report = nullptr);

inline constexpr double kForecastFloor = 1e-6;

/// Recursive forecast: each prediction (floored at kForecastFloor) is
/// appended to the window and fed back. `recent` must hold at least
/// model.window triples; the last model.window are used.
std::vector<sird::ParamTriple> forecast_params(const ForecastModel& model,
                                               std::span<const sird::ParamTriple> recent,
                                               std::size_t horizon = 4);

void to_json(nlohmann::json& j, const ForecastModel& model);
void from_json(const nlohmann::json& j, ForecastModel& model);
void save_forecast_model(const ForecastModel& model, const std::filesystem::path& path);
ForecastModel load_forecast_model(const std::filesystem::path& path);

/// `week,beta,gamma,mu` with weeks numbered from first_week.
std::string forecast_csv(std::span<const sird::ParamTriple> forecast, std::size_t first_week);

}  // namespace pinnsird::forecast
