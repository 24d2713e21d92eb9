#include "pinnsird/forecast/forecaster.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>

#include "pinnsird/errors.hpp"
#include "pinnsird/pipeline/csv.hpp"

namespace pinnsird::forecast {
namespace {

bool is_degenerate(double lo, double hi) {
  return hi - lo <= 1e-12 * std::max(1.0, std::abs(hi));
}

}  // namespace

Feature to_feature(const sird::ParamTriple& p) { return {p.beta, p.gamma, p.mu}; }

sird::ParamTriple to_params(const Feature& f) { return {f[0], f[1], f[2]}; }

Feature Normalizer::normalize(const Feature& raw) const {
  Feature out{};
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = constant[k] ? 0.5 : (raw[k] - min[k]) / (max[k] - min[k]);
  }
  return out;
}

Feature Normalizer::denormalize(const Feature& scaled) const {
  Feature out{};
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = constant[k] ? min[k] : min[k] + scaled[k] * (max[k] - min[k]);
  }
  return out;
}

NormalizedSeries normalize(std::span<const sird::ParamTriple> series) {
  if (series.size() < 2) {
    throw UsageError("normalize needs at least 2 points");
  }
  Normalizer n;
  n.min = n.max = to_feature(series.front());
  for (const auto& p : series) {
    const Feature f = to_feature(p);
    for (std::size_t k = 0; k < f.size(); ++k) {
      n.min[k] = std::min(n.min[k], f[k]);
      n.max[k] = std::max(n.max[k], f[k]);
    }
  }
  for (std::size_t k = 0; k < n.min.size(); ++k) {
    n.constant[k] = is_degenerate(n.min[k], n.max[k]);
    if (n.constant[k]) {
      n.max[k] = n.min[k];
    }
  }
  NormalizedSeries out;
  out.normalizer = n;
  out.values.reserve(series.size());
  for (const auto& p : series) {
    out.values.push_back(n.normalize(to_feature(p)));
  }
  return out;
}

std::vector<sird::ParamTriple> denormalize(std::span<const Feature> values,
                                           const Normalizer& normalizer) {
  std::vector<sird::ParamTriple> out;
  out.reserve(values.size());
  for (const auto& v : values) {
    out.push_back(to_params(normalizer.denormalize(v)));
  }
  return out;
}

WindowedDataset make_windows(std::span<const Feature> series, std::size_t window) {
  if (window == 0) {
    throw UsageError("window length must be positive");
  }
  if (series.size() <= window) {
    throw UsageError("series of length " + std::to_string(series.size()) +
                     " is too short for window " + std::to_string(window));
  }
  WindowedDataset data;
  data.window = window;
  for (std::size_t k = 0; k + window < series.size(); ++k) {
    WindowSample s;
    s.inputs.assign(series.begin() + static_cast<std::ptrdiff_t>(k),
                    series.begin() + static_cast<std::ptrdiff_t>(k + window));
    s.target = series[k + window];
    data.samples.push_back(std::move(s));
  }
  return data;
}

SequenceBatch to_batch(const WindowedDataset& data) {
  const auto batch = static_cast<Eigen::Index>(data.samples.size());
  SequenceBatch out;
  out.steps.assign(data.window, Eigen::MatrixXd(3, batch));
  out.targets.resize(3, batch);
  for (Eigen::Index b = 0; b < batch; ++b) {
    const auto& s = data.samples[static_cast<std::size_t>(b)];
    for (std::size_t t = 0; t < data.window; ++t) {
      out.steps[t].col(b) = Eigen::Map<const Eigen::Vector3d>(s.inputs[t].data());
    }
    out.targets.col(b) = Eigen::Map<const Eigen::Vector3d>(s.target.data());
  }
  return out;
}

Feature ForecastModel::predict_normalized(std::span<const Feature> recent) const {
  if (recent.size() != window) {
    throw UsageError("prediction needs exactly " + std::to_string(window) + " points");
  }
  std::vector<Eigen::MatrixXd> steps;
  for (const auto& f : recent) {
    steps.emplace_back(Eigen::Map<const Eigen::Vector3d>(f.data()));
  }
  const Eigen::MatrixXd y = stack.predict(steps);
  return {y(0, 0), y(1, 0), y(2, 0)};
}

ForecastModel train_forecaster(std::span<const sird::ParamTriple> series,
                               const ForecastConfig& config, ForecastTrainingReport* report) {
  if (series.size() < std::max(config.min_points, config.window + 1)) {
    throw UsageError("forecaster needs at least " + std::to_string(config.min_points) +
                     " points, got " + std::to_string(series.size()));
  }
  const NormalizedSeries norm = normalize(series);
  const SequenceBatch batch = to_batch(make_windows(norm.values, config.window));

  ForecastModel model;
  model.window = config.window;
  model.normalizer = norm.normalizer;
  model.stack = init_lstm_stack(3, config.hidden_size, config.layers, 3, config.seed);

  std::vector<double> params = pack_parameters(model.stack);
  std::vector<double> grad(params.size());
  neural::AdamState adam(params.size(), config.adam);
  double loss = 0.0;
  double initial = 0.0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    loss = sequence_mse(model.stack, batch.steps, batch.targets, grad);
    if (!std::isfinite(loss)) {
      throw TrainingDiverged("forecaster loss is not finite", epoch);
    }
    if (epoch == 0) {
      initial = loss;
    }
    if (config.on_progress && config.progress_every > 0 && epoch % config.progress_every == 0) {
      config.on_progress(epoch, loss);
    }
    neural::adam_step(adam, params, grad);
    unpack_parameters(model.stack, params);
  }
  loss = sequence_mse(model.stack, batch.steps, batch.targets, {});
  if (!std::isfinite(loss)) {
    throw TrainingDiverged("forecaster loss is not finite", config.epochs);
  }
  if (report != nullptr) {
    *report = {config.epochs > 0 ? initial : loss, loss, static_cast<std::size_t>(batch.targets.cols())};
  }
  return model;
}

ForecastModel train_forecaster(const ident::WeeklyParams& weekly, const ForecastConfig& config,
                               ForecastTrainingReport* report) {
  return train_forecaster(std::span<const sird::ParamTriple>(weekly.params), config, report);
}

std::vector<sird::ParamTriple> forecast_params(const ForecastModel& model,
                                               std::span<const sird::ParamTriple> recent,
                                               std::size_t horizon) {
  if (horizon == 0) {
    throw UsageError("forecast horizon must be at least 1");
  }
  if (recent.size() < model.window) {
    throw UsageError("forecast needs the last " + std::to_string(model.window) + " weeks");
  }
  std::vector<Feature> window;
  for (std::size_t k = recent.size() - model.window; k < recent.size(); ++k) {
    window.push_back(model.normalizer.normalize(to_feature(recent[k])));
  }
  std::vector<sird::ParamTriple> out;
  for (std::size_t step = 0; step < horizon; ++step) {
    Feature raw = model.normalizer.denormalize(model.predict_normalized(window));
    for (double& v : raw) {
      v = std::max(v, kForecastFloor);
    }
    out.push_back(to_params(raw));
    window.erase(window.begin());
    window.push_back(model.normalizer.normalize(raw));
  }
  return out;
}

void to_json(nlohmann::json& j, const ForecastModel& model) {
  const auto& n = model.normalizer;
  j = nlohmann::json{{"window", model.window},
                     {"features", {"beta", "gamma", "mu"}},
                     {"normalization", {{"min", n.min}, {"max", n.max}, {"constant", n.constant}}},
                     {"lstm", model.stack}};
}

void from_json(const nlohmann::json& j, ForecastModel& model) {
  ForecastModel out;
  out.window = j.at("window").get<std::size_t>();
  const auto& n = j.at("normalization");
  out.normalizer.min = n.at("min").get<Feature>();
  out.normalizer.max = n.at("max").get<Feature>();
  out.normalizer.constant = n.at("constant").get<std::array<bool, 3>>();
  for (std::size_t k = 0; k < 3; ++k) {
    if (!out.normalizer.constant[k] && !(out.normalizer.max[k] > out.normalizer.min[k])) {
      throw UsageError("checkpoint normalization needs max > min for non-constant features");
    }
  }
  out.stack = j.at("lstm").get<LstmStack>();
  if (out.window == 0 || out.stack.input_size() != 3 || out.stack.output_size() != 3) {
    throw UsageError("checkpoint is not a 3-feature forecaster");
  }
  model = std::move(out);
}

void save_forecast_model(const ForecastModel& model, const std::filesystem::path& path) {
  csv::write_file(path, nlohmann::json(model).dump(1) + "\n");
}

ForecastModel load_forecast_model(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) {
    throw UsageError("cannot open " + path.string());
  }
  return nlohmann::json::parse(is).get<ForecastModel>();
}

std::string forecast_csv(std::span<const sird::ParamTriple> forecast, std::size_t first_week) {
  std::string out = "week,beta,gamma,mu\n";
  for (std::size_t k = 0; k < forecast.size(); ++k) {
    const auto& p = forecast[k];
    out += std::to_string(first_week + k) + "," + csv::format(p.beta) + "," +
           csv::format(p.gamma) + "," + csv::format(p.mu) + "\n";
  }
  return out;
}

}  // namespace pinnsird::forecast
