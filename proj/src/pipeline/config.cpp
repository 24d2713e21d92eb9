#include "pinnsird/pipeline/config.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <set>

#include "pinnsird/errors.hpp"
#include "pinnsird/ident/residuals.hpp"
#include "pinnsird/pipeline/csv.hpp"

namespace pinnsird::pipeline {

void to_json(nlohmann::json& j, DataFormat f) {
  switch (f) {
    case DataFormat::Cumulative: j = "cumulative"; break;
    case DataFormat::Fractions: j = "fractions"; break;
    case DataFormat::Synthetic: j = "synthetic"; break;
  }
}

void from_json(const nlohmann::json& j, DataFormat& f) {
  const auto s = j.get<std::string>();
  if (s == "cumulative") {
    f = DataFormat::Cumulative;
  } else if (s == "fractions") {
    f = DataFormat::Fractions;
  } else if (s == "synthetic") {
    f = DataFormat::Synthetic;
  } else {
    throw UsageError("data_format must be cumulative, fractions or synthetic, got '" + s + "'");
  }
}

void to_json(nlohmann::json& j, SynthKind k) {
  switch (k) {
    case SynthKind::Constant: j = "constant"; break;
    case SynthKind::Linear: j = "linear"; break;
    case SynthKind::Weekly: j = "weekly"; break;
  }
}

void from_json(const nlohmann::json& j, SynthKind& k) {
  const auto s = j.get<std::string>();
  if (s == "constant") {
    k = SynthKind::Constant;
  } else if (s == "linear") {
    k = SynthKind::Linear;
  } else if (s == "weekly") {
    k = SynthKind::Weekly;
  } else {
    throw UsageError("synth_kind must be constant, linear or weekly, got '" + s + "'");
  }
}

namespace {

template <class Config, class Visitor>
void visit_fields(Config& c, Visitor&& v) {
  v("data_path", c.data_path);
  v("data_format", c.data_format);
  v("population", c.population);
  v("region", c.region);
  v("synth_kind", c.synth_kind);
  v("synth_beta", c.synth_beta);
  v("synth_gamma", c.synth_gamma);
  v("synth_mu", c.synth_mu);
  v("synth_initial", c.synth_initial);
  v("synth_days", c.synth_days);
  v("synth_noise", c.synth_noise);
  v("synth_start_date", c.synth_start_date);
  v("seed", c.seed);
  v("run_daily", c.run_daily);
  v("run_weekly", c.run_weekly);
  v("run_forecast", c.run_forecast);
  v("daily_epochs", c.daily_epochs);
  v("daily_lr", c.daily_lr);
  v("daily_hidden", c.daily_hidden);
  v("collocation_per_day", c.collocation_per_day);
  v("daily_ob_weight", c.daily_ob_weight);
  v("daily_ge_weight", c.daily_ge_weight);
  v("weekly_epochs", c.weekly_epochs);
  v("weekly_lr", c.weekly_lr);
  v("weekly_hidden", c.weekly_hidden);
  v("densify_points", c.densify_points);
  v("weekly_ob_weight", c.weekly_ob_weight);
  v("weekly_ge_weight", c.weekly_ge_weight);
  v("weekly_initial_params", c.weekly_initial_params);
  v("warm_start", c.warm_start);
  v("threads", c.threads);
  v("forecast_epochs", c.forecast_epochs);
  v("forecast_lr", c.forecast_lr);
  v("forecast_layers", c.forecast_layers);
  v("forecast_hidden", c.forecast_hidden);
  v("window", c.window);
  v("horizon", c.horizon);
  v("rk4_step", c.rk4_step);
  v("progress_every", c.progress_every);
}

void require(bool ok, const std::string& message) {
  if (!ok) {
    throw UsageError("config: " + message);
  }
}

}  // namespace

void PipelineConfig::validate() const {
  require(population > 0.0, "population must be positive");
  require(data_format == DataFormat::Synthetic || !data_path.empty(),
          "data_path is required unless data_format is synthetic");
  require(!synth_beta.empty(), "synth_beta must not be empty");
  require(synth_kind != SynthKind::Constant || synth_beta.size() == 1,
          "synth_kind constant takes one synth_beta value");
  require(synth_kind != SynthKind::Linear || synth_beta.size() == 2,
          "synth_kind linear takes two synth_beta values");
  require(synth_days >= 14, "synth_days must be at least 14");
  require(synth_noise >= 0.0, "synth_noise must be non-negative");
  require(csv::parse_date(synth_start_date).has_value(), "synth_start_date must be YYYY-MM-DD");
  require(!run_forecast || run_weekly, "run_forecast needs run_weekly");
  require(collocation_per_day >= 0, "collocation_per_day must be non-negative");
  require(densify_points >= ident::kDaysPerWeek, "densify_points must be at least 7");
  require(threads >= 1, "threads must be at least 1");
  require(forecast_layers >= 1 && forecast_hidden >= 1, "forecast network sizes must be positive");
  require(window >= 1, "window must be at least 1");
  require(horizon >= 1, "horizon must be at least 1");
  require(rk4_step > 0.0, "rk4_step must be positive");
  for (double lr : {daily_lr, weekly_lr, forecast_lr}) {
    require(lr > 0.0, "learning rates must be positive");
  }
}

StageSeeds stage_seeds(std::uint64_t global) {
  return {ident::derive_seed(global, kSynthStream), ident::derive_seed(global, kDailyStream),
          ident::derive_seed(global, kWeeklyStream), ident::derive_seed(global, kForecastStream)};
}

void to_json(nlohmann::json& j, const PipelineConfig& config) {
  j = nlohmann::json::object();
  visit_fields(config, [&j](const char* key, const auto& field) { j[key] = field; });
}

void from_json(const nlohmann::json& j, PipelineConfig& config) {
  if (!j.is_object()) {
    throw UsageError("config must be a JSON object");
  }
  std::set<std::string> known;
  PipelineConfig out;
  visit_fields(out, [&](const char* key, auto& field) {
    known.insert(key);
    const auto it = j.find(key);
    if (it == j.end()) {
      return;
    }
    if (it->is_object()) {
      throw UsageError(std::string("config key '") + key + "' must not be an object");
    }
    try {
      it->get_to(field);
    } catch (const nlohmann::json::exception&) {
      throw UsageError(std::string("config key '") + key + "' has the wrong type");
    }
  });
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) {
      throw UsageError("unknown config key '" + key + "'");
    }
  }
  config = std::move(out);
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) {
    throw UsageError("cannot open config " + path.string());
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
  return j.get<PipelineConfig>();
}

ident::DailyConfig daily_config(const PipelineConfig& config) {
  ident::DailyConfig c;
  c.hidden_layers = config.daily_hidden;
  c.epochs = config.daily_epochs;
  c.adam.learning_rate = config.daily_lr;
  c.collocation_per_day = config.collocation_per_day;
  c.ob_weight = config.daily_ob_weight;
  c.ge_weight = config.daily_ge_weight;
  c.seed = stage_seeds(config.seed).daily;
  c.progress_every = config.progress_every;
  return c;
}

ident::WeeklyConfig weekly_config(const PipelineConfig& config) {
  ident::WeeklyConfig c;
  c.hidden_layers = config.weekly_hidden;
  c.epochs = config.weekly_epochs;
  c.adam.learning_rate = config.weekly_lr;
  c.densify_points = config.densify_points;
  c.ob_weight = config.weekly_ob_weight;
  c.ge_weight = config.weekly_ge_weight;
  c.seed = stage_seeds(config.seed).weekly;
  const auto& p = config.weekly_initial_params;
  c.initial_params = {p[0], p[1], p[2]};
  c.warm_start = config.warm_start;
  c.threads = config.threads;
  c.progress_every = config.progress_every;
  return c;
}

forecast::ForecastConfig forecast_config(const PipelineConfig& config) {
  forecast::ForecastConfig c;
  c.layers = config.forecast_layers;
  c.hidden_size = config.forecast_hidden;
  c.window = config.window;
  c.epochs = config.forecast_epochs;
  c.adam.learning_rate = config.forecast_lr;
  c.seed = stage_seeds(config.seed).forecast;
  c.progress_every = config.progress_every;
  return c;
}

SyntheticSpec synthetic_spec(const PipelineConfig& config) {
  config.validate();
  SyntheticSpec spec;
  const double last = static_cast<double>(config.synth_days - 1);
  const auto& b = config.synth_beta;
  switch (config.synth_kind) {
    case SynthKind::Constant:
      spec.params = sird::ParamTrajectory::constant({b[0], config.synth_gamma, config.synth_mu},
                                                    0.0, last);
      break;
    case SynthKind::Linear: {
      std::vector<double> grid;
      std::vector<sird::ParamTriple> values;
      for (std::size_t d = 0; d < config.synth_days; ++d) {
        const double w = static_cast<double>(d) / last;
        grid.push_back(static_cast<double>(d));
        values.push_back({b[0] + w * (b[1] - b[0]), config.synth_gamma, config.synth_mu});
      }
      spec.params = sird::ParamTrajectory::piecewise_linear(std::move(grid), std::move(values));
      break;
    }
    case SynthKind::Weekly: {
      std::vector<double> starts;
      std::vector<sird::ParamTriple> values;
      for (std::size_t k = 0; static_cast<double>(ident::kDaysPerWeek * k) < last; ++k) {
        starts.push_back(static_cast<double>(ident::kDaysPerWeek * k));
        values.push_back({b[k % b.size()], config.synth_gamma, config.synth_mu});
      }
      spec.params = sird::ParamTrajectory::piecewise_constant(std::move(starts),
                                                              std::move(values), last);
      break;
    }
  }
  const auto& s = config.synth_initial;
  spec.initial = {s[0], s[1], s[2], s[3]};
  spec.days = config.synth_days;
  spec.noise = config.synth_noise;
  spec.seed = stage_seeds(config.seed).synth;
  spec.step = config.rk4_step;
  spec.start_date = *csv::parse_date(config.synth_start_date);
  return spec;
}

}  // namespace pinnsird::pipeline
