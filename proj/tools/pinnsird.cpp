// Command-line front end for the SIRD identification pipeline.

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "pinnsird/errors.hpp"
#include "pinnsird/forecast/forecaster.hpp"
#include "pinnsird/pipeline/config.hpp"
#include "pinnsird/pipeline/csv.hpp"
#include "pinnsird/pipeline/outputs.hpp"
#include "pinnsird/pipeline/run.hpp"
#include "pinnsird/sird/rk4.hpp"

namespace fs = std::filesystem;
using namespace pinnsird;

namespace {

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config, "Flat JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", opts.seed, "Global seed (overrides the config)");
  cmd->add_option("--out", opts.out, "Output directory")->capture_default_str();
}

pipeline::PipelineConfig resolve(const CommonOptions& opts) {
  pipeline::PipelineConfig config;
  if (!opts.config.empty()) {
    config = pipeline::load_config(opts.config);
  }
  if (opts.seed) {
    config.seed = *opts.seed;
  }
  return config;
}

void log_line(const std::string& line) { std::cerr << line << '\n'; }

void write(const CommonOptions& opts, const std::string& name, const std::string& text) {
  csv::write_file(fs::path(opts.out) / name, text);
  std::cout << (fs::path(opts.out) / name).string() << '\n';
}

void run_ingest(const CommonOptions& opts) {
  const auto config = resolve(opts);
  const auto input = pipeline::load_input(config);
  for (const auto& w : input.warnings) {
    std::cerr << "warning: " << w << '\n';
  }
  write(opts, "data.csv", pipeline::to_fraction_csv(input.data));
}

void run_synth(const CommonOptions& opts) {
  auto config = resolve(opts);
  config.data_format = pipeline::DataFormat::Synthetic;
  const auto spec = pipeline::synthetic_spec(config);
  auto data = pipeline::generate_synthetic(spec);
  data.region = config.region;
  data.population = config.population;
  write(opts, "data.csv", pipeline::to_fraction_csv(data));
  write(opts, "data_cumulative.csv", pipeline::to_cumulative_csv(data));
  write(opts, "synthetic_params.csv", pipeline::params_csv(spec.params, data.size()));
}

// Stage flags left unset keep the config's run_* values.
void run_stages(const CommonOptions& opts, std::optional<bool> daily = {},
                std::optional<bool> weekly = {}, std::optional<bool> forecast = {}) {
  auto config = resolve(opts);
  config.run_daily = daily.value_or(config.run_daily);
  config.run_weekly = weekly.value_or(config.run_weekly);
  config.run_forecast = forecast.value_or(config.run_forecast);
  const auto manifest = pipeline::run_pipeline(config, opts.out, log_line);
  for (const auto& name : manifest.outputs) {
    std::cout << (fs::path(opts.out) / name).string() << '\n';
  }
}

void run_simulate(const CommonOptions& opts, const std::string& params_path,
                  std::optional<double> horizon) {
  const auto config = resolve(opts);
  const auto params = pipeline::read_params_csv(params_path);
  const auto input = pipeline::load_input(config);
  const auto first = static_cast<std::size_t>(std::lround(params.start()));
  if (first >= input.data.size()) {
    throw UsageError("rate table starts after the last data day");
  }
  const double span = horizon.value_or(std::floor(params.end() - params.start() + 1e-9));
  const auto traj = sird::rk4_solve(input.data.states[first], params, config.rk4_step, span,
                                    params.start());
  const auto days = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  const auto states = traj.daily(params.start(), days);
  std::vector<double> times;
  for (std::size_t d = 0; d < days; ++d) {
    times.push_back(params.start() + static_cast<double>(d));
  }
  write(opts, "simulation.csv", pipeline::simulation_csv(times, states));

  const std::size_t overlap = std::min(days, input.data.size() - first);
  const auto observed = input.data.slice(first, overlap);
  const std::vector<sird::SirdState> simulated(states.begin(),
                                               states.begin() + static_cast<std::ptrdiff_t>(overlap));
  write(opts, "simulation_error.csv",
        pipeline::relative_error_csv(first, pipeline::relative_error(simulated, observed.states)));
}

void run_reproduction(const CommonOptions& opts, const std::string& params_path,
                      const std::string& fit_path) {
  const auto params = pipeline::read_params_csv(params_path);
  const auto fit = pipeline::read_fit_csv(fit_path);
  auto fitted_s = [&fit](double day) {
    for (std::size_t k = 0; k < fit.days.size(); ++k) {
      if (std::abs(fit.days[k] - day) < 1e-9) {
        return fit.states[k].S;
      }
    }
    throw UsageError("fit table has no day " + csv::format(day));
  };
  std::vector<pipeline::ReproductionRow> rows;
  if (params.interpolation() == sird::Interpolation::PiecewiseConstant) {
    for (std::size_t k = 0; k < params.values().size(); ++k) {
      const double t = params.grid()[k] + static_cast<double>(ident::kDaysPerWeek / 2);
      const auto& p = params.values()[k];
      const double s = fitted_s(t);
      rows.push_back({t, p, s, 0.0, 0.0, sird::effective_reproduction_number(p, s)});
    }
  } else {
    for (std::size_t k = 0; k < fit.days.size(); ++k) {
      if (!params.covers(fit.days[k], fit.days[k])) {
        continue;
      }
      const auto p = params.at(fit.days[k]);
      const double s = fit.states[k].S;
      rows.push_back({fit.days[k], p, s, 0.0, 0.0, sird::effective_reproduction_number(p, s)});
    }
  }
  write(opts, "reproduction.csv", pipeline::reproduction_csv(rows));
}

void run_forecast(const CommonOptions& opts, const std::string& params_path,
                  const std::string& fit_path) {
  const auto config = resolve(opts);
  const auto weekly = pipeline::read_weekly_params_csv(params_path);
  forecast::ForecastConfig fc = pipeline::forecast_config(config);
  fc.on_progress = [](std::size_t epoch, double loss) {
    log_line("  epoch " + std::to_string(epoch) + " mse " + csv::format(loss));
  };
  const auto model = forecast::train_forecaster(weekly, fc);
  const auto predicted = forecast::forecast_params(model, weekly, config.horizon);
  write(opts, "forecast_model.json", nlohmann::json(model).dump(1) + "\n");
  write(opts, "forecast.csv", forecast::forecast_csv(predicted, weekly.size()));
  if (fit_path.empty()) {
    return;
  }
  const auto fit = pipeline::read_fit_csv(fit_path);
  if (fit.days.empty()) {
    throw UsageError(fit_path + ": no fitted days");
  }
  const auto traj = pipeline::simulate_forecast(fit.states.back(), fit.days.back(), weekly.back(),
                                                predicted, config.rk4_step);
  const double t0 = traj.times.front();
  const auto days = static_cast<std::size_t>(std::lround(traj.times.back() - t0)) + 1;
  std::vector<double> times;
  for (std::size_t d = 0; d < days; ++d) {
    times.push_back(t0 + static_cast<double>(d));
  }
  write(opts, "forecast_simulation.csv", pipeline::simulation_csv(times, traj.daily(t0, days)));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-varying SIRD parameter identification and forecasting"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string params_path;
  std::string fit_path;
  std::optional<double> horizon;

  auto* ingest = app.add_subcommand("ingest", "Convert a cumulative-count CSV to fractions");
  auto* synth = app.add_subcommand("synth", "Generate a synthetic series");
  auto* daily = app.add_subcommand("identify-daily", "Fit daily-varying parameters");
  auto* weekly = app.add_subcommand("identify-weekly", "Fit week-wise constant parameters");
  auto* simulate = app.add_subcommand("simulate", "Integrate the SIRD model with given rates");
  auto* reproduction = app.add_subcommand("reproduction", "Effective reproduction numbers");
  auto* fcst = app.add_subcommand("forecast", "Train the LSTM and forecast weekly rates");
  auto* run = app.add_subcommand("run", "Full pipeline");
  for (auto* cmd : {ingest, synth, daily, weekly, simulate, reproduction, fcst, run}) {
    add_common(cmd, opts);
  }
  simulate->add_option("--params", params_path, "Rate table (week or day column)")
      ->required()
      ->check(CLI::ExistingFile);
  simulate->add_option("--horizon", horizon, "Days to integrate");
  reproduction->add_option("--params", params_path, "Rate table (week or day column)")
      ->required()
      ->check(CLI::ExistingFile);
  reproduction->add_option("--fit", fit_path, "Fitted compartments (day,S_fit,...)")
      ->required()
      ->check(CLI::ExistingFile);
  fcst->add_option("--params", params_path, "weekly_params.csv")
      ->required()
      ->check(CLI::ExistingFile);
  fcst->add_option("--fit", fit_path, "weekly_fit.csv; enables the forecast simulation")
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  const std::string stage = app.get_subcommands().front()->get_name();
  try {
    if (ingest->parsed()) {
      run_ingest(opts);
    } else if (synth->parsed()) {
      run_synth(opts);
    } else if (daily->parsed()) {
      run_stages(opts, true, false, false);
    } else if (weekly->parsed()) {
      run_stages(opts, false, true, false);
    } else if (simulate->parsed()) {
      run_simulate(opts, params_path, horizon);
    } else if (reproduction->parsed()) {
      run_reproduction(opts, params_path, fit_path);
    } else if (fcst->parsed()) {
      run_forecast(opts, params_path, fit_path);
    } else if (run->parsed()) {
      run_stages(opts);
    }
  } catch (const pipeline::StageError& e) {
    std::cerr << "error [" << e.stage() << "]: " << e.cause() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error [" << stage << "]: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
