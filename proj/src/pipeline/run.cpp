#include "pinnsird/pipeline/run.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iterator>

#include "pinnsird/errors.hpp"
#include "pinnsird/ident/daily.hpp"
#include "pinnsird/ident/weekly.hpp"
#include "pinnsird/neural/network.hpp"
#include "pinnsird/pipeline/csv.hpp"
#include "pinnsird/pipeline/outputs.hpp"

namespace pinnsird::pipeline {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string now_utc() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_bytes(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw UsageError("cannot open " + path.string());
  }
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

json triple_json(const sird::ParamTriple& p) {
  return {{"beta", p.beta}, {"gamma", p.gamma}, {"mu", p.mu}};
}

json loss_json(const ident::LossPair& l) { return {{"ob", l.ob}, {"ge", l.ge}}; }

json error_json(const ErrorSummary& s) {
  return {{"median", s.median},
          {"max", s.max},
          {"max_per_compartment", s.max_per_compartment},
          {"guarded_entries", s.guarded}};
}

json agreement_json(const ThresholdAgreement& a) {
  return {{"checked", a.checked},
          {"agree", a.agree},
          {"decisive", a.decisive},
          {"decisive_agree", a.decisive_agree}};
}

// Days compared against the data after the early transient.
constexpr std::size_t kSettledFrom = 14;

}  // namespace

const StageRecord* RunManifest::stage(std::string_view name) const {
  for (const auto& s : stages) {
    if (s.name == name) {
      return &s;
    }
  }
  return nullptr;
}

json RunManifest::to_json() const {
  json stage_list = json::array();
  for (const auto& s : stages) {
    stage_list.push_back(
        {{"name", s.name}, {"status", s.status}, {"seconds", s.seconds}, {"summary", s.summary}});
  }
  return {{"status", status},
          {"error", error},
          {"started", started},
          {"finished", finished},
          {"input", {{"source", input_source}, {"sha256", input_checksum}}},
          {"seeds",
           {{"global", config.value("seed", std::uint64_t{0})},
            {"synth", seeds.synth},
            {"daily", seeds.daily},
            {"weekly", seeds.weekly},
            {"forecast", seeds.forecast}}},
          {"config", config},
          {"stages", stage_list},
          {"outputs", outputs}};
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < length; ++k) {
    out += kHex[digest[k] >> 4];
    out += kHex[digest[k] & 0xF];
  }
  return out;
}

InputData load_input(const PipelineConfig& config) {
  config.validate();
  InputData in;
  switch (config.data_format) {
    case DataFormat::Cumulative:
      in.source = config.data_path;
      in.checksum = sha256_hex(read_bytes(config.data_path));
      in.data = ingest_csv(config.data_path, config.population, &in.warnings, config.region);
      break;
    case DataFormat::Fractions:
      in.source = config.data_path;
      in.checksum = sha256_hex(read_bytes(config.data_path));
      in.data = read_fraction_csv(config.data_path, config.region);
      in.data.population = config.population;
      break;
    case DataFormat::Synthetic:
      in.source = "synthetic";
      in.data = generate_synthetic(synthetic_spec(config));
      in.data.region = config.region;
      in.checksum = sha256_hex(to_fraction_csv(in.data));
      break;
  }
  return in;
}

sird::Trajectory simulate_forecast(const sird::SirdState& last_state, double last_day,
                                   const sird::ParamTriple& last_params,
                                   std::span<const sird::ParamTriple> forecast, double step) {
  if (forecast.empty()) {
    throw UsageError("forecast simulation needs at least one forecast week");
  }
  const double week = static_cast<double>(ident::kDaysPerWeek);
  const double boundary = std::floor(last_day / week + 1e-9) * week + week;
  std::vector<double> starts;
  std::vector<sird::ParamTriple> values;
  if (boundary - last_day > 1e-9) {
    starts.push_back(last_day);
    values.push_back(last_params);
  }
  for (std::size_t k = 0; k < forecast.size(); ++k) {
    starts.push_back(boundary + week * static_cast<double>(k));
    values.push_back(forecast[k]);
  }
  const double end = boundary + week * static_cast<double>(forecast.size());
  const auto params = sird::ParamTrajectory::piecewise_constant(starts, values, end);
  auto start = last_state.as_array();
  const double total = last_state.sum();
  if (!(total > 0.0) || *std::min_element(start.begin(), start.end()) < 0.0) {
    throw DomainError("forecast start state is not a non-negative composition");
  }
  for (double& x : start) {
    x /= total;
  }
  return sird::rk4_solve(sird::SirdState::from_array(start), params, step, end - last_day,
                         last_day);
}

RunManifest run_pipeline(const PipelineConfig& config, const fs::path& out_dir,
                         const std::function<void(const std::string&)>& log) {
  config.validate();
  RunManifest m;
  m.config = config;
  m.seeds = stage_seeds(config.seed);
  m.started = now_utc();
  fs::create_directories(out_dir);

  auto write_manifest = [&] {
    csv::write_file(out_dir / "manifest.json", m.to_json().dump(2) + "\n");
  };
  auto write = [&](const std::string& name, const std::string& text) {
    csv::write_file(out_dir / name, text);
    m.outputs.push_back(name);
  };
  auto stage = [&](const std::string& name, auto&& body) {
    if (log) {
      log("stage " + name);
    }
    const auto t0 = std::chrono::steady_clock::now();
    StageRecord record{name, "ok", 0.0, json::object()};
    try {
      record.summary = body();
    } catch (const std::exception& e) {
      record.status = "failed";
      record.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      m.stages.push_back(record);
      m.status = "failed";
      m.error = name + ": " + e.what();
      m.finished = now_utc();
      write_manifest();
      throw StageError(name, e.what());
    }
    record.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    m.stages.push_back(std::move(record));
  };

  InputData input;
  stage("ingest", [&] {
    input = load_input(config);
    m.input_source = input.source;
    m.input_checksum = input.checksum;
    write("data.csv", to_fraction_csv(input.data));
    if (config.data_format == DataFormat::Synthetic) {
      write("synthetic_params.csv", params_csv(synthetic_spec(config).params, input.data.size()));
    }
    return json{{"region", input.data.region},
                {"population", input.data.population},
                {"days", input.data.size()},
                {"first_date", csv::format_date(input.data.dates.front())},
                {"last_date", csv::format_date(input.data.dates.back())},
                {"warnings", input.warnings}};
  });
  const TimeSeriesData& data = input.data;

  if (config.run_daily) {
    ident::DailyFitResult fit;
    stage("identify-daily", [&] {
      auto cfg = daily_config(config);
      if (log) {
        cfg.on_progress = [&log](std::size_t epoch, const ident::LossPair& l) {
          log("  epoch " + std::to_string(epoch) + " ob " + csv::format(l.ob) + " ge " +
              csv::format(l.ge));
        };
      }
      fit = ident::identify_daily(data, cfg);
      write("daily_fit.csv", daily_fit_csv(fit));
      write("daily_network.json", json(fit.net).dump(1) + "\n");
      return json{{"seed", fit.net.seed()},
                  {"epochs", fit.epochs_run},
                  {"initial_loss", loss_json(fit.initial_loss)},
                  {"final_loss", loss_json(fit.final_loss)},
                  {"time_scale", fit.time_scale}};
    });
    stage("verify-daily", [&] {
      const double horizon = static_cast<double>(data.size() - 1);
      const auto sim = sird::rk4_solve(data.states.front(), fit.params, config.rk4_step, horizon)
                           .daily(0.0, data.size());
      write("daily_simulation.csv", simulation_csv(fit.days, sim));
      const auto sim_err = relative_error(sim, data.states);
      const auto fit_err = relative_error(fit.fitted, data.states);
      write("daily_simulation_error.csv", relative_error_csv(0, sim_err));
      write("daily_fit_error.csv", relative_error_csv(0, fit_err));
      return json{{"simulation_error", error_json(summarize(sim_err))},
                  {"simulation_error_settled", error_json(summarize(sim_err, kSettledFrom))},
                  {"fit_error", error_json(summarize(fit_err))}};
    });
    stage("reproduction-daily", [&] {
      const auto rows = daily_reproduction(fit);
      write("daily_reproduction.csv", reproduction_csv(rows));
      return json{{"threshold_agreement", agreement_json(threshold_agreement(rows))}};
    });
  }

  ident::WeeklyParams weekly;
  if (config.run_weekly) {
    stage("identify-weekly", [&] {
      auto cfg = weekly_config(config);
      if (log) {
        cfg.on_progress = [&log](std::size_t week, std::size_t epoch, const ident::LossPair& l) {
          log("  week " + std::to_string(week) + " epoch " + std::to_string(epoch) + " ob " +
              csv::format(l.ob) + " ge " + csv::format(l.ge));
        };
      }
      weekly = ident::identify_weekly(data, cfg);
      write("weekly_params.csv", weekly_params_csv(weekly));
      write("weekly_fit.csv", weekly_fit_csv(weekly));
      json nets = json::array();
      json weeks = json::array();
      for (const auto& f : weekly.fits) {
        nets.push_back({{"week", f.week_index},
                        {"latents", f.latents},
                        {"start_time", f.start_time},
                        {"time_scale", f.time_scale},
                        {"network", f.net}});
        weeks.push_back({{"week", f.week_index},
                         {"seed", f.seed},
                         {"params", triple_json(f.params)},
                         {"initial_loss", loss_json(f.initial_loss)},
                         {"final_loss", loss_json(f.final_loss)}});
      }
      write("weekly_networks.json", nets.dump(1) + "\n");
      return json{{"weeks", weeks}};
    });
    stage("verify-weekly", [&] {
      const std::size_t days = weekly.weeks() * ident::kDaysPerWeek;
      const auto covered = data.slice(0, days);
      const auto sim = sird::rk4_solve(covered.states.front(), weekly.trajectory(), config.rk4_step,
                                       static_cast<double>(days - 1))
                           .daily(0.0, days);
      std::vector<double> times;
      for (std::size_t d = 0; d < days; ++d) {
        times.push_back(static_cast<double>(d));
      }
      write("weekly_simulation.csv", simulation_csv(times, sim));
      const auto sim_err = relative_error(sim, covered.states);
      const auto fit_err = relative_error(weekly.fitted(), covered.states);
      write("weekly_simulation_error.csv", relative_error_csv(0, sim_err));
      write("weekly_fit_error.csv", relative_error_csv(0, fit_err));
      return json{{"simulation_error", error_json(summarize(sim_err))},
                  {"simulation_error_settled", error_json(summarize(sim_err, kSettledFrom))},
                  {"fit_error", error_json(summarize(fit_err))}};
    });
    stage("reproduction-weekly", [&] {
      const auto rows = weekly_reproduction(weekly);
      write("weekly_reproduction.csv", reproduction_csv(rows));
      return json{{"threshold_agreement", agreement_json(threshold_agreement(rows))}};
    });
  }

  if (config.run_forecast) {
    std::vector<sird::ParamTriple> predicted;
    stage("forecast", [&] {
      forecast::ForecastTrainingReport report;
      auto cfg = forecast_config(config);
      if (log) {
        cfg.on_progress = [&log](std::size_t epoch, double loss) {
          log("  epoch " + std::to_string(epoch) + " mse " + csv::format(loss));
        };
      }
      const auto model = forecast::train_forecaster(weekly, cfg, &report);
      predicted = forecast::forecast_params(model, weekly.params, config.horizon);
      write("forecast_model.json", json(model).dump(1) + "\n");
      write("forecast.csv", forecast::forecast_csv(predicted, weekly.weeks()));
      json weeks = json::array();
      for (const auto& p : predicted) {
        weeks.push_back(triple_json(p));
      }
      return json{{"samples", report.samples},
                  {"initial_loss", report.initial_loss},
                  {"final_loss", report.final_loss},
                  {"constant_features", model.normalizer.constant},
                  {"forecast", weeks}};
    });
    stage("forecast-simulation", [&] {
      const auto& last = weekly.fits.back();
      const auto traj = simulate_forecast(last.fitted.back(), last.raw_times.back(),
                                          weekly.params.back(), predicted, config.rk4_step);
      const auto days = static_cast<std::size_t>(
          std::lround(traj.times.back() - traj.times.front())) + 1;
      const auto states = traj.daily(traj.times.front(), days);
      std::vector<double> times;
      for (std::size_t d = 0; d < days; ++d) {
        times.push_back(traj.times.front() + static_cast<double>(d));
      }
      write("forecast_simulation.csv", simulation_csv(times, states));
      return json{{"start_day", times.front()},
                  {"end_day", times.back()},
                  {"final_state", states.back().as_array()}};
    });
  }

  m.status = "ok";
  m.finished = now_utc();
  m.outputs.push_back("manifest.json");
  write_manifest();
  return m;
}

}  // namespace pinnsird::pipeline
