#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <random>

#include "pinnsird/errors.hpp"
#include "pinnsird/forecast/forecaster.hpp"

using namespace pinnsird;
using namespace pinnsird::forecast;
using sird::ParamTriple;

namespace {

ForecastConfig small_config(std::size_t epochs) {
  ForecastConfig cfg;
  cfg.layers = 2;
  cfg.hidden_size = 16;
  cfg.epochs = epochs;
  cfg.adam.learning_rate = 5e-3;
  cfg.seed = 6;
  return cfg;
}

std::vector<ParamTriple> trend(std::size_t n) {
  std::vector<ParamTriple> s;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = static_cast<double>(k);
    s.push_back({0.1 + 0.01 * x, 0.2 - 0.005 * x, 0.01 + 0.001 * x});
  }
  return s;
}

}  // namespace

TEST(Normalize, MinMaxExample) {
  const std::vector<ParamTriple> s{{0.1, 1, 5}, {0.2, 2, 4}, {0.3, 3, 3}};
  const auto n = normalize(s);
  EXPECT_NEAR(n.values[0][0], 0.0, 1e-15);
  EXPECT_NEAR(n.values[1][0], 0.5, 1e-12);
  EXPECT_NEAR(n.values[2][0], 1.0, 1e-15);
  EXPECT_NEAR(n.values[0][2], 1.0, 1e-15);
  EXPECT_FALSE(n.normalizer.any_constant());
}

TEST(Normalize, ConstantFeatureMapsToOneHalfWithFlag) {
  const std::vector<ParamTriple> s{{0.2, 0.1, 0.01}, {0.2, 0.3, 0.01}};
  const auto n = normalize(s);
  EXPECT_EQ(n.values[0][0], 0.5);
  EXPECT_EQ(n.values[1][0], 0.5);
  EXPECT_TRUE(n.normalizer.constant[0]);
  EXPECT_FALSE(n.normalizer.constant[1]);
  EXPECT_TRUE(n.normalizer.any_constant());
  EXPECT_EQ(denormalize(n.values, n.normalizer)[1].beta, 0.2);
}

TEST(NormalizeProperty, RoundTripIsIdentity) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.001, 0.9);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<ParamTriple> s(10);
    for (auto& p : s) {
      p = {u(rng), u(rng), u(rng)};
    }
    const auto n = normalize(s);
    const auto back = denormalize(n.values, n.normalizer);
    for (std::size_t i = 0; i < s.size(); ++i) {
      EXPECT_NEAR(back[i].beta, s[i].beta, 1e-12);
      EXPECT_NEAR(back[i].gamma, s[i].gamma, 1e-12);
      EXPECT_NEAR(back[i].mu, s[i].mu, 1e-12);
    }
  }
}

TEST(Normalize, NeedsTwoPoints) {
  EXPECT_THROW(normalize(std::vector<ParamTriple>{{0.1, 0.1, 0.1}}), UsageError);
}

TEST(MakeWindows, SlidingWindowsOfThree) {
  std::vector<Feature> s;
  for (int k = 0; k < 5; ++k) {
    s.push_back({double(k), 10.0 + k, 20.0 + k});
  }
  const auto w = make_windows(s);
  ASSERT_EQ(w.samples.size(), 2u);
  EXPECT_EQ(w.samples[0].inputs, (std::vector<Feature>{s[0], s[1], s[2]}));
  EXPECT_EQ(w.samples[0].target, s[3]);
  EXPECT_EQ(w.samples[1].inputs, (std::vector<Feature>{s[1], s[2], s[3]}));
  EXPECT_EQ(w.samples[1].target, s[4]);
  EXPECT_EQ(make_windows(std::span(s).first(4)).samples.size(), 1u);
  EXPECT_THROW(make_windows(std::span(s).first(3)), UsageError);
}

TEST(MakeWindowsProperty, TargetsFeedTheNextWindow) {
  std::vector<Feature> s;
  for (int k = 0; k < 15; ++k) {
    s.push_back({std::sin(k), std::cos(k), 0.1 * k});
  }
  const auto w = make_windows(s);
  EXPECT_EQ(w.samples.size(), s.size() - 3);
  for (std::size_t k = 0; k + 1 < w.samples.size(); ++k) {
    EXPECT_EQ(w.samples[k].target, w.samples[k + 1].inputs.back());
  }
  const auto batch = to_batch(w);
  ASSERT_EQ(batch.steps.size(), 3u);
  EXPECT_EQ(batch.targets.cols(), 12);
  EXPECT_EQ(batch.steps[2](1, 4), s[6][1]);
}

TEST(TrainForecaster, ConstantSeriesForecastsTheConstant) {
  const std::vector<ParamTriple> s(10, ParamTriple{0.25, 0.1, 0.01});
  const auto model = train_forecaster(s, small_config(50));
  const auto f = forecast_params(model, s, 1);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_NEAR(f[0].beta, 0.25, 0.02);
  EXPECT_NEAR(f[0].gamma, 0.1, 0.02);
  EXPECT_NEAR(f[0].mu, 0.01, 0.02);
}

TEST(TrainForecaster, LinearTrendIsContinued) {
  const auto all = trend(13);
  const std::span<const ParamTriple> train(all.data(), 12);
  ForecastTrainingReport report;
  const auto model = train_forecaster(train, small_config(800), &report);
  EXPECT_LT(report.final_loss, report.initial_loss);
  EXPECT_EQ(report.samples, 9u);
  const auto next = forecast_params(model, train, 1)[0];
  EXPECT_NEAR(next.beta, all[12].beta, 0.1 * all[12].beta);
  EXPECT_NEAR(next.gamma, all[12].gamma, 0.1 * all[12].gamma);
  EXPECT_NEAR(next.mu, all[12].mu, 0.1 * all[12].mu);
}

TEST(ForecastParams, HorizonFourGivesFourPositiveTriplesDeterministically) {
  const auto s = trend(10);
  const auto model = train_forecaster(s, small_config(100));
  const auto a = forecast_params(model, s, 4);
  const auto b = forecast_params(model, s, 4);
  ASSERT_EQ(a.size(), 4u);
  EXPECT_EQ(a, b);
  for (const auto& p : a) {
    EXPECT_GE(p.beta, kForecastFloor);
    EXPECT_GE(p.gamma, kForecastFloor);
    EXPECT_GE(p.mu, kForecastFloor);
  }
  EXPECT_THROW(forecast_params(model, std::span(s).first(2), 4), UsageError);
}

TEST(ForecastParams, FloorsNonPositivePredictions) {
  auto model = train_forecaster(trend(10), small_config(5));
  model.stack.head_weight.setZero();
  model.stack.head_bias.setConstant(-50.0);
  const auto f = forecast_params(model, trend(10), 2);
  for (const auto& p : f) {
    EXPECT_EQ(p.beta, kForecastFloor);
    EXPECT_EQ(p.mu, kForecastFloor);
  }
}

TEST(TrainForecaster, DeterministicGivenSeed) {
  const auto s = trend(10);
  const auto a = train_forecaster(s, small_config(30));
  const auto b = train_forecaster(s, small_config(30));
  EXPECT_EQ(pack_parameters(a.stack), pack_parameters(b.stack));
}

TEST(TrainForecaster, RejectsTooFewPoints) {
  EXPECT_THROW(train_forecaster(trend(7), small_config(5)), UsageError);
}

TEST(ForecastModel, CheckpointRoundTrip) {
  const auto s = trend(10);
  const auto model = train_forecaster(s, small_config(20));
  const auto path = std::filesystem::temp_directory_path() / "pinnsird_forecast_model.json";
  save_forecast_model(model, path);
  const auto back = load_forecast_model(path);
  std::filesystem::remove(path);
  EXPECT_EQ(back.window, model.window);
  EXPECT_EQ(back.normalizer.min, model.normalizer.min);
  EXPECT_EQ(forecast_params(back, s, 4), forecast_params(model, s, 4));
}

TEST(ForecastCsv, NumbersWeeksFromTheFirst) {
  const std::vector<ParamTriple> f{{0.3, 0.1, 0.01}, {0.25, 0.1, 0.02}};
  EXPECT_EQ(forecast_csv(f, 8), "week,beta,gamma,mu\n8,0.3,0.1,0.01\n9,0.25,0.1,0.02\n");
}
