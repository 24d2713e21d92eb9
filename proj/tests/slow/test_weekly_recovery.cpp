#include <gtest/gtest.h>

#include "pinnsird/ident/weekly.hpp"
#include "pinnsird/sird/rk4.hpp"

using namespace pinnsird;

namespace {

pipeline::TimeSeriesData series(const sird::ParamTrajectory& params, std::size_t days,
                                const sird::SirdState& initial = {0.94, 0.05, 0.008, 0.002}) {
  pipeline::SyntheticSpec spec;
  spec.params = params;
  spec.initial = initial;
  spec.days = days;
  return pipeline::generate_synthetic(spec);
}

void expect_relative(const sird::ParamTriple& got, const sird::ParamTriple& want, double tol) {
  EXPECT_NEAR(got.beta, want.beta, tol * want.beta);
  EXPECT_NEAR(got.gamma, want.gamma, tol * want.gamma);
  EXPECT_NEAR(got.mu, want.mu, tol * want.mu);
}

}  // namespace

TEST(WeeklyRecovery, SingleWeekWithinTenPercent) {
  const sird::ParamTriple truth{0.3, 0.1, 0.01};
  const auto data = series(sird::ParamTrajectory::constant(truth, 0, 14), 14);
  const auto seg = ident::cubic_spline_resample(ident::split_weeks(data.slice(0, 7))[0], 50);
  const auto fit = ident::identify_week(seg, ident::WeeklyConfig{}, 1);
  expect_relative(fit.params, truth, 0.10);
  EXPECT_LT(fit.final_loss.total(), 1e-6);
}

TEST(WeeklyRecovery, FlatDataGivesVanishingRates) {
  pipeline::TimeSeriesData data;
  for (int d = 0; d < 7; ++d) {
    data.dates.push_back(std::chrono::sys_days{std::chrono::year{2020} / 1 / 1} + std::chrono::days{d});
    data.states.push_back({0.9, 0.05, 0.04, 0.01});
  }
  const auto seg = ident::cubic_spline_resample(ident::split_weeks(data)[0], 50);
  // the rates decay slowly once the flows vanish; twice the default budget
  ident::WeeklyConfig cfg;
  cfg.epochs = 40000;
  const auto fit = ident::identify_week(seg, cfg, 2);
  EXPECT_LT(fit.params.beta, 1e-3);
  EXPECT_LT(fit.params.gamma, 1e-3);
  EXPECT_LT(fit.params.mu, 1e-3);
}

TEST(WeeklyRecovery, StepInContactRateIsResolved) {
  const auto params = sird::ParamTrajectory::piecewise_constant(
      {0, 7, 14, 21}, {{0.4, 0.1, 0.01}, {0.4, 0.1, 0.01}, {0.2, 0.1, 0.01}, {0.2, 0.1, 0.01}}, 28);
  const auto data = series(params, 28);
  const auto r = ident::identify_weekly(data, ident::WeeklyConfig{});
  ASSERT_EQ(r.weeks(), 4u);
  EXPECT_NEAR(r.params[1].beta, 0.4, 0.15 * 0.4);
  EXPECT_NEAR(r.params[2].beta, 0.2, 0.15 * 0.2);
  EXPECT_NEAR(r.params[3].beta, 0.2, 0.15 * 0.2);

  // piecewise-constant reassembly through the solver
  const auto sim = sird::rk4_solve(data.states[0], r.trajectory(), 0.1, 27).daily(0, 28);
  const auto err = pipeline::relative_error(sim, data.states);
  for (const auto& c : err) {
    EXPECT_LT(*std::max_element(c.values.begin(), c.values.end()), 0.05);
  }
}

TEST(WeeklyRecovery, IdenticalWeeksAgree) {
  const auto week = series(sird::ParamTrajectory::constant({0.3, 0.1, 0.01}, 0, 13), 14).slice(0, 7);
  pipeline::TimeSeriesData data;
  for (int rep = 0; rep < 3; ++rep) {
    for (std::size_t d = 0; d < 7; ++d) {
      data.dates.push_back(week.dates[0] + std::chrono::days{static_cast<int>(7 * rep + d)});
      data.states.push_back(week.states[d]);
    }
  }
  const auto r = ident::identify_weekly(data, ident::WeeklyConfig{});
  ASSERT_EQ(r.weeks(), 3u);
  for (std::size_t w = 1; w < 3; ++w) {
    expect_relative(r.params[w], r.params[0], 0.05);
  }
}

TEST(WeeklyRecovery, DensificationDoesNotChangeTheAnswer) {
  const auto data = series(sird::ParamTrajectory::constant({0.3, 0.1, 0.01}, 0, 13), 14);
  const auto raw = ident::split_weeks(data)[0];
  const auto coarse = ident::identify_week(ident::cubic_spline_resample(raw, 20), ident::WeeklyConfig{}, 5);
  const auto fine = ident::identify_week(ident::cubic_spline_resample(raw, 100), ident::WeeklyConfig{}, 5);
  expect_relative(coarse.params, fine.params, 0.05);
}
