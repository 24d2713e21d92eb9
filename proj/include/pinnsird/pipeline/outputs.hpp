#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "pinnsird/ident/daily.hpp"
#include "pinnsird/ident/weekly.hpp"
#include "pinnsird/pipeline/timeseries.hpp"
#include "pinnsird/sird/model.hpp"
#include "pinnsird/sird/rk4.hpp"

namespace pinnsird::pipeline {

/// `day,S_fit,I_fit,R_fit,D_fit,dI_fit,beta,gamma,mu`
std::string daily_fit_csv(const ident::DailyFitResult& fit);

/// `week,beta,gamma,mu,ob_loss,ge_loss`
std::string weekly_params_csv(const ident::WeeklyParams& weekly);

/// `day,S_fit,I_fit,R_fit,D_fit,dI_fit` over every day covered by a fitted week.
std::string weekly_fit_csv(const ident::WeeklyParams& weekly);

/// `t,S,I,R,D` for the given times/states.
std::string simulation_csv(std::span<const double> times, std::span<const sird::SirdState> states);

struct ReproductionRow {
  double t = 0.0;
  sird::ParamTriple params;
  double s_fit = 0.0;
  double i_fit = 0.0;
  double di_fit = 0.0;  // fitted dI/dt on the same day
  double re = 0.0;
};

/// Daily R_e from the fitted S and the daily rates.
std::vector<ReproductionRow> daily_reproduction(const ident::DailyFitResult& fit);
/// One R_e per week at day 7k+3, using that day's fitted S.
std::vector<ReproductionRow> weekly_reproduction(const ident::WeeklyParams& weekly);

/// `t,beta,gamma,mu,Re`
std::string reproduction_csv(std::span<const ReproductionRow> rows);

/// Days with fitted I above `min_infected` on which sign(dI/dt) agrees with
/// sign(R_e - 1). `decisive` counts only days with |R_e - 1| > margin.
struct ThresholdAgreement {
  std::size_t checked = 0;
  std::size_t agree = 0;
  std::size_t decisive = 0;
  std::size_t decisive_agree = 0;
};
ThresholdAgreement threshold_agreement(std::span<const ReproductionRow> rows,
                                       double min_infected = 1e-6, double margin = 0.05);

/// `day,S,I,R,D,guarded` where guarded lists the compartments (e.g. "R;D")
/// whose data fell below the relative-error guard on that day.
std::string relative_error_csv(std::size_t first_day, const std::array<RelativeError, 4>& err);

/// Median and maximum of every day x compartment relative error from day
/// `from` on.
struct ErrorSummary {
  double median = 0.0;
  double max = 0.0;
  std::array<double, 4> max_per_compartment{};
  std::size_t guarded = 0;
};
ErrorSummary summarize(const std::array<RelativeError, 4>& err, std::size_t from = 0);

/// Reads a rate table. With a `week` column the rates are piecewise constant
/// over [7k, 7k+7); with a `day` or `t` column they are piecewise linear.
sird::ParamTrajectory read_params_csv(const std::filesystem::path& path);

/// Parameter rows of a week,beta,gamma,mu table with consecutive weeks.
std::vector<sird::ParamTriple> read_weekly_params_csv(const std::filesystem::path& path);

struct FittedSeries {
  std::vector<double> days;
  std::vector<sird::SirdState> states;
};
/// Reads the `day,S_fit,I_fit,R_fit,D_fit` columns of a fit table.
FittedSeries read_fit_csv(const std::filesystem::path& path);

/// Rates on a daily grid: `t,beta,gamma,mu`.
std::string params_csv(const sird::ParamTrajectory& params, std::size_t days);

}  // namespace pinnsird::pipeline
