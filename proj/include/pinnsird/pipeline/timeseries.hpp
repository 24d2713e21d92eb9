#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pinnsird/sird/model.hpp"

namespace pinnsird::pipeline {

/// Consecutive daily compartment fractions for one region.
struct TimeSeriesData {
  std::string region;
  double population = 1.0;
  std::vector<std::chrono::sys_days> dates;
  std::vector<sird::SirdState> states;

  std::size_t size() const noexcept { return states.size(); }

  /// Throws UsageError/DomainError if lengths differ, dates are not
  /// consecutive, or a day leaves the simplex.
  void validate() const;

  /// Copy restricted to days [first, first + count).
  TimeSeriesData slice(std::size_t first, std::size_t count) const;
};

/// Reads `date,cumulative_positive,cumulative_recovered,cumulative_deaths`
/// and converts counts to fractions of `population`:
///   D = deaths/N, R = recovered/N, I = (positive - recovered - deaths)/N,
///   S = 1 - I - R - D.
/// Missing calendar days and empty cells are forward-filled; each fill is
/// reported through `warnings` when given.
TimeSeriesData ingest_csv(const std::filesystem::path& path, double population,
                          std::vector<std::string>* warnings = nullptr,
                          std::string region = {});

/// Inverse of ingest_csv: cumulative counts rebuilt from the fractions.
std::string to_cumulative_csv(const TimeSeriesData& data);

/// `date,S,I,R,D` fraction table.
std::string to_fraction_csv(const TimeSeriesData& data);
TimeSeriesData read_fraction_csv(const std::filesystem::path& path, std::string region = {});

struct SyntheticSpec {
  sird::ParamTrajectory params;
  sird::SirdState initial;
  std::size_t days = 60;
  double noise = 0.0;  // relative std-dev of multiplicative Gaussian noise
  std::uint64_t seed = 0;
  double step = 0.1;
  std::chrono::sys_days start_date = std::chrono::sys_days{std::chrono::year{2020} / 1 / 1};
};

/// Daily samples of an RK4 solution, optionally perturbed by multiplicative
/// noise and renormalised onto the simplex.
TimeSeriesData generate_synthetic(const SyntheticSpec& spec);

struct RelativeError {
  std::vector<double> values;
  std::vector<bool> guarded;  // |data| fell below the guard on that day
};

inline constexpr double kRelativeErrorGuard = 1e-8;

/// |pred - data| / max(|data|, 1e-8) per entry.
RelativeError relative_error(const std::vector<double>& pred, const std::vector<double>& data);

/// Relative error per compartment (index 0..3 = S, I, R, D).
std::array<RelativeError, 4> relative_error(const std::vector<sird::SirdState>& pred,
                                            const std::vector<sird::SirdState>& data);

}  // namespace pinnsird::pipeline
