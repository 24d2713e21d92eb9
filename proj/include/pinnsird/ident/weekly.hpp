#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pinnsird/ident/residuals.hpp"
#include "pinnsird/neural/adam.hpp"
#include "pinnsird/neural/network.hpp"
#include "pinnsird/neural/tangent_pass.hpp"
#include "pinnsird/pipeline/timeseries.hpp"
#include "pinnsird/sird/model.hpp"

namespace pinnsird::ident {

inline constexpr std::size_t kDaysPerWeek = 7;

/// One 7-day block of the series, optionally densified by spline resampling.
/// Times are absolute day indices into the full series.
struct WeekSegment {
  std::size_t week_index = 0;
  std::vector<double> raw_times;
  std::vector<sird::SirdState> raw;
  std::vector<double> dense_times;
  std::vector<sird::SirdState> dense;
};

/// Consecutive non-overlapping 7-day blocks; a trailing partial week is
/// dropped. Throws UsageError below 7 days.
std::vector<WeekSegment> split_weeks(const pipeline::TimeSeriesData& data);

/// Evaluates a natural cubic spline per compartment at `points` uniform
/// times spanning the raw samples.
WeekSegment cubic_spline_resample(WeekSegment segment, std::size_t points);

struct WeeklyConfig {
  std::vector<int> hidden_layers{60, 60, 60, 60};
  std::size_t epochs = 20000;
  neural::AdamConfig adam{};
  std::size_t densify_points = 50;
  double ob_weight = 1.0;
  double ge_weight = 1.0;
  std::uint64_t seed = 0;
  sird::ParamTriple initial_params{0.2, 0.1, 0.05};
  bool warm_start = false;  // start week k from week k-1's solution
  unsigned threads = 1;     // weeks trained concurrently (ignored with warm_start)

  std::size_t progress_every = 0;
  std::function<void(std::size_t week, std::size_t epoch, const LossPair&)> on_progress;
};

struct WeekFit {
  std::size_t week_index = 0;
  std::uint64_t seed = 0;
  sird::ParamTriple params;
  LossPair initial_loss;
  LossPair final_loss;
  std::vector<double> raw_times;
  std::vector<sird::SirdState> fitted;  // network compartments at the raw days
  std::vector<sird::SirdState> rates;   // their derivatives, per day
  neural::NetworkParams net;
  std::array<double, 3> latents{};      // pre-softplus beta, gamma, mu
  double start_time = 0.0;
  double time_scale = 1.0;              // network input is (t - start_time) / time_scale
};

struct WeeklyParams {
  std::vector<sird::ParamTriple> params;
  std::vector<LossPair> losses;
  std::vector<WeekFit> fits;

  std::size_t weeks() const noexcept { return params.size(); }
  /// Piecewise-constant rates over [0, 7 * weeks).
  sird::ParamTrajectory trajectory() const;
  /// Fitted compartments for every day covered by a full week.
  std::vector<sird::SirdState> fitted() const;
};

/// Forward map from trainable latents to strictly positive rates.
sird::ParamTriple positive_rates(const std::array<double, 3>& latents);
std::array<double, 3> latents_for(const sird::ParamTriple& rates);

/// Squared-error weekly objective over a densified segment; network
/// outputs are S, I, R, D and the rates come from three latent scalars.
class WeeklyObjective {
 public:
  WeeklyObjective(const WeekSegment& segment, const WeeklyConfig& config);

  /// Unweighted (OB, GE); gradients of the weighted total are written into
  /// grad_net / grad_latents when non-empty.
  LossPair evaluate(const neural::NetworkParams& net, const std::array<double, 3>& latents,
                    std::span<double> grad_net, std::span<double> grad_latents);

  double start_time() const noexcept { return start_; }
  double time_scale() const noexcept { return scale_; }

 private:
  std::vector<sird::SirdState> data_;
  std::vector<double> inputs_;
  double start_;
  double scale_;
  double ob_weight_;
  double ge_weight_;
  neural::TangentPass pass_;
  Eigen::MatrixXd g_y_;
  Eigen::MatrixXd g_dy_;
};

/// Trains one week. `warm` seeds the network and latents instead of a fresh
/// initialisation. Throws TrainingDiverged on a non-finite loss.
WeekFit identify_week(const WeekSegment& segment, const WeeklyConfig& config, std::uint64_t seed,
                      const WeekFit* warm = nullptr);

/// All full weeks of the series, ordered by week. Per-week seeds are
/// derive_seed(config.seed, week), so results do not depend on threading.
WeeklyParams identify_weekly(const pipeline::TimeSeriesData& data, const WeeklyConfig& config);

}  // namespace pinnsird::ident
