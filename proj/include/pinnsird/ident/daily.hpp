#pragma once

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

struct DailyConfig {
  std::vector<int> hidden_layers{60, 60, 60, 60};
  std::size_t epochs = 50000;
  neural::AdamConfig adam{};
  int collocation_per_day = 4;  // interior points between consecutive data days
  double ob_weight = 1.0;
  double ge_weight = 1.0;
  std::uint64_t seed = 0;

  std::size_t progress_every = 0;
  std::function<void(std::size_t epoch, const LossPair&)> on_progress;
};

struct DailyFitResult {
  std::vector<double> days;                // 0, 1, ..., n-1
  std::vector<sird::SirdState> fitted;     // network compartments at each day
  std::vector<sird::SirdState> rates;      // their time derivatives, per day
  sird::ParamTrajectory params;            // piecewise-linear over the days
  LossPair initial_loss;
  LossPair final_loss;
  std::size_t epochs_run = 0;
  neural::NetworkParams net;
  double time_scale = 1.0;                 // network input is day / time_scale
};

/// Mean over days of |dS| + |dI| + |dR| + |dD|.
double ob_loss_daily(std::span<const sird::SirdState> pred, std::span<const sird::SirdState> data);

/// Mean over samples of |R1| + |R2| + |R3| + |R4|.
double ge_loss_daily(std::span<const PinnSample> samples);

/// Residual loss of a 7-output daily network (S, I, R, D, beta, gamma, mu)
/// at the given times (days); the network sees day / time_scale.
double ge_loss_daily(const neural::NetworkParams& net, std::span<const double> times,
                     double time_scale);

/// Data days 0..days-1 plus `per_day` uniform interior points in each gap,
/// ordered so that data day i sits at index i * (per_day + 1).
std::vector<double> daily_collocation_times(std::size_t days, int per_day);

/// Network compartments, rates (per day) and rates-of-change at `times`.
std::vector<PinnSample> evaluate_daily_net(const neural::NetworkParams& net,
                                           std::span<const double> times, double time_scale);

/// Training objective ob_weight * OB + ge_weight * GE with its exact gradient.
class DailyObjective {
 public:
  DailyObjective(std::vector<sird::SirdState> data, const DailyConfig& config);

  /// Returns the unweighted (OB, GE) pair; writes the gradient of the
  /// weighted total into `grad` when it is non-empty.
  LossPair evaluate(const neural::NetworkParams& net, std::span<double> grad);

  const std::vector<double>& collocation_times() const noexcept { return times_; }
  double time_scale() const noexcept { return time_scale_; }

 private:
  std::vector<sird::SirdState> data_;
  std::vector<double> times_;
  std::vector<double> inputs_;
  std::size_t stride_;
  double time_scale_;
  double ob_weight_;
  double ge_weight_;
  neural::TangentPass pass_;
  Eigen::MatrixXd g_y_;
  Eigen::MatrixXd g_dy_;
};

/// Trains a [1, hidden..., 7] network on the whole series. Throws
/// UsageError for fewer than 14 days and TrainingDiverged (with the epoch)
/// if the loss stops being finite.
DailyFitResult identify_daily(const pipeline::TimeSeriesData& data, const DailyConfig& config);

}  // namespace pinnsird::ident
