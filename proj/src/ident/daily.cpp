#include "pinnsird/ident/daily.hpp"

#include <algorithm>
#include <cmath>

#include "pinnsird/errors.hpp"
#include "pinnsird/neural/tangent_pass.hpp"

namespace pinnsird::ident {

namespace {

constexpr int kDailyOutputs = 7;

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

std::vector<int> layer_sizes(const std::vector<int>& hidden, int outputs) {
  std::vector<int> sizes{1};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(outputs);
  return sizes;
}

}  // namespace

double ob_loss_daily(std::span<const sird::SirdState> pred,
                     std::span<const sird::SirdState> data) {
  if (pred.size() != data.size() || pred.empty()) {
    throw UsageError("ob_loss_daily: prediction and data must have equal, non-zero length");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    sum += std::fabs(pred[i].S - data[i].S) + std::fabs(pred[i].I - data[i].I) +
           std::fabs(pred[i].R - data[i].R) + std::fabs(pred[i].D - data[i].D);
  }
  return sum / static_cast<double>(pred.size());
}

double ge_loss_daily(std::span<const PinnSample> samples) {
  if (samples.empty()) {
    throw UsageError("ge_loss_daily: no collocation samples");
  }
  double sum = 0.0;
  for (const auto& s : samples) {
    for (double r : sird_residuals(s)) {
      sum += std::fabs(r);
    }
  }
  return sum / static_cast<double>(samples.size());
}

double ge_loss_daily(const neural::NetworkParams& net, std::span<const double> times,
                     double time_scale) {
  const auto samples = evaluate_daily_net(net, times, time_scale);
  return ge_loss_daily(samples);
}

std::vector<double> daily_collocation_times(std::size_t days, int per_day) {
  if (per_day < 0) {
    throw UsageError("collocation points per day must be non-negative");
  }
  std::vector<double> t;
  t.reserve(days + (days - 1) * static_cast<std::size_t>(per_day));
  for (std::size_t d = 0; d < days; ++d) {
    t.push_back(static_cast<double>(d));
    if (d + 1 == days) {
      break;
    }
    for (int k = 1; k <= per_day; ++k) {
      t.push_back(static_cast<double>(d) + static_cast<double>(k) / (per_day + 1));
    }
  }
  return t;
}

std::vector<PinnSample> evaluate_daily_net(const neural::NetworkParams& net,
                                           std::span<const double> times, double time_scale) {
  if (net.output_size() != kDailyOutputs) {
    throw UsageError("daily network must have 7 outputs");
  }
  std::vector<double> inputs(times.begin(), times.end());
  for (double& x : inputs) {
    x /= time_scale;
  }
  const neural::TangentPass pass(net, inputs);
  const auto& y = pass.outputs();
  const auto& dy = pass.output_rates();
  std::vector<PinnSample> out;
  out.reserve(times.size());
  for (Eigen::Index j = 0; j < y.cols(); ++j) {
    out.push_back({{y(0, j), y(1, j), y(2, j), y(3, j)},
                   {dy(0, j) / time_scale, dy(1, j) / time_scale, dy(2, j) / time_scale,
                    dy(3, j) / time_scale},
                   {y(4, j), y(5, j), y(6, j)}});
  }
  return out;
}

DailyObjective::DailyObjective(std::vector<sird::SirdState> data, const DailyConfig& config)
    : data_(std::move(data)),
      times_(daily_collocation_times(data_.size(), config.collocation_per_day)),
      stride_(static_cast<std::size_t>(config.collocation_per_day) + 1),
      time_scale_(static_cast<double>(data_.size() - 1)),
      ob_weight_(config.ob_weight),
      ge_weight_(config.ge_weight) {
  if (data_.size() < 2) {
    throw UsageError("daily objective needs at least two days");
  }
  inputs_ = times_;
  for (double& x : inputs_) {
    x /= time_scale_;
  }
}

LossPair DailyObjective::evaluate(const neural::NetworkParams& net, std::span<double> grad) {
  pass_.run(net, inputs_);
  const Eigen::MatrixXd& y = pass_.outputs();
  const Eigen::MatrixXd& dy = pass_.output_rates();
  const Eigen::Index cols = y.cols();
  const bool want_grad = !grad.empty();
  Eigen::MatrixXd& g_y = g_y_;
  Eigen::MatrixXd& g_dy = g_dy_;
  if (want_grad) {
    g_y.setZero(y.rows(), cols);
    g_dy.setZero(y.rows(), cols);
  }

  LossPair loss;
  const double n_ob = static_cast<double>(data_.size());
  for (std::size_t i = 0; i < data_.size(); ++i) {
    const auto c = static_cast<Eigen::Index>(i * stride_);
    const auto d = data_[i].as_array();
    for (Eigen::Index k = 0; k < 4; ++k) {
      const double e = y(k, c) - d[static_cast<std::size_t>(k)];
      loss.ob += std::fabs(e);
      if (want_grad) {
        g_y(k, c) += ob_weight_ * sign(e) / n_ob;
      }
    }
  }
  loss.ob /= n_ob;

  const double n_f = static_cast<double>(cols);
  const double inv_t = 1.0 / time_scale_;
  for (Eigen::Index j = 0; j < cols; ++j) {
    const double S = y(0, j), I = y(1, j);
    const double beta = y(4, j), gamma = y(5, j), mu = y(6, j);
    const double r1 = dy(0, j) * inv_t + beta * S * I;
    const double r2 = dy(1, j) * inv_t - beta * S * I + (gamma + mu) * I;
    const double r3 = dy(2, j) * inv_t - gamma * I;
    const double r4 = dy(3, j) * inv_t - mu * I;
    loss.ge += std::fabs(r1) + std::fabs(r2) + std::fabs(r3) + std::fabs(r4);
    if (!want_grad) {
      continue;
    }
    const double w = ge_weight_ / n_f;
    const double s1 = w * sign(r1), s2 = w * sign(r2), s3 = w * sign(r3), s4 = w * sign(r4);
    g_dy(0, j) += s1 * inv_t;
    g_dy(1, j) += s2 * inv_t;
    g_dy(2, j) += s3 * inv_t;
    g_dy(3, j) += s4 * inv_t;
    g_y(0, j) += (s1 - s2) * beta * I;
    g_y(1, j) += (s1 - s2) * beta * S + s2 * (gamma + mu) - s3 * gamma - s4 * mu;
    g_y(4, j) += (s1 - s2) * S * I;
    g_y(5, j) += (s2 - s3) * I;
    g_y(6, j) += (s2 - s4) * I;
  }
  loss.ge /= n_f;

  if (want_grad) {
    std::fill(grad.begin(), grad.end(), 0.0);
    pass_.backward(g_y_, g_dy_, grad);
  }
  return loss;
}

DailyFitResult identify_daily(const pipeline::TimeSeriesData& data, const DailyConfig& config) {
  if (data.size() < 14) {
    throw UsageError("daily identification needs at least 14 days of data");
  }
  DailyObjective objective(data.states, config);
  neural::NetworkParams net = neural::init_network(layer_sizes(config.hidden_layers, kDailyOutputs),
                                           config.seed);
  neural::AdamState adam(net.size(), config.adam);
  std::vector<double> grad(net.size());

  DailyFitResult result;
  result.time_scale = objective.time_scale();
  LossPair loss = objective.evaluate(net, grad);
  result.initial_loss = loss;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    if (!std::isfinite(loss.ob) || !std::isfinite(loss.ge)) {
      throw TrainingDiverged("daily identification loss is not finite", epoch);
    }
    neural::adam_step(adam, net.data(), grad);
    loss = objective.evaluate(net, grad);
    if (config.on_progress && config.progress_every > 0 && epoch % config.progress_every == 0) {
      config.on_progress(epoch, loss);
    }
  }
  if (!std::isfinite(loss.ob) || !std::isfinite(loss.ge)) {
    throw TrainingDiverged("daily identification loss is not finite", config.epochs);
  }
  result.final_loss = loss;
  result.epochs_run = config.epochs;

  for (std::size_t d = 0; d < data.size(); ++d) {
    result.days.push_back(static_cast<double>(d));
  }
  const auto samples = evaluate_daily_net(net, result.days, result.time_scale);
  std::vector<sird::ParamTriple> params;
  for (const auto& s : samples) {
    result.fitted.push_back(s.state);
    result.rates.push_back(s.rate);
    params.push_back(s.params);
  }
  result.params = sird::ParamTrajectory::piecewise_linear(result.days, std::move(params));
  result.net = std::move(net);
  return result;
}

}  // namespace pinnsird::ident
