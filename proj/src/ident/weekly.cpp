#include "pinnsird/ident/weekly.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "pinnsird/autodiff/tape.hpp"
#include "pinnsird/errors.hpp"
#include "pinnsird/ident/spline.hpp"
#include "pinnsird/neural/tangent_pass.hpp"

namespace pinnsird::ident {

namespace {

constexpr int kWeeklyOutputs = 4;

std::vector<int> layer_sizes(const std::vector<int>& hidden) {
  std::vector<int> sizes{1};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(kWeeklyOutputs);
  return sizes;
}

}  // namespace

std::vector<WeekSegment> split_weeks(const pipeline::TimeSeriesData& data) {
  if (data.size() < kDaysPerWeek) {
    throw UsageError("weekly split needs at least 7 days of data");
  }
  std::vector<WeekSegment> weeks;
  for (std::size_t w = 0; (w + 1) * kDaysPerWeek <= data.size(); ++w) {
    WeekSegment seg;
    seg.week_index = w;
    for (std::size_t d = 0; d < kDaysPerWeek; ++d) {
      const std::size_t day = w * kDaysPerWeek + d;
      seg.raw_times.push_back(static_cast<double>(day));
      seg.raw.push_back(data.states[day]);
    }
    weeks.push_back(std::move(seg));
  }
  return weeks;
}

WeekSegment cubic_spline_resample(WeekSegment segment, std::size_t points) {
  const std::size_t n = segment.raw_times.size();
  if (n < 3 || segment.raw.size() != n) {
    throw UsageError("spline resampling needs at least 3 raw samples");
  }
  if (points < n) {
    throw UsageError("spline resampling must not reduce the number of points");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(segment.raw_times[i] > segment.raw_times[i - 1])) {
      throw UsageError("raw sample times must be strictly increasing");
    }
  }
  std::array<std::vector<double>, 4> series;
  for (const auto& s : segment.raw) {
    for (std::size_t c = 0; c < 4; ++c) {
      series[c].push_back(s[c]);
    }
  }
  std::vector<NaturalCubicSpline> splines;
  for (auto& y : series) {
    splines.emplace_back(segment.raw_times, std::move(y));
  }
  const double t0 = segment.raw_times.front();
  const double t1 = segment.raw_times.back();
  segment.dense_times.clear();
  segment.dense.clear();
  for (std::size_t k = 0; k < points; ++k) {
    // endpoints hit the first and last raw times exactly
    const double t = k + 1 == points ? t1
                                     : t0 + (t1 - t0) * static_cast<double>(k) /
                                                static_cast<double>(points - 1);
    segment.dense_times.push_back(t);
    segment.dense.push_back({splines[0](t), splines[1](t), splines[2](t), splines[3](t)});
  }
  return segment;
}

sird::ParamTrajectory WeeklyParams::trajectory() const {
  if (params.empty()) {
    throw UsageError("no weekly parameters");
  }
  std::vector<double> starts;
  for (std::size_t w = 0; w < params.size(); ++w) {
    starts.push_back(static_cast<double>(w * kDaysPerWeek));
  }
  return sird::ParamTrajectory::piecewise_constant(
      std::move(starts), params, static_cast<double>(params.size() * kDaysPerWeek));
}

std::vector<sird::SirdState> WeeklyParams::fitted() const {
  std::vector<sird::SirdState> out;
  for (const auto& f : fits) {
    out.insert(out.end(), f.fitted.begin(), f.fitted.end());
  }
  return out;
}

sird::ParamTriple positive_rates(const std::array<double, 3>& latents) {
  return {autodiff::softplus(latents[0]), autodiff::softplus(latents[1]),
          autodiff::softplus(latents[2])};
}

std::array<double, 3> latents_for(const sird::ParamTriple& rates) {
  if (!(rates.beta > 0.0 && rates.gamma > 0.0 && rates.mu > 0.0)) {
    throw UsageError("initial weekly rates must be positive");
  }
  auto inv = [](double p) { return std::log(std::expm1(p)); };
  return {inv(rates.beta), inv(rates.gamma), inv(rates.mu)};
}

WeeklyObjective::WeeklyObjective(const WeekSegment& segment, const WeeklyConfig& config)
    : data_(segment.dense),
      ob_weight_(config.ob_weight),
      ge_weight_(config.ge_weight) {
  if (segment.dense.empty() || segment.dense.size() != segment.dense_times.size()) {
    throw UsageError("weekly objective needs a densified segment");
  }
  start_ = segment.raw_times.front();
  scale_ = segment.raw_times.back() - segment.raw_times.front();
  inputs_ = segment.dense_times;
  for (double& x : inputs_) {
    x = (x - start_) / scale_;
  }
}

LossPair WeeklyObjective::evaluate(const neural::NetworkParams& net,
                                   const std::array<double, 3>& latents,
                                   std::span<double> grad_net,
                                   std::span<double> grad_latents) {
  pass_.run(net, inputs_);
  const Eigen::MatrixXd& y = pass_.outputs();
  const Eigen::MatrixXd& dy = pass_.output_rates();
  const Eigen::Index cols = y.cols();
  const bool want_grad = !grad_net.empty() || !grad_latents.empty();
  const sird::ParamTriple p = positive_rates(latents);

  Eigen::MatrixXd& g_y = g_y_;
  Eigen::MatrixXd& g_dy = g_dy_;
  if (want_grad) {
    g_y.setZero(y.rows(), cols);
    g_dy.setZero(y.rows(), cols);
  }
  double g_beta = 0.0, g_gamma = 0.0, g_mu = 0.0;

  LossPair loss;
  const double n = static_cast<double>(cols);
  const double inv_t = 1.0 / scale_;
  for (Eigen::Index j = 0; j < cols; ++j) {
    const auto d = data_[static_cast<std::size_t>(j)].as_array();
    for (Eigen::Index k = 0; k < 4; ++k) {
      const double e = y(k, j) - d[static_cast<std::size_t>(k)];
      loss.ob += e * e;
      if (want_grad) {
        g_y(k, j) += 2.0 * ob_weight_ * e / n;
      }
    }
    const double S = y(0, j), I = y(1, j);
    const double r1 = dy(0, j) * inv_t + p.beta * S * I;
    const double r2 = dy(1, j) * inv_t - p.beta * S * I + (p.gamma + p.mu) * I;
    const double r3 = dy(2, j) * inv_t - p.gamma * I;
    const double r4 = dy(3, j) * inv_t - p.mu * I;
    loss.ge += r1 * r1 + r2 * r2 + r3 * r3 + r4 * r4;
    if (!want_grad) {
      continue;
    }
    const double w = 2.0 * ge_weight_ / n;
    const double s1 = w * r1, s2 = w * r2, s3 = w * r3, s4 = w * r4;
    g_dy(0, j) += s1 * inv_t;
    g_dy(1, j) += s2 * inv_t;
    g_dy(2, j) += s3 * inv_t;
    g_dy(3, j) += s4 * inv_t;
    g_y(0, j) += (s1 - s2) * p.beta * I;
    g_y(1, j) += (s1 - s2) * p.beta * S + s2 * (p.gamma + p.mu) - s3 * p.gamma - s4 * p.mu;
    g_beta += (s1 - s2) * S * I;
    g_gamma += (s2 - s3) * I;
    g_mu += (s2 - s4) * I;
  }
  loss.ob /= n;
  loss.ge /= n;

  if (!grad_net.empty()) {
    std::fill(grad_net.begin(), grad_net.end(), 0.0);
    pass_.backward(g_y_, g_dy_, grad_net);
  }
  if (!grad_latents.empty()) {
    if (grad_latents.size() != 3) {
      throw UsageError("latent gradient buffer must hold 3 entries");
    }
    grad_latents[0] = g_beta * autodiff::sigmoid(latents[0]);
    grad_latents[1] = g_gamma * autodiff::sigmoid(latents[1]);
    grad_latents[2] = g_mu * autodiff::sigmoid(latents[2]);
  }
  return loss;
}

WeekFit identify_week(const WeekSegment& segment, const WeeklyConfig& config, std::uint64_t seed,
                      const WeekFit* warm) {
  WeeklyObjective objective(segment, config);
  WeekFit fit;
  fit.week_index = segment.week_index;
  fit.seed = seed;
  fit.start_time = objective.start_time();
  fit.time_scale = objective.time_scale();
  fit.raw_times = segment.raw_times;

  neural::NetworkParams net = warm != nullptr ? warm->net
                                              : neural::init_network(
                                                    layer_sizes(config.hidden_layers), seed);
  std::array<double, 3> latents = warm != nullptr ? warm->latents
                                                  : latents_for(config.initial_params);
  neural::AdamState adam_net(net.size(), config.adam);
  neural::AdamState adam_latent(3, config.adam);
  std::vector<double> grad(net.size());
  std::array<double, 3> grad_latent{};

  auto fail = [&](std::size_t epoch) {
    throw TrainingDiverged("week " + std::to_string(segment.week_index) +
                               ": identification loss is not finite",
                           epoch);
  };

  LossPair loss = objective.evaluate(net, latents, grad, grad_latent);
  fit.initial_loss = loss;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    if (!std::isfinite(loss.ob) || !std::isfinite(loss.ge)) {
      fail(epoch);
    }
    try {
      neural::adam_step(adam_net, net.data(), grad);
      neural::adam_step(adam_latent, latents, grad_latent);
    } catch (const TrainingDiverged&) {
      fail(epoch);
    }
    loss = objective.evaluate(net, latents, grad, grad_latent);
    if (config.on_progress && config.progress_every > 0 && epoch % config.progress_every == 0) {
      config.on_progress(segment.week_index, epoch, loss);
    }
  }
  if (!std::isfinite(loss.ob) || !std::isfinite(loss.ge)) {
    fail(config.epochs);
  }
  fit.final_loss = loss;
  fit.params = positive_rates(latents);
  fit.latents = latents;

  std::vector<double> inputs;
  for (double t : segment.raw_times) {
    inputs.push_back((t - fit.start_time) / fit.time_scale);
  }
  const neural::TangentPass pass(net, inputs);
  for (Eigen::Index j = 0; j < pass.outputs().cols(); ++j) {
    const auto& y = pass.outputs();
    const auto& dy = pass.output_rates();
    fit.fitted.push_back({y(0, j), y(1, j), y(2, j), y(3, j)});
    fit.rates.push_back({dy(0, j) / fit.time_scale, dy(1, j) / fit.time_scale,
                         dy(2, j) / fit.time_scale, dy(3, j) / fit.time_scale});
  }
  fit.net = std::move(net);
  return fit;
}

WeeklyParams identify_weekly(const pipeline::TimeSeriesData& data, const WeeklyConfig& config) {
  std::vector<WeekSegment> segments = split_weeks(data);
  if (segments.size() < 2) {
    throw UsageError("weekly identification needs at least two full weeks");
  }
  for (auto& s : segments) {
    s = cubic_spline_resample(std::move(s), config.densify_points);
  }

  std::vector<WeekFit> fits(segments.size());
  if (config.warm_start || config.threads <= 1) {
    for (std::size_t w = 0; w < segments.size(); ++w) {
      const WeekFit* warm = config.warm_start && w > 0 ? &fits[w - 1] : nullptr;
      fits[w] = identify_week(segments[w], config, derive_seed(config.seed, w), warm);
    }
  } else {
    std::vector<std::exception_ptr> errors(segments.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t w = next++; w < segments.size(); w = next++) {
        try {
          fits[w] = identify_week(segments[w], config, derive_seed(config.seed, w));
        } catch (...) {
          errors[w] = std::current_exception();
        }
      }
    };
    {
      std::vector<std::jthread> pool;
      const unsigned n = std::min<unsigned>(config.threads, static_cast<unsigned>(segments.size()));
      for (unsigned k = 0; k < n; ++k) {
        pool.emplace_back(worker);
      }
    }
    for (auto& e : errors) {
      if (e) {
        std::rethrow_exception(e);
      }
    }
  }

  WeeklyParams out;
  for (auto& f : fits) {
    out.params.push_back(f.params);
    out.losses.push_back(f.final_loss);
  }
  out.fits = std::move(fits);
  return out;
}

}  // namespace pinnsird::ident
