#pragma once

// Reference implementations of the training objectives built on the scalar
// tape with dual-number inputs. They share no code with the batched kernel
// and serve as its gradient oracle.

#include <array>
#include <span>
#include <vector>

#include "pinnsird/autodiff/dual.hpp"
#include "pinnsird/autodiff/tape.hpp"
#include "pinnsird/neural/network.hpp"
#include "pinnsird/sird/model.hpp"

namespace oracle {

struct TapeResult {
  double loss = 0.0;
  std::vector<double> grad_net;
  std::array<double, 3> grad_latents{};
};

namespace detail {

using pinnsird::autodiff::Dual;
using pinnsird::autodiff::Tape;
using pinnsird::autodiff::Var;

struct Residuals {
  Var r1, r2, r3, r4;
};

inline Residuals residuals(const std::vector<Dual>& y, double inv_t, const Var& beta,
                           const Var& gamma, const Var& mu) {
  const Var& S = y[0].value;
  const Var& I = y[1].value;
  const Var bsi = beta * S * I;
  return {y[0].tangent * inv_t + bsi, y[1].tangent * inv_t - bsi + (gamma + mu) * I,
          y[2].tangent * inv_t - gamma * I, y[3].tangent * inv_t - mu * I};
}

}  // namespace detail

/// L1 daily objective: collocation times in days, data on integer days
/// 0..n-1 located at times[i * stride].
inline TapeResult tape_daily_loss(const pinnsird::neural::NetworkParams& net,
                                  std::span<const pinnsird::sird::SirdState> data,
                                  std::span<const double> times, std::size_t stride,
                                  double time_scale, double ob_weight, double ge_weight) {
  using namespace pinnsird::autodiff;
  Tape tape;
  const auto bound = pinnsird::neural::bind(tape, net);
  Var ob = tape.constant(0.0);
  Var ge = tape.constant(0.0);
  const double inv_t = 1.0 / time_scale;
  for (std::size_t j = 0; j < times.size(); ++j) {
    const Dual x = seed_input(tape, times[j] / time_scale);
    const auto y = pinnsird::neural::forward(bound, std::span<const Dual>(&x, 1));
    const auto r = detail::residuals(y, inv_t, y[4].value, y[5].value, y[6].value);
    ge = ge + abs(r.r1) + abs(r.r2) + abs(r.r3) + abs(r.r4);
    if (j % stride == 0 && j / stride < data.size()) {
      const auto d = data[j / stride].as_array();
      for (std::size_t k = 0; k < 4; ++k) {
        ob = ob + abs(y[k].value - d[k]);
      }
    }
  }
  const Var loss = ob * (ob_weight / static_cast<double>(data.size())) +
                   ge * (ge_weight / static_cast<double>(times.size()));
  const Gradient g = tape.backward(loss);
  TapeResult out;
  out.loss = loss.value();
  for (const auto& p : bound.params) {
    out.grad_net.push_back(g[p]);
  }
  return out;
}

/// Squared weekly objective with softplus latents; `inputs` are the
/// rescaled network inputs and `data` the densified samples.
inline TapeResult tape_weekly_loss(const pinnsird::neural::NetworkParams& net,
                                   const std::array<double, 3>& latents,
                                   std::span<const pinnsird::sird::SirdState> data,
                                   std::span<const double> inputs, double time_scale,
                                   double ob_weight, double ge_weight) {
  using namespace pinnsird::autodiff;
  Tape tape;
  const auto bound = pinnsird::neural::bind(tape, net);
  const Var lb = tape.variable(latents[0]);
  const Var lg = tape.variable(latents[1]);
  const Var lm = tape.variable(latents[2]);
  const Var beta = softplus(lb), gamma = softplus(lg), mu = softplus(lm);
  Var ob = tape.constant(0.0);
  Var ge = tape.constant(0.0);
  const double inv_t = 1.0 / time_scale;
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    const Dual x = seed_input(tape, inputs[j]);
    const auto y = pinnsird::neural::forward(bound, std::span<const Dual>(&x, 1));
    const auto d = data[j].as_array();
    for (std::size_t k = 0; k < 4; ++k) {
      ob = ob + square(y[k].value - d[k]);
    }
    const auto r = detail::residuals(y, inv_t, beta, gamma, mu);
    ge = ge + square(r.r1) + square(r.r2) + square(r.r3) + square(r.r4);
  }
  const double n = static_cast<double>(inputs.size());
  const Var loss = ob * (ob_weight / n) + ge * (ge_weight / n);
  const Gradient g = tape.backward(loss);
  TapeResult out;
  out.loss = loss.value();
  for (const auto& p : bound.params) {
    out.grad_net.push_back(g[p]);
  }
  out.grad_latents = {g[lb], g[lg], g[lm]};
  return out;
}

}  // namespace oracle
