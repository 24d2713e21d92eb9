#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pinnsird::neural {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// First/second moment estimates for a flat parameter vector.
struct AdamState {
  AdamState() = default;
  explicit AdamState(std::size_t size, AdamConfig config = {})
      : config(config), m(size, 0.0), v(size, 0.0) {}

  AdamConfig config;
  std::vector<double> m;
  std::vector<double> v;
  std::size_t step = 0;
};

/// One bias-corrected Adam update in place. Throws TrainingDiverged (carrying
/// the step index about to be taken) if any gradient is NaN/Inf; the state
/// and parameters are left untouched in that case.
void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads);

}  // namespace pinnsird::neural
