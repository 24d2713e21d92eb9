#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "pinnsird/sird/model.hpp"

namespace pinnsird::sird {

/// One classical fourth-order Runge-Kutta step for y' = f(t, y).
template <std::size_t N, class F>
std::array<double, N> rk4_step(F&& f, double t, const std::array<double, N>& y, double h) {
  auto axpy = [](const std::array<double, N>& a, double s, const std::array<double, N>& b) {
    std::array<double, N> r;
    for (std::size_t i = 0; i < N; ++i) {
      r[i] = a[i] + s * b[i];
    }
    return r;
  };
  const std::array<double, N> k1 = f(t, y);
  const std::array<double, N> k2 = f(t + 0.5 * h, axpy(y, 0.5 * h, k1));
  const std::array<double, N> k3 = f(t + 0.5 * h, axpy(y, 0.5 * h, k2));
  const std::array<double, N> k4 = f(t + h, axpy(y, h, k3));
  std::array<double, N> out;
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

struct Trajectory {
  std::vector<double> times;
  std::vector<SirdState> states;

  /// State at a time that lies on the step grid (within 1e-9); throws otherwise.
  const SirdState& at(double t) const;
  /// States at t0, t0+1, ..., t0+(days-1).
  std::vector<SirdState> daily(double t0, std::size_t days) const;
};

/// Integrates the SIRD system from params.start() over `horizon` days.
/// Piecewise-linear rates are sampled at each stage time; piecewise-constant
/// rates are sampled once per step at the step midpoint, so steps aligned
/// with the piece boundaries never mix two pieces. The final step is
/// shortened if horizon is not a multiple of step.
Trajectory rk4_solve(const SirdState& initial, const ParamTrajectory& params, double step,
                     double horizon);

/// Same, starting at an explicit time t0 inside the parameter range.
Trajectory rk4_solve(const SirdState& initial, const ParamTrajectory& params, double step,
                     double horizon, double t0);

}  // namespace pinnsird::sird
