#include "pinnsird/sird/rk4.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pinnsird/errors.hpp"

namespace pinnsird::sird {

const SirdState& Trajectory::at(double t) const {
  const auto it = std::lower_bound(times.begin(), times.end(), t - 1e-9);
  if (it == times.end() || std::fabs(*it - t) > 1e-9) {
    std::ostringstream os;
    os << "time " << t << " is not on the trajectory grid";
    throw UsageError(os.str());
  }
  return states[static_cast<std::size_t>(it - times.begin())];
}

std::vector<SirdState> Trajectory::daily(double t0, std::size_t days) const {
  std::vector<SirdState> out;
  out.reserve(days);
  for (std::size_t d = 0; d < days; ++d) {
    out.push_back(at(t0 + static_cast<double>(d)));
  }
  return out;
}

Trajectory rk4_solve(const SirdState& initial, const ParamTrajectory& params, double step,
                     double horizon) {
  return rk4_solve(initial, params, step, horizon, params.start());
}

Trajectory rk4_solve(const SirdState& initial, const ParamTrajectory& params, double step,
                     double horizon, double t0) {
  if (!(step > 0.0)) {
    throw UsageError("rk4_solve: step must be positive");
  }
  if (!(horizon >= step)) {
    throw UsageError("rk4_solve: horizon must be at least one step");
  }
  if (!params.covers(t0, t0 + horizon)) {
    std::ostringstream os;
    os << "rk4_solve: parameters cover [" << params.start() << ", " << params.end()
       << "] but the solve needs [" << t0 << ", " << t0 + horizon << "]";
    throw UsageError(os.str());
  }
  validate(initial);

  const auto steps = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
  const bool piecewise_constant = params.interpolation() == Interpolation::PiecewiseConstant;

  Trajectory traj;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.times.push_back(t0);
  traj.states.push_back(initial);

  std::array<double, 4> y = initial.as_array();
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = t0 + static_cast<double>(n) * step;
    const double t_next = n + 1 == steps ? t0 + horizon : t0 + static_cast<double>(n + 1) * step;
    const double h = t_next - t;
    const ParamTriple held = piecewise_constant ? params.at(t + 0.5 * h) : ParamTriple{};
    auto f = [&](double ts, const std::array<double, 4>& ys) {
      const ParamTriple p = piecewise_constant ? held : params.at(ts);
      return sird_rhs(SirdState::from_array(ys), p).as_array();
    };
    y = rk4_step<4>(f, t, y, h);
    const SirdState s = SirdState::from_array(y);
    for (double c : y) {
      if (!std::isfinite(c) || c < -kSimplexTolerance || c > 1.0 + kSimplexTolerance) {
        std::ostringstream os;
        os << "rk4_solve: state left the simplex at t=" << t_next;
        throw DomainError(os.str());
      }
    }
    traj.times.push_back(t_next);
    traj.states.push_back(s);
  }
  return traj;
}

}  // namespace pinnsird::sird
