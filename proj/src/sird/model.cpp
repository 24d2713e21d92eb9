#include "pinnsird/sird/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pinnsird/errors.hpp"

namespace pinnsird::sird {

void validate(const SirdState& state, double tol) {
  const auto a = state.as_array();
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!std::isfinite(a[k]) || a[k] < -tol || a[k] > 1.0 + tol) {
      std::ostringstream os;
      os << "compartment " << "SIRD"[k] << " = " << a[k] << " outside [0, 1]";
      throw DomainError(os.str());
    }
  }
  if (std::fabs(state.sum() - 1.0) > tol) {
    std::ostringstream os;
    os.precision(17);
    os << "compartments sum to " << state.sum() << ", expected 1";
    throw DomainError(os.str());
  }
}

ParamTrajectory::ParamTrajectory(std::vector<double> grid, std::vector<ParamTriple> values,
                                 Interpolation mode, double end)
    : grid_(std::move(grid)), values_(std::move(values)), mode_(mode), end_(end) {
  if (grid_.empty() || grid_.size() != values_.size()) {
    throw UsageError("parameter grid and values must have equal, non-zero length");
  }
  for (std::size_t k = 1; k < grid_.size(); ++k) {
    if (!(grid_[k] > grid_[k - 1])) {
      throw UsageError("parameter grid must be strictly increasing");
    }
  }
  if (end_ < grid_.back()) {
    throw UsageError("parameter trajectory ends before its last grid point");
  }
  for (const auto& p : values_) {
    if (!(p.beta >= 0.0 && p.gamma >= 0.0 && p.mu >= 0.0)) {
      throw UsageError("rates must be non-negative");
    }
  }
}

ParamTrajectory ParamTrajectory::constant(const ParamTriple& p, double start, double end) {
  return {{start}, {p}, Interpolation::PiecewiseConstant, end};
}

ParamTrajectory ParamTrajectory::piecewise_constant(std::vector<double> starts,
                                                    std::vector<ParamTriple> values, double end) {
  return {std::move(starts), std::move(values), Interpolation::PiecewiseConstant, end};
}

ParamTrajectory ParamTrajectory::piecewise_linear(std::vector<double> grid,
                                                  std::vector<ParamTriple> values) {
  const double end = grid.empty() ? 0.0 : grid.back();
  return {std::move(grid), std::move(values), Interpolation::PiecewiseLinear, end};
}

bool ParamTrajectory::covers(double from, double to) const noexcept {
  constexpr double slack = 1e-9;
  return from >= start() - slack && to <= end() + slack;
}

ParamTriple ParamTrajectory::at(double t) const {
  if (!covers(t, t)) {
    std::ostringstream os;
    os << "time " << t << " outside parameter range [" << start() << ", " << end() << "]";
    throw UsageError(os.str());
  }
  // index of the last grid point <= t
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  const std::size_t k = it == grid_.begin() ? 0 : static_cast<std::size_t>(it - grid_.begin()) - 1;
  if (mode_ == Interpolation::PiecewiseConstant || k + 1 >= grid_.size()) {
    return values_[k];
  }
  const double w = (t - grid_[k]) / (grid_[k + 1] - grid_[k]);
  const ParamTriple& a = values_[k];
  const ParamTriple& b = values_[k + 1];
  return {a.beta + w * (b.beta - a.beta), a.gamma + w * (b.gamma - a.gamma),
          a.mu + w * (b.mu - a.mu)};
}

SirdState sird_rhs(const SirdState& x, const ParamTriple& p) {
  const double infection = p.beta * x.S * x.I;
  const double recovery = p.gamma * x.I;
  const double death = p.mu * x.I;
  return {-infection, infection - recovery - death, recovery, death};
}

double effective_reproduction_number(const ParamTriple& p, double susceptible) {
  const double removal = p.gamma + p.mu;
  if (!(removal > 0.0)) {
    throw DomainError("effective reproduction number undefined for gamma + mu = 0");
  }
  return p.beta * susceptible / removal;
}

}  // namespace pinnsird::sird
