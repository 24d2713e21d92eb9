#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace pinnsird::sird {

/// Compartment sizes as fractions of the total population.
struct SirdState {
  double S = 0.0;
  double I = 0.0;
  double R = 0.0;
  double D = 0.0;

  double sum() const noexcept { return S + I + R + D; }
  std::array<double, 4> as_array() const noexcept { return {S, I, R, D}; }
  static SirdState from_array(const std::array<double, 4>& a) noexcept {
    return {a[0], a[1], a[2], a[3]};
  }
  double operator[](std::size_t k) const noexcept { return as_array()[k]; }

  friend bool operator==(const SirdState&, const SirdState&) = default;
};

inline constexpr double kSimplexTolerance = 1e-9;

/// Throws DomainError unless every component is in [0,1] and the components
/// sum to 1, both within `tol`.
void validate(const SirdState& state, double tol = kSimplexTolerance);

/// Contact, recovery and mortality rates, per day.
struct ParamTriple {
  double beta = 0.0;
  double gamma = 0.0;
  double mu = 0.0;

  friend bool operator==(const ParamTriple&, const ParamTriple&) = default;
};

enum class Interpolation {
  PiecewiseConstant,  // value k holds on [grid[k], grid[k+1])
  PiecewiseLinear,    // linear between grid points
};

/// Time-indexed rates. Piecewise-constant trajectories carry an explicit end
/// of their last piece; piecewise-linear ones end at the last grid point.
class ParamTrajectory {
 public:
  /// Zero rates at the single time 0.
  ParamTrajectory() : grid_{0.0}, values_{ParamTriple{}}, mode_(Interpolation::PiecewiseConstant), end_(0.0) {}

  static ParamTrajectory constant(const ParamTriple& p, double start, double end);
  static ParamTrajectory piecewise_constant(std::vector<double> starts,
                                            std::vector<ParamTriple> values, double end);
  static ParamTrajectory piecewise_linear(std::vector<double> grid, std::vector<ParamTriple> values);

  ParamTriple at(double t) const;

  double start() const noexcept { return grid_.front(); }
  double end() const noexcept { return end_; }
  bool covers(double from, double to) const noexcept;

  const std::vector<double>& grid() const noexcept { return grid_; }
  const std::vector<ParamTriple>& values() const noexcept { return values_; }
  Interpolation interpolation() const noexcept { return mode_; }

 private:
  ParamTrajectory(std::vector<double> grid, std::vector<ParamTriple> values, Interpolation mode,
                  double end);

  std::vector<double> grid_;
  std::vector<ParamTriple> values_;
  Interpolation mode_;
  double end_;
};

/// Right-hand side of the fraction-form SIRD system.
SirdState sird_rhs(const SirdState& state, const ParamTriple& p);

/// beta * S / (gamma + mu); throws DomainError when gamma + mu <= 0.
double effective_reproduction_number(const ParamTriple& p, double susceptible);

}  // namespace pinnsird::sird
