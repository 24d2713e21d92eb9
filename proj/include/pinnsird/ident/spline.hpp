#pragma once

#include <vector>

namespace pinnsird::ident {

/// Natural cubic spline (zero second derivative at both ends) through
/// strictly increasing knots. Queries outside the knot range evaluate the
/// nearest end segment's cubic.
class NaturalCubicSpline {
 public:
  NaturalCubicSpline(std::vector<double> x, std::vector<double> y);

  double operator()(double t) const;
  double derivative(double t) const;
  double second_derivative(double t) const;

  const std::vector<double>& knots() const noexcept { return x_; }

 private:
  std::size_t segment(double t) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at the knots
};

}  // namespace pinnsird::ident
