#include "pinnsird/ident/spline.hpp"

#include <algorithm>

#include "pinnsird/errors.hpp"

namespace pinnsird::ident {

NaturalCubicSpline::NaturalCubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 3 || y_.size() != n) {
    throw UsageError("cubic spline needs at least 3 knots and matching values");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) {
      throw UsageError("cubic spline knots must be strictly increasing");
    }
  }
  // Interior equations for the second derivatives M_i, i = 1..n-2:
  //   h_{i-1} M_{i-1} + 2 (h_{i-1} + h_i) M_i + h_i M_{i+1}
  //     = 6 ((y_{i+1} - y_i)/h_i - (y_i - y_{i-1})/h_{i-1}),  M_0 = M_{n-1} = 0.
  // Thomas algorithm on the (n-2)-sized tridiagonal system.
  m_.assign(n, 0.0);
  const std::size_t k = n - 2;
  std::vector<double> diag(k);
  std::vector<double> upper(k);
  std::vector<double> rhs(k);
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t i = j + 1;
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    diag[j] = 2.0 * (h0 + h1);
    upper[j] = h1;
    rhs[j] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
  }
  for (std::size_t j = 1; j < k; ++j) {
    const double lower = x_[j + 1] - x_[j];  // h_{i-1} for row i = j + 1
    const double w = lower / diag[j - 1];
    diag[j] -= w * upper[j - 1];
    rhs[j] -= w * rhs[j - 1];
  }
  m_[k] = rhs[k - 1] / diag[k - 1];
  for (std::size_t j = k - 1; j-- > 0;) {
    m_[j + 1] = (rhs[j] - upper[j] * m_[j + 2]) / diag[j];
  }
}

std::size_t NaturalCubicSpline::segment(double t) const {
  const auto it = std::upper_bound(x_.begin(), x_.end(), t);
  if (it == x_.begin()) {
    return 0;
  }
  return std::min(static_cast<std::size_t>(it - x_.begin()) - 1, x_.size() - 2);
}

double NaturalCubicSpline::operator()(double t) const {
  const std::size_t i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - t) / h;
  const double b = (t - x_[i]) / h;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double NaturalCubicSpline::derivative(double t) const {
  const std::size_t i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - t) / h;
  const double b = (t - x_[i]) / h;
  return (y_[i + 1] - y_[i]) / h - (3.0 * a * a - 1.0) / 6.0 * h * m_[i] +
         (3.0 * b * b - 1.0) / 6.0 * h * m_[i + 1];
}

double NaturalCubicSpline::second_derivative(double t) const {
  const std::size_t i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - t) / h;
  const double b = (t - x_[i]) / h;
  return a * m_[i] + b * m_[i + 1];
}

}  // namespace pinnsird::ident
