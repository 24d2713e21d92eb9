#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pinnsird/autodiff/dual.hpp"
#include "pinnsird/neural/network.hpp"

namespace pinnsird::autodiff {

struct OutputsWithRates {
  Eigen::VectorXd outputs;
  Eigen::VectorXd rates;  // d outputs / d t
};

/// Exact network outputs and their derivatives with respect to the scalar
/// input t.
OutputsWithRates time_derivative(const neural::NetworkParams& net, double t);

/// Same, recorded on the tape of `net` so that both outputs and rates can be
/// differentiated with respect to the bound weights.
std::vector<Dual> time_derivative(const neural::TapedNetwork& net, Tape& tape, double t);

}  // namespace pinnsird::autodiff
