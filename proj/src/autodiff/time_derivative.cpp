#include "pinnsird/autodiff/time_derivative.hpp"

#include "pinnsird/errors.hpp"

namespace pinnsird::autodiff {

std::vector<Dual> time_derivative(const neural::TapedNetwork& net, Tape& tape, double t) {
  if (net.net == nullptr || net.net->input_size() != 1) {
    throw UsageError("time_derivative needs a network with a single scalar input");
  }
  const Dual input = seed_input(tape, t);
  return neural::forward(net, std::span<const Dual>(&input, 1));
}

OutputsWithRates time_derivative(const neural::NetworkParams& net, double t) {
  Tape tape;
  const auto bound = neural::bind(tape, net);
  const auto out = time_derivative(bound, tape, t);
  OutputsWithRates r{Eigen::VectorXd(static_cast<Eigen::Index>(out.size())),
                     Eigen::VectorXd(static_cast<Eigen::Index>(out.size()))};
  for (std::size_t k = 0; k < out.size(); ++k) {
    r.outputs[static_cast<Eigen::Index>(k)] = out[k].value.value();
    r.rates[static_cast<Eigen::Index>(k)] = out[k].tangent.value();
  }
  return r;
}

}  // namespace pinnsird::autodiff
