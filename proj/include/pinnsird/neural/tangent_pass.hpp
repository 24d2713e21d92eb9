#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "pinnsird/neural/network.hpp"

namespace pinnsird::neural {

/// Batched forward pass of a scalar-input network that carries the
/// derivative of every activation with respect to the input alongside its
/// value, plus the matching reverse sweep. Columns are batch entries.
///
/// This is the training kernel: it computes the same quantities as
/// forward(TapedNetwork, Dual) followed by Tape::backward, but with dense
/// matrix products instead of one tape node per scalar operation. Buffers
/// are kept between calls, so one instance should be reused per training
/// loop (and not shared between threads).
class TangentPass {
 public:
  TangentPass() = default;
  TangentPass(const NetworkParams& net, std::span<const double> inputs) { run(net, inputs); }

  void run(const NetworkParams& net, std::span<const double> inputs);

  /// outputs() is (output_size x batch); output_rates() holds d output / d input.
  const Eigen::MatrixXd& outputs() const noexcept { return values_.back(); }
  const Eigen::MatrixXd& output_rates() const noexcept { return rates_.back(); }
  Eigen::Index batch() const noexcept { return values_.front().cols(); }

  /// Accumulates into `grad` (laid out like net.data()) the gradient of a
  /// scalar loss L given dL/d outputs and dL/d output_rates, for the network
  /// and inputs of the last run().
  void backward(const Eigen::MatrixXd& grad_outputs, const Eigen::MatrixXd& grad_rates,
                std::span<double> grad);

 private:
  const NetworkParams* net_ = nullptr;
  // values_[l], rates_[l]: activations entering layer l (l = 0 is the input);
  // the last entry is the network output.
  std::vector<Eigen::MatrixXd> values_;
  std::vector<Eigen::MatrixXd> rates_;
  // pre-activation input tangents per layer, needed for second-derivative terms
  std::vector<Eigen::MatrixXd> pre_rates_;
  // reverse-sweep workspace, indexed like values_
  std::vector<Eigen::MatrixXd> grad_values_;
  std::vector<Eigen::MatrixXd> grad_rates_;
  Eigen::MatrixXd grad_z_;
  Eigen::MatrixXd grad_dz_;
};

}  // namespace pinnsird::neural
