#include "pinnsird/neural/tangent_pass.hpp"

#include "pinnsird/errors.hpp"

namespace pinnsird::neural {

void TangentPass::run(const NetworkParams& net, std::span<const double> inputs) {
  if (net.num_layers() == 0 || net.input_size() != 1) {
    throw UsageError("TangentPass needs a network with a single scalar input");
  }
  net_ = &net;
  const auto batch = static_cast<Eigen::Index>(inputs.size());
  const std::size_t layers = net.num_layers();
  values_.resize(layers + 1);
  rates_.resize(layers + 1);
  pre_rates_.resize(layers);
  values_[0] = Eigen::Map<const Eigen::RowVectorXd>(inputs.data(), batch);
  rates_[0].setOnes(1, batch);

  for (std::size_t l = 0; l < layers; ++l) {
    const auto w = net.weight(l);
    Eigen::MatrixXd& z = values_[l + 1];
    Eigen::MatrixXd& dz = pre_rates_[l];
    z.noalias() = w * values_[l];
    z.colwise() += net.bias(l);
    dz.noalias() = w * rates_[l];
    Eigen::MatrixXd& da = rates_[l + 1];
    if (l + 1 == layers) {
      z = (1.0 + (-z.array()).exp()).inverse().matrix();
      da = (z.array() * (1.0 - z.array()) * dz.array()).matrix();
    } else {
      z = z.array().tanh().matrix();
      da = ((1.0 - z.array().square()) * dz.array()).matrix();
    }
  }
}

void TangentPass::backward(const Eigen::MatrixXd& grad_outputs, const Eigen::MatrixXd& grad_rates,
                           std::span<double> grad) {
  if (net_ == nullptr) {
    throw UsageError("TangentPass::backward called before run");
  }
  const NetworkParams& net = *net_;
  if (grad.size() != net.size()) {
    throw UsageError("gradient buffer does not match network size");
  }
  if (grad_outputs.rows() != outputs().rows() || grad_outputs.cols() != batch() ||
      grad_rates.rows() != outputs().rows() || grad_rates.cols() != batch()) {
    throw UsageError("output gradient shape does not match the batch");
  }
  const std::size_t layers = net.num_layers();
  grad_values_.resize(layers + 1);
  grad_rates_.resize(layers + 1);
  grad_values_[layers] = grad_outputs;
  grad_rates_[layers] = grad_rates;
  for (std::size_t l = layers; l-- > 0;) {
    const auto a = values_[l + 1].array();
    const auto dz = pre_rates_[l].array();
    const auto g_a = grad_values_[l + 1].array();
    const auto g_da = grad_rates_[l + 1].array();
    // s1 = f'(z), s2 = f''(z); dz carries the input tangent of z
    if (l + 1 == layers) {
      grad_dz_ = (g_da * a * (1.0 - a)).matrix();
      grad_z_ = (g_a * a * (1.0 - a) + g_da * dz * a * (1.0 - a) * (1.0 - 2.0 * a)).matrix();
    } else {
      grad_dz_ = (g_da * (1.0 - a.square())).matrix();
      grad_z_ = ((1.0 - a.square()) * (g_a - 2.0 * g_da * dz * a)).matrix();
    }

    const auto w = net.weight(l);
    Eigen::Map<RowMajorMatrix> g_w(grad.data() + net.weight_offset(l), w.rows(), w.cols());
    Eigen::Map<Eigen::VectorXd> g_b(grad.data() + net.bias_offset(l), w.rows());
    g_w.noalias() += grad_z_ * values_[l].transpose();
    g_w.noalias() += grad_dz_ * rates_[l].transpose();
    g_b += grad_z_.rowwise().sum();
    if (l > 0) {
      grad_values_[l].noalias() = w.transpose() * grad_z_;
      grad_rates_[l].noalias() = w.transpose() * grad_dz_;
    }
  }
}

}  // namespace pinnsird::neural
