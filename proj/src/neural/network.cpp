#include "pinnsird/neural/network.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>

#include "pinnsird/errors.hpp"

namespace pinnsird::neural {

using autodiff::Dual;
using autodiff::Var;

NetworkParams::NetworkParams(std::vector<int> layer_sizes) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) {
    throw UsageError("a network needs at least an input and an output layer");
  }
  for (int s : sizes_) {
    if (s <= 0) {
      throw UsageError("layer sizes must be positive");
    }
  }
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets_.push_back(total);
    const auto in = static_cast<std::size_t>(sizes_[l]);
    const auto out = static_cast<std::size_t>(sizes_[l + 1]);
    total += out * in + out;
  }
  data_.assign(total, 0.0);
}

std::size_t NetworkParams::bias_offset(std::size_t layer) const {
  return offsets_.at(layer) + static_cast<std::size_t>(sizes_[layer + 1]) *
                                  static_cast<std::size_t>(sizes_[layer]);
}

Eigen::Map<RowMajorMatrix> NetworkParams::weight(std::size_t layer) {
  return {data_.data() + offsets_.at(layer), sizes_[layer + 1], sizes_[layer]};
}

Eigen::Map<const RowMajorMatrix> NetworkParams::weight(std::size_t layer) const {
  return {data_.data() + offsets_.at(layer), sizes_[layer + 1], sizes_[layer]};
}

Eigen::Map<Eigen::VectorXd> NetworkParams::bias(std::size_t layer) {
  return {data_.data() + bias_offset(layer), sizes_[layer + 1]};
}

Eigen::Map<const Eigen::VectorXd> NetworkParams::bias(std::size_t layer) const {
  return {data_.data() + bias_offset(layer), sizes_[layer + 1]};
}

bool NetworkParams::all_finite() const {
  for (double x : data_) {
    if (!std::isfinite(x)) {
      return false;
    }
  }
  return true;
}

NetworkParams init_network(std::vector<int> layer_sizes, std::uint64_t seed) {
  NetworkParams net(std::move(layer_sizes));
  net.set_seed(seed);
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    auto w = net.weight(l);
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) {
        w(i, j) = dist(rng);
      }
    }
  }
  return net;
}

namespace {

void check_input(const NetworkParams& net, std::size_t n) {
  if (net.num_layers() == 0) {
    throw UsageError("empty network");
  }
  if (n != static_cast<std::size_t>(net.input_size())) {
    throw UsageError("input length " + std::to_string(n) + " does not match network input size " +
                     std::to_string(net.input_size()));
  }
}

// Generic layer sweep: z^{l+1}_j = sum_i w_ji f(z^l_i) + b_j, with f the
// identity on the input layer, tanh on hidden layers and sigmoid on output.
template <class T, class ParamFn, class TanhFn, class SigmoidFn>
std::vector<T> sweep(const NetworkParams& net, std::vector<T> activ, ParamFn param, TanhFn act_tanh,
                     SigmoidFn act_sigmoid) {
  const std::size_t layers = net.num_layers();
  for (std::size_t l = 0; l < layers; ++l) {
    const auto in = static_cast<std::size_t>(net.layer_sizes()[l]);
    const auto out = static_cast<std::size_t>(net.layer_sizes()[l + 1]);
    const std::size_t w0 = net.weight_offset(l);
    const std::size_t b0 = net.bias_offset(l);
    std::vector<T> next;
    next.reserve(out);
    for (std::size_t j = 0; j < out; ++j) {
      T z = param(w0 + j * in) * activ[0];
      for (std::size_t i = 1; i < in; ++i) {
        z = z + param(w0 + j * in + i) * activ[i];
      }
      z = z + param(b0 + j);
      next.push_back(l + 1 == layers ? act_sigmoid(z) : act_tanh(z));
    }
    activ = std::move(next);
  }
  return activ;
}

}  // namespace

Eigen::VectorXd evaluate(const NetworkParams& net, std::span<const double> input) {
  check_input(net, input.size());
  const auto data = net.data();
  auto out = sweep<double>(
      net, std::vector<double>(input.begin(), input.end()),
      [&](std::size_t k) { return data[k]; }, [](double z) { return std::tanh(z); },
      [](double z) { return autodiff::sigmoid(z); });
  return Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

TapedNetwork bind(autodiff::Tape& tape, const NetworkParams& net) {
  TapedNetwork t{&net, {}};
  t.params.reserve(net.size());
  for (double x : net.data()) {
    t.params.push_back(tape.variable(x));
  }
  return t;
}

std::vector<Var> forward(const TapedNetwork& net, std::span<const Var> input) {
  check_input(*net.net, input.size());
  return sweep<Var>(
      *net.net, std::vector<Var>(input.begin(), input.end()),
      [&](std::size_t k) { return net.params[k]; }, [](const Var& z) { return autodiff::tanh(z); },
      [](const Var& z) { return autodiff::sigmoid(z); });
}

std::vector<Dual> forward(const TapedNetwork& net, std::span<const Dual> input) {
  check_input(*net.net, input.size());
  return sweep<Dual>(
      *net.net, std::vector<Dual>(input.begin(), input.end()),
      [&](std::size_t k) { return net.params[k]; }, [](const Dual& z) { return autodiff::tanh(z); },
      [](const Dual& z) { return autodiff::sigmoid(z); });
}

std::vector<Var> forward(const NetworkParams& net, std::span<const double> input,
                         autodiff::Tape& tape) {
  check_input(net, input.size());
  TapedNetwork bound = bind(tape, net);
  std::vector<Var> in;
  in.reserve(input.size());
  for (double x : input) {
    in.push_back(tape.variable(x));
  }
  return forward(bound, in);
}

void to_json(nlohmann::json& j, const NetworkParams& net) {
  nlohmann::json weights = nlohmann::json::array();
  nlohmann::json biases = nlohmann::json::array();
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    const auto w = net.weight(l);
    weights.push_back(std::vector<double>(w.data(), w.data() + w.size()));
    const auto b = net.bias(l);
    biases.push_back(std::vector<double>(b.data(), b.data() + b.size()));
  }
  j = nlohmann::json{{"layer_sizes", net.layer_sizes()},
                     {"seed", net.seed()},
                     {"hidden_activation", "tanh"},
                     {"output_activation", "sigmoid"},
                     {"weights", weights},
                     {"biases", biases}};
}

void from_json(const nlohmann::json& j, NetworkParams& net) {
  NetworkParams out(j.at("layer_sizes").get<std::vector<int>>());
  out.set_seed(j.value("seed", std::uint64_t{0}));
  const auto& weights = j.at("weights");
  const auto& biases = j.at("biases");
  if (weights.size() != out.num_layers() || biases.size() != out.num_layers()) {
    throw UsageError("checkpoint layer count does not match layer_sizes");
  }
  for (std::size_t l = 0; l < out.num_layers(); ++l) {
    const auto w = weights[l].get<std::vector<double>>();
    const auto b = biases[l].get<std::vector<double>>();
    auto wm = out.weight(l);
    auto bv = out.bias(l);
    if (w.size() != static_cast<std::size_t>(wm.size()) ||
        b.size() != static_cast<std::size_t>(bv.size())) {
      throw UsageError("checkpoint layer " + std::to_string(l) + " has the wrong shape");
    }
    std::copy(w.begin(), w.end(), wm.data());
    std::copy(b.begin(), b.end(), bv.data());
  }
  if (!out.all_finite()) {
    throw UsageError("checkpoint contains non-finite values");
  }
  net = std::move(out);
}

void save_checkpoint(const NetworkParams& net, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) {
    throw UsageError("cannot write " + path.string());
  }
  os << nlohmann::json(net).dump(1) << '\n';
}

NetworkParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) {
    throw UsageError("cannot read " + path.string());
  }
  return nlohmann::json::parse(is).get<NetworkParams>();
}

}  // namespace pinnsird::neural
