#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <nlohmann/json_fwd.hpp>
#include <span>
#include <vector>

#include "pinnsird/autodiff/dual.hpp"
#include "pinnsird/autodiff/tape.hpp"

namespace pinnsird::neural {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Weights and biases of a dense feedforward net, stored in one contiguous
/// buffer so optimizers can treat the whole network as a flat vector.
/// Layer l maps layer_sizes[l] inputs to layer_sizes[l+1] outputs; hidden
/// layers use tanh and the output layer uses the logistic sigmoid.
class NetworkParams {
 public:
  NetworkParams() = default;
  /// Zero-filled network; throws UsageError for < 2 sizes or non-positive sizes.
  explicit NetworkParams(std::vector<int> layer_sizes);

  const std::vector<int>& layer_sizes() const noexcept { return sizes_; }
  std::size_t num_layers() const noexcept { return sizes_.empty() ? 0 : sizes_.size() - 1; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }

  Eigen::Map<RowMajorMatrix> weight(std::size_t layer);
  Eigen::Map<const RowMajorMatrix> weight(std::size_t layer) const;
  Eigen::Map<Eigen::VectorXd> bias(std::size_t layer);
  Eigen::Map<const Eigen::VectorXd> bias(std::size_t layer) const;

  std::size_t weight_offset(std::size_t layer) const { return offsets_.at(layer); }
  std::size_t bias_offset(std::size_t layer) const;

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::uint64_t seed() const noexcept { return seed_; }
  void set_seed(std::uint64_t seed) noexcept { seed_ = seed; }

  bool all_finite() const;

  friend bool operator==(const NetworkParams&, const NetworkParams&) = default;

 private:
  std::vector<int> sizes_;
  std::vector<std::size_t> offsets_;
  std::vector<double> data_;
  std::uint64_t seed_ = 0;
};

/// Xavier/Glorot-uniform weights, zero biases; deterministic in (sizes, seed).
NetworkParams init_network(std::vector<int> layer_sizes, std::uint64_t seed);

/// Plain evaluation without recording anything.
Eigen::VectorXd evaluate(const NetworkParams& net, std::span<const double> input);

/// Network parameters registered as tape leaves. params[k] corresponds to
/// net.data()[k].
struct TapedNetwork {
  const NetworkParams* net = nullptr;
  std::vector<autodiff::Var> params;
};

TapedNetwork bind(autodiff::Tape& tape, const NetworkParams& net);

std::vector<autodiff::Var> forward(const TapedNetwork& net, std::span<const autodiff::Var> input);
std::vector<autodiff::Dual> forward(const TapedNetwork& net, std::span<const autodiff::Dual> input);

/// Binds the parameters (they become the first net.size() leaves recorded
/// after the current end of the tape) and records the forward pass.
std::vector<autodiff::Var> forward(const NetworkParams& net, std::span<const double> input,
                                   autodiff::Tape& tape);

void to_json(nlohmann::json& j, const NetworkParams& net);
void from_json(const nlohmann::json& j, NetworkParams& net);

void save_checkpoint(const NetworkParams& net, const std::filesystem::path& path);
NetworkParams load_checkpoint(const std::filesystem::path& path);

}  // namespace pinnsird::neural
