#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <span>
#include <vector>

namespace pinnsird::forecast {

enum GateIndex : std::size_t { kInputGate = 0, kForgetGate = 1, kOutputGate = 2, kCandidate = 3 };
inline constexpr std::size_t kGates = 4;

/// One gate acting on the concatenation [x; h].
struct GateParams {
  Eigen::MatrixXd weight;  // hidden x (input + hidden)
  Eigen::VectorXd bias;    // hidden
};

struct LstmCellParams {
  LstmCellParams() = default;
  /// All-zero cell.
  LstmCellParams(int input_size, int hidden_size);

  int input_size = 0;
  int hidden_size = 0;
  std::array<GateParams, kGates> gates;

  std::size_t parameter_count() const;
};

struct CellOutput {
  Eigen::VectorXd h;
  Eigen::VectorXd c;
};

/// f, i, o = sigmoid, g = tanh; c' = f*c + i*g, h' = o*tanh(c').
/// Throws UsageError if the vector sizes do not match the cell.
CellOutput lstm_cell_step(const LstmCellParams& cell, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& h, const Eigen::VectorXd& c);

/// Stacked LSTM read out by a linear head on the top layer's last hidden
/// state. Columns of a batch are independent sequences.
struct LstmStack {
  std::vector<LstmCellParams> layers;
  Eigen::MatrixXd head_weight;  // outputs x hidden
  Eigen::VectorXd head_bias;

  int input_size() const { return layers.front().input_size; }
  int output_size() const { return static_cast<int>(head_bias.size()); }
  std::size_t parameter_count() const;

  /// sequence[t] is (input_size x batch); returns (output_size x batch).
  Eigen::MatrixXd predict(std::span<const Eigen::MatrixXd> sequence) const;
};

/// Glorot-uniform gate and head weights, zero biases except forget = 1.
LstmStack init_lstm_stack(int input_size, int hidden_size, int layers, int output_size,
                          std::uint64_t seed);

/// Flat parameter order: per layer, per gate (input, forget, output,
/// candidate) the row-major weight then the bias; then head weight, head bias.
std::vector<double> pack_parameters(const LstmStack& stack);
void unpack_parameters(LstmStack& stack, std::span<const double> flat);

/// Mean squared error of predict(sequence) against targets (output x batch),
/// averaged over every entry. When `grad` is non-empty it receives the
/// gradient (packed order), computed by backpropagation through time.
double sequence_mse(const LstmStack& stack, std::span<const Eigen::MatrixXd> sequence,
                    const Eigen::MatrixXd& targets, std::span<double> grad);

void to_json(nlohmann::json& j, const LstmStack& stack);
void from_json(const nlohmann::json& j, LstmStack& stack);

}  // namespace pinnsird::forecast
