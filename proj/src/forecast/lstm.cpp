#include "pinnsird/forecast/lstm.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <random>
#include <string>

#include "pinnsird/errors.hpp"

namespace pinnsird::forecast {
namespace {

constexpr std::array<const char*, kGates> kGateNames{"input", "forget", "output", "candidate"};

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z) {
  return (1.0 + (-z.array()).exp()).inverse().matrix();
}

struct StepCache {
  Eigen::MatrixXd xh;  // [x; h_prev]
  std::array<Eigen::MatrixXd, kGates> act;
  Eigen::MatrixXd c_prev;
  Eigen::MatrixXd c;
  Eigen::MatrixXd tanh_c;
  Eigen::MatrixXd h;
};

void check_sequence(const LstmStack& stack, std::span<const Eigen::MatrixXd> sequence) {
  if (stack.layers.empty()) {
    throw UsageError("LSTM stack has no layers");
  }
  if (sequence.empty()) {
    throw UsageError("LSTM input sequence is empty");
  }
  for (const auto& x : sequence) {
    if (x.rows() != stack.input_size() || x.cols() != sequence.front().cols()) {
      throw UsageError("LSTM input step has the wrong shape");
    }
  }
}

StepCache cell_forward(const LstmCellParams& cell, const Eigen::MatrixXd& x,
                       const Eigen::MatrixXd& h, const Eigen::MatrixXd& c) {
  StepCache s;
  s.xh.resize(x.rows() + h.rows(), x.cols());
  s.xh.topRows(x.rows()) = x;
  s.xh.bottomRows(h.rows()) = h;
  for (std::size_t k = 0; k < kGates; ++k) {
    Eigen::MatrixXd z = cell.gates[k].weight * s.xh;
    z.colwise() += cell.gates[k].bias;
    s.act[k] = k == kCandidate ? Eigen::MatrixXd(z.array().tanh().matrix()) : sigmoid(z);
  }
  s.c_prev = c;
  s.c = (s.act[kForgetGate].array() * c.array() +
         s.act[kInputGate].array() * s.act[kCandidate].array())
            .matrix();
  s.tanh_c = s.c.array().tanh().matrix();
  s.h = (s.act[kOutputGate].array() * s.tanh_c.array()).matrix();
  return s;
}

// caches[l][t]
std::vector<std::vector<StepCache>> stack_forward(const LstmStack& stack,
                                                  std::span<const Eigen::MatrixXd> sequence) {
  const Eigen::Index batch = sequence.front().cols();
  std::vector<std::vector<StepCache>> caches(stack.layers.size());
  for (std::size_t l = 0; l < stack.layers.size(); ++l) {
    const auto& cell = stack.layers[l];
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(cell.hidden_size, batch);
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(cell.hidden_size, batch);
    for (std::size_t t = 0; t < sequence.size(); ++t) {
      const Eigen::MatrixXd& x = l == 0 ? sequence[t] : caches[l - 1][t].h;
      caches[l].push_back(cell_forward(cell, x, h, c));
      h = caches[l].back().h;
      c = caches[l].back().c;
    }
  }
  return caches;
}

LstmStack zeros_like(const LstmStack& stack) {
  LstmStack z;
  for (const auto& cell : stack.layers) {
    z.layers.emplace_back(cell.input_size, cell.hidden_size);
  }
  z.head_weight = Eigen::MatrixXd::Zero(stack.head_weight.rows(), stack.head_weight.cols());
  z.head_bias = Eigen::VectorXd::Zero(stack.head_bias.size());
  return z;
}

template <class Stack, class Fn>
void visit_blocks(Stack& stack, Fn&& fn) {
  for (auto& cell : stack.layers) {
    for (auto& gate : cell.gates) {
      fn(gate.weight);
      fn(gate.bias);
    }
  }
  fn(stack.head_weight);
  fn(stack.head_bias);
}

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row[static_cast<std::size_t>(c)] = m(r, c);
    }
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, Eigen::Index rows, Eigen::Index cols,
                                 const std::string& what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    throw UsageError("checkpoint " + what + " has the wrong shape");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto row = j.at(static_cast<std::size_t>(r)).get<std::vector<double>>();
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw UsageError("checkpoint " + what + " has the wrong shape");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = row[static_cast<std::size_t>(c)];
    }
  }
  return m;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j, Eigen::Index size,
                                 const std::string& what) {
  const auto v = j.get<std::vector<double>>();
  if (static_cast<Eigen::Index>(v.size()) != size) {
    throw UsageError("checkpoint " + what + " has the wrong length");
  }
  return Eigen::Map<const Eigen::VectorXd>(v.data(), size);
}

}  // namespace

LstmCellParams::LstmCellParams(int input_size, int hidden_size)
    : input_size(input_size), hidden_size(hidden_size) {
  if (input_size <= 0 || hidden_size <= 0) {
    throw UsageError("LSTM cell sizes must be positive");
  }
  for (auto& gate : gates) {
    gate.weight = Eigen::MatrixXd::Zero(hidden_size, input_size + hidden_size);
    gate.bias = Eigen::VectorXd::Zero(hidden_size);
  }
}

std::size_t LstmCellParams::parameter_count() const {
  return kGates * static_cast<std::size_t>(hidden_size) *
         static_cast<std::size_t>(input_size + hidden_size + 1);
}

CellOutput lstm_cell_step(const LstmCellParams& cell, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& h, const Eigen::VectorXd& c) {
  if (x.size() != cell.input_size || h.size() != cell.hidden_size || c.size() != cell.hidden_size) {
    throw UsageError("lstm_cell_step: vector sizes do not match the cell");
  }
  StepCache s = cell_forward(cell, x, h, c);
  return {s.h.col(0), s.c.col(0)};
}

std::size_t LstmStack::parameter_count() const {
  std::size_t n = 0;
  for (const auto& cell : layers) {
    n += cell.parameter_count();
  }
  return n + static_cast<std::size_t>(head_weight.size() + head_bias.size());
}

Eigen::MatrixXd LstmStack::predict(std::span<const Eigen::MatrixXd> sequence) const {
  check_sequence(*this, sequence);
  const auto caches = stack_forward(*this, sequence);
  Eigen::MatrixXd y = head_weight * caches.back().back().h;
  y.colwise() += head_bias;
  return y;
}

LstmStack init_lstm_stack(int input_size, int hidden_size, int layers, int output_size,
                          std::uint64_t seed) {
  if (layers <= 0 || output_size <= 0) {
    throw UsageError("LSTM stack needs at least one layer and one output");
  }
  std::mt19937_64 rng(seed);
  auto glorot = [&rng](Eigen::MatrixXd& m, double fan_in, double fan_out) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        m(r, c) = limit * dist(rng);
      }
    }
  };
  LstmStack stack;
  for (int l = 0; l < layers; ++l) {
    LstmCellParams cell(l == 0 ? input_size : hidden_size, hidden_size);
    for (auto& gate : cell.gates) {
      glorot(gate.weight, cell.input_size + hidden_size, hidden_size);
    }
    cell.gates[kForgetGate].bias.setOnes();
    stack.layers.push_back(std::move(cell));
  }
  stack.head_weight = Eigen::MatrixXd::Zero(output_size, hidden_size);
  glorot(stack.head_weight, hidden_size, output_size);
  stack.head_bias = Eigen::VectorXd::Zero(output_size);
  return stack;
}

std::vector<double> pack_parameters(const LstmStack& stack) {
  std::vector<double> flat;
  flat.reserve(stack.parameter_count());
  visit_blocks(stack, [&flat](const auto& block) {
    for (Eigen::Index r = 0; r < block.rows(); ++r) {
      for (Eigen::Index c = 0; c < block.cols(); ++c) {
        flat.push_back(block(r, c));
      }
    }
  });
  return flat;
}

void unpack_parameters(LstmStack& stack, std::span<const double> flat) {
  if (flat.size() != stack.parameter_count()) {
    throw UsageError("parameter vector does not match the LSTM stack");
  }
  std::size_t k = 0;
  visit_blocks(stack, [&](auto& block) {
    for (Eigen::Index r = 0; r < block.rows(); ++r) {
      for (Eigen::Index c = 0; c < block.cols(); ++c) {
        block(r, c) = flat[k++];
      }
    }
  });
}

double sequence_mse(const LstmStack& stack, std::span<const Eigen::MatrixXd> sequence,
                    const Eigen::MatrixXd& targets, std::span<double> grad) {
  check_sequence(stack, sequence);
  const Eigen::Index batch = sequence.front().cols();
  if (targets.rows() != stack.output_size() || targets.cols() != batch) {
    throw UsageError("LSTM targets have the wrong shape");
  }
  if (!grad.empty() && grad.size() != stack.parameter_count()) {
    throw UsageError("gradient buffer does not match the LSTM stack");
  }
  const auto caches = stack_forward(stack, sequence);
  const Eigen::MatrixXd& h_top = caches.back().back().h;
  Eigen::MatrixXd y = stack.head_weight * h_top;
  y.colwise() += stack.head_bias;
  const Eigen::MatrixXd diff = y - targets;
  const double scale = 1.0 / static_cast<double>(diff.size());
  const double loss = diff.squaredNorm() * scale;
  if (grad.empty()) {
    return loss;
  }

  LstmStack g = zeros_like(stack);
  const Eigen::MatrixXd dy = 2.0 * scale * diff;
  g.head_weight = dy * h_top.transpose();
  g.head_bias = dy.rowwise().sum();

  const std::size_t steps = sequence.size();
  // dh_in[t]: gradient reaching layer l's h_t from above (the next layer or the head)
  std::vector<Eigen::MatrixXd> dh_in(steps);
  const int top_hidden = stack.layers.back().hidden_size;
  for (auto& m : dh_in) {
    m = Eigen::MatrixXd::Zero(top_hidden, batch);
  }
  dh_in.back() = stack.head_weight.transpose() * dy;

  for (std::size_t l = stack.layers.size(); l-- > 0;) {
    const auto& cell = stack.layers[l];
    auto& gcell = g.layers[l];
    const Eigen::Index in = cell.input_size;
    Eigen::MatrixXd dh_next = Eigen::MatrixXd::Zero(cell.hidden_size, batch);
    Eigen::MatrixXd dc_next = Eigen::MatrixXd::Zero(cell.hidden_size, batch);
    std::vector<Eigen::MatrixXd> dx(steps);
    for (std::size_t t = steps; t-- > 0;) {
      const StepCache& s = caches[l][t];
      const auto& i = s.act[kInputGate].array();
      const auto& f = s.act[kForgetGate].array();
      const auto& o = s.act[kOutputGate].array();
      const auto& gc = s.act[kCandidate].array();
      const Eigen::ArrayXXd dh = (dh_in[t] + dh_next).array();
      const Eigen::ArrayXXd dc =
          dc_next.array() + dh * o * (1.0 - s.tanh_c.array().square());

      std::array<Eigen::MatrixXd, kGates> dz;
      dz[kInputGate] = (dc * gc * i * (1.0 - i)).matrix();
      dz[kForgetGate] = (dc * s.c_prev.array() * f * (1.0 - f)).matrix();
      dz[kOutputGate] = (dh * s.tanh_c.array() * o * (1.0 - o)).matrix();
      dz[kCandidate] = (dc * i * (1.0 - gc.square())).matrix();

      Eigen::MatrixXd dxh = Eigen::MatrixXd::Zero(in + cell.hidden_size, batch);
      for (std::size_t k = 0; k < kGates; ++k) {
        gcell.gates[k].weight.noalias() += dz[k] * s.xh.transpose();
        gcell.gates[k].bias += dz[k].rowwise().sum();
        dxh.noalias() += cell.gates[k].weight.transpose() * dz[k];
      }
      dc_next = (dc * f).matrix();
      dh_next = dxh.bottomRows(cell.hidden_size);
      dx[t] = dxh.topRows(in);
    }
    dh_in = std::move(dx);
  }

  const auto flat = pack_parameters(g);
  std::copy(flat.begin(), flat.end(), grad.begin());
  return loss;
}

void to_json(nlohmann::json& j, const LstmStack& stack) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& cell : stack.layers) {
    nlohmann::json gates;
    for (std::size_t k = 0; k < kGates; ++k) {
      const auto& b = cell.gates[k].bias;
      gates[kGateNames[k]] = {{"weight", matrix_json(cell.gates[k].weight)},
                              {"bias", std::vector<double>(b.data(), b.data() + b.size())}};
    }
    layers.push_back({{"input_size", cell.input_size},
                      {"hidden_size", cell.hidden_size},
                      {"gates", gates}});
  }
  const auto& hb = stack.head_bias;
  j = nlohmann::json{{"layers", layers},
                     {"head",
                      {{"weight", matrix_json(stack.head_weight)},
                       {"bias", std::vector<double>(hb.data(), hb.data() + hb.size())}}}};
}

void from_json(const nlohmann::json& j, LstmStack& stack) {
  LstmStack out;
  for (const auto& lj : j.at("layers")) {
    LstmCellParams cell(lj.at("input_size").get<int>(), lj.at("hidden_size").get<int>());
    for (std::size_t k = 0; k < kGates; ++k) {
      const auto& gj = lj.at("gates").at(kGateNames[k]);
      const std::string what = std::string(kGateNames[k]) + " gate";
      cell.gates[k].weight = matrix_from_json(gj.at("weight"), cell.hidden_size,
                                              cell.input_size + cell.hidden_size, what);
      cell.gates[k].bias = vector_from_json(gj.at("bias"), cell.hidden_size, what);
    }
    out.layers.push_back(std::move(cell));
  }
  if (out.layers.empty()) {
    throw UsageError("checkpoint has no LSTM layers");
  }
  for (std::size_t l = 1; l < out.layers.size(); ++l) {
    if (out.layers[l].input_size != out.layers[l - 1].hidden_size) {
      throw UsageError("checkpoint layer " + std::to_string(l) + " does not chain");
    }
  }
  const auto& hj = j.at("head");
  const auto outputs = static_cast<Eigen::Index>(hj.at("bias").size());
  out.head_weight =
      matrix_from_json(hj.at("weight"), outputs, out.layers.back().hidden_size, "head");
  out.head_bias = vector_from_json(hj.at("bias"), outputs, "head");
  stack = std::move(out);
}

}  // namespace pinnsird::forecast
