#include "pinnsird/autodiff/tape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pinnsird/errors.hpp"

namespace pinnsird::autodiff {

namespace {

constexpr std::uint32_t kNoOperand = std::numeric_limits<std::uint32_t>::max();

double unary_value(Op op, double a) {
  switch (op) {
    case Op::Neg:
      return -a;
    case Op::Tanh:
      return std::tanh(a);
    case Op::Sigmoid:
      return sigmoid(a);
    case Op::Square:
      return a * a;
    case Op::Abs:
      return std::fabs(a);
    case Op::Exp:
      return std::exp(a);
    case Op::Log:
      return std::log(a);
    case Op::Softplus:
      return softplus(a);
    default:
      throw UsageError("not a unary op");
  }
}

double unary_partial(Op op, double a, double y) {
  switch (op) {
    case Op::Neg:
      return -1.0;
    case Op::Tanh:
      return 1.0 - y * y;
    case Op::Sigmoid:
      return y * (1.0 - y);
    case Op::Square:
      return 2.0 * a;
    case Op::Abs:
      // subgradient at 0 is 0
      return a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0);
    case Op::Exp:
      return y;
    case Op::Log:
      return 1.0 / a;
    case Op::Softplus:
      return sigmoid(a);
    default:
      throw UsageError("not a unary op");
  }
}

double binary_value(Op op, double a, double b) {
  switch (op) {
    case Op::Add:
      return a + b;
    case Op::Sub:
      return a - b;
    case Op::Mul:
      return a * b;
    case Op::Div:
      return a / b;
    default:
      throw UsageError("not a binary op");
  }
}

}  // namespace

double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::fabs(x)));
}

bool Var::is_finite() const noexcept { return std::isfinite(value_); }

void Tape::check_owner(const Var& v) const {
  if (v.tape_ != this || v.index_ >= nodes_.size()) {
    throw UsageError("Var does not belong to this tape");
  }
}

Var Tape::push(const Node& node) {
  if (nodes_.size() >= kNoOperand) {
    throw UsageError("tape exceeds 2^32 nodes");
  }
  nodes_.push_back(node);
  return Var(this, nodes_.size() - 1, node.value);
}

Var Tape::variable(double value) {
  return push({Op::Leaf, kNoOperand, kNoOperand, 0.0, 0.0, value});
}

Var Tape::constant(double value) {
  return push({Op::Constant, kNoOperand, kNoOperand, 0.0, 0.0, value});
}

Var Tape::record(Op op, const Var& operand) {
  check_owner(operand);
  const double a = operand.value_;
  const double y = unary_value(op, a);
  return push({op, static_cast<std::uint32_t>(operand.index_), kNoOperand,
               unary_partial(op, a, y), 0.0, y});
}

Var Tape::record(Op op, const Var& lhs, const Var& rhs) {
  check_owner(lhs);
  check_owner(rhs);
  const double a = lhs.value_;
  const double b = rhs.value_;
  double da = 0.0;
  double db = 0.0;
  switch (op) {
    case Op::Add:
      da = 1.0;
      db = 1.0;
      break;
    case Op::Sub:
      da = 1.0;
      db = -1.0;
      break;
    case Op::Mul:
      da = b;
      db = a;
      break;
    case Op::Div:
      da = 1.0 / b;
      db = -a / (b * b);
      break;
    default:
      throw UsageError("not a binary op");
  }
  return push({op, static_cast<std::uint32_t>(lhs.index_),
               static_cast<std::uint32_t>(rhs.index_), da, db,
               binary_value(op, a, b)});
}

Gradient Tape::backward(const Var& output) const {
  check_owner(output);
  std::vector<double> adj(nodes_.size(), 0.0);
  adj[output.index_] = 1.0;
  for (std::size_t k = output.index_ + 1; k-- > 0;) {
    const Node& n = nodes_[k];
    const double g = adj[k];
    if (g == 0.0) {
      continue;
    }
    if (n.lhs != kNoOperand) {
      adj[n.lhs] += g * n.lhs_partial;
    }
    if (n.rhs != kNoOperand) {
      adj[n.rhs] += g * n.rhs_partial;
    }
  }
  return Gradient(std::move(adj));
}

std::vector<double> Tape::replay() const {
  std::vector<double> values(nodes_.size());
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const Node& n = nodes_[k];
    switch (n.op) {
      case Op::Leaf:
      case Op::Constant:
        values[k] = n.value;
        break;
      case Op::Add:
      case Op::Sub:
      case Op::Mul:
      case Op::Div:
        values[k] = binary_value(n.op, values[n.lhs], values[n.rhs]);
        break;
      default:
        values[k] = unary_value(n.op, values[n.lhs]);
        break;
    }
  }
  return values;
}

namespace {

Tape& owner(const Var& v) {
  if (v.tape() == nullptr) {
    throw UsageError("Var is not attached to a tape");
  }
  return *v.tape();
}

}  // namespace

Var operator+(const Var& a, const Var& b) { return owner(a).record(Op::Add, a, b); }
Var operator-(const Var& a, const Var& b) { return owner(a).record(Op::Sub, a, b); }
Var operator*(const Var& a, const Var& b) { return owner(a).record(Op::Mul, a, b); }
Var operator/(const Var& a, const Var& b) { return owner(a).record(Op::Div, a, b); }
Var operator-(const Var& a) { return owner(a).record(Op::Neg, a); }

Var operator+(const Var& a, double b) { return a + owner(a).constant(b); }
Var operator+(double a, const Var& b) { return owner(b).constant(a) + b; }
Var operator-(const Var& a, double b) { return a - owner(a).constant(b); }
Var operator-(double a, const Var& b) { return owner(b).constant(a) - b; }
Var operator*(const Var& a, double b) { return a * owner(a).constant(b); }
Var operator*(double a, const Var& b) { return owner(b).constant(a) * b; }
Var operator/(const Var& a, double b) { return a / owner(a).constant(b); }
Var operator/(double a, const Var& b) { return owner(b).constant(a) / b; }

Var tanh(const Var& x) { return owner(x).record(Op::Tanh, x); }
Var sigmoid(const Var& x) { return owner(x).record(Op::Sigmoid, x); }
Var square(const Var& x) { return owner(x).record(Op::Square, x); }
Var abs(const Var& x) { return owner(x).record(Op::Abs, x); }
Var exp(const Var& x) { return owner(x).record(Op::Exp, x); }
Var log(const Var& x) { return owner(x).record(Op::Log, x); }
Var softplus(const Var& x) { return owner(x).record(Op::Softplus, x); }

}  // namespace pinnsird::autodiff
