#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pinnsird::autodiff {

enum class Op : std::uint8_t {
  Leaf,
  Constant,
  Add,
  Sub,
  Mul,
  Div,
  Neg,
  Tanh,
  Sigmoid,
  Square,
  Abs,
  Exp,
  Log,
  Softplus,
};

class Tape;

/// Handle to a scalar recorded on a Tape. Cheap to copy; only valid while
/// the owning tape is alive and not cleared.
class Var {
 public:
  Var() = default;

  double value() const noexcept { return value_; }
  std::size_t index() const noexcept { return index_; }
  Tape* tape() const noexcept { return tape_; }
  bool is_finite() const noexcept;

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t index, double value)
      : tape_(tape), index_(index), value_(value) {}

  Tape* tape_ = nullptr;
  std::size_t index_ = 0;
  double value_ = 0.0;
};

/// Adjoints of one output with respect to every node of the tape.
class Gradient {
 public:
  explicit Gradient(std::vector<double> adjoints) : adjoints_(std::move(adjoints)) {}

  double operator[](const Var& v) const { return adjoints_.at(v.index()); }
  double at(std::size_t node) const { return adjoints_.at(node); }
  std::span<const double> adjoints() const noexcept { return adjoints_; }

 private:
  std::vector<double> adjoints_;
};

/// Append-only Wengert list. Operands always precede the nodes that use
/// them, so a single reverse sweep computes all adjoints.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var variable(double value);
  Var constant(double value);

  Var record(Op op, const Var& operand);
  Var record(Op op, const Var& lhs, const Var& rhs);

  Gradient backward(const Var& output) const;

  /// Recomputes every node from its operands, leaves and constants taken
  /// as stored.
  std::vector<double> replay() const;

  std::size_t size() const noexcept { return nodes_.size(); }
  double value(std::size_t node) const { return nodes_.at(node).value; }
  Op op(std::size_t node) const { return nodes_.at(node).op; }
  void clear() noexcept { nodes_.clear(); }
  void reserve(std::size_t n) { nodes_.reserve(n); }

 private:
  struct Node {
    Op op;
    std::uint32_t lhs;
    std::uint32_t rhs;
    double lhs_partial;
    double rhs_partial;
    double value;
  };

  void check_owner(const Var& v) const;
  Var push(const Node& node);

  std::vector<Node> nodes_;
};

Var operator+(const Var& a, const Var& b);
Var operator-(const Var& a, const Var& b);
Var operator*(const Var& a, const Var& b);
Var operator/(const Var& a, const Var& b);
Var operator-(const Var& a);

Var operator+(const Var& a, double b);
Var operator+(double a, const Var& b);
Var operator-(const Var& a, double b);
Var operator-(double a, const Var& b);
Var operator*(const Var& a, double b);
Var operator*(double a, const Var& b);
Var operator/(const Var& a, double b);
Var operator/(double a, const Var& b);

Var tanh(const Var& x);
Var sigmoid(const Var& x);
Var square(const Var& x);
Var abs(const Var& x);
Var exp(const Var& x);
Var log(const Var& x);
Var softplus(const Var& x);

double sigmoid(double x);
double softplus(double x);

}  // namespace pinnsird::autodiff
