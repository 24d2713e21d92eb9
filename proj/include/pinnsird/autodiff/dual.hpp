#pragma once

#include "pinnsird/autodiff/tape.hpp"

namespace pinnsird::autodiff {

/// Forward-mode dual number whose two parts are themselves tape variables.
/// The tangent carries d/dt of the value for a single scalar input t, and
/// because it lives on the tape it can be differentiated in reverse mode
/// with respect to any leaf (e.g. network weights).
struct Dual {
  Var value;
  Var tangent;
};

inline Dual seed_input(Tape& tape, double t) {
  return {tape.variable(t), tape.constant(1.0)};
}

inline Dual lift(Tape& tape, const Var& v) { return {v, tape.constant(0.0)}; }

inline Dual operator+(const Dual& a, const Dual& b) {
  return {a.value + b.value, a.tangent + b.tangent};
}

inline Dual operator-(const Dual& a, const Dual& b) {
  return {a.value - b.value, a.tangent - b.tangent};
}

inline Dual operator*(const Dual& a, const Dual& b) {
  return {a.value * b.value, a.value * b.tangent + a.tangent * b.value};
}

/// Scaling by a constant-in-t tape variable (a weight).
inline Dual operator*(const Var& w, const Dual& x) {
  return {w * x.value, w * x.tangent};
}

inline Dual operator+(const Dual& x, const Var& b) { return {x.value + b, x.tangent}; }

inline Dual tanh(const Dual& x) {
  Var y = tanh(x.value);
  return {y, (1.0 - square(y)) * x.tangent};
}

inline Dual sigmoid(const Dual& x) {
  Var y = sigmoid(x.value);
  return {y, (y * (1.0 - y)) * x.tangent};
}

}  // namespace pinnsird::autodiff
