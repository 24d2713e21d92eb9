#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pinnsird/sird/model.hpp"

namespace pinnsird::ident {

/// Fitted compartments, their time derivatives (per day) and the rates that
/// apply at one collocation time.
struct PinnSample {
  sird::SirdState state;
  sird::SirdState rate;
  sird::ParamTriple params;
};

/// SIRD residuals (left side minus right side of each equation):
///   R1 = S' + beta S I
///   R2 = I' - beta S I + (gamma + mu) I
///   R3 = R' - gamma I
///   R4 = D' - mu I
std::array<double, 4> sird_residuals(const PinnSample& s);

struct LossPair {
  double ob = 0.0;
  double ge = 0.0;
  double total() const noexcept { return ob + ge; }
};

/// Per-run seeds are derived from a global seed and a stream index so that
/// independent sub-problems (e.g. weeks) never share an RNG stream.
std::uint64_t derive_seed(std::uint64_t global, std::uint64_t stream);

}  // namespace pinnsird::ident
