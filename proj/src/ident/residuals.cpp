#include "pinnsird/ident/residuals.hpp"

namespace pinnsird::ident {

std::array<double, 4> sird_residuals(const PinnSample& s) {
  const auto& x = s.state;
  const auto& p = s.params;
  const double infection = p.beta * x.S * x.I;
  return {s.rate.S + infection, s.rate.I - infection + (p.gamma + p.mu) * x.I,
          s.rate.R - p.gamma * x.I, s.rate.D - p.mu * x.I};
}

std::uint64_t derive_seed(std::uint64_t global, std::uint64_t stream) {
  // splitmix64 finaliser over the combined key
  std::uint64_t z = global + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace pinnsird::ident
