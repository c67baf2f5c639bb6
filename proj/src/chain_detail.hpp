#pragma once

#include <complex>

#include "men/men_graph.hpp"

namespace men::detail {

/// q(x_i | x_{i-1}, x0_{i+1}) on a path model; `prev` is ignored for node 1.
inline std::complex<double> chain_q(const MenModel& model, int i, int prev, int x) {
  const auto& table = model.potentials[static_cast<std::size_t>(i - 1)];
  std::size_t key = static_cast<std::size_t>(x);
  for (int j : table.neighbors) {
    key = (key << 1) | static_cast<std::size_t>(j < i ? prev : model.reference.raw(j));
  }
  return table.values[key];
}

}  // namespace men::detail
