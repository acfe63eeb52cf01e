#pragma once

#include <cstdint>
#include <vector>

namespace hs {

/// Per-cell samples at a time; slot and far-field entries are carried along.
struct EnthalpyField {
  double t = 0.0;
  std::vector<double> u;
};

struct TemperatureField {
  double t = 0.0;
  std::vector<double> theta;
};

using Mask = std::vector<std::uint8_t>;

}  // namespace hs
