#pragma once

#include <cstddef>
#include <vector>

namespace ccm {

enum class PathKind { BrownianParabolic, PowerLawLevy, RescaledWalk };

// Cadlag path sampled on the uniform grid {0, dt, 2dt, ...}; values[0] = 0.
struct LimitPath {
  double dt = 0.0;
  std::vector<double> values;
  PathKind kind = PathKind::RescaledWalk;

  double horizon() const { return dt * static_cast<double>(values.size() - 1); }
  std::size_t cells() const { return values.empty() ? 0 : values.size() - 1; }
};

}  // namespace ccm
