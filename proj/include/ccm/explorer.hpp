#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "ccm/path.hpp"
#include "ccm/rng.hpp"

namespace ccm {

constexpr std::uint64_t kNoDefect = std::numeric_limits<std::uint64_t>::max();

struct ExplorationResult {
  // all indexed by discovery order; walk has one leading zero entry
  std::vector<std::uint32_t> ordered_degrees;
  std::vector<std::uint32_t> cycle_counts;
  std::vector<std::int64_t> walk;
  std::vector<std::uint64_t> component_sizes;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // discovery indices, 1-based
  bool is_simple = true;
  std::uint64_t first_defect = kNoDefect;  // smallest discovery index touching a loop or multi-edge
  std::vector<std::uint64_t> active_high_water;  // max live active count while k vertices known
  std::uint64_t n = 0;

  std::uint64_t surplus() const;
  std::uint64_t edge_count() const { return edges.size(); }
};

// Uniform pairing of half-edges, explored depth-first. The degree sum must be
// even; zero-degree vertices come last as singleton components.
ExplorationResult explore(const std::vector<std::uint32_t>& degrees, Rng& rng);

struct WalkComponents {
  std::vector<std::uint64_t> sizes;
  std::vector<std::uint64_t> zeta;  // zeta[k] = first index with walk = -2(k+1)
};

// Component sizes recovered from the walk alone via its -2k hitting times.
WalkComponents components_from_walk(const std::vector<std::int64_t>& walk);

// 1-based component index of vertex v_i, from the running walk minimum.
std::uint64_t component_index(const std::vector<std::int64_t>& walk, std::uint64_t i);

struct SimpleSample {
  ExplorationResult result;
  std::uint64_t attempts = 0;
};

// Re-pairs the same degree vector until the multigraph is simple.
SimpleSample sample_simple(const std::vector<std::uint32_t>& degrees, Rng& rng,
                           std::uint64_t max_attempts);

// Path t -> walk(floor(t n^time_exp)) / n^space_exp on a dt grid.
LimitPath rescale_walk(const std::vector<std::int64_t>& walk, double n, double time_exp,
                       double space_exp, double horizon, double dt);

}  // namespace ccm
