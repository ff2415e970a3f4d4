#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ccm/explorer.hpp"
#include "ccm/union_find.hpp"

namespace ccm_test {

// Checks every structural identity one exploration must satisfy against the
// input degree vector. Returns an empty string on success, else a short name
// for the first violated identity. Shared by the unit tests and the
// acceptance runner so both enforce the same contract.
inline std::string audit_instance(const std::vector<std::uint32_t>& degrees,
                                  const ccm::ExplorationResult& r) {
  const std::uint64_t n = degrees.size();
  std::uint64_t total_degree = 0;
  for (auto d : degrees) total_degree += d;
  if (total_degree % 2 != 0) return "audit called with odd degree sum";
  const std::uint64_t edges = total_degree / 2;

  if (r.n != n) return "n mismatch";
  if (r.ordered_degrees.size() != n) return "ordered_degrees size";
  if (r.cycle_counts.size() != n) return "cycle_counts size";
  if (r.walk.size() != n + 1) return "walk size";
  if (r.active_high_water.size() != n) return "active_high_water size";
  if (r.edges.size() != edges) return "edge count";
  if (r.edge_count() != edges) return "edge_count() accessor";

  {
    std::vector<std::uint32_t> a = degrees;
    std::vector<std::uint32_t> b = r.ordered_degrees;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return "ordered_degrees not a permutation of the input";
  }

  if (r.walk[0] != 0) return "walk[0] != 0";
  for (std::uint64_t i = 1; i <= n; ++i) {
    std::int64_t step = static_cast<std::int64_t>(r.ordered_degrees[i - 1]) - 2 -
                        2 * static_cast<std::int64_t>(r.cycle_counts[i - 1]);
    if (r.walk[i] != r.walk[i - 1] + step) return "walk step identity";
  }

  const std::uint64_t comp_count = r.component_sizes.size();
  std::uint64_t covered = 0;
  for (auto s : r.component_sizes) {
    if (s == 0) return "zero component size";
    covered += s;
  }
  if (covered != n) return "component sizes do not sum to n";
  if (r.walk[n] != -2 * static_cast<std::int64_t>(comp_count)) return "walk end != -2 * components";

  // boundary hits -2k exactly, interior stays >= -2k - 1
  std::uint64_t zeta = 0;
  std::int64_t k = 0;
  for (auto s : r.component_sizes) {
    for (std::uint64_t i = zeta; i < zeta + s; ++i) {
      if (r.walk[i] < -2 * k - 1) return "walk below component floor";
    }
    zeta += s;
    ++k;
    if (r.walk[zeta] != -2 * k) return "walk boundary != -2k";
  }

  std::uint64_t surplus = 0;
  for (auto c : r.cycle_counts) surplus += c;
  if (surplus + n != edges + comp_count) return "surplus + n != edges + components";
  if (r.surplus() != surplus) return "surplus() accessor";

  // independent component structure from the recorded edge list
  ccm::UnionFind uf(n);
  for (auto [a, b] : r.edges) {
    if (a < 1 || a > n || b < 1 || b > n) return "edge endpoint outside 1..n";
    uf.unite(a - 1, b - 1);
  }
  if (uf.components() != comp_count) return "union-find component count";
  {
    std::vector<std::uint64_t> a = uf.sizes();
    std::vector<std::uint64_t> b = r.component_sizes;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return "union-find component sizes";
  }

  // defects recomputed from the edge list: loops and repeated pairs
  {
    std::uint64_t fd = ccm::kNoDefect;
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (auto [a, b] : r.edges) {
      bool defect = false;
      if (a == b) {
        defect = true;
      } else {
        auto key = std::minmax(a, b);
        if (!seen.insert(key).second) defect = true;
      }
      if (defect) fd = std::min<std::uint64_t>(fd, std::min(a, b));
    }
    if (fd != r.first_defect) return "first_defect disagrees with edge list";
    if (r.is_simple != (fd == ccm::kNoDefect)) return "is_simple flag vs defects";
  }

  auto wc = ccm::components_from_walk(r.walk);
  if (wc.sizes != r.component_sizes) return "components_from_walk sizes";
  zeta = 0;
  for (std::size_t j = 0; j < wc.zeta.size(); ++j) {
    zeta += r.component_sizes[j];
    if (wc.zeta[j] != zeta) return "zeta not the size prefix sums";
  }

  {
    std::uint64_t idx = 1;
    std::uint64_t consumed = 0;
    for (std::uint64_t i = 1; i <= n; ++i) {
      if (i > consumed + r.component_sizes[idx - 1]) {
        consumed += r.component_sizes[idx - 1];
        ++idx;
      }
      if (ccm::component_index(r.walk, i) != idx) return "component_index disagrees";
    }
  }

  // live active set is bounded by the reflected degree walk plus the two
  // half-edges consumed by the pairing in progress
  std::int64_t y = 0;
  std::int64_t y_min = 0;
  for (std::uint64_t i = 1; i <= n; ++i) {
    y += static_cast<std::int64_t>(r.ordered_degrees[i - 1]) - 2;
    y_min = std::min(y_min, y);
    if (static_cast<std::int64_t>(r.active_high_water[i - 1]) > y - y_min + 2) {
      return "active high water above reflected bound";
    }
  }

  return {};
}

}  // namespace ccm_test
