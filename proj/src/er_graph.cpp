#include "ccm/er_graph.hpp"

#include <cmath>

#include "ccm/errors.hpp"
#include "ccm/union_find.hpp"

namespace ccm {

std::vector<std::uint64_t> er_component_sizes(std::uint64_t n, double p, Rng& rng) {
  if (n == 0 || !(p >= 0.0) || !(p <= 1.0)) {
    fail(Err::BadConfig, "er_component_sizes requires n >= 1 and p in [0,1]");
  }
  if (p == 0.0) return std::vector<std::uint64_t>(n, 1);
  if (p == 1.0) return {n};
  UnionFind uf(n);
  double log1mp = std::log1p(-p);
  std::uint64_t v = 1;
  std::int64_t w = -1;
  while (v < n) {
    double skip = std::floor(std::log(rng.u01()) / log1mp);
    w += 1 + static_cast<std::int64_t>(skip);
    while (w >= static_cast<std::int64_t>(v) && v < n) {
      w -= static_cast<std::int64_t>(v);
      ++v;
    }
    if (v < n) uf.unite(v, static_cast<std::uint64_t>(w));
  }
  return uf.sizes();
}

}  // namespace ccm
