#pragma once

#include <cstdint>
#include <vector>

#include "ccm/rng.hpp"

namespace ccm {

// Component sizes of G(n, p), descending. Edges are sampled by geometric
// skipping over the lexicographic pair order, which draws the same joint law
// as independent Bernoulli coins per pair.
std::vector<std::uint64_t> er_component_sizes(std::uint64_t n, double p, Rng& rng);

}  // namespace ccm
