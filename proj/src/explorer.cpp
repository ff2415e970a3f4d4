#include "ccm/explorer.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "ccm/errors.hpp"

namespace ccm {

namespace {

constexpr std::uint8_t kSleeping = 0;
constexpr std::uint8_t kActive = 1;
constexpr std::uint8_t kDead = 2;

struct HalfEdgePool {
  std::vector<std::uint64_t> offset;  // vertex -> first id, ids contiguous per vertex
  std::vector<std::uint32_t> owner;
  std::vector<std::uint8_t> state;
  std::vector<std::uint64_t> living;
  std::vector<std::uint64_t> pos;  // id -> index into living

  explicit HalfEdgePool(const std::vector<std::uint32_t>& degrees) {
    std::size_t nv = degrees.size();
    offset.resize(nv + 1);
    std::uint64_t total = 0;
    for (std::size_t v = 0; v < nv; ++v) {
      offset[v] = total;
      total += degrees[v];
    }
    offset[nv] = total;
    owner.resize(total);
    state.assign(total, kSleeping);
    living.resize(total);
    pos.resize(total);
    for (std::size_t v = 0; v < nv; ++v) {
      for (std::uint64_t id = offset[v]; id < offset[v + 1]; ++id) {
        owner[id] = static_cast<std::uint32_t>(v);
      }
    }
    for (std::uint64_t id = 0; id < total; ++id) {
      living[id] = id;
      pos[id] = id;
    }
  }

  void kill(std::uint64_t id) {
    state[id] = kDead;
    std::uint64_t at = pos[id];
    std::uint64_t last = living.back();
    living[at] = last;
    pos[last] = at;
    living.pop_back();
  }

  std::uint64_t draw_living(Rng& rng) const { return living[rng.below(living.size())]; }
};

class WalkChecker {
 public:
  static void verify(const ExplorationResult& r) {
    std::uint64_t nv = r.n;
    if (r.walk.size() != nv + 1 || r.walk[0] != 0) {
      fail(Err::InternalInvariant, "walk shape mismatch");
    }
    std::int64_t k = 0;
    std::uint64_t cum = 0;
    for (std::uint64_t size : r.component_sizes) {
      std::int64_t floor_val = -2 * k - 1;
      for (std::uint64_t i = cum + 1; i < cum + size; ++i) {
        if (r.walk[i] < floor_val) fail(Err::InternalInvariant, "walk dips below component floor");
      }
      cum += size;
      ++k;
      if (r.walk[cum] != -2 * k) fail(Err::InternalInvariant, "walk misses component boundary");
    }
    if (cum != nv) fail(Err::InternalInvariant, "component sizes do not cover the walk");
    std::uint64_t surplus = 0;
    for (std::uint32_t c : r.cycle_counts) surplus += c;
    std::uint64_t edges = r.edges.size();
    if (surplus + nv != edges + r.component_sizes.size()) {
      fail(Err::InternalInvariant, "surplus identity violated");
    }
  }
};

}  // namespace

std::uint64_t ExplorationResult::surplus() const {
  std::uint64_t s = 0;
  for (std::uint32_t c : cycle_counts) s += c;
  return s;
}

ExplorationResult explore(const std::vector<std::uint32_t>& degrees, Rng& rng) {
  std::size_t nv = degrees.size();
  if (nv == 0) fail(Err::BadConfig, "explore requires at least one vertex");
  std::uint64_t total = 0;
  for (std::uint32_t d : degrees) total += d;
  if (total % 2 != 0) fail(Err::OddDegreeSum, "degree sum " + std::to_string(total) + " is odd");

  HalfEdgePool pool(degrees);
  std::vector<std::uint32_t> disc(nv, 0);  // 1-based discovery index, 0 = sleeping
  std::vector<std::uint32_t> active_cnt(nv, 0);
  std::vector<std::uint64_t> cursor(nv);  // lowest possibly-active id per vertex
  std::vector<std::uint32_t> stack;       // vertices, discovery order

  ExplorationResult res;
  res.n = nv;
  res.ordered_degrees.reserve(nv);
  res.cycle_counts.assign(nv, 0);
  res.component_sizes.reserve(16);
  res.edges.reserve(total / 2);
  res.active_high_water.assign(nv, 0);

  std::unordered_set<std::uint64_t> seen_pairs;
  seen_pairs.reserve(total);

  std::uint32_t discovered = 0;
  std::uint64_t active_total = 0;
  std::uint64_t component_start = 0;

  auto discover = [&](std::uint32_t v) {
    disc[v] = ++discovered;
    res.ordered_degrees.push_back(degrees[v]);
    cursor[v] = pool.offset[v];
  };

  auto note_defect = [&](std::uint32_t ia, std::uint32_t ib) {
    res.is_simple = false;
    std::uint64_t at = std::min(ia, ib);
    if (at < res.first_defect) res.first_defect = at;
  };

  auto record_edge = [&](std::uint32_t va, std::uint32_t vb) {
    std::uint32_t ia = disc[va], ib = disc[vb];
    res.edges.emplace_back(ia, ib);
    if (va == vb) {
      note_defect(ia, ib);
      return;
    }
    std::uint64_t lo = std::min(ia, ib), hi = std::max(ia, ib);
    if (!seen_pairs.insert(lo * (nv + 1) + hi).second) note_defect(ia, ib);
  };

  while (!pool.living.empty()) {
    // new component: uniform sleeping half-edge picks the root, all of the
    // root's half-edges wake up
    std::uint64_t seed_id = pool.draw_living(rng);
    std::uint32_t root = pool.owner[seed_id];
    discover(root);
    for (std::uint64_t id = pool.offset[root]; id < pool.offset[root + 1]; ++id) {
      pool.state[id] = kActive;
    }
    active_cnt[root] = degrees[root];
    active_total += degrees[root];
    stack.push_back(root);
    res.active_high_water[discovered - 1] =
        std::max(res.active_high_water[discovered - 1], active_total);

    while (!stack.empty()) {
      std::uint32_t v = stack.back();
      if (active_cnt[v] == 0) {
        stack.pop_back();
        continue;
      }
      // lowest-id active half-edge of the deepest active vertex
      std::uint64_t l = cursor[v];
      while (pool.state[l] != kActive) ++l;
      cursor[v] = l;

      pool.kill(l);
      --active_cnt[v];
      --active_total;

      std::uint64_t r = pool.draw_living(rng);
      if (pool.state[r] == kSleeping) {
        std::uint32_t w = pool.owner[r];
        discover(w);
        for (std::uint64_t id = pool.offset[w]; id < pool.offset[w + 1]; ++id) {
          if (id != r) pool.state[id] = kActive;
        }
        active_cnt[w] = degrees[w] - 1;
        active_total += degrees[w] - 1;
        pool.kill(r);
        record_edge(v, w);
        stack.push_back(w);
      } else {
        // r was active: l is a cycle half-edge of v
        res.cycle_counts[disc[v] - 1] += 1;
        std::uint32_t w = pool.owner[r];
        --active_cnt[w];
        --active_total;
        pool.kill(r);
        record_edge(v, w);
      }
      res.active_high_water[discovered - 1] =
          std::max(res.active_high_water[discovered - 1], active_total);
    }
    res.component_sizes.push_back(discovered - component_start);
    component_start = discovered;
  }

  // isolated vertices carry no half-edges, so the pairing loop never reaches
  // them; each is its own component, discovered in index order
  for (std::uint32_t v = 0; v < nv; ++v) {
    if (degrees[v] == 0) {
      discover(v);
      res.component_sizes.push_back(1);
      component_start = discovered;
    }
  }

  res.walk.resize(nv + 1);
  res.walk[0] = 0;
  for (std::uint64_t i = 1; i <= nv; ++i) {
    res.walk[i] = res.walk[i - 1] + static_cast<std::int64_t>(res.ordered_degrees[i - 1]) - 2 -
                  2 * static_cast<std::int64_t>(res.cycle_counts[i - 1]);
  }
  WalkChecker::verify(res);
  return res;
}

WalkComponents components_from_walk(const std::vector<std::int64_t>& walk) {
  if (walk.empty() || walk[0] != 0) fail(Err::MalformedWalk, "walk must start at 0");
  std::uint64_t n = walk.size() - 1;
  WalkComponents out;
  std::int64_t k = 0;
  std::uint64_t last = 0;
  for (std::uint64_t i = 1; i <= n; ++i) {
    std::int64_t boundary = -2 * (k + 1);
    if (walk[i] == boundary) {
      out.sizes.push_back(i - last);
      out.zeta.push_back(i);
      last = i;
      ++k;
    } else if (walk[i] < boundary) {
      fail(Err::MalformedWalk, "walk skipped level " + std::to_string(boundary) + " at index " +
                                   std::to_string(i));
    }
  }
  if (last != n) fail(Err::MalformedWalk, "walk does not end on a component boundary");
  return out;
}

std::uint64_t component_index(const std::vector<std::int64_t>& walk, std::uint64_t i) {
  std::uint64_t n = walk.empty() ? 0 : walk.size() - 1;
  if (i < 1 || i > n) {
    fail(Err::IndexOutOfRange, "vertex index " + std::to_string(i) + " outside 1.." +
                                   std::to_string(n));
  }
  std::int64_t m = 0;
  for (std::uint64_t j = 0; j < i; ++j) m = std::min(m, walk[j]);
  return 1 + static_cast<std::uint64_t>((-m) / 2);
}

SimpleSample sample_simple(const std::vector<std::uint32_t>& degrees, Rng& rng,
                           std::uint64_t max_attempts) {
  for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    ExplorationResult r = explore(degrees, rng);
    if (r.is_simple) return {std::move(r), attempt};
  }
  fail(Err::SimplicityTimeout,
       "no simple pairing in " + std::to_string(max_attempts) + " attempts");
}

LimitPath rescale_walk(const std::vector<std::int64_t>& walk, double n, double time_exp,
                       double space_exp, double horizon, double dt) {
  if (walk.empty() || dt <= 0.0 || horizon <= 0.0 || n <= 0.0) {
    fail(Err::BadConfig, "rescale_walk requires a walk, n > 0, horizon > 0, dt > 0");
  }
  std::uint64_t steps = walk.size() - 1;
  double stretch = std::pow(n, time_exp);
  if (std::floor(horizon * stretch) > static_cast<double>(steps)) {
    fail(Err::HorizonExceedsN, "horizon " + std::to_string(horizon) + " needs " +
                                   std::to_string(horizon * stretch) + " walk steps, have " +
                                   std::to_string(steps));
  }
  double scale = std::pow(n, -space_exp);
  std::size_t cells = static_cast<std::size_t>(std::llround(horizon / dt));
  LimitPath path;
  path.dt = dt;
  path.kind = PathKind::RescaledWalk;
  path.values.resize(cells + 1);
  for (std::size_t j = 0; j <= cells; ++j) {
    auto idx = static_cast<std::uint64_t>(std::floor(static_cast<double>(j) * dt * stretch));
    if (idx > steps) idx = steps;
    path.values[j] = scale * static_cast<double>(walk[idx]);
  }
  return path;
}

}  // namespace ccm
