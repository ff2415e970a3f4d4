#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccm/explorer.hpp"

namespace ccm {

enum class EnsembleMode { Multigraph, Simple, Poissonized, Limit, ErOracle };

std::string mode_name(EnsembleMode mode);
EnsembleMode mode_from_name(const std::string& name);

// One KS comparison between two group keys, e.g. "multigraph@100000" vs
// "limit"; acceptance-tagged pairs gate the process exit code.
struct ComparePair {
  std::string left;
  std::string right;
  double tol = 1.0;
  bool acceptance = false;
};

struct EnsembleConfig {
  nlohmann::json law = nlohmann::json::object();
  std::vector<EnsembleMode> modes{EnsembleMode::Multigraph};
  std::vector<std::uint64_t> ns{1000};
  std::uint64_t replicates = 1;
  std::uint64_t seed = 0;
  double horizon = 20.0;  // limit-mode starting horizon; poissonized rescaled horizon
  double dt = 1e-4;
  double eps = 1e-3;
  std::uint32_t top_k = 3;
  std::uint64_t simple_attempts = 10000;  // joint resampling budget per replicate
  std::vector<ComparePair> compare;

  static EnsembleConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  std::uint64_t hash() const;
};

struct ReplicateRow {
  std::uint64_t replicate = 0;
  std::vector<double> top;  // non-increasing rescaled sizes or lengths
  std::uint64_t attempts = 1;
  std::uint64_t first_defect = kNoDefect;
  bool is_simple = true;
  double censored_length = 0.0;  // length cut off by the horizon, if any
};

struct GroupSummary {
  EnsembleMode mode = EnsembleMode::Multigraph;
  std::uint64_t n = 0;  // 0 when the mode carries no n
  std::vector<ReplicateRow> rows;
  std::vector<double> largest;  // rows[i].top[0]
  double acceptance_rate = 1.0;
  double nonsimple_rate = 0.0;
  double defect_before_n34 = 0.0;  // fraction with first_defect <= n^{3/4}
  double mean_censored = 0.0;

  std::string key() const;
};

struct CompareResult {
  std::string left;
  std::string right;
  double ks = 1.0;
  double mean_l2 = 0.0;  // per-replicate pairing of the top vectors
  double tol = 1.0;
  bool acceptance = false;
  bool pass = false;
};

struct EnsembleSummary {
  EnsembleConfig config;
  std::uint64_t config_hash = 0;
  bool exploratory = false;
  std::vector<GroupSummary> groups;
  std::vector<CompareResult> comparisons;
  double wall_seconds = 0.0;  // never part of the canonical bytes

  const GroupSummary* find(const std::string& key) const;
  nlohmann::json to_json(bool with_runtime = true) const;
  // runtime-free serialization; identical (config, seed) reruns match byte
  // for byte
  std::string canonical_bytes() const;
  std::string csv() const;
  bool acceptance_ok() const;
};

// Runs every (mode, n) group with deterministically derived replicate seeds;
// multigraph and simple share streams so the conditioning comparison rides on
// common random numbers.
EnsembleSummary run_ensemble(const EnsembleConfig& config);

struct DefectRow {
  std::uint64_t n = 0;
  double p_defect_before_n34 = 0.0;
  double nonsimple_rate = 0.0;
};

// Per-n early-defect table from a multigraph summary.
std::vector<DefectRow> defect_arrival_report(const EnsembleSummary& summary);

// Simple-conditioned power-law run with a multigraph counterpart; output is
// exploratory and never acceptance-gated.
EnsembleSummary conjecture_probe(EnsembleConfig config);

std::uint64_t fnv1a(const std::string& bytes);
unsigned worker_budget();

}  // namespace ccm
