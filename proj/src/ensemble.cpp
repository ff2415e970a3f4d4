#include "ccm/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include "ccm/degree_law.hpp"
#include "ccm/er_graph.hpp"
#include "ccm/errors.hpp"
#include "ccm/excursion.hpp"
#include "ccm/limit_process.hpp"
#include "ccm/poisson_field.hpp"
#include "ccm/stats.hpp"

namespace ccm {

namespace {

constexpr double kHorizonCap = 50.0;
constexpr double kHorizonStep = 10.0;
constexpr double kCensoredShare = 0.1;  // acceptable censored length vs the top one

// stream salts; multigraph and simple share 0 so conditioning is coupled
std::uint64_t mode_salt(EnsembleMode mode) {
  switch (mode) {
    case EnsembleMode::Multigraph:
    case EnsembleMode::Simple:
      return 0;
    case EnsembleMode::ErOracle:
      return 1;
    case EnsembleMode::Poissonized:
      return 2;
    case EnsembleMode::Limit:
      return 3;
  }
  fail(Err::InternalInvariant, "unknown mode");
}

bool mode_uses_n(EnsembleMode mode) { return mode != EnsembleMode::Limit; }
bool mode_uses_law(EnsembleMode mode) { return mode != EnsembleMode::ErOracle; }

}  // namespace

std::string mode_name(EnsembleMode mode) {
  switch (mode) {
    case EnsembleMode::Multigraph:
      return "multigraph";
    case EnsembleMode::Simple:
      return "simple";
    case EnsembleMode::Poissonized:
      return "poissonized";
    case EnsembleMode::Limit:
      return "limit";
    case EnsembleMode::ErOracle:
      return "er_oracle";
  }
  fail(Err::InternalInvariant, "unknown mode");
}

EnsembleMode mode_from_name(const std::string& name) {
  if (name == "multigraph") return EnsembleMode::Multigraph;
  if (name == "simple") return EnsembleMode::Simple;
  if (name == "poissonized") return EnsembleMode::Poissonized;
  if (name == "limit") return EnsembleMode::Limit;
  if (name == "er_oracle") return EnsembleMode::ErOracle;
  fail(Err::BadConfig, "unknown mode '" + name + "'");
}

EnsembleConfig EnsembleConfig::from_json(const nlohmann::json& j) {
  static const std::vector<std::string> known = {
      "law",  "modes", "mode",  "n",        "replicates", "seed",
      "horizon", "dt",    "eps",   "top_k",    "simple_attempts", "compare"};
  if (!j.is_object()) fail(Err::BadConfig, "ensemble config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      fail(Err::BadConfig, "unknown config key '" + key + "'");
    }
  }
  EnsembleConfig c;
  if (j.contains("law")) c.law = j.at("law");
  c.modes.clear();
  if (j.contains("mode")) c.modes.push_back(mode_from_name(j.at("mode").get<std::string>()));
  if (j.contains("modes")) {
    for (const auto& m : j.at("modes")) c.modes.push_back(mode_from_name(m.get<std::string>()));
  }
  if (c.modes.empty()) c.modes.push_back(EnsembleMode::Multigraph);
  if (j.contains("n")) {
    c.ns.clear();
    if (j.at("n").is_array()) {
      for (const auto& v : j.at("n")) c.ns.push_back(v.get<std::uint64_t>());
    } else {
      c.ns.push_back(j.at("n").get<std::uint64_t>());
    }
  }
  c.replicates = j.value("replicates", c.replicates);
  c.seed = j.value("seed", c.seed);
  c.horizon = j.value("horizon", c.horizon);
  c.dt = j.value("dt", c.dt);
  c.eps = j.value("eps", c.eps);
  c.top_k = j.value("top_k", c.top_k);
  c.simple_attempts = j.value("simple_attempts", c.simple_attempts);
  if (j.contains("compare")) {
    for (const auto& p : j.at("compare")) {
      ComparePair pair;
      pair.left = p.at("left").get<std::string>();
      pair.right = p.at("right").get<std::string>();
      pair.tol = p.value("tol", 1.0);
      pair.acceptance = p.value("acceptance", false);
      c.compare.push_back(pair);
    }
  }
  if (c.replicates < 1) fail(Err::BadConfig, "replicates must be >= 1");
  if (c.top_k < 1) fail(Err::BadConfig, "top_k must be >= 1");
  bool needs_n = false;
  for (auto m : c.modes) needs_n = needs_n || mode_uses_n(m);
  if (needs_n && c.ns.empty()) fail(Err::BadConfig, "n list is empty");
  return c;
}

nlohmann::json EnsembleConfig::to_json() const {
  nlohmann::json j;
  j["law"] = law;
  j["modes"] = nlohmann::json::array();
  for (auto m : modes) j["modes"].push_back(mode_name(m));
  j["n"] = ns;
  j["replicates"] = replicates;
  j["seed"] = seed;
  j["horizon"] = horizon;
  j["dt"] = dt;
  j["eps"] = eps;
  j["top_k"] = top_k;
  j["simple_attempts"] = simple_attempts;
  j["compare"] = nlohmann::json::array();
  for (const auto& p : compare) {
    j["compare"].push_back(
        {{"left", p.left}, {"right", p.right}, {"tol", p.tol}, {"acceptance", p.acceptance}});
  }
  return j;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t EnsembleConfig::hash() const { return fnv1a(to_json().dump()); }

std::string GroupSummary::key() const {
  std::string k = mode_name(mode);
  if (mode_uses_n(mode)) k += "@" + std::to_string(n);
  return k;
}

unsigned worker_budget() {
  if (const char* env = std::getenv("CCM_WORKERS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 4 : hw;
}

namespace {

struct GroupPlan {
  EnsembleMode mode;
  std::uint64_t n;  // 0 for limit
  std::shared_ptr<const LevySimulator> levy;  // limit mode, power-law laws only
};

std::vector<double> scaled_top(std::vector<std::uint64_t> sizes, double scale,
                               std::uint32_t top_k) {
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  std::vector<double> top(top_k, 0.0);
  for (std::uint32_t i = 0; i < top_k && i < sizes.size(); ++i) {
    top[i] = scale * static_cast<double>(sizes[i]);
  }
  return top;
}

void fill_excursion_row(ReplicateRow& row, const LimitPath& path, std::uint32_t top_k) {
  LimitPath reflected = reflect(path);
  ExcursionList list = excursions(reflected, default_zero_tol(reflected));
  row.top = top_lengths(list, top_k);
  for (const auto& e : list.intervals) {
    if (e.censored) row.censored_length = std::max(row.censored_length, e.length());
  }
}

ReplicateRow run_one(const EnsembleConfig& cfg, const std::optional<DegreeLaw>& law,
                     const GroupPlan& plan, std::uint64_t rep_seed, std::uint64_t rep) {
  ReplicateRow row;
  row.replicate = rep;
  switch (plan.mode) {
    case EnsembleMode::Multigraph: {
      Rng rng(derive_seed(rep_seed, 0));
      auto degrees = law->sample_degrees(plan.n, rng);
      ExplorationResult res = explore(degrees, rng);
      row.top = scaled_top(res.component_sizes,
                           std::pow(static_cast<double>(plan.n), -law->time_exponent()),
                           cfg.top_k);
      row.is_simple = res.is_simple;
      row.first_defect = res.first_defect;
      break;
    }
    case EnsembleMode::Simple: {
      // degrees and pairing are redrawn together, conditioning the joint law;
      // attempt 0 replays the multigraph stream of the same replicate
      for (std::uint64_t attempt = 0;; ++attempt) {
        if (attempt == cfg.simple_attempts) {
          fail(Err::SimplicityTimeout, "no simple graph in " +
                                           std::to_string(cfg.simple_attempts) + " attempts at n " +
                                           std::to_string(plan.n));
        }
        Rng rng(derive_seed(rep_seed, attempt));
        auto degrees = law->sample_degrees(plan.n, rng);
        ExplorationResult res = explore(degrees, rng);
        if (!res.is_simple) continue;
        row.top = scaled_top(res.component_sizes,
                             std::pow(static_cast<double>(plan.n), -law->time_exponent()),
                             cfg.top_k);
        row.attempts = attempt + 1;
        break;
      }
      break;
    }
    case EnsembleMode::ErOracle: {
      Rng rng(derive_seed(rep_seed, 0));
      auto sizes = er_component_sizes(plan.n, 1.0 / static_cast<double>(plan.n), rng);
      row.top = scaled_top(std::move(sizes), std::pow(static_cast<double>(plan.n), -2.0 / 3.0),
                           cfg.top_k);
      break;
    }
    case EnsembleMode::Poissonized: {
      Rng rng(derive_seed(rep_seed, 0));
      double dn = static_cast<double>(plan.n);
      double stretch = std::pow(dn, law->time_exponent());
      PoissonField field = simulate_field(*law, dn, cfg.horizon * stretch, rng);
      LimitPath path =
          rescale_field(field, law->time_exponent(), law->space_exponent(), cfg.horizon, cfg.dt);
      fill_excursion_row(row, path, cfg.top_k);
      break;
    }
    case EnsembleMode::Limit: {
      Rng rng(derive_seed(rep_seed, 0));
      if (plan.levy) {
        fill_excursion_row(row, plan.levy->sample(rng), cfg.top_k);
        break;
      }
      // horizon grows until the censored tail is small next to the top
      // excursion, so the harvest is not cut mid-component
      LimitPath path =
          simulate_brownian_parabolic(law->mu(), law->beta(), cfg.horizon, cfg.dt, rng);
      for (;;) {
        row = ReplicateRow{};
        row.replicate = rep;
        fill_excursion_row(row, path, cfg.top_k);
        bool settled = row.censored_length == 0.0 ||
                       (row.top[0] > 0.0 && row.censored_length < kCensoredShare * row.top[0]);
        if (settled || path.horizon() >= kHorizonCap) break;
        extend_brownian_parabolic(path, law->mu(), law->beta(),
                                  std::min(kHorizonCap, path.horizon() + kHorizonStep), rng);
      }
      break;
    }
  }
  return row;
}

}  // namespace

const GroupSummary* EnsembleSummary::find(const std::string& key) const {
  for (const auto& g : groups) {
    if (g.key() == key) return &g;
  }
  return nullptr;
}

EnsembleSummary run_ensemble(const EnsembleConfig& config) {
  auto started = std::chrono::steady_clock::now();
  std::optional<DegreeLaw> law;
  for (auto m : config.modes) {
    if (mode_uses_law(m) && !law) law = DegreeLaw::from_json(config.law);
  }

  std::vector<GroupPlan> plans;
  for (auto mode : config.modes) {
    if (mode == EnsembleMode::Poissonized || mode == EnsembleMode::Limit) {
      if (!(config.horizon > 0.0) || !(config.dt > 0.0)) {
        fail(Err::BadConfig, "limit and poissonized modes need horizon, dt > 0");
      }
    }
    if (!mode_uses_n(mode)) {
      GroupPlan plan{mode, 0, nullptr};
      if (law->regime() == TailRegime::PowerLaw) {
        plan.levy = std::make_shared<const LevySimulator>(LevySpec::from_law(*law), kHorizonCap,
                                                          config.dt, config.eps);
      }
      plans.push_back(std::move(plan));
      continue;
    }
    for (auto n : config.ns) {
      if (n < 1) fail(Err::BadConfig, "n must be >= 1");
      plans.push_back({mode, n, nullptr});
    }
  }

  EnsembleSummary summary;
  summary.config = config;
  summary.config_hash = config.hash();

  std::vector<std::vector<ReplicateRow>> rows(plans.size());
  std::vector<std::uint64_t> bases(plans.size());
  for (std::size_t g = 0; g < plans.size(); ++g) {
    rows[g].resize(config.replicates);
    bases[g] = derive_seed(config.seed, plans[g].n, mode_salt(plans[g].mode));
  }

  std::size_t total = plans.size() * config.replicates;
  std::vector<std::exception_ptr> failures(total);
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      std::size_t idx = next.fetch_add(1);
      if (idx >= total) return;
      std::size_t g = idx / config.replicates;
      std::uint64_t rep = idx % config.replicates;
      try {
        rows[g][rep] = run_one(config, law, plans[g], derive_seed(bases[g], rep), rep);
      } catch (...) {
        failures[idx] = std::current_exception();
      }
    }
  };
  std::size_t workers = std::min<std::size_t>(worker_budget(), total);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  for (std::size_t idx = 0; idx < total; ++idx) {
    if (!failures[idx]) continue;
    std::size_t g = idx / config.replicates;
    std::uint64_t rep = idx % config.replicates;
    std::ostringstream where;
    where << mode_name(plans[g].mode) << " n=" << plans[g].n << " replicate=" << rep << " seed=0x"
          << std::hex << derive_seed(bases[g], rep);
    try {
      std::rethrow_exception(failures[idx]);
    } catch (const Error& e) {
      fail(e.code(), where.str() + ": " + e.what());
    } catch (const std::exception& e) {
      fail(Err::InternalInvariant, where.str() + ": " + e.what());
    }
  }

  for (std::size_t g = 0; g < plans.size(); ++g) {
    GroupSummary group;
    group.mode = plans[g].mode;
    group.n = plans[g].n;
    group.rows = std::move(rows[g]);
    double reps = static_cast<double>(group.rows.size());
    double attempts = 0.0, nonsimple = 0.0, early = 0.0, censored = 0.0;
    double n34 = std::pow(static_cast<double>(group.n), 0.75);
    group.largest.reserve(group.rows.size());
    for (const auto& row : group.rows) {
      group.largest.push_back(row.top.empty() ? 0.0 : row.top[0]);
      attempts += static_cast<double>(row.attempts);
      nonsimple += row.is_simple ? 0.0 : 1.0;
      if (row.first_defect != kNoDefect &&
          static_cast<double>(row.first_defect) <= n34) {
        early += 1.0;
      }
      censored += row.censored_length;
    }
    group.acceptance_rate = attempts > 0.0 ? reps / attempts : 1.0;
    group.nonsimple_rate = nonsimple / reps;
    group.defect_before_n34 = early / reps;
    group.mean_censored = censored / reps;
    summary.groups.push_back(std::move(group));
  }

  for (const auto& pair : config.compare) {
    const GroupSummary* left = summary.find(pair.left);
    const GroupSummary* right = summary.find(pair.right);
    if (!left || !right) {
      fail(Err::BadConfig, "compare pair references unknown group '" +
                               (left ? pair.right : pair.left) + "'");
    }
    CompareResult res;
    res.left = pair.left;
    res.right = pair.right;
    res.tol = pair.tol;
    res.acceptance = pair.acceptance;
    res.ks = ks_distance(left->largest, right->largest);
    std::size_t pairs = std::min(left->rows.size(), right->rows.size());
    double l2 = 0.0;
    for (std::size_t i = 0; i < pairs; ++i) {
      l2 += l2_distance(left->rows[i].top, right->rows[i].top);
    }
    res.mean_l2 = pairs > 0 ? l2 / static_cast<double>(pairs) : 0.0;
    res.pass = res.ks <= res.tol;
    summary.comparisons.push_back(res);
  }

  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return summary;
}

nlohmann::json EnsembleSummary::to_json(bool with_runtime) const {
  nlohmann::json j;
  j["config"] = config.to_json();
  j["config_hash"] = config_hash;
  if (exploratory) j["exploratory"] = "EXPLORATORY: no quantitative target backs these numbers";
  j["groups"] = nlohmann::json::array();
  for (const auto& g : groups) {
    nlohmann::json jg;
    jg["key"] = g.key();
    jg["mode"] = mode_name(g.mode);
    jg["n"] = g.n;
    jg["acceptance_rate"] = g.acceptance_rate;
    jg["nonsimple_rate"] = g.nonsimple_rate;
    jg["defect_before_n34"] = g.defect_before_n34;
    jg["mean_censored"] = g.mean_censored;
    jg["rows"] = nlohmann::json::array();
    for (const auto& r : g.rows) {
      nlohmann::json jr;
      jr["replicate"] = r.replicate;
      jr["top"] = r.top;
      jr["attempts"] = r.attempts;
      jr["is_simple"] = r.is_simple;
      jr["first_defect"] = r.first_defect == kNoDefect ? 0 : r.first_defect;
      jr["censored_length"] = r.censored_length;
      jg["rows"].push_back(std::move(jr));
    }
    j["groups"].push_back(std::move(jg));
  }
  j["comparisons"] = nlohmann::json::array();
  for (const auto& c : comparisons) {
    j["comparisons"].push_back({{"left", c.left},
                                {"right", c.right},
                                {"ks", c.ks},
                                {"mean_l2", c.mean_l2},
                                {"tol", c.tol},
                                {"acceptance", c.acceptance},
                                {"pass", c.pass}});
  }
  if (with_runtime) j["runtime"] = {{"wall_seconds", wall_seconds}};
  return j;
}

std::string EnsembleSummary::canonical_bytes() const { return to_json(false).dump(); }

std::string EnsembleSummary::csv() const {
  std::ostringstream out;
  out << "# config_hash=" << config_hash << " seed=" << config.seed << "\n";
  if (exploratory) out << "# EXPLORATORY: no quantitative target backs these numbers\n";
  out << "group,replicate,attempts,is_simple,first_defect,censored_length";
  for (std::uint32_t k = 0; k < config.top_k; ++k) out << ",top" << (k + 1);
  out << "\n";
  for (const auto& g : groups) {
    for (const auto& r : g.rows) {
      out << g.key() << ',' << r.replicate << ',' << r.attempts << ',' << (r.is_simple ? 1 : 0)
          << ',' << (r.first_defect == kNoDefect ? 0 : r.first_defect) << ','
          << nlohmann::json(r.censored_length).dump();
      for (double t : r.top) out << ',' << nlohmann::json(t).dump();
      out << "\n";
    }
  }
  return out.str();
}

bool EnsembleSummary::acceptance_ok() const {
  for (const auto& c : comparisons) {
    if (c.acceptance && !c.pass) return false;
  }
  return true;
}

std::vector<DefectRow> defect_arrival_report(const EnsembleSummary& summary) {
  std::vector<DefectRow> rows;
  for (const auto& g : summary.groups) {
    if (g.mode != EnsembleMode::Multigraph) continue;
    rows.push_back({g.n, g.defect_before_n34, g.nonsimple_rate});
  }
  if (rows.empty()) fail(Err::BadConfig, "defect report needs a multigraph group");
  return rows;
}

EnsembleSummary conjecture_probe(EnsembleConfig config) {
  DegreeLaw law = DegreeLaw::from_json(config.law);
  if (law.regime() != TailRegime::PowerLaw) {
    fail(Err::BadConfig, "the conjecture probe is about power-law tails");
  }
  config.modes = {EnsembleMode::Simple, EnsembleMode::Multigraph};
  EnsembleSummary summary = run_ensemble(config);
  summary.exploratory = true;
  return summary;
}

}  // namespace ccm
