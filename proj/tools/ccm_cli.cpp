#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccm/degree_law.hpp"
#include "ccm/ensemble.hpp"
#include "ccm/errors.hpp"
#include "ccm/excursion.hpp"
#include "ccm/explorer.hpp"
#include "ccm/limit_process.hpp"
#include "ccm/poisson_field.hpp"
#include "ccm/stats.hpp"

namespace {

using nlohmann::json;

struct LawFlags {
  std::string pmf;
  double gamma = 0.0;
  std::uint32_t k_min = 3;
  double poisson = 0.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--pmf", pmf, "finite-support pmf as JSON, e.g. '{\"1\":0.75,\"3\":0.25}'");
    cmd->add_option("--power-law-gamma", gamma, "tail exponent in (3,4)");
    cmd->add_option("--k-min", k_min, "first tail degree for the power law family")
        ->default_val(3);
    cmd->add_option("--poisson", poisson, "Poisson mean (1.0 is the critical case)");
  }

  json to_spec() const {
    int given = (!pmf.empty()) + (gamma != 0.0) + (poisson != 0.0);
    if (given != 1) {
      throw CLI::ValidationError("law", "give exactly one of --pmf, --power-law-gamma, --poisson");
    }
    if (!pmf.empty()) return json{{"pmf", json::parse(pmf)}};
    if (gamma != 0.0) return json{{"power_law", {{"gamma", gamma}, {"k_min", k_min}}}};
    return json{{"poisson", poisson}};
  }
};

std::uint64_t spec_hash(const json& spec, std::uint64_t seed) {
  return ccm::fnv1a(spec.dump() + "#" + std::to_string(seed));
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CLI::ValidationError("--out", "cannot write " + path.string());
  out << bytes;
}

int run_validate(const LawFlags& flags) {
  ccm::DegreeLaw law = ccm::DegreeLaw::from_json(flags.to_spec());
  std::cout << "law " << law.describe() << "\n";
  std::cout << "mean degree " << law.mu() << ", second moment " << law.second_moment()
            << ", criticality residual " << law.criticality_residual() << "\n";
  if (law.regime() == ccm::TailRegime::PowerLaw) {
    const auto& tail = *law.tail();
    std::cout << "power-law tail: gamma " << tail.gamma << ", k_min " << tail.k_min
              << ", constant " << tail.c << "\n";
  } else {
    std::cout << "finite third moment: size-bias curvature " << law.beta() << "\n";
  }
  std::cout << "scaling exponents: time " << law.time_exponent() << ", space "
            << law.space_exponent() << "\n";
  return 0;
}

// Raw pmf sampling: explore accepts any degree vector, critical or not.
std::vector<std::uint32_t> sample_raw_pmf(const json& pmf, std::uint64_t n, ccm::Rng& rng) {
  std::vector<std::uint32_t> values;
  std::vector<double> weights;
  double total = 0.0;
  for (const auto& [key, val] : pmf.items()) {
    std::uint64_t k = std::stoull(key);
    double p = val.get<double>();
    if (p < 0.0 || !std::isfinite(p)) ccm::fail(ccm::Err::NotNormalized, "masses must be >= 0");
    if (p == 0.0) continue;
    values.push_back(static_cast<std::uint32_t>(k));
    weights.push_back(p);
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    ccm::fail(ccm::Err::NotNormalized, "pmf sums to " + std::to_string(total));
  }
  ccm::AliasTable table(weights);
  std::vector<std::uint32_t> degrees(n);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::uint32_t parity = 0;
    for (auto& d : degrees) {
      d = values[table.sample(rng)];
      parity ^= d & 1u;
    }
    if (parity == 0) return degrees;
  }
  ccm::fail(ccm::Err::EvenSumTimeout, "no even degree sum in 10000 attempts");
}

int run_explore(const LawFlags& flags, std::uint64_t n, std::uint64_t seed,
                const std::string& out) {
  json spec = flags.to_spec();
  ccm::Rng rng(seed);
  std::vector<std::uint32_t> degrees;
  if (spec.contains("pmf")) {
    degrees = sample_raw_pmf(spec.at("pmf"), n, rng);
  } else {
    degrees = ccm::DegreeLaw::from_json(spec).sample_degrees(n, rng);
  }
  ccm::ExplorationResult res = ccm::explore(degrees, rng);

  std::ostringstream csv;
  csv << "# config_hash=" << spec_hash(spec, seed) << " seed=" << seed << " n=" << n << "\n";
  csv << "i,degree,cycle_count,walk\n";
  csv << "0,,," << 0 << "\n";
  for (std::uint64_t i = 1; i <= res.n; ++i) {
    csv << i << ',' << res.ordered_degrees[i - 1] << ',' << res.cycle_counts[i - 1] << ','
        << res.walk[i] << "\n";
  }
  if (!out.empty()) {
    write_file(out, csv.str());
  } else {
    std::cout << csv.str();
  }

  std::cout << "n " << res.n << ", edges " << res.edge_count() << ", components "
            << res.component_sizes.size() << ", surplus " << res.surplus() << ", simple "
            << (res.is_simple ? "yes" : "no") << "\n";
  std::cout << "component sizes:";
  for (auto s : res.component_sizes) std::cout << ' ' << s;
  std::cout << "\n";
  return 0;
}

struct EnsembleFlags {
  std::string config_path;
  LawFlags law;
  std::vector<std::string> modes;
  std::vector<std::uint64_t> ns;
  std::optional<std::uint64_t> replicates;
  std::optional<std::uint64_t> seed;
  std::optional<double> horizon, dt, eps;
  std::optional<std::uint32_t> top_k;
  std::string out_dir;
  bool probe = false;
};

int run_ensemble_cmd(const EnsembleFlags& flags) {
  ccm::EnsembleConfig config;
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) throw CLI::ValidationError("--config", "cannot read " + flags.config_path);
    config = ccm::EnsembleConfig::from_json(json::parse(in));
  } else {
    config.law = flags.law.to_spec();
  }
  if (!flags.modes.empty()) {
    config.modes.clear();
    for (const auto& m : flags.modes) config.modes.push_back(ccm::mode_from_name(m));
  }
  if (!flags.ns.empty()) config.ns = flags.ns;
  if (flags.replicates) config.replicates = *flags.replicates;
  if (flags.seed) config.seed = *flags.seed;
  if (flags.horizon) config.horizon = *flags.horizon;
  if (flags.dt) config.dt = *flags.dt;
  if (flags.eps) config.eps = *flags.eps;
  if (flags.top_k) config.top_k = *flags.top_k;
  const std::string& out_dir = flags.out_dir;

  ccm::EnsembleSummary summary =
      flags.probe ? ccm::conjecture_probe(config) : ccm::run_ensemble(config);

  if (summary.exploratory) {
    std::cout << "==== EXPLORATORY: no quantitative target backs these numbers ====\n";
  }
  std::cout << "config_hash " << summary.config_hash << ", seed " << config.seed << ", wall "
            << summary.wall_seconds << " s\n";
  for (const auto& g : summary.groups) {
    std::cout << g.key() << ": replicates " << g.rows.size();
    ccm::SampleMoments m = ccm::sample_moments(g.largest);
    std::cout << ", largest mean " << m.mean;
    if (g.mode == ccm::EnsembleMode::Simple) std::cout << ", acceptance " << g.acceptance_rate;
    if (g.mode == ccm::EnsembleMode::Multigraph) {
      std::cout << ", nonsimple " << g.nonsimple_rate << ", early-defect " << g.defect_before_n34;
    }
    std::cout << "\n";
  }
  for (const auto& c : summary.comparisons) {
    std::cout << "KS " << c.left << " vs " << c.right << " = " << c.ks << " (tol " << c.tol
              << (c.acceptance ? ", acceptance" : "") << ") " << (c.pass ? "pass" : "FAIL")
              << ", mean l2 " << c.mean_l2 << "\n";
  }

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::filesystem::path dir(out_dir);
    write_file(dir / "summary.json", summary.canonical_bytes());
    write_file(dir / "replicates.csv", summary.csv());
    std::cout << "wrote " << (dir / "summary.json").string() << " and "
              << (dir / "replicates.csv").string() << "\n";
  }
  if (!summary.acceptance_ok()) {
    std::cerr << "acceptance-tagged comparison failed\n";
    return 1;
  }
  return 0;
}

int run_limit(const LawFlags& flags, double horizon, double dt, double eps, std::uint64_t seed,
              std::uint64_t replicates, const std::string& out_dir) {
  ccm::DegreeLaw law = ccm::DegreeLaw::from_json(flags.to_spec());
  std::filesystem::path dir(out_dir.empty() ? "." : out_dir);
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  std::uint64_t hash = spec_hash(flags.to_spec(), seed);

  std::optional<ccm::LevySimulator> levy;
  if (law.regime() == ccm::TailRegime::PowerLaw) {
    levy.emplace(ccm::LevySpec::from_law(law), horizon, dt, eps);
  }
  for (std::uint64_t r = 0; r < replicates; ++r) {
    ccm::Rng rng(ccm::derive_seed(seed, r));
    ccm::LimitPath path =
        levy ? levy->sample(rng)
             : ccm::simulate_brownian_parabolic(law.mu(), law.beta(), horizon, dt, rng);
    ccm::LimitPath reflected = ccm::reflect(path);
    ccm::ExcursionList list = ccm::excursions(reflected, ccm::default_zero_tol(reflected));

    std::ostringstream pcsv;
    pcsv << "# config_hash=" << hash << " seed=" << seed << " replicate=" << r << "\n";
    pcsv << "t,value\n";
    for (std::size_t i = 0; i < path.values.size(); ++i) {
      pcsv << static_cast<double>(i) * path.dt << ',' << path.values[i] << "\n";
    }
    write_file(dir / ("path_" + std::to_string(r) + ".csv"), pcsv.str());

    std::ostringstream ecsv;
    ecsv << "# config_hash=" << hash << " seed=" << seed << " replicate=" << r << "\n";
    ecsv << "rank,length,left,right,censored\n";
    for (std::size_t i = 0; i < list.lengths.size(); ++i) {
      const auto& e = list.intervals[i];
      ecsv << (i + 1) << ',' << list.lengths[i] << ',' << e.left << ',' << e.right << ','
           << (e.censored ? 1 : 0) << "\n";
    }
    write_file(dir / ("excursions_" + std::to_string(r) + ".csv"), ecsv.str());

    std::cout << "replicate " << r << ": excursions " << list.lengths.size() << ", longest "
              << (list.lengths.empty() ? 0.0 : list.lengths[0]) << "\n";
  }
  std::cout << "wrote paths and excursions under " << dir.string() << "\n";
  return 0;
}

int run_poisson_check(const LawFlags& flags, std::uint64_t n, double horizon, std::uint64_t seed,
                      std::uint64_t replicates) {
  ccm::DegreeLaw law = ccm::DegreeLaw::from_json(flags.to_spec());
  double dn = static_cast<double>(n);

  // arrivals are unit rate: count mean and variance track the window length,
  // counts over disjoint windows are uncorrelated
  std::vector<double> counts, first_half, second_half;
  counts.reserve(replicates);
  for (std::uint64_t r = 0; r < replicates; ++r) {
    ccm::Rng rng(ccm::derive_seed(seed, r));
    ccm::PoissonField field = ccm::simulate_field(law, dn, horizon, rng);
    double c_half = static_cast<double>(field.count_upto(horizon / 2.0));
    double c_full = static_cast<double>(field.count_upto(horizon));
    counts.push_back(c_full);
    first_half.push_back(c_half);
    second_half.push_back(c_full - c_half);
  }
  ccm::SampleMoments cm = ccm::sample_moments(counts);
  double reps = static_cast<double>(replicates);
  double mean_band = 3.0 * std::sqrt(horizon / reps);
  double var_band = 3.0 * std::sqrt((2.0 * horizon * horizon + horizon) / reps);
  double cov = ccm::sample_covariance(first_half, second_half);
  double cov_band = 3.0 * (horizon / 2.0) / std::sqrt(reps);
  bool ok = true;
  auto line = [&ok](const std::string& name, double value, double target, double band) {
    bool pass = std::abs(value - target) <= band;
    ok = ok && pass;
    std::cout << name << " = " << value << " (target " << target << " +- " << band << ") "
              << (pass ? "pass" : "FAIL") << "\n";
  };
  line("arrival count mean", cm.mean, horizon, mean_band);
  line("arrival count variance", cm.var, horizon, var_band);
  line("disjoint window covariance", cov, 0.0, cov_band);

  // deterministic rescaled compensator and bracket against their limits
  double te = law.time_exponent();
  double se = law.space_exponent();
  double scale_t = std::pow(dn, te);
  double scale_x = std::pow(dn, -se);
  std::vector<double> ts;
  for (int i = 1; i <= 10; ++i) ts.push_back(0.2 * static_cast<double>(i) * scale_t);
  std::vector<double> drift = ccm::drift_A_grid(law, dn, ts);
  double worst_drift = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    double t = ts[i] / scale_t;
    double limit = law.regime() == ccm::TailRegime::PowerLaw
                       ? ccm::drift_powerlaw(ccm::LevySpec::from_law(law), t)
                       : -law.beta() / (2.0 * law.mu() * law.mu()) * t * t;
    worst_drift = std::max(worst_drift, std::abs(scale_x * drift[i] - limit));
  }
  std::cout << "sup |rescaled drift - limit| over t <= 2: " << worst_drift << "\n";
  if (law.regime() == ccm::TailRegime::FiniteThirdMoment) {
    double qv = ccm::variation_QV(law, dn, 2.0 * scale_t);
    double qv_err = std::abs(qv / (scale_t * scale_t * scale_x * scale_x) -
                             2.0 * law.beta() / law.mu());
    std::cout << "|rescaled bracket(2) - 2 beta/mu| = " << qv_err << "\n";
  }
  return ok ? 0 : 1;
}

int render_report(const std::string& summary_path, const std::string& out_dir) {
  std::ifstream in(summary_path);
  if (!in) throw CLI::ValidationError("--summary", "cannot read " + summary_path);
  json j = json::parse(in);
  std::ostringstream text;
  if (j.contains("exploratory")) {
    text << "==== " << j.at("exploratory").get<std::string>() << " ====\n";
  }
  text << "config_hash " << j.at("config_hash") << " seed " << j.at("config").at("seed") << "\n";
  std::ostringstream csv;
  csv << "# config_hash=" << j.at("config_hash") << " seed=" << j.at("config").at("seed") << "\n";
  csv << "group,n,replicates,acceptance_rate,nonsimple_rate,defect_before_n34,largest_mean\n";
  for (const auto& g : j.at("groups")) {
    double mean = 0.0;
    std::size_t count = 0;
    for (const auto& r : g.at("rows")) {
      mean += r.at("top")[0].get<double>();
      ++count;
    }
    if (count > 0) mean /= static_cast<double>(count);
    text << g.at("key").get<std::string>() << ": replicates " << count << ", largest mean "
         << mean << ", acceptance " << g.at("acceptance_rate") << ", nonsimple "
         << g.at("nonsimple_rate") << "\n";
    csv << g.at("key").get<std::string>() << ',' << g.at("n") << ',' << count << ','
        << g.at("acceptance_rate") << ',' << g.at("nonsimple_rate") << ','
        << g.at("defect_before_n34") << ',' << json(mean).dump() << "\n";
  }
  for (const auto& c : j.at("comparisons")) {
    text << "KS " << c.at("left").get<std::string>() << " vs " << c.at("right").get<std::string>()
         << " = " << c.at("ks") << " (tol " << c.at("tol") << ") "
         << (c.at("pass").get<bool>() ? "pass" : "FAIL") << "\n";
  }
  std::cout << text.str();
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::filesystem::path dir(out_dir);
    write_file(dir / "report.txt", text.str());
    write_file(dir / "report.csv", csv.str());
    std::cout << "wrote report.txt and report.csv under " << dir.string() << "\n";
  }
  bool ok = true;
  for (const auto& c : j.at("comparisons")) {
    if (c.value("acceptance", false) && !c.at("pass").get<bool>()) ok = false;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"critical configuration-model multigraphs: exploration, limits, ensembles"};
  app.require_subcommand(1);

  LawFlags validate_flags;
  auto* validate = app.add_subcommand("validate", "check a degree law and print its report");
  validate_flags.attach(validate);

  LawFlags explore_flags;
  std::uint64_t explore_n = 10;
  std::uint64_t explore_seed = 0;
  std::string explore_out;
  auto* explore = app.add_subcommand("explore", "run one exploration and dump walk and sizes");
  explore_flags.attach(explore);
  explore->add_option("--n", explore_n, "number of vertices")->required();
  explore->add_option("--seed", explore_seed, "rng seed");
  explore->add_option("--out", explore_out, "CSV output path (default stdout)");

  EnsembleFlags ens;
  auto* ensemble =
      app.add_subcommand("ensemble", "run a replicated ensemble from a JSON config or flags");
  ensemble->add_option("--config", ens.config_path, "JSON config path");
  ens.law.attach(ensemble);
  ensemble->add_option("--mode", ens.modes,
                       "multigraph | simple | poissonized | limit | er_oracle (repeatable)");
  ensemble->add_option("--n", ens.ns, "vertex counts (repeatable)");
  ensemble->add_option("--replicates", ens.replicates, "replicates per group");
  ensemble->add_option("--seed", ens.seed, "master seed (overrides the config)");
  ensemble->add_option("--horizon", ens.horizon, "limit-path starting horizon");
  ensemble->add_option("--dt", ens.dt, "grid step");
  ensemble->add_option("--eps", ens.eps, "jump truncation level");
  ensemble->add_option("--top-k", ens.top_k, "largest sizes recorded per replicate");
  ensemble->add_option("--out", ens.out_dir,
                       "output directory for summary.json and replicates.csv");
  ensemble->add_flag("--probe", ens.probe,
                     "exploratory simple-vs-multigraph probe (power-law laws)");

  LawFlags limit_flags;
  double limit_horizon = 20.0, limit_dt = 1e-4, limit_eps = 1e-3;
  std::uint64_t limit_seed = 0, limit_reps = 1;
  std::string limit_out;
  auto* limit = app.add_subcommand("limit", "simulate limit paths and their excursions");
  limit_flags.attach(limit);
  limit->add_option("--horizon", limit_horizon, "path horizon");
  limit->add_option("--dt", limit_dt, "grid step");
  limit->add_option("--eps", limit_eps, "jump truncation level");
  limit->add_option("--seed", limit_seed, "rng seed");
  limit->add_option("--replicates", limit_reps, "number of paths");
  limit->add_option("--out", limit_out, "output directory");

  LawFlags pc_flags;
  std::uint64_t pc_n = 10000, pc_seed = 0, pc_reps = 1000;
  double pc_horizon = 100.0;
  auto* pc = app.add_subcommand("poisson-check",
                                "arrival-rate, drift and bracket diagnostics for the "
                                "Poissonized field");
  pc_flags.attach(pc);
  pc->add_option("--n", pc_n, "Poissonization size");
  pc->add_option("--horizon", pc_horizon, "field horizon");
  pc->add_option("--seed", pc_seed, "rng seed");
  pc->add_option("--replicates", pc_reps, "field count");

  std::string report_summary, report_out;
  auto* report = app.add_subcommand("report", "render an ensemble summary JSON");
  report->add_option("--summary", report_summary, "summary.json path")->required();
  report->add_option("--out", report_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(validate)) return run_validate(validate_flags);
    if (app.got_subcommand(explore)) {
      return run_explore(explore_flags, explore_n, explore_seed, explore_out);
    }
    if (app.got_subcommand(ensemble)) return run_ensemble_cmd(ens);
    if (app.got_subcommand(limit)) {
      return run_limit(limit_flags, limit_horizon, limit_dt, limit_eps, limit_seed, limit_reps,
                       limit_out);
    }
    if (app.got_subcommand(pc)) {
      return run_poisson_check(pc_flags, pc_n, pc_horizon, pc_seed, pc_reps);
    }
    if (app.got_subcommand(report)) return render_report(report_summary, report_out);
  } catch (const ccm::Error& e) {
    std::cerr << ccm::err_name(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
