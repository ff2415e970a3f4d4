#include "ccm/degree_law.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ccm/errors.hpp"
#include "ccm/special.hpp"

namespace ccm {

using nlohmann::json;

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kCriticalTol = 1e-10;
constexpr double kPsiTol = 1e-12;
constexpr std::size_t kEvenSumAttempts = 10000;
constexpr std::uint32_t kTailCache = 16384;

}  // namespace

PowerTailSampler::PowerTailSampler(double p, std::uint32_t k_min) : p_(p), k_min_(k_min) {
  if (p <= 1.0 || k_min == 0) fail(Err::BadConfig, "PowerTailSampler requires p > 1, k_min >= 1");
  total_ = special::zeta_tail(p, k_min);
  cum_.resize(kTailCache);
  double run = 0.0;
  for (std::uint32_t i = 0; i < kTailCache; ++i) {
    run += std::pow(static_cast<double>(k_min + i), -p);
    cum_[i] = run;
  }
}

std::uint64_t PowerTailSampler::sample(Rng& rng) const {
  double v = rng.u01() * total_;
  if (v < cum_.back()) {
    auto it = std::lower_bound(cum_.begin(), cum_.end(), v);
    return k_min_ + static_cast<std::uint64_t>(it - cum_.begin());
  }
  // Rare branch: invert the analytic remainder. Smallest k with
  // total - zeta_tail(p, k+1) >= v.
  std::uint64_t lo = k_min_ + kTailCache;
  std::uint64_t hi = lo * 2;
  while (total_ - special::zeta_tail(p_, hi + 1) < v) {
    lo = hi;
    hi *= 2;
    if (hi > (1ULL << 52)) return hi;
  }
  while (lo < hi) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (total_ - special::zeta_tail(p_, mid + 1) >= v) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

AliasTable::AliasTable(const std::vector<double>& weights) {
  std::size_t n = weights.size();
  if (n == 0) fail(Err::BadConfig, "AliasTable requires nonempty weights");
  double total = 0.0;
  for (double w : weights) total += w;
  prob_.resize(n);
  alias_.resize(n);
  std::vector<double> scaled(n);
  for (std::size_t i = 0; i < n; ++i) scaled[i] = weights[i] * static_cast<double>(n) / total;
  std::vector<std::uint32_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    std::uint32_t s = small.back();
    std::uint32_t l = large.back();
    small.pop_back();
    large.pop_back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    (scaled[l] < 1.0 ? small : large).push_back(l);
  }
  for (std::uint32_t i : large) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
  for (std::uint32_t i : small) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
}

std::size_t AliasTable::sample(Rng& rng) const {
  std::size_t i = static_cast<std::size_t>(rng.below(prob_.size()));
  return rng.u01() < prob_[i] ? i : alias_[i];
}

DegreeLaw DegreeLaw::from_pmf(const std::map<std::uint32_t, double>& pmf) {
  DegreeLaw law;
  double total = 0.0;
  for (const auto& [k, p] : pmf) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      fail(Err::NotNormalized, "mass at k=" + std::to_string(k) + " is not a finite nonnegative value");
    }
    total += p;
    if (k == 0) {
      law.zero_mass_ = p;
    } else if (p > 0.0) {
      law.head_.emplace_back(k, p);
    }
  }
  law.norm_residual_ = total - 1.0;
  if (std::abs(law.norm_residual_) > kNormTol) {
    std::ostringstream os;
    os << "pmf sums to " << total << ", residual " << law.norm_residual_;
    fail(Err::NotNormalized, os.str());
  }
  law.finalize_finite();

  json form;
  json masses = json::object();
  for (const auto& [k, p] : pmf) {
    if (p > 0.0) masses[std::to_string(k)] = p;
  }
  form["pmf"] = masses;
  law.json_form_ = form.dump();
  return law;
}

void DegreeLaw::finalize_finite() {
  regime_ = TailRegime::FiniteThirdMoment;
  mu_ = 0.0;
  second_ = 0.0;
  beta_ = 0.0;
  residual_ = 0.0;
  double nu2 = 0.0;
  for (const auto& [k, p] : head_) {
    double kd = static_cast<double>(k);
    mu_ += kd * p;
    second_ += kd * kd * p;
    beta_ += kd * (kd - 1.0) * (kd - 2.0) * p;
    residual_ += kd * (kd - 2.0) * p;
    if (k == 2) nu2 = p;
  }
  if (nu2 >= 1.0 - kNormTol) {
    fail(Err::DegenerateTwoRegular, "all mass on degree 2; component structure is degenerate");
  }
  if (std::abs(residual_) > kCriticalTol) {
    std::ostringstream os;
    os << "criticality residual sum k(k-2) nu_k = " << residual_;
    fail(Err::NotCritical, os.str());
  }

  std::vector<double> weights;
  alias_values_.clear();
  if (zero_mass_ > 0.0) {
    alias_values_.push_back(0);
    weights.push_back(zero_mass_);
  }
  for (const auto& [k, p] : head_) {
    alias_values_.push_back(k);
    weights.push_back(p);
  }
  alias_ = AliasTable(weights);
}

DegreeLaw DegreeLaw::poisson(double lambda) {
  if (!(lambda > 0.0)) fail(Err::BadConfig, "poisson requires lambda > 0");
  std::map<std::uint32_t, double> pmf;
  double p = std::exp(-lambda);
  for (std::uint32_t k = 0; k < 512; ++k) {
    pmf[k] = p;
    p *= lambda / static_cast<double>(k + 1);
    if (p < 1e-19 && static_cast<double>(k) > lambda) break;
  }
  DegreeLaw law = from_pmf(pmf);
  json form;
  form["poisson"] = lambda;
  law.json_form_ = form.dump();
  return law;
}

DegreeLaw DegreeLaw::power_law(double gamma, std::uint32_t k_min) {
  if (!(gamma > 3.0) || !(gamma < 4.0)) {
    fail(Err::GammaOutOfRange, "gamma must lie in (3, 4), got " + std::to_string(gamma));
  }
  if (k_min < 3) fail(Err::Infeasible, "k_min must be >= 3, got " + std::to_string(k_min));

  double s0 = special::zeta_tail(gamma, k_min);
  double s1 = special::zeta_tail(gamma - 1.0, k_min);
  double s2 = special::zeta_tail(gamma - 2.0, k_min);
  double t = s2 - 2.0 * s1;  // sum k(k-2) k^-gamma over the tail, positive for k_min >= 3

  // nu_1 = c t cancels the tail's criticality excess; the largest feasible c
  // is the one that exhausts the leftover mass, leaving nu_2 = 0.
  double c = 1.0 / (t + s0);
  double nu1 = c * t;
  double nu2 = 1.0 - nu1 - c * s0;
  if (std::abs(nu2) < 1e-14) nu2 = 0.0;
  if (!(nu1 >= 0.0) || nu1 >= 1.0 || !(nu2 >= 0.0) || nu2 >= 1.0) {
    std::ostringstream os;
    os << "calibration produced nu_1 = " << nu1 << ", nu_2 = " << nu2;
    fail(Err::Infeasible, os.str());
  }

  DegreeLaw law;
  law.regime_ = TailRegime::PowerLaw;
  law.head_ = {{1, nu1}, {2, nu2}};
  law.tail_ = PowerLawTail{gamma, k_min, c};
  law.mu_ = nu1 + 2.0 * nu2 + c * s1;
  law.second_ = nu1 + 4.0 * nu2 + c * s2;
  law.beta_ = std::numeric_limits<double>::infinity();
  law.residual_ = -nu1 + c * t;
  law.norm_residual_ = nu1 + nu2 + c * s0 - 1.0;
  law.head_mass_ = nu1 + nu2;
  law.tail_sampler_ = PowerTailSampler(gamma, k_min);

  json form;
  form["power_law"] = {{"gamma", gamma}, {"k_min", k_min}};
  law.json_form_ = form.dump();
  return law;
}

DegreeLaw DegreeLaw::from_json(const json& spec) {
  if (!spec.is_object() || spec.size() != 1) {
    fail(Err::BadConfig, "law spec needs exactly one of: pmf, power_law, poisson");
  }
  try {
    if (spec.contains("pmf")) {
      std::map<std::uint32_t, double> pmf;
      for (const auto& [key, val] : spec.at("pmf").items()) {
        pmf[static_cast<std::uint32_t>(std::stoul(key))] = val.get<double>();
      }
      return from_pmf(pmf);
    }
    if (spec.contains("power_law")) {
      const auto& pl = spec.at("power_law");
      for (const auto& [key, val] : pl.items()) {
        (void)val;
        if (key != "gamma" && key != "k_min") {
          fail(Err::BadConfig, "unknown power_law key: " + key);
        }
      }
      std::uint32_t k_min = pl.contains("k_min") ? pl.at("k_min").get<std::uint32_t>() : 3u;
      return power_law(pl.at("gamma").get<double>(), k_min);
    }
    if (spec.contains("poisson")) {
      return poisson(spec.at("poisson").get<double>());
    }
  } catch (const json::exception& e) {
    fail(Err::BadConfig, std::string("malformed law spec: ") + e.what());
  } catch (const std::invalid_argument&) {
    fail(Err::BadConfig, "pmf keys must be integers");
  }
  fail(Err::BadConfig, "law spec needs one of: pmf, power_law, poisson");
}

json DegreeLaw::to_json() const { return json::parse(json_form_); }

std::string DegreeLaw::describe() const { return json_form_; }

double DegreeLaw::pmf(std::uint64_t k) const {
  if (k == 0) return zero_mass_;
  for (const auto& [kk, p] : head_) {
    if (kk == k) return p;
  }
  if (tail_ && k >= tail_->k_min) return tail_->c * std::pow(static_cast<double>(k), -tail_->gamma);
  return 0.0;
}

double DegreeLaw::laplace(double t) const { return zero_mass_ + moment_exp(0, t); }

double DegreeLaw::moment_exp(int j, double t) const {
  if (j < 0 || j > 3) fail(Err::BadConfig, "moment_exp supports j in 0..3");
  double sum = 0.0;
  for (const auto& [k, p] : head_) {
    double kd = static_cast<double>(k);
    sum += std::pow(kd, j) * std::exp(-kd * t) * p;
  }
  if (tail_) {
    double p_eff = tail_->gamma - static_cast<double>(j);
    if (t > 0.0) {
      sum += tail_->c * special::power_tail_exp(p_eff, t, tail_->k_min);
    } else if (p_eff > 1.0) {
      sum += tail_->c * special::zeta_tail(p_eff, tail_->k_min);
    } else {
      return std::numeric_limits<double>::infinity();
    }
  }
  return sum;
}

double DegreeLaw::psi(double u) const {
  double saturation = 1.0 - zero_mass_;
  if (u < 0.0 || u >= saturation) {
    std::ostringstream os;
    os << "psi defined on [0, " << saturation << "), got u = " << u;
    fail(Err::PsiDomain, os.str());
  }
  if (u == 0.0) return 0.0;

  double hi = 1.0;
  while (phi(hi) <= u) {
    hi *= 2.0;
    if (hi > 1e12) fail(Err::PsiDomain, "u is numerically at the saturation value of phi");
  }
  double lo = u / mu_;  // phi is concave, so phi(u/mu) <= u
  double x = lo;
  for (int iter = 0; iter < 200; ++iter) {
    double fx = phi(x) - u;
    if (std::abs(fx) <= kPsiTol) return x;
    if (fx < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    double deriv = phi_prime(x);
    double next = x - fx / deriv;
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  if (std::abs(phi(x) - u) <= 1e-9) return x;
  fail(Err::InternalInvariant, "psi solver failed to converge");
}

double DegreeLaw::psi_prime(double u) const { return 1.0 / phi_prime(psi(u)); }

std::uint64_t DegreeLaw::sample_one(Rng& rng) const {
  if (regime_ == TailRegime::FiniteThirdMoment) {
    return alias_values_[alias_.sample(rng)];
  }
  double u = rng.u01();
  if (u < head_[0].second) return 1;
  if (u < head_mass_) return 2;
  return tail_sampler_.sample(rng);
}

std::vector<std::uint32_t> DegreeLaw::sample_degrees(std::size_t n, Rng& rng) const {
  if (n == 0) fail(Err::BadConfig, "sample_degrees requires n >= 1");
  std::vector<std::uint32_t> out(n);
  for (std::size_t attempt = 0; attempt < kEvenSumAttempts; ++attempt) {
    std::uint64_t parity = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t k = sample_one(rng);
      out[i] = static_cast<std::uint32_t>(k);
      parity ^= k;
    }
    if ((parity & 1ULL) == 0) return out;
  }
  fail(Err::EvenSumTimeout, "no even-sum degree vector after " +
                                std::to_string(kEvenSumAttempts) + " attempts, law " + describe() +
                                ", n = " + std::to_string(n));
}

double DegreeLaw::time_exponent() const {
  if (regime_ == TailRegime::PowerLaw) return (tail_->gamma - 2.0) / (tail_->gamma - 1.0);
  return 2.0 / 3.0;
}

double DegreeLaw::space_exponent() const {
  if (regime_ == TailRegime::PowerLaw) return 1.0 / (tail_->gamma - 1.0);
  return 1.0 / 3.0;
}

}  // namespace ccm
