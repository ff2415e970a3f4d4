#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccm/rng.hpp"

namespace ccm {

enum class TailRegime { FiniteThirdMoment, PowerLaw };

struct PowerLawTail {
  double gamma = 0.0;
  std::uint32_t k_min = 0;
  double c = 0.0;
};

// Samples k >= k_min with mass proportional to k^-p by inverting the exact
// cumulative sums; beyond the cached range the inversion bisects on the
// analytic tail.
class PowerTailSampler {
 public:
  PowerTailSampler() = default;
  PowerTailSampler(double p, std::uint32_t k_min);
  std::uint64_t sample(Rng& rng) const;
  double total_mass() const { return total_; }

 private:
  double p_ = 0.0;
  std::uint32_t k_min_ = 0;
  double total_ = 0.0;
  std::vector<double> cum_;
};

class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(const std::vector<double>& weights);
  std::size_t sample(Rng& rng) const;

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

// Critical degree distribution. Mass may sit at k = 0; such vertices are
// isolated and never explored, so the zero mass enters normalization and
// sampling but none of the k-weighted functionals.
class DegreeLaw {
 public:
  static DegreeLaw from_pmf(const std::map<std::uint32_t, double>& pmf);
  static DegreeLaw poisson(double lambda);
  // nu_k = c k^-gamma for k >= k_min, nu_1 soaks up criticality, nu_2 the
  // leftover normalization, with c as large as both masses allow.
  static DegreeLaw power_law(double gamma, std::uint32_t k_min);
  static DegreeLaw from_json(const nlohmann::json& spec);

  nlohmann::json to_json() const;
  std::string describe() const;

  TailRegime regime() const { return regime_; }
  double mu() const { return mu_; }
  double beta() const { return beta_; }
  double second_moment() const { return second_; }
  double zero_mass() const { return zero_mass_; }
  double criticality_residual() const { return residual_; }
  double normalization_residual() const { return norm_residual_; }
  const std::optional<PowerLawTail>& tail() const { return tail_; }

  double pmf(std::uint64_t k) const;
  // head of the support: k = 0 entry present only when zero_mass > 0;
  // for the power-law regime this holds only the sub-k_min masses
  const std::vector<std::pair<std::uint32_t, double>>& head() const { return head_; }

  // E e^{-tD} over the full law, constant zero-mass term included
  double laplace(double t) const;
  // sum_k k^j e^{-kt} nu_k over k >= 1; +inf when divergent at t = 0
  double moment_exp(int j, double t) const;
  double phi(double t) const { return 1.0 - laplace(t); }
  double phi_prime(double t) const { return moment_exp(1, t); }
  // inverse of phi on [0, 1 - zero_mass)
  double psi(double u) const;
  double psi_prime(double u) const;

  std::uint64_t sample_one(Rng& rng) const;
  // even total degree enforced by whole-vector resampling
  std::vector<std::uint32_t> sample_degrees(std::size_t n, Rng& rng) const;

  // component rescaling exponent: 2/3, or (gamma-2)/(gamma-1)
  double time_exponent() const;
  // walk rescaling exponent: 1/3, or 1/(gamma-1)
  double space_exponent() const;

 private:
  DegreeLaw() = default;
  void finalize_finite();

  TailRegime regime_ = TailRegime::FiniteThirdMoment;
  double zero_mass_ = 0.0;
  std::vector<std::pair<std::uint32_t, double>> head_;
  std::optional<PowerLawTail> tail_;
  double mu_ = 0.0;
  double second_ = 0.0;
  double beta_ = 0.0;
  double residual_ = 0.0;
  double norm_residual_ = 0.0;

  AliasTable alias_;
  std::vector<std::uint32_t> alias_values_;
  PowerTailSampler tail_sampler_;
  double head_mass_ = 0.0;

  std::string json_form_;
};

}  // namespace ccm
