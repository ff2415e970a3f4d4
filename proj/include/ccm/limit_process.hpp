#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "ccm/degree_law.hpp"
#include "ccm/path.hpp"
#include "ccm/rng.hpp"

namespace ccm {

// sqrt(beta/mu) B(t) - (beta/2mu^2) t^2 with B standard Brownian motion
LimitPath simulate_brownian_parabolic(double mu, double beta, double horizon, double dt, Rng& rng);
// grows the path in place to new_horizon by appending fresh increments
void extend_brownian_parabolic(LimitPath& path, double mu, double beta, double new_horizon,
                               Rng& rng);

// Jump measure (c/mu) x^{-(gamma-1)} e^{-x s/mu} ds dx on [0,inf) x (0,inf).
struct LevySpec {
  double c = 0.0;
  double gamma = 0.0;
  double mu = 0.0;

  static LevySpec make(double c, double gamma, double mu);
  static LevySpec from_law(const DegreeLaw& law);
};

// A(t) = -(c Gamma(4-gamma) / ((gamma-3)(gamma-2) mu^{gamma-2})) t^{gamma-2}
double drift_powerlaw(const LevySpec& spec, double t);
// Var[X(t)] = c Gamma(4-gamma) mu^{3-gamma} t^{gamma-3} / (gamma-3)
double variance_powerlaw(const LevySpec& spec, double t);

struct MomentOracle {
  double mean = 0.0;
  double variance = 0.0;
  // envelope for the variance of the jumps below any truncation level
  double small_jump_bound = 0.0;
};
MomentOracle moment_oracles(const LevySpec& spec, double t);

// integrals of x^j against the jump measure, split at the truncation level eps
double small_jump_variance(const LevySpec& spec, double t, double eps);
double big_jump_variance(const LevySpec& spec, double t, double eps);
double big_jump_rate(const LevySpec& spec, double s, double eps);
double big_jump_compensator(const LevySpec& spec, double t, double eps);

// E exp(iuX(t)) = exp( int_0^t int_0^inf (e^{iux} - 1 - iux) measure )
std::complex<double> char_function(const LevySpec& spec, double u, double t);

// One-shot convenience around LevySimulator; reuse the simulator when drawing
// many paths, the per-cell precomputation dominates single-path cost.
LimitPath simulate_powerlaw_limit(const LevySpec& spec, double horizon, double dt, double eps,
                                  Rng& rng);

// Simulates X + A on a uniform grid: jumps above eps exactly (thinned from a
// homogeneous envelope), their compensator in closed form, and a per-cell
// Gaussian stand-in with the exact variance of the compensated jumps below
// eps. Deterministic precomputation happens once in the constructor.
class LevySimulator {
 public:
  LevySimulator(const LevySpec& spec, double horizon, double dt, double eps,
                bool with_halved_eps = false);

  LimitPath sample(Rng& rng) const;
  // coupled pair (at eps, at eps/2) sharing all jumps above eps and the
  // per-cell Gaussian noise; each marginal is exact
  std::pair<LimitPath, LimitPath> sample_with_halved_eps(Rng& rng) const;

  const LevySpec& spec() const { return spec_; }
  double horizon() const { return horizon_; }
  double dt() const { return dt_; }
  double eps() const { return eps_; }

 private:
  struct Tier {
    double eps = 0.0;
    double cand_rate = 0.0;            // envelope candidate intensity
    std::vector<double> compensator;   // B(t_j) at grid times
    std::vector<double> cell_sigma;    // small-jump sd per cell
  };
  Tier make_tier(double eps) const;
  LimitPath assemble(const Tier& tier, const std::vector<double>& cell_jumps,
                     const std::vector<double>& cell_noise) const;

  LevySpec spec_;
  double horizon_ = 0.0;
  double dt_ = 0.0;
  double eps_ = 0.0;
  std::size_t cells_ = 0;
  std::vector<double> drift_;  // A(t_j)
  Tier coarse_;
  Tier fine_;  // populated only when with_halved_eps
  bool has_fine_ = false;
};

}  // namespace ccm
