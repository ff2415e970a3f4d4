#include "ccm/limit_process.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ccm/errors.hpp"
#include "ccm/quadrature.hpp"
#include "ccm/special.hpp"

namespace ccm {

namespace {

// expected candidate count per path above which eps is refused
constexpr double kJumpBudget = 5e7;

// 4-point Gauss-Legendre nodes/weights on [0, 1]
constexpr double kGlNode[4] = {0.06943184420297371, 0.33000947820757187, 0.6699905217924281,
                               0.9305681557970263};
constexpr double kGlWeight[4] = {0.17392742256872693, 0.32607257743127307, 0.32607257743127307,
                                 0.17392742256872693};

void check_grid(double horizon, double dt) {
  if (!(dt > 0.0) || !(horizon >= dt)) fail(Err::BadConfig, "need dt > 0 and horizon >= dt");
}

std::size_t grid_cells(double horizon, double dt) {
  auto cells = static_cast<std::size_t>(std::llround(horizon / dt));
  if (std::abs(static_cast<double>(cells) * dt - horizon) > 1e-9 * horizon) {
    fail(Err::BadConfig, "horizon must be an integer multiple of dt");
  }
  return cells;
}

}  // namespace

LimitPath simulate_brownian_parabolic(double mu, double beta, double horizon, double dt,
                                      Rng& rng) {
  if (!(mu > 0.0) || !(beta > 0.0)) fail(Err::BadConfig, "need mu, beta > 0");
  check_grid(horizon, dt);
  LimitPath path;
  path.dt = dt;
  path.kind = PathKind::BrownianParabolic;
  path.values.assign(1, 0.0);
  extend_brownian_parabolic(path, mu, beta, horizon, rng);
  return path;
}

void extend_brownian_parabolic(LimitPath& path, double mu, double beta, double new_horizon,
                               Rng& rng) {
  double diffusion = std::sqrt(beta / mu * path.dt);
  double half_slope = beta / (2.0 * mu * mu);
  std::size_t cells = grid_cells(new_horizon, path.dt);
  if (cells + 1 <= path.values.size()) return;
  path.values.reserve(cells + 1);
  for (std::size_t j = path.values.size(); j <= cells; ++j) {
    double t_prev = static_cast<double>(j - 1) * path.dt;
    double t_next = static_cast<double>(j) * path.dt;
    double drift = -half_slope * (t_next * t_next - t_prev * t_prev);
    path.values.push_back(path.values.back() + diffusion * rng.normal() + drift);
  }
}

LevySpec LevySpec::make(double c, double gamma, double mu) {
  if (!(gamma > 3.0) || !(gamma < 4.0)) fail(Err::GammaOutOfRange, "need gamma in (3, 4)");
  if (!(c > 0.0) || !(mu > 0.0)) fail(Err::BadConfig, "need c, mu > 0");
  return LevySpec{c, gamma, mu};
}

LevySpec LevySpec::from_law(const DegreeLaw& law) {
  if (law.regime() != TailRegime::PowerLaw) {
    fail(Err::BadConfig, "jump spec requires a power-law degree tail");
  }
  return make(law.tail()->c, law.tail()->gamma, law.mu());
}

double drift_powerlaw(const LevySpec& spec, double t) {
  if (t < 0.0) fail(Err::BadConfig, "drift wants t >= 0");
  double g = spec.gamma;
  double coeff = spec.c * std::tgamma(4.0 - g) /
                 ((g - 3.0) * (g - 2.0) * std::pow(spec.mu, g - 2.0));
  return -coeff * std::pow(t, g - 2.0);
}

double variance_powerlaw(const LevySpec& spec, double t) {
  if (t < 0.0) fail(Err::BadConfig, "variance wants t >= 0");
  double g = spec.gamma;
  return spec.c * std::tgamma(4.0 - g) * std::pow(spec.mu, 3.0 - g) * std::pow(t, g - 3.0) /
         (g - 3.0);
}

MomentOracle moment_oracles(const LevySpec& spec, double t) {
  MomentOracle m;
  m.variance = t == 0.0 ? 0.0 : variance_powerlaw(spec, t);
  m.small_jump_bound =
      spec.c * std::pow(t, spec.gamma - 3.0) / ((spec.gamma - 3.0) * (4.0 - spec.gamma));
  return m;
}

namespace {

// int_eps^inf x^{1+a} (c/mu) x^{-(gamma-1)} e^{-x s/mu} dx
//   = (c/mu) (mu/s)^{a+3-gamma} Gamma(a+3-gamma, eps s/mu),  a in {-1, 0, 1}
double tail_moment_rate(const LevySpec& spec, double s, double eps, double a) {
  double shape = a + 3.0 - spec.gamma;
  if (s == 0.0) {
    if (shape >= 0.0) fail(Err::InternalInvariant, "tail moment diverges at s = 0");
    return (spec.c / spec.mu) * std::pow(eps, shape) / (-shape);
  }
  double z = eps * s / spec.mu;
  return (spec.c / spec.mu) * std::pow(spec.mu / s, shape) * special::gamma_upper(shape, z);
}

// int_0^eps x^2 (c/mu) x^{-(gamma-1)} e^{-x s/mu} dx via the lower gamma
double small_variance_rate(const LevySpec& spec, double s, double eps) {
  double shape = 4.0 - spec.gamma;
  if (s == 0.0) return (spec.c / spec.mu) * std::pow(eps, shape) / shape;
  double z = eps * s / spec.mu;
  double lower = std::tgamma(shape) * special::gamma_lower_reg(shape, z);
  return (spec.c / spec.mu) * std::pow(spec.mu / s, shape) * lower;
}

}  // namespace

double small_jump_variance(const LevySpec& spec, double t, double eps) {
  return integrate([&](double s) { return small_variance_rate(spec, s, eps); }, 0.0, t, 1e-10);
}

double big_jump_variance(const LevySpec& spec, double t, double eps) {
  return integrate([&](double s) { return tail_moment_rate(spec, s, eps, 1.0); }, 0.0, t, 1e-10);
}

double big_jump_rate(const LevySpec& spec, double s, double eps) {
  return tail_moment_rate(spec, s, eps, -1.0);
}

double big_jump_compensator(const LevySpec& spec, double t, double eps) {
  return integrate([&](double s) { return tail_moment_rate(spec, s, eps, 0.0); }, 0.0, t, 1e-10);
}

std::complex<double> char_function(const LevySpec& spec, double u, double t) {
  double g = spec.gamma;
  auto inner = [&](double s, bool re) {
    auto f = [&](double x) {
      double trig = re ? std::cos(u * x) - 1.0 : std::sin(u * x) - u * x;
      return trig * std::pow(x, 1.0 - g) * std::exp(-x * s / spec.mu);
    };
    return integrate(f, 0.0, 1.0, 1e-10) + integrate_upper(f, 1.0, 1e-10);
  };
  double exp_re = (spec.c / spec.mu) * integrate([&](double s) { return inner(s, true); }, 0.0, t, 1e-9);
  double exp_im = (spec.c / spec.mu) * integrate([&](double s) { return inner(s, false); }, 0.0, t, 1e-9);
  return std::exp(exp_re) * std::complex<double>(std::cos(exp_im), std::sin(exp_im));
}

LevySimulator::LevySimulator(const LevySpec& spec, double horizon, double dt, double eps,
                             bool with_halved_eps)
    : spec_(spec), horizon_(horizon), dt_(dt), eps_(eps) {
  if (!(eps > 0.0) || eps > 1.0) fail(Err::BadConfig, "need eps in (0, 1]");
  check_grid(horizon, dt);
  cells_ = grid_cells(horizon, dt);
  drift_.resize(cells_ + 1);
  for (std::size_t j = 0; j <= cells_; ++j) {
    drift_[j] = drift_powerlaw(spec_, static_cast<double>(j) * dt_);
  }
  coarse_ = make_tier(eps);
  if (with_halved_eps) {
    fine_ = make_tier(eps / 2.0);
    has_fine_ = true;
  }
}

LevySimulator::Tier LevySimulator::make_tier(double eps) const {
  Tier tier;
  tier.eps = eps;
  tier.cand_rate = big_jump_rate(spec_, 0.0, eps);
  if (tier.cand_rate * horizon_ > kJumpBudget) {
    fail(Err::EpsTooSmall, "expected candidate jumps " +
                               std::to_string(tier.cand_rate * horizon_) + " exceed the budget " +
                               std::to_string(kJumpBudget));
  }
  tier.compensator.resize(cells_ + 1);
  tier.cell_sigma.resize(cells_);
  tier.compensator[0] = 0.0;
  for (std::size_t j = 0; j < cells_; ++j) {
    double left = static_cast<double>(j) * dt_;
    double comp = 0.0;
    double var = 0.0;
    for (int q = 0; q < 4; ++q) {
      double s = left + kGlNode[q] * dt_;
      comp += kGlWeight[q] * tail_moment_rate(spec_, s, eps, 0.0);
      var += kGlWeight[q] * small_variance_rate(spec_, s, eps);
    }
    tier.compensator[j + 1] = tier.compensator[j] + comp * dt_;
    tier.cell_sigma[j] = std::sqrt(var * dt_);
  }
  return tier;
}

LimitPath LevySimulator::assemble(const Tier& tier, const std::vector<double>& cell_jumps,
                                  const std::vector<double>& cell_noise) const {
  LimitPath path;
  path.dt = dt_;
  path.kind = PathKind::PowerLawLevy;
  path.values.resize(cells_ + 1);
  double run = 0.0;
  path.values[0] = 0.0;
  for (std::size_t j = 1; j <= cells_; ++j) {
    run += cell_jumps[j - 1] + tier.cell_sigma[j - 1] * cell_noise[j - 1];
    path.values[j] = run - tier.compensator[j] + drift_[j];
  }
  return path;
}

LimitPath LevySimulator::sample(Rng& rng) const {
  std::vector<double> jumps(cells_, 0.0);
  double inv_index = 1.0 / (spec_.gamma - 2.0);
  double s = rng.exponential() / coarse_.cand_rate;
  while (s < horizon_) {
    double x = coarse_.eps * std::pow(rng.u01(), -inv_index);
    if (rng.u01() <= std::exp(-x * s / spec_.mu)) {
      jumps[std::min(cells_ - 1, static_cast<std::size_t>(s / dt_))] += x;
    }
    s += rng.exponential() / coarse_.cand_rate;
  }
  std::vector<double> noise(cells_);
  for (auto& z : noise) z = rng.normal();
  return assemble(coarse_, jumps, noise);
}

std::pair<LimitPath, LimitPath> LevySimulator::sample_with_halved_eps(Rng& rng) const {
  if (!has_fine_) fail(Err::BadConfig, "simulator built without the halved-eps tier");
  // one candidate stream at eps/2; candidates with x > eps are exactly the
  // eps-envelope stream, so filtering reuses the same accepted jumps
  std::vector<double> jumps_fine(cells_, 0.0);
  std::vector<double> jumps_coarse(cells_, 0.0);
  double inv_index = 1.0 / (spec_.gamma - 2.0);
  double s = rng.exponential() / fine_.cand_rate;
  while (s < horizon_) {
    double x = fine_.eps * std::pow(rng.u01(), -inv_index);
    if (rng.u01() <= std::exp(-x * s / spec_.mu)) {
      std::size_t cell = std::min(cells_ - 1, static_cast<std::size_t>(s / dt_));
      jumps_fine[cell] += x;
      if (x > coarse_.eps) jumps_coarse[cell] += x;
    }
    s += rng.exponential() / fine_.cand_rate;
  }
  std::vector<double> noise(cells_);
  for (auto& z : noise) z = rng.normal();
  return {assemble(coarse_, jumps_coarse, noise), assemble(fine_, jumps_fine, noise)};
}

LimitPath simulate_powerlaw_limit(const LevySpec& spec, double horizon, double dt, double eps,
                                  Rng& rng) {
  return LevySimulator(spec, horizon, dt, eps).sample(rng);
}

}  // namespace ccm
