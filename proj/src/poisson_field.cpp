#include "ccm/poisson_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ccm/errors.hpp"
#include "ccm/quadrature.hpp"

namespace ccm {

namespace {

constexpr double kMarkSumTol = 1e-9;

// mark sampler at one atom time; z = phi'(psi(s/n)) normalizes
struct MarkContext {
  const DegreeLaw& law;
  const PowerTailSampler* tail_proposal;  // mass proportional to k^{1-gamma}
};

std::uint64_t sample_mark(const MarkContext& ctx, double t, double z, Rng& rng) {
  const DegreeLaw& law = ctx.law;
  if (law.regime() == TailRegime::FiniteThirdMoment) {
    double target = rng.u01() * z;
    double run = 0.0;
    for (const auto& [k, p] : law.head()) {
      double kd = static_cast<double>(k);
      run += kd * std::exp(-kd * t) * p;
      if (run >= target) return k;
    }
    return law.head().back().first;
  }
  // head masses k nu_k e^{-kt} for k = 1, 2, then the tail by rejection:
  // propose k with mass k^{1-gamma}, accept with e^{-(k - k_min) t} so the
  // acceptance rate stays bounded below uniformly in t
  const auto& head = law.head();
  double k_min = static_cast<double>(law.tail()->k_min);
  double u = rng.u01() * z;
  double w1 = head[0].second * std::exp(-t);
  if (u < w1) return 1;
  if (u < w1 + 2.0 * head[1].second * std::exp(-2.0 * t)) return 2;
  for (int tries = 0; tries < 100000; ++tries) {
    std::uint64_t k = ctx.tail_proposal->sample(rng);
    if (rng.u01() <= std::exp(-(static_cast<double>(k) - k_min) * t)) return k;
  }
  fail(Err::InternalInvariant, "tail mark rejection sampler stalled");
}

}  // namespace

std::uint64_t PoissonField::count_upto(double t) const {
  auto it = std::upper_bound(atoms.begin(), atoms.end(), t,
                             [](double tt, const FieldAtom& a) { return tt < a.s; });
  return static_cast<std::uint64_t>(it - atoms.begin());
}

std::uint64_t PoissonField::max_mark(double t) const {
  std::uint64_t m = 0;
  for (const auto& a : atoms) {
    if (a.s > t) break;
    m = std::max(m, a.mark);
  }
  return m;
}

PoissonField simulate_field(const DegreeLaw& law, double n, double horizon, Rng& rng) {
  if (!(n > 0.0) || horizon < 0.0) fail(Err::BadConfig, "simulate_field needs n > 0, horizon >= 0");
  double saturation = 1.0 - law.zero_mass();
  if (horizon / n >= saturation) {
    fail(Err::PsiDomain, "horizon/n = " + std::to_string(horizon / n) +
                             " reaches the saturation value of phi");
  }
  PowerTailSampler tail_proposal;
  MarkContext ctx{law, nullptr};
  if (law.regime() == TailRegime::PowerLaw) {
    tail_proposal = PowerTailSampler(law.tail()->gamma - 1.0, law.tail()->k_min);
    ctx.tail_proposal = &tail_proposal;
  }

  PoissonField field;
  field.n = n;
  field.horizon = horizon;
  double s = rng.exponential();
  while (s < horizon) {
    double t = law.psi(s / n);
    double z = law.phi_prime(t);
    double mark_sum = z * law.psi_prime(s / n);
    if (std::abs(mark_sum - 1.0) > kMarkSumTol) {
      fail(Err::InternalInvariant,
           "mark probabilities sum to " + std::to_string(mark_sum) + " at s = " + std::to_string(s));
    }
    field.atoms.push_back({s, sample_mark(ctx, t, z, rng)});
    s += rng.exponential();
  }
  return field;
}

StepWalk walk_S(const PoissonField& field) {
  StepWalk w;
  w.times.reserve(field.atoms.size());
  w.values.reserve(field.atoms.size());
  std::int64_t run = 0;
  for (const auto& a : field.atoms) {
    run += static_cast<std::int64_t>(a.mark) - 2;
    w.times.push_back(a.s);
    w.values.push_back(run);
  }
  return w;
}

std::int64_t StepWalk::at(double t) const {
  auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return 0;
  return values[static_cast<std::size_t>(it - times.begin()) - 1];
}

namespace {

double mean_mark_minus2(const DegreeLaw& law, double n, double s) {
  double t = law.psi(s / n);
  double m1 = law.moment_exp(1, t);
  double m2 = law.moment_exp(2, t);
  return m2 / m1 - 2.0;
}

double variance_rate(const DegreeLaw& law, double n, double s) {
  double t = law.psi(s / n);
  double m1 = law.moment_exp(1, t);
  double m2 = law.moment_exp(2, t);
  double m3 = law.moment_exp(3, t);
  return (m3 - 4.0 * m2 + 4.0 * m1) / m1;
}

std::vector<double> cumulative_integral(const std::function<double(double)>& f,
                                        const std::vector<double>& ts, double abs_tol) {
  std::vector<double> out(ts.size());
  double acc = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] < prev) fail(Err::BadConfig, "grid times must be nondecreasing");
    acc += integrate(f, prev, ts[i], abs_tol);
    out[i] = acc;
    prev = ts[i];
  }
  return out;
}

}  // namespace

double drift_A(const DegreeLaw& law, double n, double t, double abs_tol) {
  return integrate([&](double s) { return mean_mark_minus2(law, n, s); }, 0.0, t, abs_tol);
}

std::vector<double> drift_A_grid(const DegreeLaw& law, double n, const std::vector<double>& ts,
                                 double abs_tol) {
  return cumulative_integral([&](double s) { return mean_mark_minus2(law, n, s); }, ts, abs_tol);
}

double variation_QV(const DegreeLaw& law, double n, double t, double abs_tol) {
  return integrate([&](double s) { return variance_rate(law, n, s); }, 0.0, t, abs_tol);
}

std::vector<double> variation_QV_grid(const DegreeLaw& law, double n, const std::vector<double>& ts,
                                      double abs_tol) {
  return cumulative_integral([&](double s) { return variance_rate(law, n, s); }, ts, abs_tol);
}

LimitPath rescale_field(const PoissonField& field, double time_exp, double space_exp,
                        double horizon, double dt) {
  if (dt <= 0.0 || horizon <= 0.0) fail(Err::BadConfig, "rescale_field needs horizon, dt > 0");
  double stretch = std::pow(field.n, time_exp);
  if (horizon * stretch > field.horizon) {
    fail(Err::HorizonExceedsN, "rescaled horizon needs field out to " +
                                   std::to_string(horizon * stretch) + ", have " +
                                   std::to_string(field.horizon));
  }
  double scale = std::pow(field.n, -space_exp);
  std::size_t cells = static_cast<std::size_t>(std::llround(horizon / dt));
  StepWalk w = walk_S(field);
  LimitPath path;
  path.dt = dt;
  path.kind = PathKind::RescaledWalk;
  path.values.resize(cells + 1);
  for (std::size_t j = 0; j <= cells; ++j) {
    path.values[j] = scale * static_cast<double>(w.at(static_cast<double>(j) * dt * stretch));
  }
  return path;
}

}  // namespace ccm
