#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "ccm/degree_law.hpp"
#include "ccm/errors.hpp"
#include "ccm/limit_process.hpp"
#include "ccm/stats.hpp"

using ccm::Err;
using ccm::LevySimulator;
using ccm::LevySpec;
using ccm::LimitPath;
using ccm::Rng;

namespace {

ccm::Err code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ccm::Error& e) {
    return e.code();
  }
  return static_cast<ccm::Err>(-1);
}

LevySpec unit_spec() { return LevySpec::make(1.0, 3.5, 1.0); }

double at_time(const LimitPath& p, double t) {
  return p.values[static_cast<std::size_t>(std::llround(t / p.dt))];
}

}  // namespace

TEST_CASE("diffusion paths start at zero and carry the stated drift") {
  Rng rng(1);
  auto p = ccm::simulate_brownian_parabolic(1.0, 1.0, 1.0, 0.05, rng);
  CHECK(p.kind == ccm::PathKind::BrownianParabolic);
  CHECK(p.values[0] == 0.0);
  CHECK(p.values.size() == 21);
  CHECK(p.horizon() == doctest::Approx(1.0));

  const int reps = 100000;
  std::vector<double> endpoints(reps);
  for (int r = 0; r < reps; ++r) {
    Rng prng(100 + r);
    auto path = ccm::simulate_brownian_parabolic(1.0, 1.0, 1.0, 0.05, prng);
    endpoints[r] = path.values.back();
  }
  auto m = ccm::sample_moments(endpoints);
  // W(1) = B(1) - 1/2 exactly on the grid: increments are exact Gaussians
  CHECK(std::abs(m.mean - (-0.5)) <= 3.0 / std::sqrt(double(reps)));
  CHECK(std::abs(m.var - 1.0) <= 3.0 * std::sqrt(2.0 / double(reps)));
}

TEST_CASE("extending a diffusion path preserves the prefix") {
  Rng rng(7);
  auto p = ccm::simulate_brownian_parabolic(2.0, 1.0, 1.0, 0.125, rng);
  auto copy = p;
  ccm::extend_brownian_parabolic(p, 2.0, 1.0, 3.0, rng);
  CHECK(p.values.size() == 25);
  for (std::size_t i = 0; i < copy.values.size(); ++i) CHECK(p.values[i] == copy.values[i]);
  // extending to a shorter horizon is a no-op
  ccm::extend_brownian_parabolic(p, 2.0, 1.0, 2.0, rng);
  CHECK(p.values.size() == 25);
}

TEST_CASE("diffusion input guards") {
  Rng rng(1);
  CHECK(code_of([&] { ccm::simulate_brownian_parabolic(0.0, 1.0, 1.0, 0.1, rng); }) ==
        Err::BadConfig);
  CHECK(code_of([&] { ccm::simulate_brownian_parabolic(1.0, 1.0, 0.05, 0.1, rng); }) ==
        Err::BadConfig);
  CHECK(code_of([&] { ccm::simulate_brownian_parabolic(1.0, 1.0, 1.0, 0.3, rng); }) ==
        Err::BadConfig);  // horizon not a grid multiple
}

TEST_CASE("jump spec construction and law coupling") {
  CHECK(code_of([] { LevySpec::make(1.0, 3.0, 1.0); }) == Err::GammaOutOfRange);
  CHECK(code_of([] { LevySpec::make(1.0, 4.0, 1.0); }) == Err::GammaOutOfRange);
  CHECK(code_of([] { LevySpec::make(0.0, 3.5, 1.0); }) == Err::BadConfig);

  auto law = ccm::DegreeLaw::power_law(3.5, 3);
  auto spec = LevySpec::from_law(law);
  CHECK(spec.gamma == 3.5);
  CHECK(spec.c == doctest::Approx(1.0333286155191522).epsilon(1e-12));
  CHECK(spec.mu == doctest::Approx(1.1305766141949383).epsilon(1e-12));

  auto finite = ccm::DegreeLaw::from_pmf({{1, 0.75}, {3, 0.25}});
  CHECK(code_of([&] { LevySpec::from_law(finite); }) == Err::BadConfig);
}

TEST_CASE("drift and variance closed forms") {
  auto spec = unit_spec();
  CHECK(ccm::drift_powerlaw(spec, 0.0) == 0.0);
  CHECK(ccm::drift_powerlaw(spec, 1.0) == doctest::Approx(-2.3632718012073547).epsilon(1e-12));
  CHECK(ccm::drift_powerlaw(spec, 2.0) / ccm::drift_powerlaw(spec, 1.0) ==
        doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-12));
  CHECK(ccm::variance_powerlaw(spec, 1.0) == doctest::Approx(3.5449077018110321).epsilon(1e-12));
  CHECK(code_of([&] { ccm::drift_powerlaw(spec, -0.1); }) == Err::BadConfig);

  auto m0 = ccm::moment_oracles(spec, 0.0);
  CHECK(m0.mean == 0.0);
  CHECK(m0.variance == 0.0);
  auto m1 = ccm::moment_oracles(spec, 1.0);
  CHECK(m1.mean == 0.0);
  CHECK(m1.variance == doctest::Approx(3.5449077018110321).epsilon(1e-12));
  CHECK(m1.small_jump_bound == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("jump-measure integrals against independent values") {
  auto spec = unit_spec();
  const double eps = 1e-3;
  double vs = ccm::small_jump_variance(spec, 1.0, eps);
  double vb = ccm::big_jump_variance(spec, 1.0, eps);
  CHECK(vs == doctest::Approx(0.063235014385642396).epsilon(1e-9));
  CHECK(vb == doctest::Approx(3.4816726874253897).epsilon(1e-9));
  CHECK(vs + vb == doctest::Approx(ccm::variance_powerlaw(spec, 1.0)).epsilon(1e-9));

  // the truncation split holds at any eps
  double vs2 = ccm::small_jump_variance(spec, 2.0, 0.05);
  double vb2 = ccm::big_jump_variance(spec, 2.0, 0.05);
  CHECK(vs2 + vb2 == doctest::Approx(ccm::variance_powerlaw(spec, 2.0)).epsilon(1e-9));

  // all mass below the cut: small part approaches the envelope bound ordering
  double vall = ccm::small_jump_variance(spec, 1.0, 1.0);
  CHECK(vall == doctest::Approx(1.7230554135925927).epsilon(1e-9));
  CHECK(vall <= ccm::moment_oracles(spec, 1.0).small_jump_bound);

  CHECK(ccm::big_jump_rate(spec, 0.0, eps) == doctest::Approx(21081.851067789196).epsilon(1e-9));
  CHECK(ccm::big_jump_rate(spec, 1.0, eps) == doctest::Approx(21020.937167123549).epsilon(1e-9));
  CHECK(ccm::big_jump_compensator(spec, 1.0, eps) ==
        doctest::Approx(60.913900665647042).epsilon(1e-8));
}

TEST_CASE("characteristic function of the compensated jump integral") {
  auto spec = unit_spec();
  auto cf = ccm::char_function(spec, 1.0, 1.0);
  CHECK(cf.real() == doctest::Approx(0.2975341488388826).epsilon(1e-6));
  CHECK(cf.imag() == doctest::Approx(-0.1196517341563141).epsilon(1e-6));
  CHECK(std::abs(cf) == doctest::Approx(0.3206916076418146).epsilon(1e-6));
  auto cf0 = ccm::char_function(spec, 1.0, 0.0);
  CHECK(cf0.real() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(cf0.imag() == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("simulator grid and truncation guards") {
  auto spec = unit_spec();
  Rng rng(1);
  CHECK(code_of([&] { LevySimulator(spec, 1.0, 0.01, 1.5); }) == Err::BadConfig);
  CHECK(code_of([&] { LevySimulator(spec, 1.0, 0.3, 0.01); }) == Err::BadConfig);
  CHECK(code_of([&] { LevySimulator(spec, 0.05, 0.1, 0.01); }) == Err::BadConfig);
  CHECK(code_of([&] { LevySimulator(spec, 1.0, 0.01, 1e-12); }) == Err::EpsTooSmall);
  LevySimulator sim(spec, 1.0, 0.01, 5e-3);
  CHECK(code_of([&] { sim.sample_with_halved_eps(rng); }) == Err::BadConfig);
  CHECK(sim.eps() == 5e-3);
  CHECK(sim.dt() == 0.01);
  CHECK(sim.horizon() == 1.0);
}

TEST_CASE("simulated paths track the drift and characteristic function") {
  auto spec = unit_spec();
  LevySimulator sim(spec, 1.0, 0.01, 5e-3);
  const int reps = 2000;
  std::vector<double> endpoints(reps);
  std::complex<double> ecf{0.0, 0.0};
  for (int r = 0; r < reps; ++r) {
    Rng rng(40000 + r);
    auto p = sim.sample(rng);
    CHECK(p.values[0] == 0.0);
    endpoints[r] = p.values.back();
    ecf += std::complex<double>(std::cos(endpoints[r]), std::sin(endpoints[r]));
  }
  ecf /= static_cast<double>(reps);
  auto m = ccm::sample_moments(endpoints);
  double a1 = ccm::drift_powerlaw(spec, 1.0);
  double sd_mean = std::sqrt(ccm::variance_powerlaw(spec, 1.0) / reps);
  CHECK(std::abs(m.mean - a1) <= 4.0 * sd_mean);
  CHECK(std::abs(m.var - ccm::variance_powerlaw(spec, 1.0)) <=
        0.15 * ccm::variance_powerlaw(spec, 1.0));

  auto target = ccm::char_function(spec, 1.0, 1.0) *
                std::complex<double>(std::cos(a1), std::sin(a1));
  CHECK(std::abs(ecf - target) <= 4.0 / std::sqrt(double(reps)));
}

TEST_CASE("halving the truncation level keeps the coupled paths close") {
  auto spec = unit_spec();
  const double eps = 1e-2;
  LevySimulator sim(spec, 1.0, 0.02, eps, true);
  const int reps = 2000;
  std::vector<double> coarse(reps), fine(reps), diff(reps);
  for (int r = 0; r < reps; ++r) {
    Rng rng(60000 + r);
    auto [pc, pf] = sim.sample_with_halved_eps(rng);
    coarse[r] = pc.values.back();
    fine[r] = pf.values.back();
    diff[r] = pc.values.back() - pf.values.back();
  }
  auto mc = ccm::sample_moments(coarse);
  auto mf = ccm::sample_moments(fine);
  auto md = ccm::sample_moments(diff);
  CHECK(std::abs(mc.mean - mf.mean) <= 0.05);

  // the pair differs only in the (eps/2, eps] tier and the matching cell
  // sigmas, so Var(coarse - fine) sits near the tier variance; unshared
  // samples would instead differ at the scale of Var(X) itself
  double tier = ccm::small_jump_variance(spec, 1.0, eps) -
                ccm::small_jump_variance(spec, 1.0, eps / 2.0);
  CHECK(md.var >= 0.3 * tier);
  CHECK(md.var <= 2.0 * tier);
  double corr = ccm::sample_covariance(coarse, fine) / std::sqrt(mc.var * mf.var);
  CHECK(corr >= 0.97);
}

TEST_CASE("increments over disjoint windows are uncorrelated") {
  auto spec = unit_spec();
  LevySimulator sim(spec, 2.0, 0.02, 1e-2);
  const int reps = 3000;
  std::vector<double> inc1(reps), inc2(reps);
  for (int r = 0; r < reps; ++r) {
    Rng rng(75000 + r);
    auto p = sim.sample(rng);
    inc1[r] = at_time(p, 1.0) - at_time(p, 0.5);
    inc2[r] = at_time(p, 2.0) - at_time(p, 1.5);
  }
  double v1 = ccm::variance_powerlaw(spec, 1.0) - ccm::variance_powerlaw(spec, 0.5);
  double v2 = ccm::variance_powerlaw(spec, 2.0) - ccm::variance_powerlaw(spec, 1.5);
  double cov = ccm::sample_covariance(inc1, inc2);
  CHECK(std::abs(cov) <= 3.0 * std::sqrt(v1 * v2 / reps));
}

TEST_CASE("the parabolic-like drift dominates at long horizons") {
  auto spec = unit_spec();
  LevySimulator sim(spec, 20.0, 0.05, 1e-2);
  const int reps = 400;
  std::vector<double> at5(reps), at10(reps), at20(reps);
  for (int r = 0; r < reps; ++r) {
    Rng rng(81000 + r);
    auto p = sim.sample(rng);
    at5[r] = at_time(p, 5.0);
    at10[r] = at_time(p, 10.0);
    at20[r] = at_time(p, 20.0);
  }
  auto median = [](std::vector<double> v) {
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return v[v.size() / 2];
  };
  double m5 = median(at5), m10 = median(at10), m20 = median(at20);
  CHECK(m5 < 0.0);
  CHECK(m10 < m5);
  CHECK(m20 < m10);
}

TEST_CASE("endpoint over t^{gamma-2} recovers the drift coefficient") {
  auto spec = unit_spec();
  const double t = 50.0;
  LevySimulator sim(spec, t, 0.1, 2e-2);
  const int reps = 1000;
  double sum_ratio = 0.0;
  for (int r = 0; r < reps; ++r) {
    Rng rng(92000 + r);
    auto p = sim.sample(rng);
    sum_ratio += p.values.back() / std::pow(t, 1.5);
  }
  double mean_ratio = sum_ratio / reps;
  double coeff = ccm::drift_powerlaw(spec, 1.0);
  CHECK(std::abs(mean_ratio - coeff) <= 0.25 * std::abs(coeff));
}

TEST_CASE("one-shot sampler matches the simulator class") {
  auto spec = unit_spec();
  Rng a(123), b(123);
  auto p1 = ccm::simulate_powerlaw_limit(spec, 1.0, 0.02, 1e-2, a);
  auto p2 = LevySimulator(spec, 1.0, 0.02, 1e-2).sample(b);
  CHECK(p1.kind == ccm::PathKind::PowerLawLevy);
  REQUIRE(p1.values.size() == p2.values.size());
  for (std::size_t i = 0; i < p1.values.size(); ++i) CHECK(p1.values[i] == p2.values[i]);
}
