#pragma once

#include <cstdint>
#include <vector>

#include "ccm/degree_law.hpp"
#include "ccm/path.hpp"
#include "ccm/rng.hpp"

namespace ccm {

struct FieldAtom {
  double s = 0.0;
  std::uint64_t mark = 0;
};

struct PoissonField {
  double n = 0.0;
  double horizon = 0.0;
  std::vector<FieldAtom> atoms;  // strictly increasing times

  std::uint64_t count_upto(double t) const;
  std::uint64_t max_mark(double t) const;
};

// Unit-rate arrivals on (0, horizon); an atom at time s carries mark k with
// probability k exp(-k psi(s/n)) psi'(s/n) nu_k.
PoissonField simulate_field(const DegreeLaw& law, double n, double horizon, Rng& rng);

// S(t) = sum of (mark - 2) over atoms with time <= t, as a step function.
struct StepWalk {
  std::vector<double> times;
  std::vector<std::int64_t> values;  // values[i] = S at times[i]

  std::int64_t at(double t) const;
};

StepWalk walk_S(const PoissonField& field);

// A_n(t) = integral of (a_n(s) - 2) ds with a_n the mean mark at time s.
double drift_A(const DegreeLaw& law, double n, double t, double abs_tol = 1e-8);
// cumulative values at the given increasing times
std::vector<double> drift_A_grid(const DegreeLaw& law, double n, const std::vector<double>& ts,
                                 double abs_tol = 1e-8);

// predictable quadratic variation of the compensated walk
double variation_QV(const DegreeLaw& law, double n, double t, double abs_tol = 1e-8);
std::vector<double> variation_QV_grid(const DegreeLaw& law, double n,
                                      const std::vector<double>& ts, double abs_tol = 1e-8);

// S(t n^time_exp) / n^space_exp on a dt grid
LimitPath rescale_field(const PoissonField& field, double time_exp, double space_exp,
                        double horizon, double dt);

}  // namespace ccm
