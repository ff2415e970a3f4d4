#include "ccm/stats.hpp"

#include <algorithm>
#include <cmath>

#include "ccm/errors.hpp"
#include "ccm/special.hpp"

namespace ccm {

double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) fail(Err::EmptySample, "ks_distance requires nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double na = static_cast<double>(a.size());
  double nb = static_cast<double>(b.size());
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> xs) {
  if (xs.empty()) fail(Err::EmptySample, "empirical_cdf requires a nonempty sample");
  std::sort(xs.begin(), xs.end());
  std::vector<std::pair<double, double>> out;
  double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i + 1 == xs.size() || xs[i + 1] != xs[i]) {
      out.emplace_back(xs[i], static_cast<double>(i + 1) / n);
    }
  }
  return out;
}

double chi_square_stat(const std::vector<double>& observed, const std::vector<double>& expected) {
  if (observed.size() != expected.size() || observed.empty()) {
    fail(Err::BadConfig, "chi_square_stat needs matching nonempty vectors");
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0.0) fail(Err::BadConfig, "chi_square_stat expected counts must be positive");
    double diff = observed[i] - expected[i];
    stat += diff * diff / expected[i];
  }
  return stat;
}

double chi_square_pvalue(double stat, double dof) {
  if (dof <= 0.0) fail(Err::BadConfig, "chi_square_pvalue requires dof > 0");
  if (stat <= 0.0) return 1.0;
  return special::gamma_upper_reg(0.5 * dof, 0.5 * stat);
}

SampleMoments sample_moments(const std::vector<double>& xs) {
  if (xs.empty()) fail(Err::EmptySample, "sample_moments requires a nonempty sample");
  SampleMoments m;
  m.n = xs.size();
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(m.n);
  if (m.n > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.var = ss / static_cast<double>(m.n - 1);
  }
  return m;
}

double sample_covariance(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    fail(Err::BadConfig, "sample_covariance needs two samples of equal size >= 2");
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(ys.size());
  double s = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (xs[i] - mx) * (ys[i] - my);
  return s / static_cast<double>(xs.size() - 1);
}

}  // namespace ccm
