#pragma once

#include <cstdint>
#include <vector>

namespace ccm {

// Exact two-sample Kolmogorov-Smirnov distance over merged order statistics.
double ks_distance(std::vector<double> a, std::vector<double> b);

// Sorted (x, F(x)) pairs, right-continuous empirical CDF.
std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> xs);

double chi_square_stat(const std::vector<double>& observed, const std::vector<double>& expected);

// Upper-tail p-value of a chi-square statistic with dof degrees of freedom.
double chi_square_pvalue(double stat, double dof);

struct SampleMoments {
  double mean = 0.0;
  double var = 0.0;  // unbiased
  std::size_t n = 0;
};

SampleMoments sample_moments(const std::vector<double>& xs);

double sample_covariance(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace ccm
