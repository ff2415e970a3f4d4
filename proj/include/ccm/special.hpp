#pragma once

#include <cstdint>

namespace ccm::special {

// Unnormalized upper incomplete gamma. Accepts any real a, including a <= 0
// (then x must be positive).
double gamma_upper(double a, double x);

// Regularized P(a,x) and Q(a,x), a > 0.
double gamma_lower_reg(double a, double x);
double gamma_upper_reg(double a, double x);

// sum_{k >= k0} k^{-s}, s > 1
double zeta_tail(double s, std::uint64_t k0);

// sum_{k >= k0} k^{-p} e^{-kt}, t > 0, any real p
double power_tail_exp(double p, double t, std::uint64_t k0);

}  // namespace ccm::special
