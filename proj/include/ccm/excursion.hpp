#pragma once

#include <cstddef>
#include <vector>

#include "ccm/path.hpp"

namespace ccm {

struct Excursion {
  double left = 0.0;
  double right = 0.0;
  bool censored = false;  // path ended strictly inside the excursion

  double length() const { return right - left; }
};

// Excursions of a reflected path above zero, longest first.
struct ExcursionList {
  std::vector<double> lengths;      // non-increasing, parallel to intervals
  std::vector<Excursion> intervals;
  bool truncated = false;  // final excursion censored by the horizon
};

// value minus running minimum; nonnegative, zero at new minima
LimitPath reflect(const LimitPath& path);

// 1e-12 times the sup-norm of the path, guarding resummation noise
double default_zero_tol(const LimitPath& reflected);

// Maximal grid runs above zero_tol, extended to the bracketing grid points;
// ordered by length descending, ties by left endpoint ascending.
ExcursionList excursions(const LimitPath& reflected, double zero_tol);

// k longest lengths, zero-padded; censored excursions skipped unless asked
std::vector<double> top_lengths(const ExcursionList& list, std::size_t k,
                                bool include_censored = false);

// Euclidean distance after zero-padding to a common length.
double l2_distance(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace ccm
