#include "ccm/excursion.hpp"

#include <algorithm>
#include <cmath>

#include "ccm/errors.hpp"

namespace ccm {

LimitPath reflect(const LimitPath& path) {
  if (path.values.empty() || path.values.front() != 0.0) {
    fail(Err::BadConfig, "reflect wants a path starting at 0");
  }
  LimitPath out = path;
  double running_min = 0.0;
  for (auto& v : out.values) {
    running_min = std::min(running_min, v);
    v -= running_min;
  }
  return out;
}

double default_zero_tol(const LimitPath& reflected) {
  double scale = 0.0;
  for (double v : reflected.values) scale = std::max(scale, std::abs(v));
  return 1e-12 * scale;
}

ExcursionList excursions(const LimitPath& reflected, double zero_tol) {
  const auto& v = reflected.values;
  struct Run {
    std::size_t left, right;
    bool censored;
  };
  std::vector<Run> runs;
  std::size_t i = 0;
  while (i < v.size()) {
    if (v[i] <= zero_tol) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < v.size() && v[j + 1] > zero_tol) ++j;
    bool censored = j + 1 == v.size();
    runs.push_back({i == 0 ? 0 : i - 1, censored ? j : j + 1, censored});
    i = j + 1;
  }
  // integer cell counts make equal lengths compare exactly
  std::sort(runs.begin(), runs.end(), [](const Run& a, const Run& b) {
    std::size_t la = a.right - a.left;
    std::size_t lb = b.right - b.left;
    if (la != lb) return la > lb;
    return a.left < b.left;
  });
  ExcursionList list;
  list.intervals.reserve(runs.size());
  list.lengths.reserve(runs.size());
  for (const auto& r : runs) {
    Excursion exc;
    exc.left = static_cast<double>(r.left) * reflected.dt;
    exc.right = static_cast<double>(r.right) * reflected.dt;
    exc.censored = r.censored;
    if (r.censored) list.truncated = true;
    list.intervals.push_back(exc);
    list.lengths.push_back(static_cast<double>(r.right - r.left) * reflected.dt);
  }
  return list;
}

std::vector<double> top_lengths(const ExcursionList& list, std::size_t k, bool include_censored) {
  std::vector<double> out;
  out.reserve(k);
  // lengths[i] comes from the integer cell count, so equal-count ties stay
  // exactly equal; endpoint differences can break ties by an ulp either way
  for (std::size_t i = 0; i < list.intervals.size() && out.size() < k; ++i) {
    if (list.intervals[i].censored && !include_censored) continue;
    out.push_back(list.lengths[i]);
  }
  out.resize(k, 0.0);
  return out;
}

namespace {

void check_decreasing(const std::vector<double>& a) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0.0 || (i > 0 && a[i] > a[i - 1])) {
      fail(Err::NotSorted, "lengths must be nonnegative and non-increasing");
    }
  }
}

}  // namespace

double l2_distance(const std::vector<double>& a, const std::vector<double>& b) {
  check_decreasing(a);
  check_decreasing(b);
  double sum = 0.0;
  std::size_t m = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < m; ++i) {
    double d = (i < a.size() ? a[i] : 0.0) - (i < b.size() ? b[i] : 0.0);
    sum += d * d;
  }
  return std::sqrt(sum);
}

}  // namespace ccm
