#include <cmath>
#include <vector>

#include <doctest.h>

#include "ccm/er_graph.hpp"
#include "ccm/errors.hpp"
#include "ccm/rng.hpp"
#include "ccm/stats.hpp"
#include "ccm/union_find.hpp"

using doctest::Approx;

TEST_CASE("two-sample KS on hand-evaluated cases") {
  CHECK(ccm::ks_distance({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) == Approx(0.0));
  CHECK(ccm::ks_distance({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}) == Approx(1.0));
  CHECK(ccm::ks_distance({1.0, 2.0}, {1.5}) == Approx(0.5));
  CHECK(ccm::ks_distance({0.0, 2.0}, {1.0, 3.0}) == Approx(0.5));
  CHECK_THROWS_AS((void)ccm::ks_distance({}, {1.0}), ccm::Error);
}

TEST_CASE("KS is symmetric and bounded on random samples") {
  ccm::Rng rng(11);
  std::vector<double> a(200), b(150);
  for (auto& x : a) x = rng.normal();
  for (auto& x : b) x = rng.normal() + 0.3;
  double d1 = ccm::ks_distance(a, b);
  double d2 = ccm::ks_distance(b, a);
  CHECK(d1 == Approx(d2));
  CHECK(d1 > 0.0);
  CHECK(d1 < 1.0);
}

TEST_CASE("empirical cdf is a right-continuous step function") {
  auto steps = ccm::empirical_cdf({2.0, 1.0, 2.0, 5.0});
  auto at = [&steps](double t) {
    double f = 0.0;
    for (const auto& [x, fx] : steps) {
      if (x <= t) f = fx;
    }
    return f;
  };
  REQUIRE(steps.size() == 3);  // distinct sample points
  CHECK(at(0.5) == Approx(0.0));
  CHECK(at(1.0) == Approx(0.25));
  CHECK(at(2.0) == Approx(0.75));
  CHECK(at(4.9) == Approx(0.75));
  CHECK(at(5.0) == Approx(1.0));
  CHECK(at(99.0) == Approx(1.0));
  for (std::size_t i = 1; i < steps.size(); ++i) {
    CHECK(steps[i].second > steps[i - 1].second);
    CHECK(steps[i].first > steps[i - 1].first);
  }
}

TEST_CASE("chi-square p-values at textbook quantiles") {
  // dof 2: survival function is exp(-x/2)
  CHECK(ccm::chi_square_pvalue(4.605170185988091, 2.0) == Approx(0.1).epsilon(1e-10));
  // dof 1: 95th percentile
  CHECK(ccm::chi_square_pvalue(3.841458820694124, 1.0) == Approx(0.05).epsilon(1e-6));
  CHECK(ccm::chi_square_pvalue(0.0, 5.0) == Approx(1.0));
  CHECK(ccm::chi_square_pvalue(1000.0, 3.0) < 1e-12);
}

TEST_CASE("chi-square statistic on a hand example") {
  // observed (10, 30), expected (20, 20): (100/20)+(100/20) = 10
  CHECK(ccm::chi_square_stat({10.0, 30.0}, {20.0, 20.0}) == Approx(10.0));
}

TEST_CASE("sample moments and covariance") {
  ccm::SampleMoments m = ccm::sample_moments({1.0, 2.0, 3.0, 4.0});
  CHECK(m.n == 4);
  CHECK(m.mean == Approx(2.5));
  CHECK(m.var == Approx(5.0 / 3.0));
  CHECK(ccm::sample_covariance({1.0, 2.0, 3.0}, {2.0, 4.0, 6.0}) == Approx(2.0));
  CHECK(ccm::sample_covariance({1.0, 2.0}, {5.0, 5.0}) == Approx(0.0));
}

TEST_CASE("union-find counts components and sizes") {
  ccm::UnionFind uf(5);
  CHECK(uf.components() == 5);
  uf.unite(0, 1);
  uf.unite(1, 2);
  CHECK_FALSE(uf.unite(0, 2));
  CHECK(uf.components() == 3);
  CHECK(uf.component_size(2) == 3);
  auto sizes = uf.sizes();
  CHECK(sizes == std::vector<std::uint64_t>{3, 1, 1});
}

TEST_CASE("ER component sizes: small-case laws and determinism") {
  ccm::Rng rng1(5), rng2(5);
  auto a = ccm::er_component_sizes(300, 1.0 / 300.0, rng1);
  auto b = ccm::er_component_sizes(300, 1.0 / 300.0, rng2);
  CHECK(a == b);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    total += a[i];
    if (i > 0) CHECK(a[i] <= a[i - 1]);
  }
  CHECK(total == 300);

  // p = 0: all singletons; p = 1: one component
  ccm::Rng rng3(1);
  CHECK(ccm::er_component_sizes(4, 0.0, rng3).size() == 4);
  CHECK(ccm::er_component_sizes(4, 1.0, rng3) == std::vector<std::uint64_t>{4});
}
