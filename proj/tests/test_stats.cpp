#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "anneal/rng.hpp"
#include "anneal/stats.hpp"

using namespace anneal;

TEST_CASE("wilson endpoints at s=0 and s=N match closed forms") {
  const double z = normal_quantile(0.975);
  const double z2 = z * z;
  const long n = 200;

  const Interval at_zero = wilson_interval(0, n);
  REQUIRE(at_zero.point == 0.0);
  REQUIRE(at_zero.low == 0.0);
  REQUIRE(at_zero.high == Catch::Approx(z2 / (n + z2)).epsilon(1e-12));

  const Interval at_full = wilson_interval(n, n);
  REQUIRE(at_full.point == 1.0);
  REQUIRE(at_full.high == 1.0);
  REQUIRE(at_full.low == Catch::Approx(static_cast<double>(n) / (n + z2)).epsilon(1e-12));
}

TEST_CASE("wilson interval brackets the point estimate") {
  for (long s : {1L, 37L, 99L, 150L}) {
    const Interval iv = wilson_interval(s, 200, 0.95);
    REQUIRE(iv.low <= iv.point);
    REQUIRE(iv.point <= iv.high);
    REQUIRE(iv.low >= 0.0);
    REQUIRE(iv.high <= 1.0);
  }
  REQUIRE_THROWS_AS(wilson_interval(5, 0), DomainError);
  REQUIRE_THROWS_AS(wilson_interval(-1, 10), DomainError);
}

TEST_CASE("wilson coverage near nominal on Bernoulli(0.3)") {
  const double p = 0.3;
  const int reps = 10000, n = 100;
  SplitMix64 g(99);
  int covered = 0;
  for (int r = 0; r < reps; ++r) {
    long s = 0;
    for (int i = 0; i < n; ++i) s += (g.next_uniform() < p) ? 1 : 0;
    const Interval iv = wilson_interval(s, n, 0.95);
    if (iv.low <= p && p <= iv.high) ++covered;
  }
  const double coverage = static_cast<double>(covered) / reps;
  REQUIRE(coverage >= 0.93);
  REQUIRE(coverage <= 0.97);
}

TEST_CASE("two-sample KS separates shifted samples and accepts equal ones") {
  GaussianStream g(7);
  std::vector<double> a(2000), b(2000), c(2000);
  for (auto& x : a) x = g.next();
  for (auto& x : b) x = g.next();
  for (auto& x : c) x = g.next() + 0.5;
  const double d_same = ks_statistic(a, b);
  const double d_diff = ks_statistic(a, c);
  const double crit = ks_critical(0.01, a.size(), b.size());
  REQUIRE(d_same <= crit);
  REQUIRE(d_diff > crit);
}

TEST_CASE("chi-square quantile approximation is sane") {
  // chi2.ppf(0.995, 200) = 255.264, chi2.ppf(0.005, 200) = 152.241.
  REQUIRE(chi_square_quantile(0.995, 200) == Catch::Approx(255.264).margin(1.0));
  REQUIRE(chi_square_quantile(0.005, 200) == Catch::Approx(152.241).margin(1.0));
}

TEST_CASE("batch means standard error shrinks with sample size") {
  GaussianStream g(12);
  std::vector<double> shorter(3000), longer(30000);
  for (auto& x : shorter) x = g.next();
  for (auto& x : longer) x = g.next();
  REQUIRE(batch_means_se(longer) < batch_means_se(shorter));
}
