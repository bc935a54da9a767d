#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "anneal/errors.hpp"
#include "anneal/rng.hpp"

namespace anneal {

struct Interval {
  double point = 0.0;
  double low = 0.0;
  double high = 0.0;
};

// Wilson score interval for a binomial proportion.
inline Interval wilson_interval(long successes, long trials, double level = 0.95) {
  if (trials <= 0) throw DomainError("wilson_interval: trials must be positive");
  if (successes < 0 || successes > trials)
    throw DomainError("wilson_interval: successes out of range");
  if (!(level > 0.0 && level < 1.0))
    throw DomainError("wilson_interval: level must be in (0,1)");
  const double z = normal_quantile(1.0 - (1.0 - level) / 2.0);
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  Interval out;
  out.point = phat;
  out.low = std::max(0.0, center - half);
  out.high = std::min(1.0, center + half);
  return out;
}

inline double sample_mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double sample_variance(const std::vector<double>& v) {
  const double m = sample_mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return acc / static_cast<double>(v.size() - 1);
}

inline double sample_median(std::vector<double> v) {
  if (v.empty()) throw DomainError("sample_median: empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Standard error of the mean of a correlated series via batch means.
inline double batch_means_se(const std::vector<double>& v, int batches = 30) {
  if (static_cast<int>(v.size()) < 2 * batches)
    throw DomainError("batch_means_se: series too short");
  const std::size_t len = v.size() / batches;
  std::vector<double> means(batches);
  for (int b = 0; b < batches; ++b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < len; ++i) acc += v[b * len + i];
    means[b] = acc / static_cast<double>(len);
  }
  return std::sqrt(sample_variance(means) / batches);
}

// Chi-square quantile by the Wilson-Hilferty cube approximation; adequate for
// the test sizes used here (hundreds of degrees of freedom).
inline double chi_square_quantile(double p, double dof) {
  const double z = normal_quantile(p);
  const double a = 2.0 / (9.0 * dof);
  const double c = 1.0 - a + z * std::sqrt(a);
  return dof * c * c * c;
}

// Two-sample Kolmogorov-Smirnov statistic sup|F1-F2|.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_statistic: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na -
                              static_cast<double>(j) / nb));
  }
  return d;
}

// Asymptotic two-sample KS critical value at significance alpha.
inline double ks_critical(double alpha, std::size_t n, std::size_t m) {
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  return c * std::sqrt(static_cast<double>(n + m) /
                       (static_cast<double>(n) * static_cast<double>(m)));
}

}  // namespace anneal
