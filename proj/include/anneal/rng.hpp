#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "anneal/errors.hpp"

namespace anneal {

// Counter-based splitmix64: output k is a pure function of (seed, k), so
// streams can be split and replayed independently of scheduling.
inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return mix64(state_ += kGolden); }

  // Uniform on (0,1), 53-bit resolution, never 0 or 1.
  double next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }

 private:
  std::uint64_t state_;
};

// Substream seed for trial `index` under `master`. Injective in index for a
// fixed master (odd increment mod 2^64, then a bijective mix).
inline std::uint64_t derive_stream(std::uint64_t master, std::uint64_t index) {
  return mix64(mix64(master) + (index + 1) * kGolden);
}

// Inverse standard normal CDF, Wichura's PPND16 (algorithm AS 241).
// |error| < 1e-15 over (0,1); used both for Gaussian sampling and for the
// z-values of confidence intervals so results are sampler-pinned.
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must be in (0,1)");
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
              6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
            1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
          1.3314166789178437745e+2) * r + 3.3871328727963666080e+0);
    const double den =
        (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
              3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
            5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
          4.2313330701600911252e+1) * r + 1.0);
    return q * num / den;
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
            3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
          4.63033784615654529590e+0) * r + 1.42343711074968357734e+0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
          2.05319162663775882187e+0) * r + 1.0);
    val = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
          5.46378491116411436990e+0) * r + 6.65790464350110377720e+0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
    val = num / den;
  }
  return (q < 0.0) ? -val : val;
}

// Gaussian stream via inverse CDF. The sampler identity is recorded in run
// manifests; changing it invalidates bit-reproducibility claims.
inline constexpr const char* kGaussianSamplerId = "inverse_cdf_as241";
inline constexpr const char* kRngId = "splitmix64_counter";

class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : u_(seed) {}

  double next() { return normal_quantile(u_.next_uniform()); }
  double next_uniform() { return u_.next_uniform(); }
  std::uint64_t next_u64() { return u_.next_u64(); }

 private:
  SplitMix64 u_;
};

}  // namespace anneal
