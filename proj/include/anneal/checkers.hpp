#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "anneal/potential.hpp"
#include "anneal/rng.hpp"

namespace anneal {

// x . grad U(x) >= a / log|x| outside B(A0).
struct H1Descriptor {
  double a = 1.0;
  double A0 = 2.0;

  void validate() const {
    if (!(a > 0.0)) throw ConfigError("H1: a must be positive");
    if (!(A0 >= 2.0)) throw ConfigError("H1: A0 must be >= 2");
  }
};

// Annuli [a_i, b_i] on which the radial derivative is >= 1/delta_i.
struct H2Descriptor {
  struct Annulus {
    double a = 0.0, b = 0.0, delta = 0.0;
  };
  double delta0 = 0.0;
  double alpha = 0.0;
  std::vector<Annulus> annuli;

  void validate() const {
    if (!(delta0 > 0.0)) throw ConfigError("H2: delta0 must be positive");
    if (!(alpha > 0.0)) throw ConfigError("H2: alpha must be positive");
    if (annuli.empty()) throw ConfigError("H2: need at least one annulus");
    double prev_b = -std::numeric_limits<double>::infinity();
    bool first = true;
    for (const auto& an : annuli) {
      if (first) {
        if (!(an.a >= 0.0)) throw ConfigError("H2: a_1 must be >= 0");
        first = false;
      } else if (!(an.a >= prev_b)) {
        throw ConfigError("H2: annuli must be ordered (b_i <= a_{i+1})");
      }
      if (!(an.a < an.b)) throw ConfigError("H2: need a_i < b_i");
      if (!(an.delta >= delta0)) throw ConfigError("H2: delta_i must be >= delta0");
      if (!(an.b >= an.a + alpha * an.delta))
        throw ConfigError("H2: need b_i >= a_i + alpha*delta_i");
      prev_b = an.b;
    }
  }
};

// Spherical-annulus restriction of the ring condition: level sets on the two
// boundary spheres, a gradient bound and a Laplacian-ratio bound inside.
struct H3RadialDescriptor {
  struct Ring {
    double r_in = 0.0, r_out = 0.0;
    double u = 0.0, v = 0.0;
    double kappa = 0.0;
  };
  double epsilon = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<Ring> rings;

  void validate() const {
    if (!(epsilon > 0.0)) throw ConfigError("H3: epsilon must be positive");
    if (!(alpha > 0.0)) throw ConfigError("H3: alpha must be positive");
    if (!std::isfinite(beta)) throw ConfigError("H3: beta must be finite");
    if (rings.empty()) throw ConfigError("H3: need at least one ring");
    double prev_out = 0.0;
    for (const auto& ring : rings) {
      if (!(ring.r_in > 0.0 && ring.r_in < ring.r_out))
        throw ConfigError("H3: need 0 < r_in < r_out");
      if (!(ring.r_in >= prev_out))
        throw ConfigError("H3: rings must be nested (r_out_i <= r_in_{i+1})");
      if (!(ring.kappa > 0.0)) throw ConfigError("H3: kappa_i must be positive");
      if (!(ring.v >= ring.u + alpha * std::max(1.0, epsilon * ring.kappa)))
        throw ConfigError("H3: need v_i >= u_i + alpha*max(1, eps*kappa_i)");
      prev_out = ring.r_out;
    }
  }
};

struct SamplingBudget {
  int radii = 64;        // log- or linearly-spaced radii per region
  int directions = 128;  // random unit vectors per radius set
  int refine_steps = 10; // pattern-search refinement from the worst sample
  double r_max = 1e6;    // outer radius for unbounded regions (H1)
  std::uint64_t seed = 0x5eedu;
};

struct CheckReport {
  bool pass = false;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::vector<double> worst_point;
  long samples_used = 0;
  double tolerance = 0.0;
  struct Region {
    int index = 0;
    double worst_margin = 0.0;
    std::vector<double> worst_point;
    std::string what;
  };
  std::vector<Region> regions;

  const char* verdict() const { return pass ? "pass" : "counterexample found"; }
};

namespace detail {

inline std::vector<std::vector<double>> random_directions(int dim, int count,
                                                          std::uint64_t seed) {
  GaussianStream g(seed);
  std::vector<std::vector<double>> dirs;
  dirs.reserve(count);
  // Include the first axis so radial potentials get an exact-axis probe.
  std::vector<double> e1(dim, 0.0);
  e1[0] = 1.0;
  dirs.push_back(e1);
  while (static_cast<int>(dirs.size()) < count) {
    std::vector<double> v(dim);
    for (auto& x : v) x = g.next();
    const double n = norm2(v);
    if (n < 1e-12) continue;
    for (auto& x : v) x /= n;
    dirs.push_back(std::move(v));
  }
  return dirs;
}

inline std::vector<double> scaled(const std::vector<double>& dir, double r) {
  std::vector<double> x(dir.size());
  for (std::size_t i = 0; i < dir.size(); ++i) x[i] = r * dir[i];
  return x;
}

// 10 rounds of shrinking radial/directional perturbation around the worst
// sample; margins only ever move down.
template <typename MarginFn>
void refine_worst(const MarginFn& margin, int dim, int steps, double r_lo,
                  double r_hi, std::uint64_t seed, double& worst,
                  std::vector<double>& worst_dir, double& worst_r) {
  GaussianStream g(seed);
  double scale = 0.25;
  for (int it = 0; it < steps; ++it) {
    for (double factor : {1.0 + scale, 1.0 / (1.0 + scale)}) {
      const double r = std::clamp(worst_r * factor, r_lo, r_hi);
      const double m = margin(worst_dir, r);
      if (m < worst) {
        worst = m;
        worst_r = r;
      }
    }
    if (dim > 1) {
      std::vector<double> cand(worst_dir);
      for (auto& x : cand) x += scale * g.next();
      const double n = norm2(cand);
      if (n > 1e-12) {
        for (auto& x : cand) x /= n;
        const double m = margin(cand, worst_r);
        if (m < worst) {
          worst = m;
          worst_dir = cand;
        }
      }
    }
    scale *= 0.6;
  }
}

}  // namespace detail

// Verdicts are sampling-based: "pass" means no violation found within the
// budget. Margins at exact-equality witnesses sit at 0, so violations are
// counted below -tolerance.
inline double checker_tolerance(double threshold_scale) {
  return 1e-9 * (1.0 + std::fabs(threshold_scale));
}

inline CheckReport check_h1(const Potential& p, const H1Descriptor& desc,
                            const SamplingBudget& budget = {}) {
  desc.validate();
  if (!(budget.r_max > desc.A0))
    throw ConfigError("check_h1: budget r_max must exceed A0");
  CheckReport rep;
  const auto dirs = detail::random_directions(p.dim, budget.directions, budget.seed);
  auto margin = [&](const std::vector<double>& dir, double r) {
    const std::vector<double> x = detail::scaled(dir, r);
    const std::vector<double> g = p.gradient(x);
    return dot(x, g) - desc.a / std::log(r);
  };
  double worst = std::numeric_limits<double>::infinity();
  std::vector<double> worst_dir = dirs.front();
  double worst_r = desc.A0;
  const double log_lo = std::log(desc.A0), log_hi = std::log(budget.r_max);
  for (int i = 0; i < budget.radii; ++i) {
    const double r = std::exp(log_lo + (log_hi - log_lo) * i /
                                           std::max(1, budget.radii - 1));
    for (const auto& dir : dirs) {
      const double m = margin(dir, r);
      ++rep.samples_used;
      if (m < worst) {
        worst = m;
        worst_dir = dir;
        worst_r = r;
      }
    }
  }
  detail::refine_worst(margin, p.dim, budget.refine_steps, desc.A0,
                       budget.r_max, budget.seed ^ 0x9e37u, worst, worst_dir,
                       worst_r);
  rep.worst_margin = worst;
  rep.worst_point = detail::scaled(worst_dir, worst_r);
  rep.tolerance = checker_tolerance(desc.a / std::log(desc.A0));
  rep.pass = worst >= -rep.tolerance;
  return rep;
}

inline CheckReport check_h2(const Potential& p, const H2Descriptor& desc,
                            const SamplingBudget& budget = {}) {
  desc.validate();
  CheckReport rep;
  const auto dirs = detail::random_directions(p.dim, budget.directions, budget.seed);
  rep.tolerance = 0.0;
  for (std::size_t k = 0; k < desc.annuli.size(); ++k) {
    const auto& an = desc.annuli[k];
    auto margin = [&](const std::vector<double>& dir, double r) {
      r = std::max(r, 1e-12);
      const std::vector<double> x = detail::scaled(dir, r);
      const std::vector<double> g = p.gradient(x);
      return dot(dir, g) - 1.0 / an.delta;
    };
    double worst = std::numeric_limits<double>::infinity();
    std::vector<double> worst_dir = dirs.front();
    double worst_r = an.a;
    for (int i = 0; i < budget.radii; ++i) {
      const double r = an.a + (an.b - an.a) * i / std::max(1, budget.radii - 1);
      for (const auto& dir : dirs) {
        const double m = margin(dir, r);
        ++rep.samples_used;
        if (m < worst) {
          worst = m;
          worst_dir = dir;
          worst_r = r;
        }
      }
    }
    detail::refine_worst(margin, p.dim, budget.refine_steps, an.a, an.b,
                         budget.seed ^ (k * kGolden + 1), worst, worst_dir,
                         worst_r);
    CheckReport::Region region;
    region.index = static_cast<int>(k);
    region.worst_margin = worst;
    region.worst_point = detail::scaled(worst_dir, std::max(worst_r, 1e-12));
    region.what = "radial derivative vs 1/delta_i";
    rep.regions.push_back(region);
    rep.tolerance = std::max(rep.tolerance, checker_tolerance(1.0 / an.delta));
    if (worst < rep.worst_margin) {
      rep.worst_margin = worst;
      rep.worst_point = region.worst_point;
    }
  }
  rep.pass = rep.worst_margin >= -rep.tolerance;
  return rep;
}

inline CheckReport check_h3_radial(const Potential& p,
                                   const H3RadialDescriptor& desc,
                                   const SamplingBudget& budget = {}) {
  desc.validate();
  if (!p.radial())
    throw ConfigError("check_h3_radial: potential must be radial");
  CheckReport rep;
  const auto dirs = detail::random_directions(p.dim, budget.directions, budget.seed);
  rep.tolerance = 0.0;
  for (std::size_t k = 0; k < desc.rings.size(); ++k) {
    const auto& ring = desc.rings[k];
    const double level_tol_in = 1e-9 * (1.0 + std::fabs(ring.u));
    const double level_tol_out = 1e-9 * (1.0 + std::fabs(ring.v));
    double worst = std::numeric_limits<double>::infinity();
    std::vector<double> worst_point;
    std::string what;
    auto consider = [&](double m, const std::vector<double>& x, const char* label) {
      ++rep.samples_used;
      if (m < worst) {
        worst = m;
        worst_point = x;
        what = label;
      }
    };
    for (const auto& dir : dirs) {
      // Boundary level sets, scaled so the margin is 0 exactly at tolerance.
      const auto x_in = detail::scaled(dir, ring.r_in);
      consider(1.0 - std::fabs(p.evaluate(x_in) - ring.u) / level_tol_in, x_in,
               "inner boundary level U = u_i");
      const auto x_out = detail::scaled(dir, ring.r_out);
      consider(1.0 - std::fabs(p.evaluate(x_out) - ring.v) / level_tol_out,
               x_out, "outer boundary level U = v_i");
    }
    for (int i = 0; i < budget.radii; ++i) {
      const double r =
          ring.r_in + (ring.r_out - ring.r_in) * i / std::max(1, budget.radii - 1);
      for (const auto& dir : dirs) {
        const auto x = detail::scaled(dir, r);
        const std::vector<double> g = p.gradient(x);
        const double gn = norm2(g);
        if (gn <= 1e-300) {
          consider(-std::numeric_limits<double>::infinity(), x,
                   "gradient vanishes on the ring (|grad U| = 0)");
          continue;
        }
        consider(ring.kappa - gn, x, "gradient bound |grad U| <= kappa_i");
        consider(desc.beta - p.laplacian(x) / (gn * gn), x,
                 "Laplacian ratio bound <= beta");
      }
    }
    CheckReport::Region region;
    region.index = static_cast<int>(k);
    region.worst_margin = worst;
    region.worst_point = worst_point;
    region.what = what;
    rep.regions.push_back(region);
    rep.tolerance = std::max(rep.tolerance, checker_tolerance(ring.kappa));
    if (worst < rep.worst_margin) {
      rep.worst_margin = worst;
      rep.worst_point = region.worst_point;
    }
  }
  rep.pass = rep.worst_margin >= -rep.tolerance;
  return rep;
}

}  // namespace anneal
