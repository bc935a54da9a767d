#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anneal/errors.hpp"

namespace anneal {

inline double norm2(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// Radial profile h with U(x) = h(|x|). d1/d2 are h' and h''. Evaluations past
// r_max raise RangeError (finite materialized tables).
struct RadialProfile {
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
  double r_max = std::numeric_limits<double>::infinity();
};

struct AnnulusWitness {
  double a = 0.0;
  double b = 0.0;
  double delta = 0.0;
};

// A smooth potential U: R^d -> R+. Analytic gradient/Laplacian are optional;
// absent ones fall back to central differences with relative stepping.
class Potential {
 public:
  int dim = 0;
  std::string name;
  std::function<double(std::span<const double>)> value_fn;
  std::function<void(std::span<const double>, std::span<double>)> gradient_fn;
  std::function<double(std::span<const double>)> laplacian_fn;
  std::optional<RadialProfile> profile;
  std::optional<double> known_cstar;

  // Registered H2 witness (oscillating family), empty otherwise.
  std::vector<AnnulusWitness> h2_witness;
  double h2_alpha = 0.0;
  double h2_delta0 = 0.0;

  // Materialized radial extrema (troughs u_i / crests v_i) when applicable.
  std::vector<double> radial_troughs;
  std::vector<double> radial_crests;

  bool radial() const { return profile.has_value(); }

  double evaluate(std::span<const double> x) const {
    check_point(x);
    return value_fn(x);
  }

  std::vector<double> gradient(std::span<const double> x) const {
    std::vector<double> g(dim);
    gradient_into(x, g);
    return g;
  }

  void gradient_into(std::span<const double> x, std::span<double> out) const {
    check_point(x);
    if (gradient_fn) {
      gradient_fn(x, out);
    } else {
      fd_gradient(x, out);
    }
    for (int i = 0; i < dim; ++i) {
      if (!std::isfinite(out[i]))
        throw NumericError("gradient: non-finite component",
                           {x.begin(), x.end()});
    }
  }

  double laplacian(std::span<const double> x) const {
    check_point(x);
    const double lap = laplacian_fn ? laplacian_fn(x) : fd_laplacian(x);
    if (!std::isfinite(lap))
      throw NumericError("laplacian: non-finite value", {x.begin(), x.end()});
    return lap;
  }

  // Step for finite differences: relative at large radii to control
  // cancellation.
  static double fd_step(std::span<const double> x) {
    return std::max(1e-5, 1e-5 * norm2(x));
  }

 private:
  void check_point(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim)
      throw DomainError("potential: point dimension mismatch");
    for (double v : x) {
      if (!std::isfinite(v))
        throw DomainError("potential: non-finite point");
    }
  }

  void fd_gradient(std::span<const double> x, std::span<double> out) const {
    const double h = fd_step(x);
    std::vector<double> p(x.begin(), x.end());
    for (int i = 0; i < dim; ++i) {
      const double xi = p[i];
      p[i] = xi + h;
      const double up = value_fn(p);
      p[i] = xi - h;
      const double um = value_fn(p);
      p[i] = xi;
      out[i] = (up - um) / (2.0 * h);
    }
  }

  double fd_laplacian(std::span<const double> x) const {
    const double h = fd_step(x);
    std::vector<double> p(x.begin(), x.end());
    const double u0 = value_fn(p);
    double acc = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double xi = p[i];
      p[i] = xi + h;
      const double u1 = value_fn(p);
      p[i] = xi + 2.0 * h;
      const double u2 = value_fn(p);
      p[i] = xi - h;
      const double um1 = value_fn(p);
      p[i] = xi - 2.0 * h;
      const double um2 = value_fn(p);
      p[i] = xi;
      acc += (-u2 + 16.0 * u1 - 30.0 * u0 + 16.0 * um1 - um2) / (12.0 * h * h);
    }
    return acc;
  }
};

// Spec-level operation names.
inline double evaluate(const Potential& p, std::span<const double> x) {
  return p.evaluate(x);
}
inline std::vector<double> gradient_of(const Potential& p,
                                       std::span<const double> x) {
  return p.gradient(x);
}
inline double laplacian_of(const Potential& p, std::span<const double> x) {
  return p.laplacian(x);
}

// Lifts a radial profile to a d-dimensional potential. Requires h'(0) = 0 so
// that U is differentiable at the origin.
inline Potential make_radial_potential(int dim, RadialProfile prof,
                                       std::string name) {
  if (dim < 2) throw ConfigError("potential: dim must be >= 2");
  Potential p;
  p.dim = dim;
  p.name = std::move(name);
  p.profile = std::move(prof);
  const RadialProfile& h = *p.profile;
  constexpr double kOriginEps = 1e-12;
  p.value_fn = [h](std::span<const double> x) { return h.value(norm2(x)); };
  p.gradient_fn = [h, dim](std::span<const double> x, std::span<double> out) {
    const double r = norm2(x);
    if (r < kOriginEps) {
      for (int i = 0; i < dim; ++i) out[i] = 0.0;
      return;
    }
    const double s = h.d1(r) / r;
    for (int i = 0; i < dim; ++i) out[i] = s * x[i];
  };
  p.laplacian_fn = [h, dim](std::span<const double> x) {
    const double r = norm2(x);
    if (r < kOriginEps) return static_cast<double>(dim) * h.d2(0.0);
    return h.d2(r) + (dim - 1) * h.d1(r) / r;
  };
  return p;
}

}  // namespace anneal
