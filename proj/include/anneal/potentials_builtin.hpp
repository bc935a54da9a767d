#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <vector>

#include "anneal/potential.hpp"

namespace anneal {

// Monotone quintic ramp: phi(0)=phi'(0)=phi''(0)=0, phi(1)=phi'(1)=1,
// phi''(1)=0, phi' >= 0 on [0,1]. Used for half-window blends at profile
// extrema so the piecewise-linear monotonicity table is preserved exactly.
inline double quintic_ramp(double t) { return ((3.0 * t - 8.0) * t + 6.0) * t * t * t; }
inline double quintic_ramp_d1(double t) { return ((15.0 * t - 32.0) * t + 18.0) * t * t; }
inline double quintic_ramp_d2(double t) { return ((60.0 * t - 96.0) * t + 36.0) * t; }

// C^2 unit step: s(0)=0, s(1)=1, s'=s''=0 at both ends, s' >= 0.
inline double smoothstep5(double t) { return ((6.0 * t - 15.0) * t + 10.0) * t * t * t; }
inline double smoothstep5_d1(double t) { return 30.0 * t * t * (1.0 - t) * (1.0 - t); }
inline double smoothstep5_d2(double t) { return 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t); }

// Smooth version of a piecewise-linear radial profile. Linear between
// breakpoints; each interior extremum is replaced on [bp-w, bp+w] by two
// monotone quintic half-blends with h'=h''=0 at the breakpoint, so breakpoint
// values and the table of variations are preserved exactly. The profile may
// extend past the last breakpoint with a constant slope.
class PiecewiseRadialProfile {
 public:
  PiecewiseRadialProfile(std::vector<double> radii, std::vector<double> values,
                         double halfwindow, double extend_slope = std::nan(""))
      : r_(std::move(radii)), v_(std::move(values)), w_(halfwindow),
        extend_m_(extend_slope) {
    if (r_.size() != v_.size() || r_.size() < 2)
      throw ConfigError("profile: need at least two breakpoints");
    if (r_.front() != 0.0) throw ConfigError("profile: table must start at r=0");
    if (!(w_ > 0.0)) throw ConfigError("profile: halfwindow must be positive");
    m_.resize(r_.size() - 1);
    for (std::size_t k = 0; k + 1 < r_.size(); ++k) {
      const double gap = r_[k + 1] - r_[k];
      if (!(gap >= 2.0 * w_))
        throw ConfigError("profile: breakpoint gap below twice the halfwindow");
      m_[k] = (v_[k + 1] - v_[k]) / gap;
    }
    for (std::size_t k = 1; k + 1 < r_.size(); ++k) {
      if (!(m_[k - 1] * m_[k] < 0.0))
        throw ConfigError("profile: interior breakpoints must be extrema");
    }
    if (extends() && !(m_.back() * extend_m_ < 0.0) && extend_m_ != m_.back())
      throw ConfigError("profile: extension must continue or reverse the last slope");
  }

  bool extends() const { return std::isfinite(extend_m_); }

  double r_max() const {
    return extends() ? std::numeric_limits<double>::infinity() : r_.back();
  }

  double value(double r) const { return eval<0>(r); }
  double d1(double r) const { return eval<1>(r); }
  double d2(double r) const { return eval<2>(r); }

  const std::vector<double>& breakpoint_radii() const { return r_; }
  const std::vector<double>& breakpoint_values() const { return v_; }

 private:
  // The last breakpoint carries a blend only when the extension reverses the
  // slope there (a genuine extremum); a collinear extension passes through.
  bool last_blends() const { return extends() && m_.back() * extend_m_ < 0.0; }

  template <int Deriv>
  double eval(double r) const {
    if (!(r >= 0.0)) throw DomainError("profile: negative radius");
    const std::size_t last = r_.size() - 1;
    if (r > r_[last]) {
      if (!extends()) {
        if (r > r_[last] * (1.0 + 1e-12))
          throw RangeError("profile: radius beyond materialized table");
        r = r_[last];
      } else {
        if (last_blends() && r <= r_[last] + w_)
          return blend_side<Deriv>(v_[last], extend_m_, r - r_[last], +1);
        if (Deriv == 0) return v_[last] + extend_m_ * (r - r_[last]);
        return Deriv == 1 ? extend_m_ : 0.0;
      }
    }
    const std::size_t k = locate(r);
    if (r <= r_[k] + w_) {
      // Right half-window of breakpoint k (the origin only has this side).
      return blend_side<Deriv>(v_[k], m_[k], r - r_[k], +1);
    }
    if (r >= r_[k + 1] - w_ && (k + 1 < last || last_blends())) {
      return blend_side<Deriv>(v_[k + 1], m_[k], r_[k + 1] - r, -1);
    }
    if (Deriv == 0) {
      // Anchor at the nearer breakpoint so table values are hit exactly.
      return (r - r_[k] <= r_[k + 1] - r) ? v_[k] + m_[k] * (r - r_[k])
                                          : v_[k + 1] + m_[k] * (r - r_[k + 1]);
    }
    if (Deriv == 1) return m_[k];
    return 0.0;
  }

  // One half-window: s = |r - bp| in [0, w], side = +1 right / -1 left.
  template <int Deriv>
  double blend_side(double v0, double m, double s, int side) const {
    const double t = s / w_;
    if (Deriv == 0) return v0 + side * m * w_ * quintic_ramp(t);
    if (Deriv == 1) return m * quintic_ramp_d1(t);
    return side * (m / w_) * quintic_ramp_d2(t);
  }

  // Segment index k with r in [r_k, r_{k+1}] (clamped for extension).
  std::size_t locate(double r) const {
    if (r >= r_.back()) return r_.size() - 2;
    std::size_t lo = 0, hi = r_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (r_[mid] <= r) lo = mid; else hi = mid;
    }
    return lo;
  }

  std::vector<double> r_, v_;
  std::vector<double> m_;
  double w_;
  double extend_m_;
};

inline RadialProfile to_radial_profile(std::shared_ptr<const PiecewiseRadialProfile> pw) {
  RadialProfile prof;
  prof.value = [pw](double r) { return pw->value(r); };
  prof.d1 = [pw](double r) { return pw->d1(r); };
  prof.d2 = [pw](double r) { return pw->d2(r); };
  prof.r_max = pw->r_max();
  return prof;
}

// U(x) = alpha * log(1 + log(1 + |x|^2)). Slowest-growing example; its
// threshold behaviour around alpha = c(d-2)/2 drives the transition scans.
inline Potential build_loglog(double alpha, int dim) {
  if (!(alpha > 0.0)) throw ConfigError("loglog: alpha must be positive");
  RadialProfile prof;
  prof.value = [alpha](double r) { return alpha * std::log1p(std::log1p(r * r)); };
  prof.d1 = [alpha](double r) {
    const double A = 1.0 + r * r;
    const double L = 1.0 + std::log1p(r * r);
    return 2.0 * alpha * r / (A * L);
  };
  prof.d2 = [alpha](double r) {
    const double A = 1.0 + r * r;
    const double L = 1.0 + std::log1p(r * r);
    return (2.0 * alpha / (A * L)) * (1.0 - 2.0 * r * r * (L + 1.0) / (A * L));
  };
  std::ostringstream name;
  name << "loglog(alpha=" << alpha << ")";
  Potential p = make_radial_potential(dim, std::move(prof), name.str());
  p.known_cstar = 0.0;
  return p;
}

// Oscillating radial potential: troughs u_i = exp^(p)(i) at height 2i, crests
// v_i = u_i + 1 at height 2i+3, smoothly interpolated with 0.1 half-windows.
// Barrier from every trough toward the origin equals 1. Materialized up to
// max_radius; evaluation beyond the table raises RangeError.
inline Potential build_oscillating(int p, int dim, double max_radius = 1e6) {
  if (p < 1) throw ConfigError("oscillating: p must be >= 1");
  if (!(max_radius > 0.0)) throw ConfigError("oscillating: max_radius must be positive");
  auto iter_exp = [p](double x) {
    for (int k = 0; k < p; ++k) {
      if (x > 700.0) return std::numeric_limits<double>::infinity();
      x = std::exp(x);
    }
    return x;
  };
  std::vector<double> radii{0.0, 1.0};
  std::vector<double> values{0.0, 3.0};
  std::vector<double> troughs, crests{1.0};
  for (int i = 1;; ++i) {
    const double u = iter_exp(static_cast<double>(i));
    if (!std::isfinite(u)) break;
    radii.push_back(u);
    values.push_back(2.0 * i);
    troughs.push_back(u);
    if (u >= max_radius) break;
    radii.push_back(u + 1.0);
    values.push_back(2.0 * i + 3.0);
    crests.push_back(u + 1.0);
  }
  if (troughs.empty())
    throw ConfigError("oscillating: max_radius too small to materialize the first well");
  auto pw = std::make_shared<const PiecewiseRadialProfile>(std::move(radii),
                                                           std::move(values), 0.1);
  std::ostringstream name;
  name << "oscillating(p=" << p << ")";
  Potential pot = make_radial_potential(dim, to_radial_profile(pw), name.str());
  pot.known_cstar = 1.0;
  pot.radial_troughs = troughs;
  pot.radial_crests = crests;
  pot.h2_alpha = 2.0;
  pot.h2_delta0 = 1.0 / 3.0;
  for (std::size_t i = 0; i < troughs.size(); ++i) {
    if (i + 1 < crests.size())
      pot.h2_witness.push_back({troughs[i] + 0.1, crests[i + 1] - 0.1, 1.0 / 3.0});
  }
  return pot;
}

enum class CatalogKind { power_log, kappa_log, power };

inline double catalog_default_smoothing_radius(CatalogKind kind) {
  // Log-family formulas vanish at r=1, so the well cap must take over while
  // the formula is still positive and increasing.
  return kind == CatalogKind::power ? 1.0 : 2.0;
}

// Catalogue potential equal to the stated formula outside the smoothing
// radius R0 and capped inside by a quadratic well with minimum 0 at the
// origin, joined by a C^2 monotone blend on [R0/2, R0].
inline Potential build_radial_catalog(CatalogKind kind, double param, int dim,
                                      double well_smoothing_radius = std::nan("")) {
  if (!(param > 0.0)) throw ConfigError("catalog: parameter must be positive");
  const double R0 = std::isfinite(well_smoothing_radius)
                        ? well_smoothing_radius
                        : catalog_default_smoothing_radius(kind);
  if (!(R0 > 0.0)) throw ConfigError("catalog: smoothing radius must be positive");

  std::function<double(double)> f, f1, f2;
  std::string base;
  switch (kind) {
    case CatalogKind::power_log: {
      const double rho = param;
      f = [rho](double r) { return std::pow(std::log(r), rho); };
      f1 = [rho](double r) { return rho * std::pow(std::log(r), rho - 1.0) / r; };
      f2 = [rho](double r) {
        const double L = std::log(r);
        return rho * std::pow(L, rho - 2.0) * ((rho - 1.0) - L) / (r * r);
      };
      base = "power_log";
      break;
    }
    case CatalogKind::kappa_log: {
      const double kappa = param;
      f = [kappa](double r) { return kappa * std::log(r); };
      f1 = [kappa](double r) { return kappa / r; };
      f2 = [kappa](double r) { return -kappa / (r * r); };
      base = "kappa_log";
      break;
    }
    case CatalogKind::power: {
      const double rho = param;
      f = [rho](double r) { return std::pow(r, rho); };
      f1 = [rho](double r) { return rho * std::pow(r, rho - 1.0); };
      f2 = [rho](double r) { return rho * (rho - 1.0) * std::pow(r, rho - 2.0); };
      base = "power";
      break;
    }
  }
  const double Ra = 0.75 * R0;
  if (!(f(Ra) > 0.0 && f1(Ra) > 0.0 && f(R0) > 0.0 && f1(R0) > 0.0))
    throw ConfigError(
        "catalog: formula must be positive and increasing on [0.75*R0, R0]; "
        "increase well_smoothing_radius (log kinds need R0 > 4/3)");
  const double k_well = 0.5 * f(Ra) / (R0 * R0);
  const double span = R0 - Ra;

  RadialProfile prof;
  prof.value = [=](double r) {
    if (r >= R0) return f(r);
    if (r <= Ra) return k_well * r * r;
    const double t = (r - Ra) / span;
    const double W = smoothstep5(t);
    return (1.0 - W) * (k_well * r * r) + W * f(r);
  };
  prof.d1 = [=](double r) {
    if (r >= R0) return f1(r);
    if (r <= Ra) return 2.0 * k_well * r;
    const double t = (r - Ra) / span;
    const double W = smoothstep5(t);
    const double Wd = smoothstep5_d1(t) / span;
    return (1.0 - W) * (2.0 * k_well * r) + W * f1(r) + Wd * (f(r) - k_well * r * r);
  };
  prof.d2 = [=](double r) {
    if (r >= R0) return f2(r);
    if (r <= Ra) return 2.0 * k_well;
    const double t = (r - Ra) / span;
    const double W = smoothstep5(t);
    const double Wd = smoothstep5_d1(t) / span;
    const double Wdd = smoothstep5_d2(t) / (span * span);
    const double q = k_well * r * r, q1 = 2.0 * k_well * r, q2 = 2.0 * k_well;
    return (1.0 - W) * q2 + W * f2(r) + 2.0 * Wd * (f1(r) - q1) + Wdd * (f(r) - q);
  };

  std::ostringstream name;
  name << base << "(" << param << ")";
  Potential p = make_radial_potential(dim, std::move(prof), name.str());
  p.known_cstar = 0.0;
  return p;
}

// U(x) = |x|^2 / 2. Laplacian is d everywhere.
inline Potential build_quadratic(int dim) {
  RadialProfile prof;
  prof.value = [](double r) { return 0.5 * r * r; };
  prof.d1 = [](double r) { return r; };
  prof.d2 = [](double) { return 1.0; };
  Potential p = make_radial_potential(dim, std::move(prof), "quadratic");
  p.known_cstar = 0.0;
  return p;
}

inline Potential build_zero(int dim) {
  RadialProfile prof;
  prof.value = [](double) { return 0.0; };
  prof.d1 = [](double) { return 0.0; };
  prof.d2 = [](double) { return 0.0; };
  Potential p = make_radial_potential(dim, std::move(prof), "zero");
  p.known_cstar = 0.0;
  return p;
}

// Radial double well: global minimum 0 at the origin, crest 2 at r=1.5,
// secondary well 0.5 at r=3, then linear growth. Barrier from the outer well
// back to the origin is exactly 1.5.
inline Potential build_double_well(int dim) {
  auto pw = std::make_shared<const PiecewiseRadialProfile>(
      std::vector<double>{0.0, 1.5, 3.0}, std::vector<double>{0.0, 2.0, 0.5},
      0.25, /*extend_slope=*/0.5);
  Potential p = make_radial_potential(dim, to_radial_profile(pw), "double_well");
  p.known_cstar = 1.5;
  p.radial_troughs = {3.0};
  p.radial_crests = {1.5};
  return p;
}

}  // namespace anneal
