#pragma once

#include <cmath>
#include <functional>
#include <limits>

#include "anneal/errors.hpp"

namespace anneal {

// Cooling law beta(t) = beta0 + log(1+t)/c. Larger c = slower cooling.
// c = +inf freezes the temperature at beta0 (constant-beta surrogate).
struct Schedule {
  double c = 1.0;
  double beta0 = 0.0;

  Schedule() = default;
  Schedule(double c_, double beta0_) : c(c_), beta0(beta0_) { validate(); }

  static Schedule frozen(double beta0_) {
    Schedule s;
    s.c = std::numeric_limits<double>::infinity();
    s.beta0 = beta0_;
    s.validate();
    return s;
  }

  void validate() const {
    if (!(c > 0.0)) throw ConfigError("schedule: c must be positive");
    if (!(beta0 >= 0.0) || !std::isfinite(beta0))
      throw ConfigError("schedule: beta0 must be >= 0");
  }

  bool frozen_beta() const { return std::isinf(c); }

  double beta(double t) const {
    if (!(t >= 0.0)) throw DomainError("schedule: beta requires t >= 0");
    if (frozen_beta()) return beta0;
    return beta0 + std::log1p(t) / c;
  }
};

namespace detail {

inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double fa, double fm, double fb,
                               double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  if (b <= a) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double out = adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
  if (!std::isfinite(out)) throw NumericError("integrate: non-finite integral");
  return out;
}

}  // namespace detail

struct SigmaTimeChange {
  double sigma = 0.0;            // noise intensity at the time-changed instant
  double rho = 0.0;              // sigma-clock instant corresponding to t
  double roundtrip_error = 0.0;  // |A(rho) - t| with A(u) = int_1^u sigma
};

// The sigma-formulation runs d Y = sqrt(sigma_u) dB - (1/2) grad U dt with
// sigma_u = 1/beta(u). The clocks are linked by A(u) = int_1^u sigma_s ds
// (anchored at u=1 since the integrand diverges at 0 when beta0 = 0) and
// rho = A^{-1}. Returns sigma at rho_t plus the quadrature/Newton round-trip
// discrepancy as a self-check.
inline SigmaTimeChange sigma_time_change(const Schedule& s, double t) {
  if (!(t > 1.0)) throw DomainError("sigma_time_change: requires t > 1");
  if (s.frozen_beta() && s.beta0 == 0.0)
    throw DomainError("sigma_time_change: beta is identically 0");
  if (s.beta0 == 0.0 && !(s.c > 0.0))
    throw DomainError("sigma_time_change: invalid schedule");
  auto sigma_at = [&s](double u) { return 1.0 / s.beta(u); };
  const double tol = 1e-12 * (1.0 + t);
  auto A = [&](double u) { return detail::integrate(sigma_at, 1.0, u, tol); };

  // Bracket A(hi) >= t, then Newton with bisection fallback.
  double lo = 1.0, hi = std::max(2.0, t * s.beta(t));
  while (A(hi) < t) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e306) throw NumericError("sigma_time_change: inversion diverged");
  }
  double u = std::min(std::max(t * s.beta(t), lo), hi);
  double err = A(u) - t;
  for (int it = 0; it < 200 && std::fabs(err) > 0.5 * tol; ++it) {
    if (err > 0) hi = u; else lo = u;
    double step = u - err / sigma_at(u);
    if (!(step > lo && step < hi)) step = 0.5 * (lo + hi);
    u = step;
    err = A(u) - t;
  }
  SigmaTimeChange out;
  out.rho = u;
  out.sigma = sigma_at(u);
  out.roundtrip_error = std::fabs(err);
  return out;
}

}  // namespace anneal
