#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "anneal/errors.hpp"
#include "anneal/potential.hpp"
#include "anneal/rng.hpp"
#include "anneal/schedule.hpp"

namespace anneal {

struct SimConfig {
  std::vector<double> x0;
  double T = 1.0;
  double dt = 1e-2;
  double blowup_radius = 1e6;  // finite surrogate for the explosion time
  std::uint64_t seed = 0;
  long record_stride = 1;  // <= 0 records endpoints only
  double r_kill = 1e-3;    // absorption threshold for killed 1-d processes
  int drift_dim = 0;       // d in radial drifts; 0 = deduce from x0

  void validate() const {
    if (x0.empty()) throw ConfigError("sim: x0 must be non-empty");
    for (double v : x0) {
      if (!std::isfinite(v)) throw ConfigError("sim: x0 must be finite");
    }
    if (!(dt > 0.0)) throw ConfigError("sim: dt must be positive");
    if (!(T > 0.0)) throw ConfigError("sim: T must be positive");
    if (!(dt <= T)) throw ConfigError("sim: dt must not exceed T");
    if (!(blowup_radius > norm2(x0)))
      throw ConfigError("sim: blowup_radius must exceed |x0|");
    if (!(r_kill > 0.0)) throw ConfigError("sim: r_kill must be positive");
  }

  int radial_dim() const {
    return drift_dim > 0 ? drift_dim : static_cast<int>(x0.size());
  }
};

enum class PathStatus { completed, blown_up, killed };

inline const char* to_string(PathStatus s) {
  switch (s) {
    case PathStatus::completed: return "completed";
    case PathStatus::blown_up: return "blown_up";
    case PathStatus::killed: return "killed";
  }
  return "?";
}

struct Trajectory {
  int dim = 1;
  std::vector<double> times;   // recorded instants, times[0] = 0
  std::vector<double> states;  // dim-strided, aligned with times
  PathStatus status = PathStatus::completed;
  double terminal_time = 0.0;
  std::vector<double> terminal_state;
  double terminal_U = std::numeric_limits<double>::quiet_NaN();
  double sup_radius = 0.0;
  double tail_min_radius = std::numeric_limits<double>::infinity();  // over [0.9T, T]
  std::uint64_t seed = 0;
  long steps = 0;
  int reflections = 0;

  std::size_t samples() const { return times.size(); }
  std::span<const double> state(std::size_t i) const {
    return {states.data() + i * dim, static_cast<std::size_t>(dim)};
  }
};

namespace detail {

class Recorder {
 public:
  Recorder(Trajectory& traj, long stride) : traj_(traj), stride_(stride) {}

  void push(double t, std::span<const double> x, bool force) {
    ++count_;
    if (!force && (stride_ <= 0 || count_ % stride_ != 0)) return;
    if (!traj_.times.empty() && traj_.times.back() == t) return;
    traj_.times.push_back(t);
    traj_.states.insert(traj_.states.end(), x.begin(), x.end());
  }

 private:
  Trajectory& traj_;
  long stride_;
  long count_ = -1;  // so the initial state is always recorded
};

}  // namespace detail

// Euler-Maruyama path of dX = dB - (1/2) beta_t grad U(X) dt with the
// substep h = min(dt, 0.1 / (1 + beta |grad U|)) bounding the deterministic
// displacement; beta is evaluated at the left endpoint of each substep.
inline Trajectory simulate_annealing(const Potential& p, const Schedule& s,
                                     const SimConfig& cfg) {
  cfg.validate();
  if (p.dim != static_cast<int>(cfg.x0.size()))
    throw ConfigError("simulate_annealing: x0 dimension mismatch");
  const int d = p.dim;
  GaussianStream noise(cfg.seed);
  Trajectory traj;
  traj.dim = d;
  traj.seed = cfg.seed;
  detail::Recorder rec(traj, cfg.record_stride);

  std::vector<double> x = cfg.x0;
  std::vector<double> g(d);
  double t = 0.0;
  const double tail_start = 0.9 * cfg.T;
  double r = norm2(x);
  traj.sup_radius = r;
  rec.push(t, x, true);

  while (t < cfg.T) {
    p.gradient_into(x, g);
    const double beta = s.beta(t);
    const double gnorm = norm2(g);
    double h = std::min(cfg.dt, 0.1 / (1.0 + beta * gnorm));
    h = std::min(h, cfg.T - t);
    const double sqh = std::sqrt(h);
    for (int i = 0; i < d; ++i)
      x[i] += sqh * noise.next() - 0.5 * beta * g[i] * h;
    t += h;
    ++traj.steps;
    r = norm2(x);
    if (!std::isfinite(r)) {
      std::ostringstream os;
      os << "simulate_annealing: non-finite state at t=" << t
         << " step=" << traj.steps << " h=" << h;
      throw NumericError(os.str(), x);
    }
    traj.sup_radius = std::max(traj.sup_radius, r);
    if (t >= tail_start) traj.tail_min_radius = std::min(traj.tail_min_radius, r);
    if (r >= cfg.blowup_radius) {
      traj.status = PathStatus::blown_up;
      rec.push(t, x, true);
      break;
    }
    rec.push(t, x, t >= cfg.T);
  }
  if (traj.status != PathStatus::blown_up) traj.status = PathStatus::completed;
  traj.terminal_time = t;
  traj.terminal_state = x;
  try {
    traj.terminal_U = p.evaluate(x);
  } catch (const RangeError&) {
    traj.terminal_U = std::numeric_limits<double>::infinity();
  }
  return traj;
}

// A scalar diffusion dR = dW + b(R, t) dt on (0, infinity).
struct RadialProcess {
  std::string name;
  double r0 = 1.0;
  std::function<double(double r, double t)> drift;
  bool singular_origin = true;  // adds the substep cap h <= (r/4)^2
  bool killed = false;          // absorbed at kill_level (default cfg.r_kill)
  double kill_level = std::numeric_limits<double>::quiet_NaN();

  double effective_kill_level(const SimConfig& cfg) const {
    return std::isfinite(kill_level) ? kill_level : cfg.r_kill;
  }
};

// Killed Bessel process of dimension delta started from r0.
inline RadialProcess bessel_process(double delta, double r0) {
  if (!(delta > 0.0)) throw ConfigError("bessel: delta must be positive");
  if (!(r0 > 0.0)) throw ConfigError("bessel: r0 must be positive");
  RadialProcess proc;
  std::ostringstream os;
  os << "bessel(delta=" << delta << ")";
  proc.name = os.str();
  proc.r0 = r0;
  proc.drift = [delta](double r, double) { return (delta - 1.0) / (2.0 * r); };
  proc.killed = true;
  return proc;
}

// Comparison process started at c*delta with the log(1+s) pull-down.
inline RadialProcess comparison_S_process(double delta, const Schedule& s, int dim) {
  if (!(delta > 0.0)) throw ConfigError("comparison_S: delta must be positive");
  if (s.beta0 != 0.0) throw ConfigError("comparison_S: schedule must have beta0 = 0");
  if (s.frozen_beta()) throw ConfigError("comparison_S: schedule must have finite c");
  if (dim < 2) throw ConfigError("comparison_S: dim must be >= 2");
  const double c = s.c;
  RadialProcess proc;
  std::ostringstream os;
  os << "S(delta=" << delta << ",c=" << c << ",d=" << dim << ")";
  proc.name = os.str();
  proc.r0 = c * delta;
  proc.drift = [delta, c, dim](double r, double t) {
    return (dim - 1.0) / (2.0 * r) - std::log1p(t) / (2.0 * c * delta);
  };
  return proc;
}

// Comparison process started at c with the log(1 + s/(2 kappa)^2) pull-down.
inline RadialProcess comparison_R_process(double kappa, const Schedule& s, int dim) {
  if (!(kappa > 0.0)) throw ConfigError("comparison_R: kappa must be positive");
  if (s.beta0 != 0.0) throw ConfigError("comparison_R: schedule must have beta0 = 0");
  if (s.frozen_beta()) throw ConfigError("comparison_R: schedule must have finite c");
  if (dim < 2) throw ConfigError("comparison_R: dim must be >= 2");
  const double c = s.c;
  const double inv4k2 = 1.0 / ((2.0 * kappa) * (2.0 * kappa));
  RadialProcess proc;
  std::ostringstream os;
  os << "R(kappa=" << kappa << ",c=" << c << ",d=" << dim << ")";
  proc.name = os.str();
  proc.r0 = c;
  proc.drift = [c, dim, inv4k2](double r, double t) {
    return (dim - 1.0) / (2.0 * r) - std::log1p(t * inv4k2) / (2.0 * c);
  };
  return proc;
}

// Radial Ito projection of the annealing diffusion for a radial potential:
// dR = dW + [(d-1)/(2R) - beta_t h'(R)/2] dt.
inline RadialProcess radial_annealing_process(const Potential& p,
                                              const Schedule& s, double r0) {
  if (!p.radial())
    throw ConfigError("radial_annealing_process: potential is not radial");
  if (!(r0 > 0.0)) throw ConfigError("radial_annealing_process: r0 must be positive");
  const RadialProfile prof = *p.profile;
  const int d = p.dim;
  const Schedule sched = s;
  RadialProcess proc;
  proc.name = "radial_annealing(" + p.name + ")";
  proc.r0 = r0;
  proc.drift = [prof, sched, d](double r, double t) {
    return (d - 1.0) / (2.0 * r) - 0.5 * sched.beta(t) * prof.d1(r);
  };
  return proc;
}

// Envelope process with the H1-style pull a*beta_t/(2 r log r); only valid on
// r > 1, so pair it with a kill level at A0.
inline RadialProcess h1_envelope_process(double a, const Schedule& s, int dim,
                                         double r0, double A0) {
  if (!(a > 0.0)) throw ConfigError("h1_envelope: a must be positive");
  if (!(A0 > 1.0) || !(r0 > A0))
    throw ConfigError("h1_envelope: need r0 > A0 > 1");
  const Schedule sched = s;
  RadialProcess proc;
  std::ostringstream os;
  os << "h1_envelope(a=" << a << ",d=" << dim << ")";
  proc.name = os.str();
  proc.r0 = r0;
  proc.drift = [a, sched, dim](double r, double t) {
    return (dim - 1.0) / (2.0 * r) -
           a * sched.beta(t) / (2.0 * r * std::log(r));
  };
  proc.killed = true;
  proc.kill_level = A0;
  return proc;
}

namespace detail {

inline double radial_substep(const RadialProcess& proc, double r, double t,
                             double dt, double remaining, double& drift_out) {
  const double b = proc.drift(r, t);
  drift_out = b;
  double h = std::min(dt, 0.1 / (1.0 + std::fabs(b)));
  if (proc.singular_origin) h = std::min(h, (r / 4.0) * (r / 4.0));
  return std::min(h, remaining);
}

}  // namespace detail

// Euler-Maruyama for a RadialProcess; negative overshoots reflect. r0 is
// taken from the process, not from cfg.x0.
inline Trajectory simulate_radial(const RadialProcess& proc, const SimConfig& cfg) {
  SimConfig checked = cfg;
  checked.x0 = {proc.r0};
  checked.validate();
  GaussianStream noise(cfg.seed);
  Trajectory traj;
  traj.dim = 1;
  traj.seed = cfg.seed;
  detail::Recorder rec(traj, cfg.record_stride);

  const double kill_level = proc.effective_kill_level(cfg);
  double r = proc.r0;
  double t = 0.0;
  const double tail_start = 0.9 * cfg.T;
  traj.sup_radius = r;
  rec.push(t, {&r, 1}, true);

  while (t < cfg.T) {
    double b = 0.0;
    const double h = detail::radial_substep(proc, r, t, cfg.dt, cfg.T - t, b);
    r += std::sqrt(h) * noise.next() + b * h;
    if (r < 0.0) {
      r = -r;
      ++traj.reflections;
    }
    t += h;
    ++traj.steps;
    if (!std::isfinite(r)) {
      std::ostringstream os;
      os << proc.name << ": non-finite state at t=" << t << " step=" << traj.steps;
      throw NumericError(os.str(), {r});
    }
    traj.sup_radius = std::max(traj.sup_radius, r);
    if (t >= tail_start) traj.tail_min_radius = std::min(traj.tail_min_radius, r);
    if (proc.killed && r <= kill_level) {
      traj.status = PathStatus::killed;
      rec.push(t, {&r, 1}, true);
      break;
    }
    if (r >= cfg.blowup_radius) {
      traj.status = PathStatus::blown_up;
      rec.push(t, {&r, 1}, true);
      break;
    }
    rec.push(t, {&r, 1}, t >= cfg.T);
  }
  if (traj.status != PathStatus::killed && traj.status != PathStatus::blown_up)
    traj.status = PathStatus::completed;
  traj.terminal_time = t;
  traj.terminal_state = {r};
  return traj;
}

struct DominationReport {
  long steps = 0;
  long violations = 0;        // ordering failures beyond tolerance
  double max_excess = 0.0;    // worst (dominated - dominating)
  double tol_factor = 10.0;   // tol = factor * sqrt(dt) * eps * max(1, |upper|)
};

struct CoupledResult {
  Trajectory dominated;
  Trajectory dominating;
  DominationReport report;
};

// Runs two radial processes on one Brownian stream with a common substep and
// counts ordering violations beyond tol_dom. Either process's kill level
// stops both paths. Identical drifts reproduce identical floats.
inline CoupledResult coupled_radial_domination(const RadialProcess& lower,
                                               const RadialProcess& upper,
                                               const SimConfig& cfg,
                                               double tol_factor = 10.0) {
  SimConfig checked = cfg;
  checked.x0 = {lower.r0};
  checked.validate();
  GaussianStream noise(cfg.seed);
  CoupledResult out;
  out.report.tol_factor = tol_factor;
  Trajectory& lo = out.dominated;
  Trajectory& up = out.dominating;
  lo.dim = up.dim = 1;
  lo.seed = up.seed = cfg.seed;
  detail::Recorder rec_lo(lo, cfg.record_stride), rec_up(up, cfg.record_stride);

  double rl = lower.r0, ru = upper.r0;
  double t = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  lo.sup_radius = rl;
  up.sup_radius = ru;
  rec_lo.push(t, {&rl, 1}, true);
  rec_up.push(t, {&ru, 1}, true);

  PathStatus status = PathStatus::completed;
  while (t < cfg.T) {
    double bl = 0.0, bu = 0.0;
    const double hl = detail::radial_substep(lower, rl, t, cfg.dt, cfg.T - t, bl);
    const double hu = detail::radial_substep(upper, ru, t, cfg.dt, cfg.T - t, bu);
    const double h = std::min(hl, hu);
    const double dw = std::sqrt(h) * noise.next();
    rl += dw + bl * h;
    ru += dw + bu * h;
    if (rl < 0.0) { rl = -rl; ++lo.reflections; }
    if (ru < 0.0) { ru = -ru; ++up.reflections; }
    t += h;
    ++out.report.steps;
    if (!std::isfinite(rl) || !std::isfinite(ru))
      throw NumericError("coupled_radial_domination: non-finite state", {rl, ru});
    lo.sup_radius = std::max(lo.sup_radius, rl);
    up.sup_radius = std::max(up.sup_radius, ru);
    const double tol = tol_factor * std::sqrt(cfg.dt) * eps * std::max(1.0, std::fabs(ru));
    const double excess = rl - ru;
    if (excess > tol) {
      ++out.report.violations;
      out.report.max_excess = std::max(out.report.max_excess, excess);
    }
    const bool kill_lo = lower.killed && rl <= lower.effective_kill_level(cfg);
    const bool kill_up = upper.killed && ru <= upper.effective_kill_level(cfg);
    if (kill_lo || kill_up) status = PathStatus::killed;
    if (rl >= cfg.blowup_radius || ru >= cfg.blowup_radius)
      status = PathStatus::blown_up;
    const bool stop = status != PathStatus::completed || t >= cfg.T;
    rec_lo.push(t, {&rl, 1}, stop);
    rec_up.push(t, {&ru, 1}, stop);
    if (stop && t < cfg.T) break;
  }
  lo.status = up.status = status;
  lo.terminal_time = up.terminal_time = t;
  lo.terminal_state = {rl};
  up.terminal_state = {ru};
  return out;
}

// Convenience wrapper mirroring the lab's usual pairing: the radial annealing
// projection of a radial potential dominated by a named comparison process.
inline CoupledResult coupled_radial_domination(const Potential& p,
                                               const Schedule& s,
                                               const SimConfig& cfg,
                                               const RadialProcess& comparison,
                                               double tol_factor = 10.0) {
  RadialProcess lower = radial_annealing_process(p, s, comparison.r0);
  lower.killed = comparison.killed;
  lower.kill_level = comparison.kill_level;
  return coupled_radial_domination(lower, comparison, cfg, tol_factor);
}

}  // namespace anneal
