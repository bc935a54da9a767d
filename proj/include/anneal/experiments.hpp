#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "anneal/potential.hpp"
#include "anneal/potentials_builtin.hpp"
#include "anneal/rng.hpp"
#include "anneal/schedule.hpp"
#include "anneal/sde.hpp"
#include "anneal/stats.hpp"

namespace anneal {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

// Runs fn(i) for i in [0,N) across threads and collects results by index, so
// aggregates are independent of scheduling.
template <typename T, typename F>
std::vector<T> parallel_map(long n, int threads, F&& fn) {
  std::vector<T> out(n);
  threads = std::min<long>(resolve_threads(threads), n);
  if (threads <= 1) {
    for (long i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<long> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const long i = next.fetch_add(1);
        if (i >= n) return;
        try {
          out[i] = fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return out;
}

struct EstimateResult {
  long successes = 0;
  long trials = 0;
  double point = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double level = 0.95;
  std::uint64_t master_seed = 0;
  double wall_time = 0.0;
};

inline EstimateResult make_estimate(long successes, long trials, double level,
                                    std::uint64_t master_seed, double wall) {
  const Interval iv = wilson_interval(successes, trials, level);
  EstimateResult r;
  r.successes = successes;
  r.trials = trials;
  r.point = iv.point;
  r.ci_low = iv.low;
  r.ci_high = iv.high;
  r.level = level;
  r.master_seed = master_seed;
  r.wall_time = wall;
  return r;
}

struct PathSummary {
  PathStatus status = PathStatus::completed;
  double terminal_radius = 0.0;
  double terminal_U = 0.0;
  double tail_min_radius = 0.0;
  double sup_radius = 0.0;
};

inline PathSummary summarize(const Trajectory& t) {
  PathSummary s;
  s.status = t.status;
  s.terminal_radius = norm2(t.terminal_state);
  s.terminal_U = t.terminal_U;
  s.tail_min_radius = t.tail_min_radius;
  s.sup_radius = t.sup_radius;
  return s;
}

// One ensemble of annealing paths; trial i runs on the substream derived
// from (cfg.seed, i). Paths are summarized, not stored.
inline std::vector<PathSummary> run_annealing_ensemble(const Potential& p,
                                                       const Schedule& s,
                                                       const SimConfig& cfg,
                                                       long n, int threads) {
  if (n <= 0) throw ConfigError("ensemble: trial count must be positive");
  return parallel_map<PathSummary>(n, threads, [&](long i) {
    SimConfig c = cfg;
    c.seed = derive_stream(cfg.seed, static_cast<std::uint64_t>(i));
    c.record_stride = 0;
    return summarize(simulate_annealing(p, s, c));
  });
}

struct EscapeCriterion {
  double growth_factor = 10.0;   // terminal radius vs initial
  double floor_fraction = 0.5;   // tail (last 10% of horizon) floor

  void validate() const {
    if (!(growth_factor > 1.0))
      throw ConfigError("escape: growth_factor must exceed 1");
    if (!(floor_fraction > 0.0 && floor_fraction < 1.0))
      throw ConfigError("escape: floor_fraction must be in (0,1)");
  }
};

inline bool classify_escaped(const PathSummary& s, const EscapeCriterion& crit,
                             double initial_radius) {
  if (s.status == PathStatus::blown_up) return true;
  return s.terminal_radius >= crit.growth_factor * initial_radius &&
         s.tail_min_radius >= crit.floor_fraction * s.terminal_radius;
}

inline bool classify_success(const PathSummary& s, double eps) {
  return s.status == PathStatus::completed && s.terminal_U < eps;
}

// Fraction of paths that finish with U(X_T) < eps; blown-up paths count as
// failures.
inline EstimateResult estimate_success(const Potential& p, const Schedule& s,
                                       const SimConfig& cfg, double eps, long n,
                                       double level = 0.95, int threads = 0) {
  if (!(eps > 0.0)) throw ConfigError("estimate_success: eps must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  const auto sums = run_annealing_ensemble(p, s, cfg, n, threads);
  long ok = 0;
  for (const auto& ps : sums) ok += classify_success(ps, eps) ? 1 : 0;
  const double wall = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0).count();
  return make_estimate(ok, n, level, cfg.seed, wall);
}

// Finite-horizon surrogate for divergence: blow-up, or terminal-radius growth
// with the tail floor holding.
inline EstimateResult estimate_escape(const Potential& p, const Schedule& s,
                                      const SimConfig& cfg,
                                      const EscapeCriterion& crit, long n,
                                      double level = 0.95, int threads = 0) {
  crit.validate();
  const double r0 = norm2(cfg.x0);
  const auto t0 = std::chrono::steady_clock::now();
  const auto sums = run_annealing_ensemble(p, s, cfg, n, threads);
  long ok = 0;
  for (const auto& ps : sums) ok += classify_escaped(ps, crit, r0) ? 1 : 0;
  const double wall = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0).count();
  return make_estimate(ok, n, level, cfg.seed, wall);
}

// Fraction of paths with sup_{t<=T} |X_t| < B.
inline EstimateResult estimate_containment(const Potential& p, const Schedule& s,
                                           const SimConfig& cfg, double B_radius,
                                           long n, double level = 0.95,
                                           int threads = 0) {
  if (!(B_radius > norm2(cfg.x0)))
    throw ConfigError("estimate_containment: B_radius must exceed |x0|");
  const auto t0 = std::chrono::steady_clock::now();
  const auto sums = run_annealing_ensemble(p, s, cfg, n, threads);
  long ok = 0;
  for (const auto& ps : sums) ok += (ps.sup_radius < B_radius) ? 1 : 0;
  const double wall = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0).count();
  return make_estimate(ok, n, level, cfg.seed, wall);
}

struct ScanSpec {
  std::string parameter;      // "alpha" or "c"
  std::vector<double> grid;
  SimConfig sim;
  long trials_per_point = 200;
  double eps = 0.5;
  EscapeCriterion escape;
  double level = 0.95;

  void validate() const {
    if (grid.empty()) throw ConfigError("scan: empty parameter grid");
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (!(grid[i] > grid[i - 1]))
        throw ConfigError("scan: grid must be strictly increasing");
    }
    if (trials_per_point < 30) throw ConfigError("scan: need N >= 30 per point");
    escape.validate();
  }
};

struct TransitionRow {
  double param = 0.0;
  EstimateResult escape;
  EstimateResult success;
};

struct TransitionScanResult {
  std::vector<TransitionRow> rows;
  double threshold = 0.0;  // c(d-2)/2
  // Crossing diagnostics; NaN when the side is empty.
  double largest_alpha_escaping = std::numeric_limits<double>::quiet_NaN();
  double smallest_alpha_succeeding = std::numeric_limits<double>::quiet_NaN();
};

// Scan over alpha for the loglog family at fixed (c, d): per point, one
// ensemble classified for both escape and success.
inline TransitionScanResult transition_scan(const ScanSpec& spec, double c,
                                            double beta0, int dim,
                                            int threads = 0) {
  spec.validate();
  const double threshold = c * (dim - 2) / 2.0;
  if (!(spec.grid.front() < threshold && spec.grid.back() > threshold))
    throw ConfigError("transition_scan: grid must straddle c(d-2)/2");
  const Schedule sched(c, beta0);
  TransitionScanResult out;
  out.threshold = threshold;
  const double r0 = norm2(spec.sim.x0);
  for (std::size_t k = 0; k < spec.grid.size(); ++k) {
    const double alpha = spec.grid[k];
    const Potential p = build_loglog(alpha, dim);
    SimConfig cfg = spec.sim;
    cfg.seed = derive_stream(spec.sim.seed, k);
    const auto t0 = std::chrono::steady_clock::now();
    const auto sums = run_annealing_ensemble(p, sched, cfg, spec.trials_per_point, threads);
    const double wall = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0).count();
    long esc = 0, suc = 0;
    for (const auto& ps : sums) {
      esc += classify_escaped(ps, spec.escape, r0) ? 1 : 0;
      suc += classify_success(ps, spec.eps) ? 1 : 0;
    }
    TransitionRow row;
    row.param = alpha;
    row.escape = make_estimate(esc, spec.trials_per_point, spec.level, cfg.seed, wall);
    row.success = make_estimate(suc, spec.trials_per_point, spec.level, cfg.seed, 0.0);
    out.rows.push_back(row);
  }
  for (const auto& row : out.rows) {
    if (row.escape.ci_low > 0.0) out.largest_alpha_escaping = row.param;
  }
  for (auto it = out.rows.rbegin(); it != out.rows.rend(); ++it) {
    if (it->success.ci_low > 0.0) out.smallest_alpha_succeeding = it->param;
  }
  return out;
}

struct CstarScanRow {
  double c = 0.0;
  EstimateResult success;
};

struct CstarScanResult {
  std::vector<CstarScanRow> rows;
  // Smallest c whose success CI lies above the smallest-c plateau; NaN if none.
  double crossing_c = std::numeric_limits<double>::quiet_NaN();
};

// Success vs cooling rate c for a fixed potential (the c > c* effect).
inline CstarScanResult cstar_threshold_scan(const Potential& p,
                                            const std::vector<double>& c_grid,
                                            double beta0, const SimConfig& cfg,
                                            double eps, long n,
                                            double level = 0.95,
                                            int threads = 0) {
  if (c_grid.empty()) throw ConfigError("cstar_threshold_scan: empty c grid");
  for (std::size_t i = 1; i < c_grid.size(); ++i) {
    if (!(c_grid[i] > c_grid[i - 1]))
      throw ConfigError("cstar_threshold_scan: c grid must be strictly increasing");
  }
  if (n < 30) throw ConfigError("cstar_threshold_scan: need N >= 30");
  CstarScanResult out;
  for (std::size_t k = 0; k < c_grid.size(); ++k) {
    SimConfig point_cfg = cfg;
    point_cfg.seed = derive_stream(cfg.seed, k);
    CstarScanRow row;
    row.c = c_grid[k];
    row.success = estimate_success(p, Schedule(c_grid[k], beta0), point_cfg, eps,
                                   n, level, threads);
    out.rows.push_back(row);
  }
  const double plateau_high = out.rows.front().success.ci_high;
  for (const auto& row : out.rows) {
    if (row.success.ci_low > plateau_high) {
      out.crossing_c = row.c;
      break;
    }
  }
  return out;
}

struct BesselSuiteConfig {
  double dt = 0.01;
  double dt_long = 0.05;  // long-horizon growth/sup checks
  std::uint64_t seed = 0;

  double delta_kill = 1.5;
  double r0_kill = 0.05;
  double T_kill = 500.0;
  long n_kill = 500;
  double kill_threshold = 0.90;

  double delta_survive = 3.0;
  double r0_survive = 1.0;
  double T_survive = 100.0;
  long n_survive = 500;
  double survive_threshold = 0.02;

  double delta_sup = 3.0;     // limsup check, (t log t)^{-1/2} scaling
  double delta_growth = 4.0;  // liminf check, nu = 4/(delta-2)
  double T_short = 1e3;
  double T_long = 1e5;
  long n_paths = 100;
  double r_kill = 1e-3;
};

struct BesselCheck {
  std::string name;
  bool pass = false;
  double observed_a = 0.0;
  double observed_b = 0.0;
  double threshold = 0.0;
};

struct BesselSuiteReport {
  std::vector<BesselCheck> checks;
  bool all_pass = false;
};

namespace detail {

struct WindowStats {
  double sup_lo, sup_hi;  // sup of f over the short/long windows
  double inf_lo, inf_hi;  // inf of g over the short/long windows
};

template <typename FnF, typename FnG>
inline WindowStats bessel_window_stats(const Trajectory& traj, double T_short,
                                       double T_long, FnF&& f, FnG&& g) {
  WindowStats ws;
  ws.sup_lo = ws.sup_hi = -std::numeric_limits<double>::infinity();
  ws.inf_lo = ws.inf_hi = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < traj.samples(); ++i) {
    const double t = traj.times[i];
    if (t < 10.0) continue;
    const double r = traj.state(i)[0];
    if (t >= T_short / 10.0 && t <= T_short) ws.sup_lo = std::max(ws.sup_lo, f(t, r));
    if (t >= T_long / 10.0 && t <= T_long) ws.sup_hi = std::max(ws.sup_hi, f(t, r));
    if (t >= T_short / 2.0 && t <= T_short) ws.inf_lo = std::min(ws.inf_lo, g(t, r));
    if (t >= T_long / 2.0 && t <= T_long) ws.inf_hi = std::min(ws.inf_hi, g(t, r));
  }
  return ws;
}

}  // namespace detail

// Empirical checks of the four Bessel facts: absorption for delta < 2,
// survival for delta >= 2, the (t log t)^{-1/2} sup decay, and the
// t^{-1/2} (log t)^{-nu} lower growth with nu = 4/(delta-2).
inline BesselSuiteReport bessel_property_suite(const BesselSuiteConfig& cfg,
                                               int threads = 0) {
  BesselSuiteReport rep;

  auto kill_fraction = [&](double delta, double r0, double T, long n,
                           std::uint64_t salt) {
    const auto killed = parallel_map<char>(n, threads, [&](long i) {
      SimConfig c;
      c.x0 = {r0};
      c.T = T;
      c.dt = cfg.dt;
      c.r_kill = cfg.r_kill;
      c.record_stride = 0;
      c.seed = derive_stream(derive_stream(cfg.seed, salt), i);
      const Trajectory t = simulate_radial(bessel_process(delta, r0), c);
      return static_cast<char>(t.status == PathStatus::killed);
    });
    long k = 0;
    for (char c : killed) k += c;
    return static_cast<double>(k) / static_cast<double>(n);
  };

  {
    const double frac = kill_fraction(cfg.delta_kill, cfg.r0_kill, cfg.T_kill,
                                      cfg.n_kill, 1);
    rep.checks.push_back({"absorption_delta_lt_2", frac >= cfg.kill_threshold,
                          frac, 0.0, cfg.kill_threshold});
  }
  {
    const double frac = kill_fraction(cfg.delta_survive, cfg.r0_survive,
                                      cfg.T_survive, cfg.n_survive, 2);
    rep.checks.push_back({"survival_delta_ge_2", frac <= cfg.survive_threshold,
                          frac, 0.0, cfg.survive_threshold});
  }

  const double nu = 4.0 / (cfg.delta_growth - 2.0);
  auto window_run = [&](double delta, double r0, std::uint64_t salt) {
    return parallel_map<detail::WindowStats>(cfg.n_paths, threads, [&](long i) {
      SimConfig c;
      c.x0 = {r0};
      c.T = cfg.T_long;
      c.dt = cfg.dt_long;
      c.r_kill = cfg.r_kill;
      c.record_stride = 8;
      c.blowup_radius = 1e9;
      c.seed = derive_stream(derive_stream(cfg.seed, salt), i);
      const Trajectory traj = simulate_radial(bessel_process(delta, r0), c);
      return detail::bessel_window_stats(
          traj, cfg.T_short, cfg.T_long,
          [](double t, double r) { return r / std::sqrt(t * std::log(t)); },
          [nu](double t, double r) {
            return r * std::pow(std::log(t), nu) / std::sqrt(t);
          });
    });
  };

  {
    const auto stats = window_run(cfg.delta_sup, cfg.r0_survive, 3);
    std::vector<double> lo, hi;
    for (const auto& ws : stats) {
      lo.push_back(ws.sup_lo);
      hi.push_back(ws.sup_hi);
    }
    const double med_lo = sample_median(lo), med_hi = sample_median(hi);
    rep.checks.push_back({"sup_decay_delta_ge_2", med_hi < med_lo, med_lo,
                          med_hi, 0.0});
  }
  {
    const auto stats = window_run(cfg.delta_growth, cfg.r0_survive, 4);
    std::vector<double> lo, hi;
    for (const auto& ws : stats) {
      lo.push_back(ws.inf_lo);
      hi.push_back(ws.inf_hi);
    }
    const double med_lo = sample_median(lo), med_hi = sample_median(hi);
    rep.checks.push_back({"lower_growth_delta_gt_2", med_hi > med_lo, med_lo,
                          med_hi, 0.0});
  }

  rep.all_pass = true;
  for (const auto& c : rep.checks) rep.all_pass = rep.all_pass && c.pass;
  return rep;
}

}  // namespace anneal
