#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "anneal/experiments.hpp"

using namespace anneal;

namespace {

SimConfig small_sim(std::vector<double> x0, double T, double dt,
                    std::uint64_t seed) {
  SimConfig cfg;
  cfg.x0 = std::move(x0);
  cfg.T = T;
  cfg.dt = dt;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("zero potential always succeeds") {
  const Potential p = build_zero(2);
  const EstimateResult r = estimate_success(
      p, Schedule(1.0, 0.0), small_sim({0.0, 0.0}, 1.0, 0.05, 1), 0.1, 50);
  REQUIRE(r.point == 1.0);
  REQUIRE(r.successes == r.trials);
  REQUIRE(r.ci_low <= r.point);
  REQUIRE(r.ci_high == 1.0);
}

TEST_CASE("estimate invariants and guards") {
  const Potential p = build_quadratic(2);
  const Schedule s(1.0, 0.0);
  const SimConfig cfg = small_sim({0.5, 0.0}, 2.0, 0.05, 3);
  const EstimateResult r = estimate_success(p, s, cfg, 0.5, 40);
  REQUIRE(r.point == static_cast<double>(r.successes) / r.trials);
  REQUIRE(0.0 <= r.ci_low);
  REQUIRE(r.ci_low <= r.point);
  REQUIRE(r.point <= r.ci_high);
  REQUIRE(r.ci_high <= 1.0);
  REQUIRE_THROWS_AS(estimate_success(p, s, cfg, -1.0, 40), ConfigError);
  REQUIRE_THROWS_AS(estimate_containment(p, s, cfg, 0.1, 40), ConfigError);
  EscapeCriterion bad;
  bad.growth_factor = 0.5;
  REQUIRE_THROWS_AS(estimate_escape(p, s, cfg, bad, 40), ConfigError);
}

TEST_CASE("quadratic well: success high, escape zero, containment high") {
  const Potential p = build_quadratic(3);
  const Schedule s(1.0, 0.0);
  const SimConfig cfg = small_sim({1.0, 0.0, 0.0}, 200.0, 0.02, 1812);

  const EstimateResult succ = estimate_success(p, s, cfg, 0.5, 200);
  REQUIRE(succ.point >= 0.9);

  const EstimateResult esc = estimate_escape(p, s, cfg, EscapeCriterion{}, 200);
  REQUIRE(esc.successes == 0);

  const EstimateResult cont = estimate_containment(p, s, cfg, 10.0, 200);
  REQUIRE(cont.point >= 0.99);
}

TEST_CASE("transient Brownian motion escapes in d=3") {
  const Potential p = build_zero(3);
  const Schedule s(1.0, 0.0);
  const SimConfig cfg = small_sim({1.0, 0.0, 0.0}, 400.0, 0.05, 24);
  const EstimateResult esc = estimate_escape(p, s, cfg, EscapeCriterion{}, 100);
  REQUIRE(esc.ci_low > 0.0);
}

TEST_CASE("blown-up paths are escapes and never successes") {
  const Potential p = build_zero(3);
  const Schedule s(1.0, 0.0);
  SimConfig cfg = small_sim({1.0, 0.0, 0.0}, 400.0, 0.05, 77);
  cfg.blowup_radius = 5.0;  // every path trips the blow-up guard quickly
  const EstimateResult esc = estimate_escape(p, s, cfg, EscapeCriterion{}, 60);
  REQUIRE(esc.point == 1.0);
  const EstimateResult succ = estimate_success(p, s, cfg, 100.0, 60);
  REQUIRE(succ.successes == 0);
}

TEST_CASE("success counts are identical across thread counts") {
  const Potential p = build_quadratic(3);
  const Schedule s(1.0, 0.0);
  const SimConfig cfg = small_sim({1.0, 0.5, 0.0}, 50.0, 0.02, 991);
  const EstimateResult one = estimate_success(p, s, cfg, 0.75, 80, 0.95, 1);
  const EstimateResult three = estimate_success(p, s, cfg, 0.75, 80, 0.95, 3);
  const EstimateResult rerun = estimate_success(p, s, cfg, 0.75, 80, 0.95, 3);
  REQUIRE(one.successes == three.successes);
  REQUIRE(rerun.successes == three.successes);
}

TEST_CASE("loglog success separates the two cooling regimes at c=1") {
  // alpha=0.3 sits below c(d-2)/2 = 0.5 (escape regime), alpha=2 above it.
  const Schedule s(1.0, 0.0);
  const SimConfig cfg = small_sim({0.5, 0.0, 0.0}, 2000.0, 0.01, 314159);
  const EstimateResult low =
      estimate_success(build_loglog(0.3, 3), s, cfg, 0.5, 150, 0.95, 0);
  const EstimateResult high =
      estimate_success(build_loglog(2.0, 3), s, cfg, 0.5, 150, 0.95, 0);
  REQUIRE(high.ci_low > low.ci_high);
}

TEST_CASE("scan spec validation") {
  ScanSpec spec;
  spec.parameter = "alpha";
  spec.sim = small_sim({1.0, 0.0, 0.0}, 1.0, 0.1, 0);
  spec.trials_per_point = 50;

  spec.grid = {};
  REQUIRE_THROWS_AS(spec.validate(), ConfigError);
  spec.grid = {0.5, 0.25};
  REQUIRE_THROWS_AS(spec.validate(), ConfigError);
  spec.grid = {0.25, 0.5};
  spec.trials_per_point = 10;
  REQUIRE_THROWS_AS(spec.validate(), ConfigError);
  spec.trials_per_point = 50;
  REQUIRE_NOTHROW(spec.validate());

  // Grid must straddle c(d-2)/2 = 1.
  spec.grid = {1.5, 2.0};
  REQUIRE_THROWS_AS(transition_scan(spec, 2.0, 0.0, 3), ConfigError);

  REQUIRE_THROWS_AS(cstar_threshold_scan(build_quadratic(2), {}, 0.0, spec.sim,
                                         0.5, 50),
                    ConfigError);
  REQUIRE_THROWS_AS(cstar_threshold_scan(build_quadratic(2), {1.0, 0.5}, 0.0,
                                         spec.sim, 0.5, 50),
                    ConfigError);
}

TEST_CASE("transition scan produces both classifications per point") {
  // Short-horizon smoke run; the paper-scale scan lives in the acceptance
  // suite.
  ScanSpec spec;
  spec.parameter = "alpha";
  spec.grid = {0.5, 2.0};
  spec.sim = small_sim({1.0, 0.0, 0.0}, 50.0, 0.02, 606060);
  spec.trials_per_point = 40;
  spec.eps = 0.75;
  const TransitionScanResult res = transition_scan(spec, 2.0, 0.0, 3, 0);
  REQUIRE(res.rows.size() == 2);
  REQUIRE(res.threshold == 1.0);
  for (const auto& row : res.rows) {
    REQUIRE(row.escape.trials == 40);
    REQUIRE(row.success.trials == 40);
  }
}

TEST_CASE("double-well c-scan: success trend and plateau crossing") {
  // Success vs c is nondecreasing up to CI overlap on {0.5, 1.0, 1.5}; at
  // fixed horizon larger c eventually reverses the trend (still too hot at
  // T), so the scan grid stays in the freezing-bound range.
  const Potential p = build_double_well(2);
  SimConfig cfg = small_sim({3.001, 0.0}, 5000.0, 0.01, 5555);
  const CstarScanResult res =
      cstar_threshold_scan(p, {0.5, 1.0, 1.5}, 0.0, cfg, 0.45, 150, 0.95, 0);
  REQUIRE(res.rows.size() == 3);
  for (std::size_t i = 1; i < res.rows.size(); ++i) {
    REQUIRE(res.rows[i].success.ci_high >= res.rows[i - 1].success.ci_low);
  }
  // The smallest-c plateau is left behind by c=1.0.
  REQUIRE(res.crossing_c == 1.0);
  REQUIRE(res.rows[1].success.ci_low > res.rows[0].success.ci_high);
}

TEST_CASE("bessel property suite (trimmed sizes)") {
  BesselSuiteConfig cfg;
  cfg.seed = 42;
  cfg.n_kill = 300;
  cfg.n_survive = 300;
  cfg.n_paths = 40;
  cfg.T_long = 1e5;
  const BesselSuiteReport rep = bessel_property_suite(cfg, 0);
  REQUIRE(rep.checks.size() == 4);
  for (const auto& c : rep.checks) {
    INFO(c.name << " a=" << c.observed_a << " b=" << c.observed_b);
    REQUIRE(c.pass);
  }
  REQUIRE(rep.all_pass);
}
