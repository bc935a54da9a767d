#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "anneal/config.hpp"
#include "anneal/grid.hpp"
#include "anneal/io.hpp"
#include "anneal/landscape.hpp"
#include "anneal/version.hpp"

namespace anneal {

struct RunOptions {
  std::string command;            // must agree with config when both present
  std::filesystem::path config_path;
  std::filesystem::path out_dir;  // overrides config "out"
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string format = "csv";     // "csv" or "json" for tabular artifacts
};

namespace detail {

inline constexpr std::initializer_list<const char*> kTopKeys = {
    "command", "potential", "schedule", "sim",    "landscape", "check",
    "scan",    "suite",     "compare",  "bessel", "experiment", "out",
    "seed",    "threads",   "format"};

inline void emit_estimate_table(const std::filesystem::path& dir,
                                const std::string& stem,
                                const std::vector<std::pair<double, EstimateResult>>& rows,
                                const std::string& format) {
  if (format == "json") {
    json arr = json::array();
    for (const auto& [param, est] : rows) {
      json row = to_json(est);
      row["param"] = param;
      arr.push_back(row);
    }
    write_json(dir / (stem + ".json"), arr);
    return;
  }
  std::string csv = kEstimateCsvHeader;
  for (const auto& [param, est] : rows) csv += estimate_csv_row(param, est);
  write_text(dir / (stem + ".csv"), csv);
}

}  // namespace detail

// Executes one command. Throws ConfigError / NumericError / BudgetError for
// the CLI to map onto exit codes 2 / 3 / 4.
inline void run_config(const nlohmann::json& doc, const RunOptions& opt) {
  ConfigView top(doc, "config");
  top.allow_keys(detail::kTopKeys);

  std::string command = top.text_or("command", opt.command);
  if (!opt.command.empty()) {
    if (!command.empty() && command != opt.command)
      throw ConfigError("config.command '" + command +
                        "' conflicts with CLI subcommand '" + opt.command + "'");
    command = opt.command;
  }
  if (command.empty()) throw ConfigError("config.command: missing");

  std::filesystem::path out =
      !opt.out_dir.empty() ? opt.out_dir
                           : std::filesystem::path(top.text_or("out", "out"));
  std::filesystem::create_directories(out);
  const int threads =
      opt.threads > 0 ? opt.threads
                      : static_cast<int>(top.integer_or("threads", 0));
  const std::string format = opt.format.empty() ? "csv" : opt.format;
  if (format != "csv" && format != "json")
    throw ConfigError("format: expected 'csv' or 'json'");

  // Effective seed: CLI flag > sim.seed in the file.
  auto apply_seed = [&](SimConfig& cfg) {
    if (opt.seed) cfg.seed = *opt.seed;
  };

  json manifest{{"command", command},
                {"config", doc},
                {"version", kVersion},
                {"rng", kRngId},
                {"gaussian_sampler", kGaussianSamplerId},
                {"threads", threads},
                {"format", format}};
  if (opt.seed) manifest["seed_override"] = *opt.seed;

  if (command == "simulate") {
    const Potential p = make_potential(top.child("potential"));
    const Schedule s = make_schedule(top.child("schedule"));
    SimConfig cfg = make_sim(top.child("sim"));
    apply_seed(cfg);
    const Trajectory t = simulate_annealing(p, s, cfg);
    write_text(out / "trajectory.csv", trajectory_csv(t, &p, &s));
    write_json(out / "summary.json", trajectory_summary_json(t));
  } else if (command == "bessel") {
    const ConfigView bes = top.child("bessel");
    bes.allow_keys({"delta"});
    SimConfig cfg = make_sim(top.child("sim"));
    apply_seed(cfg);
    const RadialProcess proc = bessel_process(bes.number("delta"), cfg.x0.at(0));
    const Trajectory t = simulate_radial(proc, cfg);
    write_text(out / "trajectory.csv", trajectory_csv(t, nullptr, nullptr));
    write_json(out / "summary.json", trajectory_summary_json(t));
  } else if (command == "compare") {
    const ConfigView cmp = top.child("compare");
    cmp.allow_keys({"dominated", "dominating", "seeds", "tol_factor"});
    const Schedule s = make_schedule(top.child("schedule"));
    SimConfig cfg = make_sim(top.child("sim"));
    apply_seed(cfg);
    const int dim = cfg.radial_dim();

    auto build_process = [&](const ConfigView& v) -> RadialProcess {
      v.allow_keys({"type", "delta", "kappa", "a", "A0", "r0", "potential"});
      const std::string type = v.text("type");
      if (type == "bessel")
        return bessel_process(v.number("delta"), v.number_or("r0", cfg.x0.at(0)));
      if (type == "S") return comparison_S_process(v.number("delta"), s, dim);
      if (type == "R") return comparison_R_process(v.number("kappa"), s, dim);
      if (type == "annealing_radial") {
        const Potential p = make_potential(v.child("potential"));
        return radial_annealing_process(p, s, v.number_or("r0", cfg.x0.at(0)));
      }
      if (type == "h1_envelope")
        return h1_envelope_process(v.number("a"), s, dim,
                                   v.number_or("r0", cfg.x0.at(0)),
                                   v.number("A0"));
      throw ConfigError(v.path() + ".type: unknown process '" + type + "'");
    };
    RadialProcess lower = build_process(cmp.child("dominated"));
    RadialProcess upper = build_process(cmp.child("dominating"));
    if (upper.killed && !lower.killed) {
      lower.killed = true;
      lower.kill_level = upper.kill_level;
    }
    const long seeds = cmp.integer_or("seeds", 1);
    const double tol_factor = cmp.number_or("tol_factor", 10.0);
    long violations = 0, steps = 0;
    double max_excess = 0.0;
    for (long i = 0; i < seeds; ++i) {
      SimConfig cfg_i = cfg;
      cfg_i.seed = derive_stream(cfg.seed, i);
      const CoupledResult res =
          coupled_radial_domination(lower, upper, cfg_i, tol_factor);
      violations += res.report.violations;
      steps += res.report.steps;
      max_excess = std::max(max_excess, res.report.max_excess);
      if (i == 0) {
        std::string csv = "t,dominated,dominating\n";
        for (std::size_t k = 0; k < res.dominated.samples(); ++k) {
          csv += csv_num(res.dominated.times[k]) + "," +
                 csv_num(res.dominated.state(k)[0]) + "," +
                 csv_num(res.dominating.state(k)[0]) + "\n";
        }
        write_text(out / "paths.csv", csv);
      }
    }
    write_json(out / "domination.json",
               json{{"dominated", lower.name},
                    {"dominating", upper.name},
                    {"seeds", seeds},
                    {"steps", steps},
                    {"violations", violations},
                    {"max_excess", max_excess},
                    {"tol_factor", tol_factor}});
  } else if (command == "cstar") {
    const Potential p = make_potential(top.child("potential"));
    const ConfigView land = top.child("landscape");
    land.allow_keys({"resolution", "r_max", "box", "connectivity"});
    const int resolution = static_cast<int>(land.integer("resolution"));
    const std::string conn_name = land.text_or("connectivity", "von_neumann");
    const Connectivity conn = conn_name == "moore" ? Connectivity::moore
                                                   : Connectivity::von_neumann;
    GridGraph g = [&] {
      if (land.has("r_max")) {
        if (!p.radial())
          throw ConfigError("landscape.r_max: radial grid needs a radial potential");
        return discretize_radial_profile(p, land.number("r_max"), resolution);
      }
      const ConfigView boxv = land.child("box");
      boxv.allow_keys({"lo", "hi"});
      Box box;
      box.lo = boxv.numbers("lo");
      box.hi = boxv.numbers("hi");
      return discretize(p, box, resolution, conn);
    }();
    write_json(out / "cstar.json", to_json(estimate_cstar(g)));
  } else if (command == "check") {
    const Potential p = make_potential(top.child("potential"));
    const ConfigView chk = top.child("check");
    chk.allow_keys({"which", "h1", "h2", "h3", "budget"});
    const SamplingBudget budget = make_budget(chk.maybe_child("budget"));
    const std::string which = chk.text("which");
    CheckReport rep;
    if (which == "h1") rep = check_h1(p, make_h1(chk.child("h1")), budget);
    else if (which == "h2") rep = check_h2(p, make_h2(chk.child("h2")), budget);
    else if (which == "h3") rep = check_h3_radial(p, make_h3(chk.child("h3")), budget);
    else throw ConfigError("check.which: expected h1, h2 or h3");
    write_json(out / "check.json", to_json(rep));
  } else if (command == "scan") {
    const ConfigView scan = top.child("scan");
    scan.allow_keys({"parameter", "grid", "n", "eps", "escape", "level", "c",
                     "beta0", "dim"});
    SimConfig cfg = make_sim(top.child("sim"));
    apply_seed(cfg);
    const std::string parameter = scan.text("parameter");
    if (parameter == "alpha") {
      ScanSpec spec;
      spec.parameter = parameter;
      spec.grid = scan.numbers("grid");
      spec.sim = cfg;
      spec.trials_per_point = scan.integer("n");
      spec.eps = scan.number("eps");
      spec.escape = make_escape(scan.maybe_child("escape"));
      spec.level = scan.number_or("level", 0.95);
      const TransitionScanResult res =
          transition_scan(spec, scan.number("c"), scan.number_or("beta0", 0.0),
                          static_cast<int>(scan.integer("dim")), threads);
      std::vector<std::pair<double, EstimateResult>> esc, suc;
      for (const auto& row : res.rows) {
        esc.emplace_back(row.param, row.escape);
        suc.emplace_back(row.param, row.success);
      }
      detail::emit_estimate_table(out, "scan_escape", esc, format);
      detail::emit_estimate_table(out, "scan_success", suc, format);
      json diag{{"threshold", res.threshold}};
      if (!std::isnan(res.largest_alpha_escaping))
        diag["largest_alpha_escaping"] = res.largest_alpha_escaping;
      if (!std::isnan(res.smallest_alpha_succeeding))
        diag["smallest_alpha_succeeding"] = res.smallest_alpha_succeeding;
      write_json(out / "scan.json", diag);
    } else if (parameter == "c") {
      const Potential p = make_potential(top.child("potential"));
      const CstarScanResult res = cstar_threshold_scan(
          p, scan.numbers("grid"), scan.number_or("beta0", 0.0), cfg,
          scan.number("eps"), scan.integer("n"), scan.number_or("level", 0.95),
          threads);
      std::vector<std::pair<double, EstimateResult>> rows;
      for (const auto& row : res.rows) rows.emplace_back(row.c, row.success);
      detail::emit_estimate_table(out, "scan_success", rows, format);
      json diag = json::object();
      if (!std::isnan(res.crossing_c)) diag["crossing_c"] = res.crossing_c;
      write_json(out / "scan.json", diag);
    } else {
      throw ConfigError("scan.parameter: expected 'alpha' or 'c'");
    }
  } else if (command == "suite") {
    const ConfigView sv = top.child("suite");
    sv.allow_keys({"dt", "dt_long", "seed", "delta_kill", "r0_kill", "T_kill",
                   "n_kill", "kill_threshold", "delta_survive", "r0_survive",
                   "T_survive", "n_survive", "survive_threshold", "delta_sup",
                   "delta_growth", "T_short", "T_long", "n_paths", "r_kill"});
    BesselSuiteConfig cfg;
    cfg.dt = sv.number_or("dt", cfg.dt);
    cfg.dt_long = sv.number_or("dt_long", cfg.dt_long);
    cfg.seed = sv.seed_or("seed", cfg.seed);
    if (opt.seed) cfg.seed = *opt.seed;
    cfg.delta_kill = sv.number_or("delta_kill", cfg.delta_kill);
    cfg.r0_kill = sv.number_or("r0_kill", cfg.r0_kill);
    cfg.T_kill = sv.number_or("T_kill", cfg.T_kill);
    cfg.n_kill = sv.integer_or("n_kill", cfg.n_kill);
    cfg.kill_threshold = sv.number_or("kill_threshold", cfg.kill_threshold);
    cfg.delta_survive = sv.number_or("delta_survive", cfg.delta_survive);
    cfg.r0_survive = sv.number_or("r0_survive", cfg.r0_survive);
    cfg.T_survive = sv.number_or("T_survive", cfg.T_survive);
    cfg.n_survive = sv.integer_or("n_survive", cfg.n_survive);
    cfg.survive_threshold = sv.number_or("survive_threshold", cfg.survive_threshold);
    cfg.delta_sup = sv.number_or("delta_sup", cfg.delta_sup);
    cfg.delta_growth = sv.number_or("delta_growth", cfg.delta_growth);
    cfg.T_short = sv.number_or("T_short", cfg.T_short);
    cfg.T_long = sv.number_or("T_long", cfg.T_long);
    cfg.n_paths = sv.integer_or("n_paths", cfg.n_paths);
    cfg.r_kill = sv.number_or("r_kill", cfg.r_kill);
    write_json(out / "suite.json", to_json(bessel_property_suite(cfg, threads)));
  } else {
    throw ConfigError("command: unknown command '" + command + "'");
  }

  write_json(out / "manifest.json", manifest);
}

inline nlohmann::json load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return doc;
}

}  // namespace anneal
