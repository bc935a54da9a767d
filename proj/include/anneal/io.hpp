#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "anneal/checkers.hpp"
#include "anneal/experiments.hpp"
#include "anneal/landscape.hpp"
#include "anneal/potential.hpp"
#include "anneal/schedule.hpp"
#include "anneal/sde.hpp"

namespace anneal {

using json = nlohmann::json;

// Shortest-roundtrip formatting for CSV cells so re-runs byte-match.
inline std::string csv_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_text(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << body;
}

inline void write_json(const std::filesystem::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

inline json to_json(const Interval& iv) {
  return json{{"point", iv.point}, {"low", iv.low}, {"high", iv.high}};
}

inline json to_json(const EstimateResult& r) {
  return json{{"successes", r.successes}, {"trials", r.trials},
              {"point", r.point},         {"ci_low", r.ci_low},
              {"ci_high", r.ci_high},     {"level", r.level},
              {"master_seed", r.master_seed}, {"wall_time", r.wall_time}};
}

inline json to_json(const CheckReport& rep) {
  json regions = json::array();
  for (const auto& region : rep.regions) {
    regions.push_back(json{{"index", region.index},
                           {"worst_margin", region.worst_margin},
                           {"worst_point", region.worst_point},
                           {"what", region.what}});
  }
  return json{{"verdict", rep.verdict()},
              {"worst_margin", rep.worst_margin},
              {"worst_point", rep.worst_point},
              {"samples_used", rep.samples_used},
              {"tolerance", rep.tolerance},
              {"regions", regions}};
}

inline json to_json(const Box& box) {
  return json{{"lo", box.lo}, {"hi", box.hi}};
}

inline const char* to_string(Connectivity c) {
  return c == Connectivity::von_neumann ? "von_neumann" : "moore";
}

inline json to_json(const CstarReport& rep) {
  json mins = json::array();
  for (const auto& pm : rep.per_minimum) {
    mins.push_back(json{{"node", pm.node}, {"energy", pm.energy},
                        {"barrier", pm.barrier}});
  }
  return json{{"cstar", rep.cstar},
              {"global_min_node", rep.global_min_node},
              {"per_minimum", mins},
              {"box", to_json(rep.box)},
              {"resolution", rep.resolution},
              {"connectivity", to_string(rep.connectivity)}};
}

inline json trajectory_summary_json(const Trajectory& t) {
  json j{{"status", to_string(t.status)},
         {"terminal_time", t.terminal_time},
         {"terminal_state", t.terminal_state},
         {"sup_radius", t.sup_radius},
         {"seed", t.seed},
         {"steps", t.steps},
         {"reflections", t.reflections}};
  if (std::isfinite(t.tail_min_radius)) j["tail_min_radius"] = t.tail_min_radius;
  if (!std::isnan(t.terminal_U)) j["terminal_U"] = t.terminal_U;
  return j;
}

inline json to_json(const DominationReport& rep) {
  return json{{"steps", rep.steps},
              {"violations", rep.violations},
              {"max_excess", rep.max_excess},
              {"tol_factor", rep.tol_factor}};
}

inline json to_json(const BesselSuiteReport& rep) {
  json checks = json::array();
  for (const auto& c : rep.checks) {
    checks.push_back(json{{"name", c.name},
                          {"pass", c.pass},
                          {"observed_a", c.observed_a},
                          {"observed_b", c.observed_b},
                          {"threshold", c.threshold}});
  }
  return json{{"checks", checks}, {"all_pass", rep.all_pass}};
}

// t, x_1..x_d (or r), then U and beta when available.
inline std::string trajectory_csv(const Trajectory& t, const Potential* p,
                                  const Schedule* s) {
  std::string out = "t";
  if (t.dim == 1) {
    out += ",r";
  } else {
    for (int i = 1; i <= t.dim; ++i) out += ",x_" + std::to_string(i);
  }
  if (p) out += ",U";
  if (s) out += ",beta";
  out += "\n";
  for (std::size_t i = 0; i < t.samples(); ++i) {
    out += csv_num(t.times[i]);
    const auto x = t.state(i);
    for (double v : x) out += "," + csv_num(v);
    if (p) {
      double u;
      try {
        u = p->evaluate(x);
      } catch (const RangeError&) {
        u = std::numeric_limits<double>::infinity();
      }
      out += "," + csv_num(u);
    }
    if (s) out += "," + csv_num(s->beta(t.times[i]));
    out += "\n";
  }
  return out;
}

inline std::string estimate_csv_row(double param, const EstimateResult& r) {
  return csv_num(param) + "," + std::to_string(r.successes) + "," +
         std::to_string(r.trials) + "," + csv_num(r.point) + "," +
         csv_num(r.ci_low) + "," + csv_num(r.ci_high) + "," +
         std::to_string(r.master_seed) + "\n";
}

inline constexpr const char* kEstimateCsvHeader =
    "param,successes,trials,point,ci_low,ci_high,seed\n";

}  // namespace anneal
