#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "anneal/checkers.hpp"
#include "anneal/experiments.hpp"
#include "anneal/potentials_builtin.hpp"
#include "anneal/schedule.hpp"
#include "anneal/sde.hpp"

namespace anneal {

// Strict view over a JSON object: every key must be consumed by an
// allow-list, so typos in configs fail fast with a field path.
class ConfigView {
 public:
  ConfigView(const nlohmann::json& j, std::string path)
      : j_(&j), path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  const std::string& path() const { return path_; }

  void allow_keys(std::initializer_list<const char*> keys) const {
    for (const auto& [key, _] : j_->items()) {
      bool ok = false;
      for (const char* k : keys) ok = ok || key == k;
      if (!ok) throw ConfigError(path_ + ": unknown key '" + key + "'");
    }
  }

  bool has(const char* k) const { return j_->contains(k); }

  double number(const char* k) const {
    require(k);
    return number_or(k, 0.0);
  }

  double number_or(const char* k, double fallback) const {
    if (!has(k)) return fallback;
    const auto& v = (*j_)[k];
    if (v.is_string() && v.get<std::string>() == "inf")
      return std::numeric_limits<double>::infinity();
    if (!v.is_number()) throw ConfigError(field(k) + ": expected a number");
    return v.get<double>();
  }

  long integer(const char* k) const {
    require(k);
    return integer_or(k, 0);
  }

  long integer_or(const char* k, long fallback) const {
    if (!has(k)) return fallback;
    const auto& v = (*j_)[k];
    if (!v.is_number_integer()) throw ConfigError(field(k) + ": expected an integer");
    return v.get<long>();
  }

  std::uint64_t seed_or(const char* k, std::uint64_t fallback) const {
    if (!has(k)) return fallback;
    const auto& v = (*j_)[k];
    if (!v.is_number_unsigned() && !v.is_number_integer())
      throw ConfigError(field(k) + ": expected an unsigned integer");
    return v.get<std::uint64_t>();
  }

  std::string text(const char* k) const {
    require(k);
    const auto& v = (*j_)[k];
    if (!v.is_string()) throw ConfigError(field(k) + ": expected a string");
    return v.get<std::string>();
  }

  std::string text_or(const char* k, const std::string& fallback) const {
    return has(k) ? text(k) : fallback;
  }

  std::vector<double> numbers(const char* k) const {
    require(k);
    const auto& v = (*j_)[k];
    if (!v.is_array()) throw ConfigError(field(k) + ": expected an array");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError(field(k) + ": expected numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  ConfigView child(const char* k) const {
    require(k);
    return ConfigView((*j_)[k], field(k));
  }

  std::optional<ConfigView> maybe_child(const char* k) const {
    if (!has(k)) return std::nullopt;
    return ConfigView((*j_)[k], field(k));
  }

  const nlohmann::json& raw() const { return *j_; }

 private:
  void require(const char* k) const {
    if (!has(k)) throw ConfigError(field(k) + ": missing");
  }
  std::string field(const char* k) const { return path_ + "." + k; }

  const nlohmann::json* j_;
  std::string path_;
};

inline Potential make_potential(const ConfigView& v) {
  v.allow_keys({"kind", "dim", "alpha", "p", "kappa", "exponent",
                "well_smoothing_radius", "max_radius"});
  const std::string kind = v.text("kind");
  const int dim = static_cast<int>(v.integer("dim"));
  if (dim < 2) throw ConfigError(v.path() + ".dim: must be >= 2");
  const double nan = std::nan("");
  if (kind == "loglog") return build_loglog(v.number("alpha"), dim);
  if (kind == "oscillating")
    return build_oscillating(static_cast<int>(v.integer("p")), dim,
                             v.number_or("max_radius", 1e6));
  if (kind == "kappa_log")
    return build_radial_catalog(CatalogKind::kappa_log, v.number("kappa"), dim,
                                v.number_or("well_smoothing_radius", nan));
  if (kind == "power_log")
    return build_radial_catalog(CatalogKind::power_log, v.number("exponent"),
                                dim, v.number_or("well_smoothing_radius", nan));
  if (kind == "power")
    return build_radial_catalog(CatalogKind::power, v.number("exponent"), dim,
                                v.number_or("well_smoothing_radius", nan));
  if (kind == "quadratic") return build_quadratic(dim);
  if (kind == "double_well") return build_double_well(dim);
  if (kind == "zero") return build_zero(dim);
  throw ConfigError(v.path() + ".kind: unknown potential '" + kind + "'");
}

inline Schedule make_schedule(const ConfigView& v) {
  v.allow_keys({"c", "beta0"});
  return Schedule(v.number("c"), v.number_or("beta0", 0.0));
}

inline SimConfig make_sim(const ConfigView& v) {
  v.allow_keys({"x0", "T", "dt", "blowup_radius", "seed", "record_stride",
                "r_kill", "drift_dim"});
  SimConfig cfg;
  cfg.x0 = v.numbers("x0");
  cfg.T = v.number("T");
  cfg.dt = v.number("dt");
  cfg.blowup_radius = v.number_or("blowup_radius", 1e6);
  cfg.seed = v.seed_or("seed", 0);
  cfg.record_stride = v.integer_or("record_stride", 1);
  cfg.r_kill = v.number_or("r_kill", 1e-3);
  cfg.drift_dim = static_cast<int>(v.integer_or("drift_dim", 0));
  cfg.validate();
  return cfg;
}

inline EscapeCriterion make_escape(const std::optional<ConfigView>& v) {
  EscapeCriterion crit;
  if (v) {
    v->allow_keys({"growth_factor", "floor_fraction"});
    crit.growth_factor = v->number_or("growth_factor", crit.growth_factor);
    crit.floor_fraction = v->number_or("floor_fraction", crit.floor_fraction);
  }
  crit.validate();
  return crit;
}

inline SamplingBudget make_budget(const std::optional<ConfigView>& v) {
  SamplingBudget budget;
  if (v) {
    v->allow_keys({"radii", "directions", "refine_steps", "r_max", "seed"});
    budget.radii = static_cast<int>(v->integer_or("radii", budget.radii));
    budget.directions =
        static_cast<int>(v->integer_or("directions", budget.directions));
    budget.refine_steps =
        static_cast<int>(v->integer_or("refine_steps", budget.refine_steps));
    budget.r_max = v->number_or("r_max", budget.r_max);
    budget.seed = v->seed_or("seed", budget.seed);
  }
  return budget;
}

inline H1Descriptor make_h1(const ConfigView& v) {
  v.allow_keys({"a", "A0"});
  H1Descriptor d{v.number("a"), v.number("A0")};
  d.validate();
  return d;
}

inline H2Descriptor make_h2(const ConfigView& v) {
  v.allow_keys({"delta0", "alpha", "annuli"});
  H2Descriptor d;
  d.delta0 = v.number("delta0");
  d.alpha = v.number("alpha");
  const auto& arr = v.raw()["annuli"];
  if (!arr.is_array()) throw ConfigError(v.path() + ".annuli: expected an array");
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 3)
      throw ConfigError(v.path() + ".annuli: expected [a, b, delta] triples");
    d.annuli.push_back({e[0].get<double>(), e[1].get<double>(), e[2].get<double>()});
  }
  d.validate();
  return d;
}

inline H3RadialDescriptor make_h3(const ConfigView& v) {
  v.allow_keys({"epsilon", "alpha", "beta", "rings"});
  H3RadialDescriptor d;
  d.epsilon = v.number("epsilon");
  d.alpha = v.number("alpha");
  d.beta = v.number("beta");
  const auto& arr = v.raw()["rings"];
  if (!arr.is_array()) throw ConfigError(v.path() + ".rings: expected an array");
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 5)
      throw ConfigError(v.path() +
                        ".rings: expected [r_in, r_out, u, v, kappa] rows");
    d.rings.push_back({e[0].get<double>(), e[1].get<double>(), e[2].get<double>(),
                       e[3].get<double>(), e[4].get<double>()});
  }
  d.validate();
  return d;
}

}  // namespace anneal
