// anneal_lab: drives the annealing simulators, landscape estimators,
// assumption checkers and Monte Carlo scans from a JSON config file.
//
//   anneal_lab <command> --config cfg.json [--seed N] [--out DIR]
//              [--threads N] [--format csv|json]
//
// Commands: simulate | bessel | compare | cstar | check | scan | suite.
// Exit codes: 0 ok, 2 config error, 3 numeric failure, 4 budget guard.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "anneal/runner.hpp"

namespace {

int fail(const char* kind, const std::string& message, int code) {
  anneal::json err{{"error", {{"kind", kind}, {"message", message}}}};
  std::cout << err.dump(2) << std::endl;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical lab for slow-potential simulated annealing"};
  app.require_subcommand(1);

  anneal::RunOptions opt;
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;

  const std::vector<std::string> commands = {"simulate", "bessel", "compare",
                                             "cstar",    "check",  "scan",
                                             "suite"};
  for (const std::string& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--seed", seed, "master seed override")
        ->each([&seed_set](const std::string&) { seed_set = true; });
    sub->add_option("--threads", opt.threads, "worker threads (0 = hardware)");
    sub->add_option("--format", opt.format, "tabular artifact format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->callback([&opt, name] { opt.command = name; });
  }

  CLI11_PARSE(app, argc, argv);

  if (opt.threads == 0) {
    if (const char* env = std::getenv("ANNEAL_LAB_THREADS")) {
      opt.threads = std::atoi(env);
    }
  }
  opt.config_path = config_path;
  opt.out_dir = out_dir;
  if (seed_set) opt.seed = seed;

  try {
    const anneal::json doc = anneal::load_config_file(opt.config_path);
    anneal::run_config(doc, opt);
  } catch (const anneal::ConfigError& e) {
    return fail("config", e.what(), 2);
  } catch (const anneal::DomainError& e) {
    return fail("config", e.what(), 2);
  } catch (const anneal::BudgetError& e) {
    return fail("budget", e.what(), 4);
  } catch (const anneal::RangeError& e) {
    return fail("numeric", e.what(), 3);
  } catch (const anneal::NumericError& e) {
    return fail("numeric", e.what(), 3);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 3);
  }
  return 0;
}
