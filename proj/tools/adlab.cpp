#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "adlab/error.hpp"
#include "adlab/scenario.hpp"
#include "adlab/verification.hpp"

using namespace adlab;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kConfig = 2, kNumerical = 3 };

struct ScenarioFlags {
  std::string config_path;
  std::optional<std::string> model, samples_path, method, initial_state;
  std::optional<double> omega0, omega, theta, t_end, dt, ratio_threshold;
  std::optional<std::size_t> steps;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> analyses;
  CLI::Option* analyses_opt = nullptr;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config_path, "JSON scenario file; flags override its keys");
    app->add_option("--model", model, "rotating | sampled-file");
    app->add_option("--omega0", omega0);
    app->add_option("--omega", omega);
    app->add_option("--theta", theta);
    app->add_option("--samples-path", samples_path, "sampled Hamiltonian JSON");
    app->add_option("--t-end", t_end);
    app->add_option("--dt", dt);
    app->add_option("--steps", steps, "number of steps; sets dt = span / steps");
    app->add_option("--method", method, "midpoint2 | magnus4");
    app->add_option("--initial-state", initial_state, "plus | minus");
    analyses_opt = app->add_option("--analyses", analyses,
                                   "comma list of duality, adiabatic_h, adiabatic_dual, inconsistency, resonance, nu")
                       ->delimiter(',')
                       ->allow_extra_args(false);
    app->add_option("--ratio-threshold", ratio_threshold);
    app->add_option("--seed", seed);
  }

  ScenarioConfig resolve() const {
    json doc = json::object();
    std::filesystem::path base_dir;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw Error(ErrorCode::ConfigError, "cannot open config " + config_path);
      try {
        in >> doc;
      } catch (const json::exception& e) {
        throw Error(ErrorCode::ConfigError, "config " + config_path + ": " + e.what());
      }
      base_dir = std::filesystem::path(config_path).parent_path();
    }
    if (model) doc["model"] = *model;
    if (omega0) doc["omega0"] = *omega0;
    if (omega) doc["omega"] = *omega;
    if (theta) doc["theta"] = *theta;
    if (t_end) doc["t_end"] = *t_end;
    if (dt) doc["dt"] = *dt;
    if (method) doc["method"] = *method;
    if (initial_state) doc["initial_state"] = *initial_state;
    if (ratio_threshold) doc["ratio_threshold"] = *ratio_threshold;
    if (seed) doc["seed"] = *seed;
    if (analyses_opt->count() > 0) {
      json list = json::array();
      for (const auto& a : analyses)
        if (!a.empty()) list.push_back(a);
      doc["analyses"] = list;
    }
    ScenarioConfig c = config_from_json(doc, base_dir);
    if (samples_path) c.samples_path = *samples_path;
    if (steps) c.steps = *steps;
    return c;
  }
};

int run_command(const ScenarioFlags& flags, const std::string& out_dir) {
  const ScenarioRun run = run_scenario(flags.resolve());
  write_run_outputs(run, out_dir);
  std::cout << render_report(run.report);
  if (run.report.nu) {
    const auto& nu = *run.report.nu;
    std::cout << "nu_measured,nu_predicted,pass\n"
              << format_real(nu.measured) << ',' << (nu.predicted ? format_real(*nu.predicted) : "") << ','
              << (nu.pass ? "true" : "false") << '\n';
  }
  return kOk;
}

int sweep_command(const ScenarioFlags& flags, const std::string& axis, const std::vector<double>& values,
                  const std::string& out_dir) {
  const auto rows = run_sweep(flags.resolve(), parse_axis(axis), values);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::ConfigError, "cannot create " + out_dir + ": " + ec.message());
  write_summary_csv(std::filesystem::path(out_dir) / "summary.csv", rows);
  std::cout << summary_csv(rows);
  return kOk;
}

int verify_command(bool full, std::uint64_t seed) {
  int failed = 0;
  run_verification(full ? VerifyLevel::full : VerifyLevel::fast, seed, [&](const CheckResult& r) {
    std::cout << format_check(r) << std::endl;
    if (!r.pass) ++failed;
  });
  std::cout << (failed == 0 ? "all invariants pass" : std::to_string(failed) + " invariant(s) failed") << '\n';
  return failed == 0 ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adlab: adiabatic and dual-frame propagation experiments"};
  app.require_subcommand(1);

  ScenarioFlags run_flags;
  std::string run_out = "adlab_out";
  auto* run = app.add_subcommand("run", "run one scenario and write CSV files plus report.json");
  run_flags.attach(run);
  run->add_option("-o,--out", run_out, "output directory");

  ScenarioFlags sweep_flags;
  std::string sweep_out = "adlab_out";
  std::string axis;
  std::vector<double> values;
  auto* sweep = app.add_subcommand("sweep", "run the scenario over theta or omega values");
  sweep_flags.attach(sweep);
  sweep->add_option("--axis", axis, "theta | omega")->required();
  sweep->add_option("--values", values, "comma list")->delimiter(',')->required();
  sweep->add_option("-o,--out", sweep_out, "output directory for summary.csv");

  bool full = false;
  std::uint64_t verify_seed = 0;
  auto* verify = app.add_subcommand("verify", "run the invariant matrix");
  auto* fast_flag = verify->add_flag("--fast", "two-level scenarios only (default)");
  verify->add_flag("--full", full, "add four-level sources, convergence orders and mutation checks")->excludes(fast_flag);
  verify->add_option("--seed", verify_seed);

  std::string report_path;
  auto* report = app.add_subcommand("report", "re-render a saved report.json");
  report->add_option("path", report_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return run_command(run_flags, run_out);
    if (*sweep) return sweep_command(sweep_flags, axis, values, sweep_out);
    if (*verify) return verify_command(full, verify_seed);
    if (*report) {
      std::cout << render_report(load_report(report_path));
      return kOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::ConfigError ? kConfig : kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}
