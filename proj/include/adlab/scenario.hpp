#pragma once

// Scenario configuration, single runs, parameter sweeps and their file outputs.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "adlab/diagnostics.hpp"
#include "adlab/models.hpp"
#include "adlab/propagation.hpp"

namespace adlab {

enum class Analysis { duality, adiabatic_h, adiabatic_dual, inconsistency, resonance, nu };
std::string_view to_string(Analysis a);
Analysis parse_analysis(std::string_view name);

enum class ModelKind { rotating, sampled };

struct ScenarioConfig {
  ModelKind model = ModelKind::rotating;
  RotatingModelParams params;
  std::filesystem::path samples_path;
  std::optional<double> t_end;
  std::optional<double> dt;
  std::optional<std::size_t> steps;
  Method method = Method::midpoint2;
  // "plus" (solver level 0), "minus" (level 1), or "custom" with custom_state.
  std::string initial_state = "plus";
  std::vector<cplx> custom_state;
  std::vector<Analysis> analyses;
  double ratio_threshold = 0.1;
  std::uint64_t seed = 0;

  bool wants(Analysis a) const;
  // Throws ConfigError.
  void validate() const;
};

// Keys: model, omega0, omega, theta, samples_path, t_end, dt, method,
// initial_state, analyses, ratio_threshold, seed. Unknown keys are rejected.
ScenarioConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ScenarioConfig& config);

struct ScenarioRun {
  ScenarioConfig config;
  PropagatorTrace trace;
  ScenarioReport report;
};

// Throws ConfigError for bad configs, other codes for numerical failures
// (InvariantViolated names the invariant).
ScenarioRun run_scenario(const ScenarioConfig& config);

struct SweepRow {
  double axis_value = 0.0;
  std::optional<double> min_fid_h;
  std::optional<double> min_fid_dual;
  std::optional<Verdict> verdict_h;
  std::optional<Verdict> verdict_dual;
  std::optional<double> nu_measured;
  std::optional<double> nu_predicted;
};

enum class SweepAxis { theta, omega };
SweepAxis parse_axis(std::string_view name);

SweepRow summarize(const ScenarioReport& report, double axis_value);

// Points run concurrently; rows come back in input order.
std::vector<SweepRow> run_sweep(const ScenarioConfig& base, SweepAxis axis,
                                const std::vector<double>& values);

// CSV output, %.17g throughout.
std::string format_real(double x);
void write_trace_csv(const std::filesystem::path& path, const PropagatorTrace& trace);
void write_fidelity_csv(const std::filesystem::path& path, const ScenarioReport& report);
void write_residual_csv(const std::filesystem::path& path, const ScenarioReport& report);
void write_summary_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);
std::string summary_csv(const std::vector<SweepRow>& rows);

// Writes trace.csv, fidelity.csv / residuals.csv when computed, and report.json.
void write_run_outputs(const ScenarioRun& run, const std::filesystem::path& out_dir);

nlohmann::json report_to_json(const ScenarioReport& report);
ScenarioReport report_from_json(const nlohmann::json& doc);
ScenarioReport load_report(const std::filesystem::path& path);

// Plain-text rendering used by the CLI.
std::string render_report(const ScenarioReport& report);

}  // namespace adlab
