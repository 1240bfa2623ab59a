#include "adlab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "adlab/duality.hpp"
#include "adlab/kernels.hpp"
#include "adlab/spectral_flow.hpp"

namespace adlab {

namespace {

using json = nlohmann::json;

constexpr double kUnitarityLimit = 1e-10;

const std::vector<Analysis> kAllAnalyses = {Analysis::duality, Analysis::adiabatic_h,
                                            Analysis::adiabatic_dual, Analysis::inconsistency,
                                            Analysis::resonance, Analysis::nu};

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

template <class T>
T get_field(const json& doc, const char* key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    config_error(std::string("config key '") + key + "': " + e.what());
  }
}

std::vector<cplx> parse_state_vector(const json& node) {
  std::vector<cplx> out;
  if (!node.is_array()) config_error("custom initial_state must be an array of [re, im] pairs");
  for (const auto& pair : node) {
    if (pair.is_number()) {
      out.emplace_back(pair.get<double>(), 0.0);
    } else if (pair.is_array() && pair.size() == 2) {
      out.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    } else {
      config_error("custom initial_state entries must be numbers or [re, im] pairs");
    }
  }
  return out;
}

HamiltonianSource make_source(const ScenarioConfig& config) {
  if (config.model == ModelKind::rotating) return rotating_hamiltonian(config.params);
  return sampled_hamiltonian(load_samples(config.samples_path));
}

TimeGrid make_grid(const ScenarioConfig& config, const HamiltonianSource& src) {
  const double t_start = config.model == ModelKind::rotating ? 0.0 : src.window().begin;
  const double t_end = config.t_end ? *config.t_end : src.window().end;
  if (!(t_end > t_start)) config_error("t_end must exceed the start time");
  if (config.steps) return TimeGrid(t_start, (t_end - t_start) / static_cast<double>(*config.steps), *config.steps);
  return TimeGrid::spanning(t_start, t_end, *config.dt);
}

ComplexVector initial_state(const ScenarioConfig& config, const HamiltonianSource& src, double t0) {
  if (config.initial_state == "custom") {
    if (config.custom_state.size() != src.dim()) {
      config_error("custom initial_state has " + std::to_string(config.custom_state.size()) +
                   " entries, Hamiltonian dim is " + std::to_string(src.dim()));
    }
    ComplexVector psi(config.custom_state);
    if (std::abs(psi.norm() - 1.0) > 1e-10) config_error("custom initial_state must be normalized");
    return psi;
  }
  const auto e = eig_hermitian(src(t0));
  return e.vectors[config.initial_state == "plus" ? 0 : 1];
}

std::string rotating_label(const RotatingModelParams& p) {
  return "rotating omega0=" + format_real(p.omega0) + " omega=" + format_real(p.omega) +
         " theta=" + format_real(p.theta);
}

json optional_number(double x) {
  return std::isfinite(x) ? json(x) : json(nullptr);
}

double number_or_inf(const json& node) {
  return node.is_null() ? std::numeric_limits<double>::infinity() : node.get<double>();
}

json resonance_to_json(const ResonanceReport& r) {
  json pairs = json::array();
  for (const auto& p : r.pairs) {
    pairs.push_back({{"n", p.n},
                     {"m", p.m},
                     {"coupling_magnitude", p.coupling_magnitude},
                     {"rabi_frequency", p.rabi_frequency},
                     {"gap", p.gap},
                     {"coupling_frequency", p.coupling_frequency},
                     {"dominant_frequency", p.dominant_frequency},
                     {"detuning", p.detuning},
                     {"verdict_ratio", optional_number(p.verdict_ratio)},
                     {"multi_peak", p.multi_peak}});
  }
  return {{"mode", r.mode == FrameKind::h_frame ? "h_frame" : "dual_frame"},
          {"threshold", r.threshold},
          {"verdict", to_string(r.verdict)},
          {"coupling_magnitude", r.coupling_magnitude},
          {"rabi_frequency", r.rabi_frequency},
          {"gap", r.gap},
          {"dominant_frequency", r.dominant_frequency},
          {"detuning", r.detuning},
          {"verdict_ratio", optional_number(r.verdict_ratio)},
          {"pairs", pairs}};
}

ResonanceReport resonance_from_json(const json& j) {
  ResonanceReport r;
  r.mode = j.at("mode").get<std::string>() == "h_frame" ? FrameKind::h_frame : FrameKind::dual_frame;
  r.threshold = j.at("threshold").get<double>();
  r.verdict = j.at("verdict").get<std::string>() == "Adiabatic" ? Verdict::Adiabatic : Verdict::Resonant;
  r.coupling_magnitude = j.at("coupling_magnitude").get<double>();
  r.rabi_frequency = j.at("rabi_frequency").get<double>();
  r.gap = j.at("gap").get<double>();
  r.dominant_frequency = j.at("dominant_frequency").get<double>();
  r.detuning = j.at("detuning").get<double>();
  r.verdict_ratio = number_or_inf(j.at("verdict_ratio"));
  for (const auto& p : j.at("pairs")) {
    PairResonance pr;
    pr.n = p.at("n").get<std::size_t>();
    pr.m = p.at("m").get<std::size_t>();
    pr.coupling_magnitude = p.at("coupling_magnitude").get<double>();
    pr.rabi_frequency = p.at("rabi_frequency").get<double>();
    pr.gap = p.at("gap").get<double>();
    pr.coupling_frequency = p.at("coupling_frequency").get<double>();
    pr.dominant_frequency = p.at("dominant_frequency").get<double>();
    pr.detuning = p.at("detuning").get<double>();
    pr.verdict_ratio = number_or_inf(p.at("verdict_ratio"));
    pr.multi_peak = p.at("multi_peak").get<bool>();
    r.pairs.push_back(pr);
  }
  return r;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
  return out;
}

std::string optional_field(const std::optional<double>& x) { return x ? format_real(*x) : ""; }

}  // namespace

std::string_view to_string(Analysis a) {
  switch (a) {
    case Analysis::duality: return "duality";
    case Analysis::adiabatic_h: return "adiabatic_h";
    case Analysis::adiabatic_dual: return "adiabatic_dual";
    case Analysis::inconsistency: return "inconsistency";
    case Analysis::resonance: return "resonance";
    case Analysis::nu: return "nu";
  }
  return "unknown";
}

Analysis parse_analysis(std::string_view name) {
  for (Analysis a : kAllAnalyses)
    if (to_string(a) == name) return a;
  config_error("unknown analysis '" + std::string(name) + "'");
}

bool ScenarioConfig::wants(Analysis a) const {
  return std::find(analyses.begin(), analyses.end(), a) != analyses.end();
}

void ScenarioConfig::validate() const {
  if (analyses.empty()) config_error("analyses must not be empty");
  if (model == ModelKind::rotating) {
    try {
      params.validate();
    } catch (const Error& e) {
      config_error(e.what());
    }
    if (!t_end) config_error("rotating model needs t_end");
  } else {
    if (samples_path.empty()) config_error("sampled model needs samples_path");
    if (!std::filesystem::exists(samples_path)) config_error("samples file not found: " + samples_path.string());
  }
  if (t_end && !(*t_end > 0.0 && std::isfinite(*t_end))) config_error("t_end must be finite and > 0");
  if (!dt && !steps) config_error("grid needs dt or steps");
  if (dt && !(*dt > 0.0 && std::isfinite(*dt))) config_error("dt must be finite and > 0");
  if (steps && *steps == 0) config_error("steps must be positive");
  if (dt && steps && t_end) {
    const double span = *dt * static_cast<double>(*steps);
    if (std::abs(span - *t_end) > 1e-9 * std::max(1.0, *t_end)) {
      config_error("dt * steps = " + format_real(span) + " does not match t_end = " + format_real(*t_end));
    }
  }
  if (initial_state != "plus" && initial_state != "minus" && initial_state != "custom") {
    config_error("initial_state must be plus, minus or a custom vector");
  }
  if (initial_state == "custom" && custom_state.empty()) config_error("custom initial_state is empty");
  if (!(ratio_threshold > 0.0) || !std::isfinite(ratio_threshold)) config_error("ratio_threshold must be > 0");
}

ScenarioConfig config_from_json(const json& doc, const std::filesystem::path& base_dir) {
  static const std::set<std::string> known = {"model", "omega0",        "omega",    "theta",
                                              "samples_path", "t_end", "dt",       "method",
                                              "initial_state", "analyses", "ratio_threshold", "seed"};
  if (!doc.is_object()) config_error("config must be an object");
  for (const auto& [key, _] : doc.items())
    if (!known.count(key)) config_error("unknown config key '" + key + "'");

  ScenarioConfig c;
  if (doc.contains("model")) {
    const auto m = get_field<std::string>(doc, "model");
    if (m == "rotating") c.model = ModelKind::rotating;
    else if (m == "sampled" || m == "sampled-file") c.model = ModelKind::sampled;
    else config_error("model must be rotating or sampled");
  }
  if (doc.contains("omega0")) c.params.omega0 = get_field<double>(doc, "omega0");
  if (doc.contains("omega")) c.params.omega = get_field<double>(doc, "omega");
  if (doc.contains("theta")) c.params.theta = get_field<double>(doc, "theta");
  if (doc.contains("samples_path")) {
    std::filesystem::path p = get_field<std::string>(doc, "samples_path");
    c.samples_path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  }
  if (doc.contains("t_end")) c.t_end = get_field<double>(doc, "t_end");
  if (doc.contains("dt")) c.dt = get_field<double>(doc, "dt");
  if (doc.contains("method")) c.method = parse_method(get_field<std::string>(doc, "method"));
  if (doc.contains("initial_state")) {
    const auto& s = doc.at("initial_state");
    if (s.is_string()) {
      c.initial_state = s.get<std::string>();
    } else {
      c.initial_state = "custom";
      c.custom_state = parse_state_vector(s);
    }
  }
  if (doc.contains("analyses")) {
    const auto& a = doc.at("analyses");
    if (!a.is_array()) config_error("analyses must be an array");
    for (const auto& name : a) {
      if (!name.is_string()) config_error("analyses entries must be strings");
      c.analyses.push_back(parse_analysis(name.get<std::string>()));
    }
  }
  if (doc.contains("ratio_threshold")) c.ratio_threshold = get_field<double>(doc, "ratio_threshold");
  if (doc.contains("seed")) c.seed = get_field<std::uint64_t>(doc, "seed");
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    config_error("config " + path.string() + ": " + e.what());
  }
  return config_from_json(doc, path.parent_path());
}

json config_to_json(const ScenarioConfig& c) {
  json doc;
  doc["model"] = c.model == ModelKind::rotating ? "rotating" : "sampled";
  if (c.model == ModelKind::rotating) {
    doc["omega0"] = c.params.omega0;
    doc["omega"] = c.params.omega;
    doc["theta"] = c.params.theta;
  } else {
    doc["samples_path"] = c.samples_path.string();
  }
  if (c.t_end) doc["t_end"] = *c.t_end;
  if (c.dt) doc["dt"] = *c.dt;
  doc["method"] = std::string(to_string(c.method));
  if (c.initial_state == "custom") {
    json v = json::array();
    for (const auto& z : c.custom_state) v.push_back({z.real(), z.imag()});
    doc["initial_state"] = v;
  } else {
    doc["initial_state"] = c.initial_state;
  }
  json a = json::array();
  for (Analysis x : c.analyses) a.push_back(std::string(to_string(x)));
  doc["analyses"] = a;
  doc["ratio_threshold"] = c.ratio_threshold;
  doc["seed"] = c.seed;
  return doc;
}

ScenarioRun run_scenario(const ScenarioConfig& config) {
  config.validate();
  ScenarioRun run;
  run.config = config;
  const HamiltonianSource src = make_source(config);
  const TimeGrid grid = make_grid(config, src);

  run.trace = propagate(src, grid, config.method);
  ScenarioReport& report = run.report;
  report.label = config.model == ModelKind::rotating ? rotating_label(config.params)
                                                     : "sampled " + config.samples_path.filename().string();
  if (config.model == ModelKind::rotating) report.params = config.params;
  report.times.resize(grid.nodes());
  for (std::size_t k = 0; k < grid.nodes(); ++k) report.times[k] = grid.time(k);
  report.max_unitarity = run.trace.max_unitarity_residual;
  if (report.max_unitarity > kUnitarityLimit) {
    throw Error(ErrorCode::InvariantViolated,
                "unitarity residual " + format_real(report.max_unitarity) + " exceeds " +
                    format_real(kUnitarityLimit));
  }

  const bool need_fidelity = config.wants(Analysis::adiabatic_h) || config.wants(Analysis::adiabatic_dual);
  const bool need_residuals = config.wants(Analysis::duality) || config.wants(Analysis::inconsistency);
  const bool need_frame = need_fidelity || need_residuals || config.wants(Analysis::resonance);

  std::optional<EigenFrame> frame;
  if (need_frame) {
    frame = kernels::omp::build_eigenframe(src, grid);
    attach_phase_integrals(run.trace, *frame);
  }

  if (need_fidelity) {
    const ComplexVector psi0 = initial_state(config, src, grid.t_start);
    const auto u_adia = kernels::omp::adiabatic_propagator_series(*frame);
    report.fidelity_h =
        kernels::omp::fidelity_series(run.trace, [&](std::size_t k) { return u_adia[k]; }, psi0);
    PropagatorTrace adjoint = run.trace;
    for (auto& u : adjoint.U) u = u.adjoint();
    report.fidelity_dual = kernels::omp::fidelity_series(
        adjoint, [&](std::size_t k) { return w_dagger(run.trace, *frame, k); }, psi0);
    for (double f : report.fidelity_h)
      if (!(f >= 0.0 && f <= 1.0 + 1e-10)) throw Error(ErrorCode::InvariantViolated, "fidelity outside [0, 1]");
    for (double f : report.fidelity_dual)
      if (!(f >= 0.0 && f <= 1.0 + 1e-10)) throw Error(ErrorCode::InvariantViolated, "fidelity outside [0, 1]");
  }

  if (need_residuals) {
    const auto dual_trace = propagate(dual_source(src, run.trace), grid, config.method);
    const auto unitarity = kernels::omp::unitarity_series(run.trace);
    const auto equivalence = kernels::omp::equivalence_residual_series(run.trace, *frame);
    report.residuals.resize(grid.nodes());
    for (std::size_t k = 0; k < grid.nodes(); ++k) {
      auto& r = report.residuals[k];
      r.t = grid.time(k);
      r.unitarity = unitarity[k];
      r.duality = operator_distance(dual_trace.U[k], run.trace.U[k].adjoint());
      r.equivalence = equivalence[k];
      report.max_duality = std::max(report.max_duality, r.duality);
      report.max_equivalence = std::max(report.max_equivalence, r.equivalence);
    }
    report.inconsistency_distance = operator_distance(
        inconsistency_operator(*frame, grid.steps), ComplexMatrix::identity(src.dim()));
  }

  if (config.wants(Analysis::resonance)) {
    report.resonance_h = resonance_report(*frame, FrameKind::h_frame, config.ratio_threshold);
    report.resonance_dual = resonance_report(*frame, FrameKind::dual_frame, config.ratio_threshold);
  }

  if (config.wants(Analysis::nu)) {
    const auto series = kernels::omp::dual_hamiltonian_series(src, run.trace);
    std::optional<RotatingModelParams> model;
    if (config.model == ModelKind::rotating) model = config.params;
    report.nu = nu_check(series, grid.dt, 0, 0, model);
  }
  return run;
}

SweepAxis parse_axis(std::string_view name) {
  if (name == "theta") return SweepAxis::theta;
  if (name == "omega") return SweepAxis::omega;
  config_error("sweep axis must be theta or omega");
}

SweepRow summarize(const ScenarioReport& report, double axis_value) {
  SweepRow row;
  row.axis_value = axis_value;
  if (!report.fidelity_h.empty()) {
    row.min_fid_h = *std::min_element(report.fidelity_h.begin(), report.fidelity_h.end());
    row.min_fid_dual = *std::min_element(report.fidelity_dual.begin(), report.fidelity_dual.end());
  }
  if (report.resonance_h) row.verdict_h = report.resonance_h->verdict;
  if (report.resonance_dual) row.verdict_dual = report.resonance_dual->verdict;
  if (report.nu && !report.nu->dc_only) row.nu_measured = report.nu->measured;
  if (report.nu) row.nu_predicted = report.nu->predicted;
  return row;
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& base, SweepAxis axis,
                                const std::vector<double>& values) {
  if (base.model != ModelKind::rotating) config_error("sweeps need the rotating model");
  if (values.empty()) config_error("sweep needs at least one value");
  std::vector<ScenarioConfig> configs(values.size(), base);
  for (std::size_t i = 0; i < values.size(); ++i) {
    (axis == SweepAxis::theta ? configs[i].params.theta : configs[i].params.omega) = values[i];
    configs[i].validate();
  }
  std::vector<SweepRow> rows(values.size());
  kernels::parallel_for(values.size(), [&](std::size_t i) {
    rows[i] = summarize(run_scenario(configs[i]).report, values[i]);
  });
  return rows;
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_trace_csv(const std::filesystem::path& path, const PropagatorTrace& trace) {
  auto out = open_output(path);
  const std::size_t n = trace.dim();
  const std::string sep = n > 10 ? "_" : "";
  out << "t";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::string idx = std::to_string(i) + sep + std::to_string(j);
      out << ",re_U_" << idx << ",im_U_" << idx;
    }
  out << '\n';
  for (std::size_t k = 0; k < trace.U.size(); ++k) {
    out << format_real(trace.grid.time(k));
    for (const auto& z : trace.U[k].entries()) out << ',' << format_real(z.real()) << ',' << format_real(z.imag());
    out << '\n';
  }
}

void write_fidelity_csv(const std::filesystem::path& path, const ScenarioReport& report) {
  auto out = open_output(path);
  out << "t,fidelity_h,fidelity_dual\n";
  for (std::size_t k = 0; k < report.fidelity_h.size(); ++k) {
    out << format_real(report.times[k]) << ',' << format_real(report.fidelity_h[k]) << ','
        << format_real(report.fidelity_dual[k]) << '\n';
  }
}

void write_residual_csv(const std::filesystem::path& path, const ScenarioReport& report) {
  auto out = open_output(path);
  out << "t,unitarity,duality,equivalence\n";
  for (const auto& r : report.residuals) {
    out << format_real(r.t) << ',' << format_real(r.unitarity) << ',' << format_real(r.duality) << ','
        << format_real(r.equivalence) << '\n';
  }
}

std::string summary_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "axis_value,min_fid_h,min_fid_dual,verdict_h,verdict_dual,nu_measured,nu_predicted\n";
  for (const auto& r : rows) {
    out << format_real(r.axis_value) << ',' << optional_field(r.min_fid_h) << ','
        << optional_field(r.min_fid_dual) << ',' << (r.verdict_h ? to_string(*r.verdict_h) : "") << ','
        << (r.verdict_dual ? to_string(*r.verdict_dual) : "") << ',' << optional_field(r.nu_measured)
        << ',' << optional_field(r.nu_predicted) << '\n';
  }
  return out.str();
}

void write_summary_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  auto out = open_output(path);
  out << summary_csv(rows);
}

void write_run_outputs(const ScenarioRun& run, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::ConfigError, "cannot create " + out_dir.string() + ": " + ec.message());
  write_trace_csv(out_dir / "trace.csv", run.trace);
  if (!run.report.fidelity_h.empty()) write_fidelity_csv(out_dir / "fidelity.csv", run.report);
  if (!run.report.residuals.empty()) write_residual_csv(out_dir / "residuals.csv", run.report);
  json doc = report_to_json(run.report);
  doc["config"] = config_to_json(run.config);
  auto out = open_output(out_dir / "report.json");
  out << doc.dump(2) << '\n';
}

json report_to_json(const ScenarioReport& r) {
  json doc;
  doc["label"] = r.label;
  if (r.params) doc["params"] = {{"omega0", r.params->omega0}, {"omega", r.params->omega}, {"theta", r.params->theta}};
  doc["times"] = r.times;
  if (!r.fidelity_h.empty()) doc["fidelity"] = {{"h", r.fidelity_h}, {"dual", r.fidelity_dual}};
  if (!r.residuals.empty()) {
    json res = {{"t", json::array()}, {"unitarity", json::array()}, {"duality", json::array()}, {"equivalence", json::array()}};
    for (const auto& p : r.residuals) {
      res["t"].push_back(p.t);
      res["unitarity"].push_back(p.unitarity);
      res["duality"].push_back(p.duality);
      res["equivalence"].push_back(p.equivalence);
    }
    doc["residuals"] = res;
  }
  if (r.resonance_h) doc["resonance_h"] = resonance_to_json(*r.resonance_h);
  if (r.resonance_dual) doc["resonance_dual"] = resonance_to_json(*r.resonance_dual);
  if (r.nu) {
    doc["nu"] = {{"measured", r.nu->measured}, {"bin", r.nu->bin}, {"dc_only", r.nu->dc_only}, {"pass", r.nu->pass}};
    doc["nu"]["predicted"] = r.nu->predicted ? json(*r.nu->predicted) : json(nullptr);
  }
  doc["max_unitarity"] = r.max_unitarity;
  doc["max_duality"] = r.max_duality;
  doc["max_equivalence"] = r.max_equivalence;
  doc["inconsistency_distance"] = r.inconsistency_distance;
  return doc;
}

ScenarioReport report_from_json(const json& doc) {
  ScenarioReport r;
  try {
    r.label = doc.at("label").get<std::string>();
    if (doc.contains("params")) {
      const auto& p = doc.at("params");
      r.params = RotatingModelParams{p.at("omega0").get<double>(), p.at("omega").get<double>(),
                                     p.at("theta").get<double>()};
    }
    r.times = doc.at("times").get<std::vector<double>>();
    if (doc.contains("fidelity")) {
      r.fidelity_h = doc["fidelity"].at("h").get<std::vector<double>>();
      r.fidelity_dual = doc["fidelity"].at("dual").get<std::vector<double>>();
    }
    if (doc.contains("residuals")) {
      const auto& res = doc.at("residuals");
      const auto t = res.at("t").get<std::vector<double>>();
      const auto u = res.at("unitarity").get<std::vector<double>>();
      const auto d = res.at("duality").get<std::vector<double>>();
      const auto e = res.at("equivalence").get<std::vector<double>>();
      if (u.size() != t.size() || d.size() != t.size() || e.size() != t.size()) {
        config_error("report residual columns differ in length");
      }
      for (std::size_t k = 0; k < t.size(); ++k) r.residuals.push_back({t[k], u[k], d[k], e[k]});
    }
    if (doc.contains("resonance_h")) r.resonance_h = resonance_from_json(doc.at("resonance_h"));
    if (doc.contains("resonance_dual")) r.resonance_dual = resonance_from_json(doc.at("resonance_dual"));
    if (doc.contains("nu")) {
      const auto& n = doc.at("nu");
      NuCheck nu;
      nu.measured = n.at("measured").get<double>();
      nu.bin = n.at("bin").get<double>();
      nu.dc_only = n.at("dc_only").get<bool>();
      nu.pass = n.at("pass").get<bool>();
      if (!n.at("predicted").is_null()) nu.predicted = n.at("predicted").get<double>();
      r.nu = nu;
    }
    r.max_unitarity = doc.at("max_unitarity").get<double>();
    r.max_duality = doc.at("max_duality").get<double>();
    r.max_equivalence = doc.at("max_equivalence").get<double>();
    r.inconsistency_distance = doc.at("inconsistency_distance").get<double>();
  } catch (const json::exception& e) {
    config_error(std::string("report: ") + e.what());
  }
  return r;
}

ScenarioReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open report " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    config_error("report " + path.string() + ": " + e.what());
  }
  return report_from_json(doc);
}

std::string render_report(const ScenarioReport& r) {
  std::ostringstream out;
  out << "scenario: " << r.label << '\n';
  out << "nodes: " << r.times.size();
  if (!r.times.empty()) out << "  t in [" << format_real(r.times.front()) << ", " << format_real(r.times.back()) << "]";
  out << '\n';
  out << "max unitarity residual: " << format_real(r.max_unitarity) << '\n';
  if (!r.residuals.empty()) {
    out << "max duality mismatch: " << format_real(r.max_duality) << '\n';
    out << "max equivalence residual: " << format_real(r.max_equivalence) << '\n';
    out << "inconsistency ||U_adia V^dag - I||_F at t_end: " << format_real(r.inconsistency_distance) << '\n';
  }
  if (!r.fidelity_h.empty()) {
    out << "min fidelity (h frame): " << format_real(*std::min_element(r.fidelity_h.begin(), r.fidelity_h.end())) << '\n';
    out << "min fidelity (dual frame): "
        << format_real(*std::min_element(r.fidelity_dual.begin(), r.fidelity_dual.end())) << '\n';
  }
  for (const auto* res : {&r.resonance_h, &r.resonance_dual}) {
    if (!*res) continue;
    const auto& x = **res;
    out << (x.mode == FrameKind::h_frame ? "resonance (h frame): " : "resonance (dual frame): ")
        << to_string(x.verdict) << "  ratio=" << format_real(x.verdict_ratio)
        << "  |A|max=" << format_real(x.coupling_magnitude) << "  detuning=" << format_real(x.detuning)
        << "  gap=" << format_real(x.gap) << '\n';
  }
  if (r.nu) {
    out << "nu: measured=" << format_real(r.nu->measured)
        << " predicted=" << (r.nu->predicted ? format_real(*r.nu->predicted) : "n/a")
        << " bin=" << format_real(r.nu->bin) << (r.nu->dc_only ? " (dc only)" : "")
        << " pass=" << (r.nu->pass ? "true" : "false") << '\n';
  }
  return out.str();
}

}  // namespace adlab
