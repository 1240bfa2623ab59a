#include "adlab/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "adlab/diagnostics.hpp"
#include "adlab/duality.hpp"
#include "adlab/kernels.hpp"
#include "adlab/models.hpp"
#include "adlab/scenario.hpp"
#include "adlab/spectral_flow.hpp"

namespace adlab {

namespace {

constexpr double kPi = std::numbers::pi;

std::string short_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

struct Outcome {
  double measured = 0.0;
  bool pass = false;
  std::string limit;
};

Outcome at_most(double measured, double limit) {
  return {measured, measured <= limit, "<= " + short_real(limit)};
}

Outcome at_least(double measured, double limit) {
  return {measured, measured >= limit, ">= " + short_real(limit)};
}

Outcome within(double measured, double lo, double hi) {
  return {measured, measured >= lo && measured <= hi, "in [" + short_real(lo) + ", " + short_real(hi) + "]"};
}

class Runner {
 public:
  explicit Runner(const std::function<void(const CheckResult&)>& sink) : sink_(sink) {}

  template <class Fn>
  void check(std::string criterion, std::string name, Fn&& fn, double time_limit = 0.0) {
    CheckResult r;
    r.criterion = std::move(criterion);
    r.name = std::move(name);
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome o = fn();
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      r.measured = o.measured;
      r.pass = o.pass;
      r.limit = o.limit;
      if (time_limit > 0.0) {
        r.limit += ", < " + short_real(time_limit) + " s";
        r.pass = r.pass && r.seconds < time_limit;
      }
    } catch (const std::exception& e) {
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      r.pass = false;
      r.measured = std::nan("");
      r.limit = std::string("threw ") + e.what();
    }
    if (sink_) sink_(r);
    results_.push_back(std::move(r));
  }

  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  const std::function<void(const CheckResult&)>& sink_;
  std::vector<CheckResult> results_;
};

ScenarioConfig rotating_config(double omega0, double omega, double theta, double t_end, double dt,
                               std::vector<Analysis> analyses) {
  ScenarioConfig c;
  c.model = ModelKind::rotating;
  c.params = {omega0, omega, theta};
  c.t_end = t_end;
  c.dt = dt;
  c.analyses = std::move(analyses);
  return c;
}

double duality_mismatch(double dt) {
  const RotatingModelParams p{1.0, 0.1, kPi / 4};
  const auto src = rotating_hamiltonian(p);
  const TimeGrid grid = TimeGrid::spanning(0.0, 20 * kPi, dt);
  const auto trace = propagate(src, grid);
  return max_adjoint_mismatch(propagate(dual_source(src, trace), grid), trace);
}

double max_equivalence(const HamiltonianSource& src, const TimeGrid& grid) {
  const auto trace = propagate(src, grid);
  const auto frame = kernels::omp::build_eigenframe(src, grid);
  const auto series = kernels::omp::equivalence_residual_series(trace, frame);
  return *std::max_element(series.begin(), series.end());
}

double dual_min_fidelity(double theta) {
  auto c = rotating_config(1.0, 0.01, theta, 2 * kPi / 0.01, 0.05, {Analysis::adiabatic_dual});
  c.initial_state = "minus";
  const auto report = run_scenario(c).report;
  return *std::min_element(report.fidelity_dual.begin(), report.fidelity_dual.end());
}

double h_min_fidelity(double theta) {
  const auto c = rotating_config(1.0, 0.01, theta, 2 * kPi / 0.01, 0.05, {Analysis::adiabatic_h});
  const auto report = run_scenario(c).report;
  return *std::min_element(report.fidelity_h.begin(), report.fidelity_h.end());
}

double exact_error(const PropagatorTrace& trace, const RotatingModelParams& p) {
  double worst = 0.0;
  for (std::size_t k = 0; k < trace.U.size(); ++k)
    worst = std::max(worst, operator_distance(trace.U[k], rotating_exact_propagator(p, trace.grid.time(k))));
  return worst;
}

}  // namespace

VerifyLevel parse_level(std::string_view name) {
  if (name == "fast") return VerifyLevel::fast;
  if (name == "full") return VerifyLevel::full;
  throw Error(ErrorCode::ConfigError, "verify level must be fast or full");
}

std::vector<CheckResult> run_verification(VerifyLevel level, std::uint64_t seed,
                                          const std::function<void(const CheckResult&)>& on_result) {
  Runner run(on_result);
  const bool full = level == VerifyLevel::full;

  // 1. Dual source generates U†.
  double mismatch = 0.0;
  run.check("1", "duality_mismatch_dt1e-3", [&] {
    mismatch = duality_mismatch(1e-3);
    return at_most(mismatch, 1e-6);
  }, 5.0);
  run.check("1", "duality_halving_ratio", [&] {
    return within(mismatch / duality_mismatch(5e-4), 3.5, 4.5);
  });

  // 2. W† = U† U_adia V† at every node.
  for (double theta : {0.01, kPi / 4, kPi / 3}) {
    run.check("2", "equivalence_rotating_theta=" + short_real(theta), [&] {
      return at_most(max_equivalence(rotating_hamiltonian({1.0, 0.1, theta}), TimeGrid(0.0, 0.01, 6283)), 1e-12);
    });
  }
  if (full) {
    for (std::uint64_t s = seed + 1; s <= seed + 3; ++s) {
      run.check("2", "equivalence_random4x4_seed=" + std::to_string(s), [&] {
        const auto samples = sample_source(random_smooth_hamiltonian(4, s), 0.0, 0.05, 1001);
        return at_most(max_equivalence(sampled_hamiltonian(samples), TimeGrid(0.0, 0.01, 5000)), 1e-12);
      });
    }
  }

  // 3. Dual Hamiltonian precesses at nu.
  run.check("3", "nu_within_one_bin_omega=0.1", [&] {
    const auto c = rotating_config(1.0, 0.1, kPi / 4, 2000.0, 0.05, {Analysis::nu});
    const auto nu = *run_scenario(c).report.nu;
    return at_most(std::abs(nu.measured - *nu.predicted) / nu.bin, 1.0);
  }, 10.0);
  run.check("3", "nu_approaches_omega0_omega=0.01", [&] {
    const auto c = rotating_config(1.0, 0.01, kPi / 4, 2000.0, 0.05, {Analysis::nu});
    return at_most(std::abs(run_scenario(c).report.nu->measured - 1.0), 0.011);
  }, 10.0);

  // 4. Resonance dichotomy at omega/omega0 = 0.01, theta = pi/4.
  std::optional<ScenarioReport> resonance;
  auto resonance_run = [&]() -> const ScenarioReport& {
    if (!resonance) {
      resonance = run_scenario(rotating_config(1.0, 0.01, kPi / 4, 20 * 2 * kPi / 0.01, 0.5, {Analysis::resonance})).report;
    }
    return *resonance;
  };
  run.check("4", "h_frame_adiabatic_ratio", [&] {
    const auto& r = *resonance_run().resonance_h;
    Outcome o = at_most(r.verdict_ratio, 0.01);
    o.pass = o.pass && r.verdict == Verdict::Adiabatic;
    o.limit += ", Adiabatic";
    return o;
  });
  run.check("4", "dual_frame_resonant_ratio_over_tan", [&] {
    const auto& r = *resonance_run().resonance_dual;
    Outcome o = within(r.verdict_ratio / std::tan(kPi / 4), 0.95, 1.05);
    o.pass = o.pass && r.verdict == Verdict::Resonant;
    o.limit += ", Resonant";
    return o;
  });

  // 5. Fidelity limits.
  run.check("5", "dual_min_fidelity_theta=0.01", [&] { return at_least(dual_min_fidelity(0.01), 0.999); });
  run.check("5", "dual_min_fidelity_theta=pi/3", [&] { return within(dual_min_fidelity(kPi / 3), 0.23, 0.27); });
  std::vector<double> h_thetas{0.01, kPi / 4, kPi / 3};
  if (full) h_thetas = {0.01, 0.3, kPi / 4, kPi / 3, 1.2, kPi / 2};
  run.check("5", "h_min_fidelity_over_theta", [&] {
    double lowest = 1.0;
    for (double theta : h_thetas) lowest = std::min(lowest, h_min_fidelity(theta));
    return at_least(lowest, 0.999);
  });

  // 6. Inconsistency operator at t = pi/omega.
  std::optional<ScenarioRun> inconsistency;
  run.check("6", "inconsistency_distance", [&] {
    auto c = rotating_config(1.0, 0.01, kPi / 4, kPi / 0.01, 0.01, {Analysis::inconsistency});
    c.dt.reset();
    c.steps = 31416;
    inconsistency = run_scenario(c);
    return at_least(inconsistency->report.inconsistency_distance, 0.5);
  });
  run.check("6", "unitarity_alongside_inconsistency", [&] {
    if (!inconsistency) throw Error(ErrorCode::InvariantViolated, "inconsistency run failed");
    return at_most(inconsistency->trace.max_unitarity_residual, 1e-12);
  });

  // 7. H2_adia regenerates U_adia†.
  run.check("7", "h2_repropagation_dt1e-4", [&] {
    const RotatingModelParams p{1.0, 0.1, kPi / 4};
    const double dt = 1e-4;
    const std::size_t steps = 50000;
    const auto fine = kernels::omp::build_eigenframe(rotating_hamiltonian(p), TimeGrid(0.0, dt / 2, 2 * steps));
    const auto trace = propagate(h2_adia_source(fine), TimeGrid(0.0, dt, steps));
    double worst = 0.0;
    for (std::size_t j = 0; j <= steps; ++j)
      worst = std::max(worst, operator_distance(trace.U[j], adiabatic_propagator(fine, 2 * j).adjoint()));
    return at_most(worst, 1e-6);
  });

  // 8. Structural invariants.
  run.check("8", "unitarity_per_trace", [&] {
    double worst = 0.0;
    for (Method m : {Method::midpoint2, Method::magnus4})
      worst = std::max(worst, propagate(rotating_hamiltonian({1.0, 0.1, kPi / 4}), TimeGrid(0.0, 1e-3, 62832), m)
                                  .max_unitarity_residual);
    if (full) worst = std::max(worst, propagate(random_smooth_hamiltonian(4, seed + 7), TimeGrid(0.0, 0.01, 20000))
                                          .max_unitarity_residual);
    return at_most(worst, 1e-12);
  });
  run.check("8", "eigen_reconstruction", [&] {
    std::mt19937_64 rng(seed + 11);
    std::normal_distribution<double> g;
    double worst = 0.0;
    const std::size_t max_dim = full ? 8 : 2;
    for (std::size_t dim = 2; dim <= max_dim; ++dim)
      for (int trial = 0; trial < 50; ++trial) {
        ComplexMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i)
          for (std::size_t j = 0; j < dim; ++j) m(i, j) = cplx{g(rng), g(rng)};
        m = hermitian_part(m);
        const auto e = eig_hermitian(m);
        ComplexMatrix r(dim);
        for (std::size_t n = 0; n < dim; ++n) r += cplx{e.values[n]} * ComplexMatrix::outer(e.vectors[n], e.vectors[n]);
        worst = std::max(worst, operator_distance(r, m) / m.frobenius_norm());
      }
    const auto src = rotating_hamiltonian({1.0, 0.1, kPi / 3});
    const TimeGrid grid(0.0, 0.01, 2000);
    const auto frame = build_eigenframe(src, grid);
    for (std::size_t k = 0; k < frame.nodes(); ++k)
      worst = std::max(worst, operator_distance(frame.hamiltonian(k), src(grid.time(k))) /
                                  src(grid.time(k)).frobenius_norm());
    return at_most(worst, 1e-12);
  });
  run.check("8", "coupling_anti_hermiticity", [&] {
    double worst = 0.0;
    auto scan = [&](const EigenFrame& f) {
      for (std::size_t k = 1; k + 1 < f.nodes(); ++k) {
        const ComplexMatrix d = derivative_overlap(f, k);
        worst = std::max(worst, (d + d.adjoint()).frobenius_norm());
      }
    };
    scan(build_eigenframe(rotating_hamiltonian({1.0, 0.1, kPi / 4}), TimeGrid(0.0, 1e-3, 10000)));
    if (full) scan(build_eigenframe(random_smooth_hamiltonian(4, seed + 5), TimeGrid(0.0, 1e-3, 10000)));
    return at_most(worst, 1e-8);
  });
  run.check("8", "frame_norm_conservation_1e5_steps", [&] {
    const auto frame = build_eigenframe(rotating_hamiltonian({1.0, 0.1, kPi / 3}), TimeGrid(0.0, 0.01, 100000));
    const std::vector<cplx> phi0{0.6, cplx{0.0, 0.8}};
    return at_most(std::max(integrate_h_frame(frame, phi0).max_norm_drift(),
                            integrate_dual_frame(frame, phi0).max_norm_drift()),
                   1e-10);
  });

  if (full) {
    const RotatingModelParams p{1.0, 0.1, kPi / 4};
    const auto src = rotating_hamiltonian(p);
    run.check("order", "midpoint2_convergence_ratio", [&] {
      return within(exact_error(propagate(src, TimeGrid(0.0, 0.02, 1000)), p) /
                        exact_error(propagate(src, TimeGrid(0.0, 0.01, 2000)), p),
                    3.5, 4.5);
    });
    run.check("order", "magnus4_convergence_ratio", [&] {
      return within(exact_error(propagate(src, TimeGrid(0.0, 0.2, 100), Method::magnus4), p) /
                        exact_error(propagate(src, TimeGrid(0.0, 0.1, 200), Method::magnus4), p),
                    14.0, 18.0);
    });
    // The derived coupling phase must match the dual eigenframe; the opposite sign must not.
    const TimeGrid grid(0.0, 1e-3, 20000);
    const auto frame = build_eigenframe(src, grid);
    const auto dual = build_dual_frame(propagate(src, grid, Method::magnus4), frame);
    auto coupling_gap = [&](double sign) {
      double worst = 0.0;
      for (std::size_t k = 1; k + 1 < grid.nodes(); k += 97) {
        ComplexMatrix a = coupling_matrix(frame, k).entries;
        for (std::size_t i = 0; i < a.dim(); ++i)
          for (std::size_t j = 0; j < a.dim(); ++j)
            if (i != j) a(i, j) *= std::exp(kI * sign * (frame.phase_integral(i, k) - frame.phase_integral(j, k)));
        worst = std::max(worst, operator_distance(a, dual_frame_coupling(dual, k)));
      }
      return worst;
    };
    run.check("mutation", "dual_coupling_derived_sign", [&] { return at_most(coupling_gap(+1.0), 1e-5); });
    run.check("mutation", "dual_coupling_flipped_sign_rejected", [&] { return at_least(coupling_gap(-1.0), 1e-2); });
  }
  return run.take();
}

std::string format_check(const CheckResult& r) {
  std::ostringstream out;
  out << (r.pass ? "PASS" : "FAIL") << "  [" << r.criterion << "] " << r.name << "  measured=" << format_real(r.measured)
      << "  limit " << r.limit << "  (" << std::fixed;
  out.precision(2);
  out << r.seconds << " s)";
  return out.str();
}

}  // namespace adlab
