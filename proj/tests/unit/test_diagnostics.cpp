#include "adlab/diagnostics.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "adlab/duality.hpp"
#include "adlab/models.hpp"

using namespace adlab;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<cplx> tone(double freq, double dt, std::size_t n, cplx scale = 1.0) {
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = scale * std::exp(kI * freq * dt * static_cast<double>(k));
  return out;
}

EigenFrame slow_frame(double theta, double omega = 0.01) {
  // Twenty rotation periods resolve the slow dual-frame detuning to a few percent.
  return build_eigenframe(rotating_hamiltonian({1.0, omega, theta}),
                          TimeGrid::spanning(0.0, 20 * 2 * kPi / omega, 0.5));
}

// min_k |<n(0)|n(t_k)>|^2 over one rotation period: fidelity of W† psi0 against U† psi0.
double dual_min_fidelity(double theta, double omega) {
  const RotatingModelParams p{1.0, omega, theta};
  const TimeGrid grid = TimeGrid::spanning(0.0, 2 * kPi / omega, 0.05);
  const auto src = rotating_hamiltonian(p);
  const auto trace = propagate(src, grid);
  const auto frame = build_eigenframe(src, grid);
  PropagatorTrace dual = trace;
  for (auto& u : dual.U) u = u.adjoint();
  const ComplexVector psi0 = frame.vector(1, 0);  // ground state of H(0) = -h(0)
  return min_fidelity(fidelity_trace(dual, [&](std::size_t k) { return w_dagger(trace, frame, k); }, psi0));
}

}  // namespace

TEST(SpectralPeak, PureTone) {
  const auto s = tone(-3.0, 0.01, 4096);
  const auto peak = spectral_peak(s, 0.01);
  EXPECT_NEAR(peak.frequency, -3.0, peak.bin);
  EXPECT_NEAR(peak.bin, 2 * kPi / (4096 * 0.01), 1e-15);
  EXPECT_FALSE(peak.multi_peak);
}

TEST(SpectralPeak, InvariantUnderPhaseAndScale) {
  const double dt = 0.05;
  const double f = dominant_frequency(tone(1.234, dt, 2000), dt);
  for (cplx scale : {cplx{3.0}, std::polar(1.0, 2.1), std::polar(0.01, -0.7)}) {
    const double g = dominant_frequency(tone(1.234, dt, 2000, scale), dt);
    EXPECT_NEAR(g, f, 1e-9);
    EXPECT_NEAR(g, 1.234, 2 * kPi / (2000 * dt));
  }
}

TEST(SpectralPeak, SignedFrequenciesAndMultiPeak) {
  const double dt = 0.1;
  auto s = tone(2.0, dt, 1024);
  EXPECT_NEAR(dominant_frequency(s, dt), 2.0, 2 * kPi / (1024 * dt));
  const auto other = tone(-1.0, dt, 1024, 0.9);
  for (std::size_t k = 0; k < s.size(); ++k) s[k] += other[k];
  EXPECT_TRUE(spectral_peak(s, dt).multi_peak);
}

TEST(SpectralPeak, Errors) {
  try {
    dominant_frequency(tone(1.0, 0.1, 63), 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewSamples);
  }
  EXPECT_THROW(dominant_frequency(tone(1.0, 0.1, 100), 0.0), Error);
}

TEST(NeglectedTerms, FrequenciesInBothFrames) {
  const RotatingModelParams p{1.0, 0.1, kPi / 4};
  const TimeGrid grid(0.0, 0.05, 20000);
  const auto frame = build_eigenframe(rotating_hamiltonian(p), grid);
  std::vector<cplx> h_term, dual_term;
  for (std::size_t k = 1; k < grid.steps; ++k) {
    h_term.push_back(coupling_matrix(frame, k).entries(0, 1) *
                     std::exp(kI * (frame.phase_integral(0, k) - frame.phase_integral(1, k))));
    dual_term.push_back(coupling_matrix(frame, k).entries(0, 1));
  }
  const auto hp = spectral_peak(h_term, grid.dt);
  const auto dp = spectral_peak(dual_term, grid.dt);
  EXPECT_NEAR(hp.frequency, -(p.omega0 + p.omega * std::cos(p.theta)), hp.bin);
  EXPECT_NEAR(dp.frequency, -p.omega * std::cos(p.theta), dp.bin);
}

TEST(Resonance, SlowRotationDichotomy) {
  const double theta = kPi / 4;
  const auto frame = slow_frame(theta);
  const auto h = resonance_report(frame, FrameKind::h_frame);
  EXPECT_EQ(h.verdict, Verdict::Adiabatic);
  EXPECT_LE(h.verdict_ratio, 0.01);
  EXPECT_NEAR(h.coupling_magnitude, 0.005 * std::sin(theta), 1e-6);
  EXPECT_NEAR(h.gap, 1.0, 1e-12);

  const auto d = resonance_report(frame, FrameKind::dual_frame);
  EXPECT_EQ(d.verdict, Verdict::Resonant);
  EXPECT_NEAR(d.verdict_ratio, std::tan(theta), 0.05 * std::tan(theta));
  EXPECT_NEAR(d.detuning, 0.01 * std::cos(theta), 0.05 * 0.01 * std::cos(theta));

  for (const auto* r : {&h, &d}) {
    EXPECT_GE(r->coupling_magnitude, 0.0);
    EXPECT_GE(r->gap, 0.0);
    EXPECT_GE(r->detuning, 0.0);
    EXPECT_GE(r->verdict_ratio, 0.0);
    EXPECT_EQ(r->pairs.size(), 1u);
  }
}

TEST(Resonance, SmallTiltIsAdiabaticInDualFrame) {
  const auto d = resonance_report(slow_frame(0.01), FrameKind::dual_frame);
  EXPECT_EQ(d.verdict, Verdict::Adiabatic);
  EXPECT_NEAR(d.verdict_ratio, std::tan(0.01), 0.05 * std::tan(0.01));
}

TEST(Resonance, ThetaSweepTransition) {
  const double threshold = 0.1;
  for (double theta : {0.0, 0.02, 0.06, 0.085, 0.115, 0.2, 0.6, 1.0, 1.4, kPi / 2}) {
    const auto frame = slow_frame(theta);
    const auto h = resonance_report(frame, FrameKind::h_frame, threshold);
    const auto d = resonance_report(frame, FrameKind::dual_frame, threshold);
    EXPECT_EQ(h.verdict, Verdict::Adiabatic) << theta;
    const Verdict expected = std::tan(theta) <= threshold ? Verdict::Adiabatic : Verdict::Resonant;
    EXPECT_EQ(d.verdict, expected) << theta << " ratio " << d.verdict_ratio;
  }
}

TEST(Resonance, ZeroCouplingIsAdiabatic) {
  const auto frame = slow_frame(0.0);
  const auto d = resonance_report(frame, FrameKind::dual_frame);
  EXPECT_EQ(d.verdict, Verdict::Adiabatic);
  EXPECT_EQ(d.verdict_ratio, 0.0);
}

TEST(Resonance, ConfigurableThreshold) {
  const auto frame = slow_frame(0.3);
  EXPECT_EQ(resonance_report(frame, FrameKind::dual_frame, 0.1).verdict, Verdict::Resonant);
  EXPECT_EQ(resonance_report(frame, FrameKind::dual_frame, 0.5).verdict, Verdict::Adiabatic);
}

TEST(Fidelity, IdentityApproximation) {
  const auto src = rotating_hamiltonian({1.0, 0.1, 0.7});
  const auto trace = propagate(src, TimeGrid(0.0, 0.01, 500));
  const ComplexVector psi0{std::sqrt(0.5), cplx{0.0, std::sqrt(0.5)}};
  const auto f = fidelity_trace(trace, [&](std::size_t k) { return trace.U[k]; }, psi0);
  ASSERT_EQ(f.size(), 501u);
  for (const auto& pt : f) EXPECT_NEAR(pt.fidelity, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(f[100].t, 1.0);
  EXPECT_THROW(fidelity_trace(trace, [&](std::size_t k) { return trace.U[k]; }, ComplexVector{1.0, 1.0}),
               Error);
}

TEST(Fidelity, HFrameAdiabaticAtSlowRotation) {
  for (double theta : {0.01, 0.3, kPi / 4, kPi / 3, 1.4}) {
    const RotatingModelParams p{1.0, 0.01, theta};
    const TimeGrid grid = TimeGrid::spanning(0.0, 2 * kPi / p.omega, 0.05);
    const auto src = rotating_hamiltonian(p);
    const auto trace = propagate(src, grid);
    const auto frame = build_eigenframe(src, grid);
    const auto f = fidelity_trace(trace, [&](std::size_t k) { return adiabatic_propagator(frame, k); },
                                  frame.vector(0, 0));
    EXPECT_GE(min_fidelity(f), 0.999) << theta;
    for (const auto& pt : f) EXPECT_LE(pt.fidelity, 1.0 + 1e-10);
  }
}

TEST(Fidelity, DualFrameLimits) {
  EXPECT_GE(dual_min_fidelity(0.01, 0.01), 0.999);
  EXPECT_NEAR(dual_min_fidelity(kPi / 3, 0.01), 0.25, 0.02);
  const double a = dual_min_fidelity(0.1, 0.01), b = dual_min_fidelity(0.3, 0.01),
               c = dual_min_fidelity(0.6, 0.01);
  EXPECT_GT(a, b);
  EXPECT_GT(b, c);
}

TEST(NuCheck, PrintedModel) {
  const RotatingModelParams p{1.0, 0.1, kPi / 4};
  const auto src = rotating_hamiltonian(p);
  const auto trace = propagate(src, TimeGrid(0.0, 0.05, 40000), Method::magnus4);
  const auto nu = nu_check(src, trace, 0, 0, p);
  ASSERT_TRUE(nu.predicted.has_value());
  EXPECT_NEAR(*nu.predicted, 1.0730430355942437, 1e-15);
  EXPECT_TRUE(nu.pass) << nu.measured;
  EXPECT_NEAR(nu.measured, *nu.predicted, nu.bin);
  EXPECT_FALSE(nu.dc_only);
}

TEST(NuCheck, SlowRotationApproachesSplitting) {
  const RotatingModelParams p{1.0, 0.01, kPi / 4};
  const auto src = rotating_hamiltonian(p);
  const auto trace = propagate(src, TimeGrid(0.0, 0.05, 40000), Method::magnus4);
  const auto nu = nu_check(src, trace, 0, 0, p);
  EXPECT_LE(std::abs(nu.measured - p.omega0), 0.011);
  EXPECT_TRUE(nu.pass);
}

TEST(NuCheck, StaticFieldIsDcOnly) {
  const RotatingModelParams p{1.0, 0.0, kPi / 4};
  const auto src = rotating_hamiltonian(p);
  const auto trace = propagate(src, TimeGrid(0.0, 0.1, 500));
  const auto nu = nu_check(src, trace, 0, 0, p);
  EXPECT_TRUE(nu.dc_only);
  EXPECT_FALSE(nu.pass);
}

TEST(NuCheck, WithoutModelReportsMeasuredOnly) {
  const auto src = random_smooth_hamiltonian(2, 3);
  const auto trace = propagate(src, TimeGrid(0.0, 0.05, 4000));
  const auto nu = nu_check(src, trace, 0, 0, std::nullopt);
  EXPECT_FALSE(nu.predicted.has_value());
  EXPECT_FALSE(nu.pass);
  EXPECT_GT(nu.measured, 0.0);
  EXPECT_THROW(nu_check(src, trace, 2, 0, std::nullopt), Error);
}
