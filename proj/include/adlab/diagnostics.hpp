#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adlab/linalg.hpp"
#include "adlab/models.hpp"
#include "adlab/propagation.hpp"
#include "adlab/spectral_flow.hpp"

namespace adlab {

struct SpectralPeak {
  double frequency = 0.0;  // angular, signed, in (-pi/dt, pi/dt]
  double bin = 0.0;        // 2 pi / (N dt)
  double power = 0.0;
  bool multi_peak = false;  // another local maximum >= 25% of the peak power
};

// Hann-windowed periodogram of complex samples; the strongest bin is refined
// by a parabola through the log-power of its neighbours. Needs >= 64 samples.
SpectralPeak spectral_peak(std::span<const cplx> signal, double dt);
double dominant_frequency(std::span<const cplx> signal, double dt);

enum class Verdict { Adiabatic, Resonant };
std::string_view to_string(Verdict v);

struct PairResonance {
  std::size_t n = 0;
  std::size_t m = 0;
  double coupling_magnitude = 0.0;   // max_k |A_nm|
  double rabi_frequency = 0.0;       // 2 * coupling_magnitude
  double gap = 0.0;                  // min_k |eps_n - eps_m|
  double coupling_frequency = 0.0;   // dominant frequency of A_nm alone
  double dominant_frequency = 0.0;   // dominant frequency of the analyzed term
  double detuning = 0.0;             // |dominant_frequency|
  double verdict_ratio = 0.0;        // rabi_frequency / detuning
  bool multi_peak = false;
};

struct ResonanceReport {
  FrameKind mode = FrameKind::h_frame;
  double threshold = 0.1;
  Verdict verdict = Verdict::Adiabatic;
  // Fields of the pair with the largest verdict_ratio.
  double coupling_magnitude = 0.0;
  double rabi_frequency = 0.0;
  double gap = 0.0;
  double dominant_frequency = 0.0;
  double detuning = 0.0;
  double verdict_ratio = 0.0;
  std::vector<PairResonance> pairs;
};

// The analyzed term for pair (n, m) is the neglected off-diagonal entry of the
// moving-frame equation: A_nm exp(i [Phi_n - Phi_m]) in the h frame, A_nm alone
// in the dual frame. Adiabatic iff verdict_ratio <= threshold.
ResonanceReport resonance_report(const EigenFrame& frame, FrameKind mode, double threshold = 0.1);

struct FidelityPoint {
  double t = 0.0;
  double fidelity = 0.0;
};

using OperatorAt = std::function<ComplexMatrix(std::size_t)>;

// F(t_k) = |<U[k] psi0, approx(k) psi0>|^2
std::vector<FidelityPoint> fidelity_trace(const PropagatorTrace& exact, const OperatorAt& approx,
                                          const ComplexVector& psi0);
double min_fidelity(std::span<const FidelityPoint> trace);

struct NuCheck {
  double measured = 0.0;
  std::optional<double> predicted;
  double bin = 0.0;
  bool dc_only = false;
  bool pass = false;
};

// Dominant frequency of the mean-removed H(t_k)_{ij} series; `model` supplies
// the closed-form prediction sqrt(w0^2 + w^2 + 2 w0 w cos th).
NuCheck nu_check(const HamiltonianSource& src, const PropagatorTrace& trace, std::size_t i,
                 std::size_t j, const std::optional<RotatingModelParams>& model);
// Same on a precomputed dual Hamiltonian series.
NuCheck nu_check(std::span<const ComplexMatrix> dual_series, double dt, std::size_t i,
                 std::size_t j, const std::optional<RotatingModelParams>& model);

struct ResidualPoint {
  double t = 0.0;
  double unitarity = 0.0;
  double duality = 0.0;
  double equivalence = 0.0;
};

struct ScenarioReport {
  std::string label;
  std::optional<RotatingModelParams> params;
  std::vector<double> times;
  std::vector<double> fidelity_h;
  std::vector<double> fidelity_dual;
  std::vector<ResidualPoint> residuals;
  std::optional<ResonanceReport> resonance_h;
  std::optional<ResonanceReport> resonance_dual;
  std::optional<NuCheck> nu;
  double max_unitarity = 0.0;
  double max_duality = 0.0;
  double max_equivalence = 0.0;
  double inconsistency_distance = 0.0;  // ||U_adia V† - I||_F at the final node
};

}  // namespace adlab
