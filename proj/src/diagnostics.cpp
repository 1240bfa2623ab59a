#include "adlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

#include <fftw3.h>

namespace adlab {

namespace {

constexpr std::size_t kMinSamples = 64;
constexpr double kSecondaryPeakFraction = 0.25;

// fftw planning is not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<double> periodogram(std::span<const cplx> signal) {
  const std::size_t n = signal.size();
  auto* buffer = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  const double denom = static_cast<double>(n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    const double w = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(j) / denom));
    buffer[j][0] = w * signal[j].real();
    buffer[j][1] = w * signal[j].imag();
  }
  fftw_execute(plan);
  std::vector<double> power(n);
  for (std::size_t m = 0; m < n; ++m) power[m] = buffer[m][0] * buffer[m][0] + buffer[m][1] * buffer[m][1];
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buffer);
  return power;
}

std::size_t circular_distance(std::size_t a, std::size_t b, std::size_t n) {
  const std::size_t d = a > b ? a - b : b - a;
  return std::min(d, n - d);
}

}  // namespace

SpectralPeak spectral_peak(std::span<const cplx> signal, double dt) {
  const std::size_t n = signal.size();
  if (n < kMinSamples) {
    throw Error(ErrorCode::TooFewSamples,
                std::to_string(n) + " samples, need at least " + std::to_string(kMinSamples));
  }
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidParams, "dt must be positive");

  const auto power = periodogram(signal);
  SpectralPeak peak;
  peak.bin = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt);
  const auto best = static_cast<std::size_t>(
      std::distance(power.begin(), std::max_element(power.begin(), power.end())));
  peak.power = power[best];
  if (peak.power == 0.0) return peak;

  const double tiny = std::numeric_limits<double>::min();
  const double a = std::log(power[(best + n - 1) % n] + tiny);
  const double b = std::log(power[best] + tiny);
  const double c = std::log(power[(best + 1) % n] + tiny);
  const double curvature = a - 2.0 * b + c;
  const double offset = curvature < 0.0 ? std::clamp(0.5 * (a - c) / curvature, -0.5, 0.5) : 0.0;

  const double signed_index =
      (best <= n / 2 ? static_cast<double>(best) : static_cast<double>(best) - static_cast<double>(n));
  peak.frequency = (signed_index + offset) * peak.bin;

  for (std::size_t m = 0; m < n; ++m) {
    if (circular_distance(m, best, n) <= 2) continue;
    const double left = power[(m + n - 1) % n];
    const double right = power[(m + 1) % n];
    if (power[m] >= left && power[m] >= right && power[m] >= kSecondaryPeakFraction * peak.power) {
      peak.multi_peak = true;
      break;
    }
  }
  return peak;
}

double dominant_frequency(std::span<const cplx> signal, double dt) {
  return spectral_peak(signal, dt).frequency;
}

std::string_view to_string(Verdict v) { return v == Verdict::Adiabatic ? "Adiabatic" : "Resonant"; }

ResonanceReport resonance_report(const EigenFrame& frame, FrameKind mode, double threshold) {
  const std::size_t levels = frame.levels();
  const std::size_t interior = frame.nodes() >= 2 ? frame.nodes() - 2 : 0;
  if (interior < kMinSamples) {
    throw Error(ErrorCode::TooFewSamples, "resonance_report needs at least 64 interior nodes");
  }
  const std::size_t pairs = levels * (levels - 1) / 2;
  std::vector<std::vector<cplx>> bare(pairs, std::vector<cplx>(interior));
  std::vector<std::vector<cplx>> analyzed(pairs, std::vector<cplx>(interior));

  for (std::size_t k = 1; k + 1 < frame.nodes(); ++k) {
    const CouplingMatrix a = coupling_matrix(frame, k);
    std::size_t p = 0;
    for (std::size_t n = 0; n < levels; ++n)
      for (std::size_t m = n + 1; m < levels; ++m, ++p) {
        bare[p][k - 1] = a.entries(n, m);
        analyzed[p][k - 1] =
            mode == FrameKind::h_frame
                ? a.entries(n, m) *
                      std::exp(kI * (frame.phase_integral(n, k) - frame.phase_integral(m, k)))
                : a.entries(n, m);
      }
  }

  ResonanceReport report;
  report.mode = mode;
  report.threshold = threshold;
  const double dt = frame.grid().dt;
  std::size_t p = 0;
  for (std::size_t n = 0; n < levels; ++n)
    for (std::size_t m = n + 1; m < levels; ++m, ++p) {
      PairResonance pr;
      pr.n = n;
      pr.m = m;
      pr.gap = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < frame.nodes(); ++k) {
        pr.gap = std::min(pr.gap, std::abs(frame.energy(n, k) - frame.energy(m, k)));
      }
      for (const auto& z : bare[p]) pr.coupling_magnitude = std::max(pr.coupling_magnitude, std::abs(z));
      pr.rabi_frequency = 2.0 * pr.coupling_magnitude;

      if (pr.coupling_magnitude <= 1e-12 * std::max(1.0, pr.gap)) {
        // Nothing is neglected.
        pr.detuning = mode == FrameKind::h_frame ? pr.gap : 0.0;
        pr.verdict_ratio = 0.0;
      } else {
        const SpectralPeak term = spectral_peak(analyzed[p], dt);
        pr.dominant_frequency = term.frequency;
        pr.multi_peak = term.multi_peak;
        pr.coupling_frequency =
            mode == FrameKind::h_frame ? dominant_frequency(bare[p], dt) : term.frequency;
        pr.detuning = std::abs(term.frequency);
        pr.verdict_ratio = pr.detuning > 0.0 ? pr.rabi_frequency / pr.detuning
                                             : std::numeric_limits<double>::infinity();
      }
      report.pairs.push_back(pr);
    }

  const auto worst = std::max_element(
      report.pairs.begin(), report.pairs.end(),
      [](const PairResonance& x, const PairResonance& y) { return x.verdict_ratio < y.verdict_ratio; });
  report.coupling_magnitude = worst->coupling_magnitude;
  report.rabi_frequency = worst->rabi_frequency;
  report.gap = worst->gap;
  report.dominant_frequency = worst->dominant_frequency;
  report.detuning = worst->detuning;
  report.verdict_ratio = worst->verdict_ratio;
  report.verdict = report.verdict_ratio <= threshold ? Verdict::Adiabatic : Verdict::Resonant;
  return report;
}

std::vector<FidelityPoint> fidelity_trace(const PropagatorTrace& exact, const OperatorAt& approx,
                                          const ComplexVector& psi0) {
  if (std::abs(psi0.norm() - 1.0) > 1e-10) {
    throw Error(ErrorCode::NotNormalized, "initial state must be normalized");
  }
  std::vector<FidelityPoint> out;
  out.reserve(exact.U.size());
  for (std::size_t k = 0; k < exact.U.size(); ++k) {
    const ComplexMatrix a = approx(k);
    if (a.dim() != psi0.dim()) throw Error(ErrorCode::GridMismatch, "approximation has wrong dim");
    out.push_back({exact.grid.time(k), std::norm(inner(exact.U[k] * psi0, a * psi0))});
  }
  return out;
}

double min_fidelity(std::span<const FidelityPoint> trace) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& p : trace) lo = std::min(lo, p.fidelity);
  return lo;
}

NuCheck nu_check(std::span<const ComplexMatrix> dual_series, double dt, std::size_t i,
                 std::size_t j, const std::optional<RotatingModelParams>& model) {
  if (dual_series.empty() || i >= dual_series.front().dim() || j >= dual_series.front().dim()) {
    throw Error(ErrorCode::IndexOutOfRange, "matrix element outside the Hamiltonian");
  }
  std::vector<cplx> series;
  series.reserve(dual_series.size());
  cplx mean = 0.0;
  for (const auto& h : dual_series) {
    series.push_back(h(i, j));
    mean += h(i, j);
  }
  mean /= static_cast<double>(series.size());
  double spread = 0.0;
  for (auto& z : series) {
    z -= mean;
    spread = std::max(spread, std::abs(z));
  }

  NuCheck out;
  if (model) out.predicted = rotating_nu(*model);
  out.bin = 2.0 * std::numbers::pi / (static_cast<double>(series.size()) * dt);
  if (spread <= 1e-9 * (1.0 + std::abs(mean))) {
    out.dc_only = true;
    return out;
  }
  const SpectralPeak peak = spectral_peak(series, dt);
  out.measured = std::abs(peak.frequency);
  out.bin = peak.bin;
  out.pass = out.predicted && std::abs(out.measured - *out.predicted) <= out.bin;
  return out;
}

NuCheck nu_check(const HamiltonianSource& src, const PropagatorTrace& trace, std::size_t i,
                 std::size_t j, const std::optional<RotatingModelParams>& model) {
  std::vector<ComplexMatrix> series;
  series.reserve(trace.U.size());
  for (std::size_t k = 0; k < trace.U.size(); ++k) series.push_back(dual_hamiltonian_at(src, trace, k));
  return nu_check(series, trace.grid.dt, i, j, model);
}

}  // namespace adlab
