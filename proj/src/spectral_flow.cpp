#include "adlab/spectral_flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace adlab {

namespace {

constexpr double kMinRelativeGap = 1e-6;
constexpr double kAmbiguousOverlap = 1e-3;
constexpr double kNormalizedTol = 1e-10;

// Hermitian generator between nodes k and k+1 from the overlaps
// O_nm = <n(t_k)|m(t_{k+1})>: A = -i (O - O†) / (2 dt).
ComplexMatrix midpoint_coupling(const EigenFrame& frame, std::size_t k) {
  const std::size_t n = frame.levels();
  ComplexMatrix o(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) o(a, b) = inner(frame.vector(a, k), frame.vector(b, k + 1));
  ComplexMatrix coupling = cplx{0.0, -0.5 / frame.grid().dt} * (o - o.adjoint());
  for (std::size_t a = 0; a < n; ++a) coupling(a, a) = 0.0;
  return coupling;
}

FrameAmplitudes integrate_frame(const EigenFrame& frame, std::span<const cplx> phi0,
                                bool neglect_coupling, FrameKind kind) {
  const std::size_t n = frame.levels();
  if (phi0.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "initial amplitudes do not match frame levels");
  }
  FrameAmplitudes out;
  out.kind = kind;
  out.grid = frame.grid();
  out.phi.reserve(frame.nodes());
  out.phi.emplace_back(phi0.begin(), phi0.end());
  const double dt = frame.grid().dt;

  for (std::size_t k = 0; k + 1 < frame.nodes(); ++k) {
    const auto& prev = out.phi.back();
    if (neglect_coupling) {
      out.phi.push_back(prev);
      continue;
    }
    ComplexMatrix g = midpoint_coupling(frame, k);
    if (kind == FrameKind::h_frame) {
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
          if (a == b) continue;
          const double phase =
              0.5 * (frame.phase_integral(a, k) + frame.phase_integral(a, k + 1) -
                     frame.phase_integral(b, k) - frame.phase_integral(b, k + 1));
          g(a, b) *= std::exp(kI * phase);
        }
      g = hermitian_part(g);
    }
    const ComplexVector next = expm_hermitian_generator(g, dt) * ComplexVector(prev);
    out.phi.emplace_back(next.entries().begin(), next.entries().end());
  }
  return out;
}

}  // namespace

EigenFrame::EigenFrame(TimeGrid grid, std::vector<std::vector<double>> eps,
                       std::vector<std::vector<ComplexVector>> vectors)
    : grid_(grid), eps_(std::move(eps)), vectors_(std::move(vectors)) {
  if (vectors_.size() != grid_.nodes()) {
    throw Error(ErrorCode::GridMismatch, "frame vectors do not cover the grid");
  }
  for (const auto& row : eps_) {
    if (row.size() != grid_.nodes()) throw Error(ErrorCode::GridMismatch, "energies vs grid");
  }
  phase_.assign(eps_.size(), std::vector<double>(grid_.nodes(), 0.0));
  for (std::size_t n = 0; n < eps_.size(); ++n)
    for (std::size_t k = 1; k < grid_.nodes(); ++k)
      phase_[n][k] = phase_[n][k - 1] + 0.5 * grid_.dt * (eps_[n][k - 1] + eps_[n][k]);
}

ComplexMatrix EigenFrame::hamiltonian(std::size_t k) const {
  require_node(k);
  ComplexMatrix h(levels());
  for (std::size_t n = 0; n < levels(); ++n) {
    h += cplx{eps_[n][k]} * ComplexMatrix::outer(vectors_[k][n], vectors_[k][n]);
  }
  return h;
}

EigenFrame EigenFrame::with_branch_phases(std::span<const double> phases) const {
  if (phases.size() != levels()) throw Error(ErrorCode::DimensionMismatch, "one phase per branch");
  auto vectors = vectors_;
  for (auto& node : vectors)
    for (std::size_t n = 0; n < node.size(); ++n) node[n] *= std::exp(kI * phases[n]);
  return EigenFrame(grid_, eps_, std::move(vectors));
}

void EigenFrame::require_node(std::size_t k) const {
  if (k >= nodes()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "node " + std::to_string(k) + " of " + std::to_string(nodes()));
  }
}

void EigenFrame::require_interior(std::size_t k) const {
  if (k == 0 || k + 1 >= nodes()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "node " + std::to_string(k) + " is not interior (need 0 < k < " +
                    std::to_string(nodes() - 1) + ")");
  }
}

EigenFrame build_eigenframe(const HamiltonianSource& src, const TimeGrid& grid) {
  std::vector<EigenDecomposition> nodes;
  std::vector<double> norms;
  nodes.reserve(grid.nodes());
  norms.reserve(grid.nodes());
  for (std::size_t k = 0; k < grid.nodes(); ++k) {
    const ComplexMatrix h = src(grid.time(k));
    norms.push_back(h.frobenius_norm());
    nodes.push_back(eig_hermitian(h));
  }
  return build_eigenframe(grid, nodes, norms);
}

EigenFrame build_eigenframe(const TimeGrid& grid, std::span<const EigenDecomposition> nodes,
                            std::span<const double> norms) {
  if (nodes.size() != grid.nodes() || norms.size() != grid.nodes()) {
    throw Error(ErrorCode::GridMismatch, "decompositions do not cover the grid");
  }
  const std::size_t levels = nodes.front().values.size();
  std::vector<std::vector<double>> eps(levels, std::vector<double>(grid.nodes()));
  std::vector<std::vector<ComplexVector>> vectors(grid.nodes());

  for (std::size_t k = 0; k < grid.nodes(); ++k) {
    const auto& eig = nodes[k];
    for (std::size_t i = 0; i + 1 < levels; ++i) {
      if (eig.values[i + 1] - eig.values[i] <= kMinRelativeGap * norms[k]) {
        std::ostringstream msg;
        msg << "gap " << eig.values[i + 1] - eig.values[i] << " at t=" << grid.time(k);
        throw Error(ErrorCode::DegenerateSpectrum, msg.str());
      }
    }
    if (k == 0) {
      vectors[0] = eig.vectors;
      for (std::size_t n = 0; n < levels; ++n) eps[n][0] = eig.values[n];
      continue;
    }

    std::vector<ComplexVector> matched(levels);
    std::vector<bool> taken(levels, false);
    for (std::size_t n = 0; n < levels; ++n) {
      const ComplexVector& prev = vectors[k - 1][n];
      std::size_t best = 0;
      double best_mag = -1.0, runner_up = -1.0;
      cplx best_overlap = 0.0;
      for (std::size_t m = 0; m < levels; ++m) {
        const cplx o = inner(prev, eig.vectors[m]);
        const double mag = std::abs(o);
        if (mag > best_mag) {
          runner_up = best_mag;
          best_mag = mag;
          best = m;
          best_overlap = o;
        } else if (mag > runner_up) {
          runner_up = mag;
        }
      }
      if (best_mag - runner_up < kAmbiguousOverlap || taken[best] || best_mag == 0.0) {
        std::ostringstream msg;
        msg << "branch " << n << " at t=" << grid.time(k) << " (overlaps " << best_mag << ", "
            << runner_up << ")";
        throw Error(ErrorCode::BranchMatchAmbiguous, msg.str());
      }
      taken[best] = true;
      matched[n] = std::conj(best_overlap) / best_mag * eig.vectors[best];
      eps[n][k] = eig.values[best];
    }
    vectors[k] = std::move(matched);
  }
  return EigenFrame(grid, std::move(eps), std::move(vectors));
}

void attach_phase_integrals(PropagatorTrace& trace, const EigenFrame& frame) {
  if (!trace.grid.matches(frame.grid())) {
    throw Error(ErrorCode::GridMismatch, "trace and frame grids differ");
  }
  trace.phase_integrals = frame.phase_integrals();
}

ComplexMatrix derivative_overlap(const EigenFrame& frame, std::size_t k) {
  frame.require_interior(k);
  const std::size_t n = frame.levels();
  const double inv = 0.5 / frame.grid().dt;
  ComplexMatrix d(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      d(a, b) = inv * (inner(frame.vector(a, k), frame.vector(b, k + 1)) -
                       inner(frame.vector(a, k), frame.vector(b, k - 1)));
    }
  return d;
}

CouplingMatrix coupling_matrix(const EigenFrame& frame, std::size_t k) {
  ComplexMatrix a = cplx{0.0, -1.0} * derivative_overlap(frame, k);
  for (std::size_t i = 0; i < a.dim(); ++i) a(i, i) = 0.0;
  return {k, std::move(a)};
}

CouplingMatrix dual_coupling(const EigenFrame& frame, std::size_t k) {
  CouplingMatrix c = coupling_matrix(frame, k);
  for (std::size_t a = 0; a < c.entries.dim(); ++a)
    for (std::size_t b = 0; b < c.entries.dim(); ++b) {
      if (a == b) continue;
      c.entries(a, b) *= std::exp(kI * (frame.phase_integral(a, k) - frame.phase_integral(b, k)));
    }
  return c;
}

ComplexMatrix adiabatic_propagator(const EigenFrame& frame, std::size_t k) {
  frame.require_node(k);
  ComplexMatrix u(frame.levels());
  for (std::size_t n = 0; n < frame.levels(); ++n) {
    u += std::exp(-kI * frame.phase_integral(n, k)) *
         ComplexMatrix::outer(frame.vector(n, k), frame.vector(n, 0));
  }
  return u;
}

double FrameAmplitudes::max_norm_drift() const {
  auto norm2 = [](const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return s;
  };
  const double ref = phi.empty() ? 0.0 : norm2(phi.front());
  double worst = 0.0;
  for (const auto& v : phi) worst = std::max(worst, std::abs(norm2(v) - ref));
  return worst;
}

FrameAmplitudes integrate_h_frame(const EigenFrame& frame, std::span<const cplx> phi0,
                                  bool neglect_coupling) {
  return integrate_frame(frame, phi0, neglect_coupling, FrameKind::h_frame);
}

FrameAmplitudes integrate_dual_frame(const EigenFrame& frame, std::span<const cplx> phi0,
                                     bool neglect_coupling) {
  return integrate_frame(frame, phi0, neglect_coupling, FrameKind::dual_frame);
}

ComplexVector reconstruct_h_state(const EigenFrame& frame, const FrameAmplitudes& amps,
                                  std::size_t k) {
  frame.require_node(k);
  ComplexVector psi(frame.levels());
  for (std::size_t n = 0; n < frame.levels(); ++n) {
    psi += (amps.phi[k][n] * std::exp(-kI * frame.phase_integral(n, k))) * frame.vector(n, k);
  }
  return psi;
}

double state_fidelity(const ComplexVector& a, const ComplexVector& b) {
  if (std::abs(a.norm() - 1.0) > kNormalizedTol || std::abs(b.norm() - 1.0) > kNormalizedTol) {
    throw Error(ErrorCode::NotNormalized, "state_fidelity needs unit vectors");
  }
  return std::norm(inner(a, b));
}

}  // namespace adlab
