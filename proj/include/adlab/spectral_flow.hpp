#pragma once

// Instantaneous eigenframes in the discrete parallel-transport gauge, their
// couplings, and the two moving-frame Schrodinger equations.

#include <cstddef>
#include <span>
#include <vector>

#include "adlab/linalg.hpp"
#include "adlab/propagation.hpp"
#include "adlab/source.hpp"

namespace adlab {

class EigenFrame {
 public:
  EigenFrame(TimeGrid grid, std::vector<std::vector<double>> eps,
             std::vector<std::vector<ComplexVector>> vectors);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t levels() const noexcept { return eps_.size(); }
  std::size_t nodes() const noexcept { return vectors_.size(); }

  double energy(std::size_t n, std::size_t k) const { return eps_[n][k]; }
  const ComplexVector& vector(std::size_t n, std::size_t k) const { return vectors_[k][n]; }
  // Trapezoid-rule integral of energy n from t_start to t_k.
  double phase_integral(std::size_t n, std::size_t k) const { return phase_[n][k]; }
  const std::vector<std::vector<double>>& phase_integrals() const noexcept { return phase_; }

  // h(t_k) rebuilt from the frame: sum_n eps_n |n><n|.
  ComplexMatrix hamiltonian(std::size_t k) const;

  // Copy with branch n multiplied by exp(i phases[n]) at every node.
  EigenFrame with_branch_phases(std::span<const double> phases) const;

  void require_node(std::size_t k) const;
  void require_interior(std::size_t k) const;

 private:
  TimeGrid grid_;
  std::vector<std::vector<double>> eps_;               // [n][k]
  std::vector<std::vector<ComplexVector>> vectors_;   // [k][n]
  std::vector<std::vector<double>> phase_;             // [n][k]
};

// Per-node diagonalization, branch matching by maximal |overlap| with the
// previous node, and rephasing so successive overlaps are real positive.
// Throws DegenerateSpectrum (gap <= 1e-6 ||h||) and BranchMatchAmbiguous.
EigenFrame build_eigenframe(const HamiltonianSource& src, const TimeGrid& grid);

// Same, from precomputed per-node decompositions (see kernels::eigen_series).
EigenFrame build_eigenframe(const TimeGrid& grid, std::span<const EigenDecomposition> nodes,
                            std::span<const double> norms);

void attach_phase_integrals(PropagatorTrace& trace, const EigenFrame& frame);

struct CouplingMatrix {
  std::size_t k = 0;
  ComplexMatrix entries;  // A_nm, diagonal zero
};

// D_nm = <n(t_k)| (|m(t_{k+1})> - |m(t_{k-1})>) / (2 dt). Anti-Hermitian up to O(dt^2).
ComplexMatrix derivative_overlap(const EigenFrame& frame, std::size_t k);

// A_nm = -i D_nm with the diagonal dropped; Hermitian.
CouplingMatrix coupling_matrix(const EigenFrame& frame, std::size_t k);

// A_nm^H = A_nm exp(+i [Phi_n - Phi_m]), the coupling seen in the dual eigenframe.
CouplingMatrix dual_coupling(const EigenFrame& frame, std::size_t k);

// sum_n |n(t_k)><n(0)| exp(-i Phi_n(t_k))
ComplexMatrix adiabatic_propagator(const EigenFrame& frame, std::size_t k);

enum class FrameKind { h_frame, dual_frame };

struct FrameAmplitudes {
  FrameKind kind = FrameKind::h_frame;
  TimeGrid grid;
  std::vector<std::vector<cplx>> phi;  // [k][n]

  double max_norm_drift() const;
};

// i dphi_n/dt = sum_{m != n} A_nm exp(i [Phi_n - Phi_m]) phi_m
// Exactly unitary midpoint steps with A evaluated between nodes.
FrameAmplitudes integrate_h_frame(const EigenFrame& frame, std::span<const cplx> phi0,
                                  bool neglect_coupling = false);

// i dphi_n^H/dt = sum_{m != n} A_nm phi_m^H  (no oscillating factor)
FrameAmplitudes integrate_dual_frame(const EigenFrame& frame, std::span<const cplx> phi0,
                                     bool neglect_coupling = false);

// sum_n phi_n exp(-i Phi_n) |n(t_k)>
ComplexVector reconstruct_h_state(const EigenFrame& frame, const FrameAmplitudes& amps,
                                  std::size_t k);

// |<a, b>|^2; both inputs must be normalized within 1e-10 (NotNormalized).
double state_fidelity(const ComplexVector& a, const ComplexVector& b);

}  // namespace adlab
