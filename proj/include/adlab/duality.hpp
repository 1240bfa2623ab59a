#pragma once

// Operators built around the dual Hamiltonian H(t) = -U† h U, whose
// evolution is U†(t): the dual eigenframe, the two adiabatic approximations
// to U† (V† and W†), and the adiabatic estimates of H itself.

#include <cstddef>
#include <vector>

#include "adlab/linalg.hpp"
#include "adlab/propagation.hpp"
#include "adlab/spectral_flow.hpp"

namespace adlab {

struct DualEigenFrame {
  TimeGrid grid;
  std::vector<std::vector<double>> eps;            // [n][k], equal to -eps of h
  std::vector<std::vector<ComplexVector>> vectors;  // [k][n], U†|n(t_k)> exp(-i Phi_n)
  double max_eigen_residual = 0.0;

  std::size_t levels() const { return eps.size(); }
  const ComplexVector& vector(std::size_t n, std::size_t k) const { return vectors[k][n]; }
};

// Throws GridMismatch; EigenResidualTooLarge if some vector misses 1e-9.
DualEigenFrame build_dual_frame(const PropagatorTrace& trace, const EigenFrame& frame);

// Finite-difference coupling -i <n;H| d/dt |m;H> of the dual frame (0 < k < steps).
ComplexMatrix dual_frame_coupling(const DualEigenFrame& dual, std::size_t k);

// Amplitudes phi^H_n = exp(-i Phi_n) <n(t_k);H|psi> of a state in the dual frame.
std::vector<cplx> project_dual_amplitudes(const DualEigenFrame& dual, const EigenFrame& frame,
                                          const ComplexVector& psi, std::size_t k);

// sum_n |n(0)><n(0)| exp(+i Phi_n(t_k))
ComplexMatrix v_dagger(const EigenFrame& frame, std::size_t k);

// sum_n U†(t_k) |n(t_k)><n(0)|
ComplexMatrix w_dagger(const PropagatorTrace& trace, const EigenFrame& frame, std::size_t k);

// U_adia(t_k) V†(t_k) = sum_n |n(t_k)><n(0)|
ComplexMatrix inconsistency_operator(const EigenFrame& frame, std::size_t k);

// ||W† - U† U_adia V†||_F; an operator identity, so rounding-level everywhere.
double equivalence_residual(const PropagatorTrace& trace, const EigenFrame& frame, std::size_t k);

// -U_adia† h(t_k) U_adia
ComplexMatrix h1_adia(const EigenFrame& frame, const HamiltonianSource& src, std::size_t k);

struct HermitizedGenerator {
  ComplexMatrix matrix;      // (M + M†)/2
  double asymmetry = 0.0;    // ||M - M†||_F / 2 before symmetrizing
};

// -i U_adia† dU_adia/dt by centered differences, 0 < k < steps.
HermitizedGenerator h2_adia(const EigenFrame& frame, std::size_t k);

// h2_adia at interior nodes, linearly interpolated on [t_1, t_{steps-1}].
HamiltonianSource h2_adia_source(const EigenFrame& frame);

}  // namespace adlab
