#include "adlab/duality.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "adlab/models.hpp"

namespace adlab {

namespace {

constexpr double kEigenResidualTol = 1e-9;

void require_shared_grid(const PropagatorTrace& trace, const EigenFrame& frame) {
  if (!trace.grid.matches(frame.grid()) || trace.dim() != frame.levels()) {
    throw Error(ErrorCode::GridMismatch, "trace and frame do not share a grid");
  }
}

}  // namespace

DualEigenFrame build_dual_frame(const PropagatorTrace& trace, const EigenFrame& frame) {
  require_shared_grid(trace, frame);
  const std::size_t levels = frame.levels();
  DualEigenFrame dual;
  dual.grid = frame.grid();
  dual.eps.assign(levels, std::vector<double>(frame.nodes()));
  dual.vectors.resize(frame.nodes());

  for (std::size_t k = 0; k < frame.nodes(); ++k) {
    const ComplexMatrix u_dag = trace.U[k].adjoint();
    const ComplexMatrix dual_h = cplx{-1.0} * (u_dag * frame.hamiltonian(k) * trace.U[k]);
    dual.vectors[k].reserve(levels);
    for (std::size_t n = 0; n < levels; ++n) {
      dual.eps[n][k] = -frame.energy(n, k);
      ComplexVector v = std::exp(-kI * frame.phase_integral(n, k)) * (u_dag * frame.vector(n, k));
      const double residual = (dual_h * v - cplx{dual.eps[n][k]} * v).norm();
      dual.max_eigen_residual = std::max(dual.max_eigen_residual, residual);
      dual.vectors[k].push_back(std::move(v));
    }
  }
  if (dual.max_eigen_residual > kEigenResidualTol) {
    std::ostringstream msg;
    msg << "dual eigenvector residual " << dual.max_eigen_residual;
    throw Error(ErrorCode::EigenResidualTooLarge, msg.str());
  }
  return dual;
}

ComplexMatrix dual_frame_coupling(const DualEigenFrame& dual, std::size_t k) {
  if (k == 0 || k + 1 >= dual.vectors.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "dual coupling needs an interior node");
  }
  const std::size_t n = dual.levels();
  const double inv = 0.5 / dual.grid.dt;
  ComplexMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      a(i, j) = cplx{0.0, -inv} * (inner(dual.vector(i, k), dual.vector(j, k + 1)) -
                                   inner(dual.vector(i, k), dual.vector(j, k - 1)));
    }
  return a;
}

std::vector<cplx> project_dual_amplitudes(const DualEigenFrame& dual, const EigenFrame& frame,
                                          const ComplexVector& psi, std::size_t k) {
  frame.require_node(k);
  std::vector<cplx> phi(dual.levels());
  for (std::size_t n = 0; n < dual.levels(); ++n) {
    phi[n] = std::exp(-kI * frame.phase_integral(n, k)) * inner(dual.vector(n, k), psi);
  }
  return phi;
}

ComplexMatrix v_dagger(const EigenFrame& frame, std::size_t k) {
  frame.require_node(k);
  ComplexMatrix v(frame.levels());
  for (std::size_t n = 0; n < frame.levels(); ++n) {
    v += std::exp(kI * frame.phase_integral(n, k)) *
         ComplexMatrix::outer(frame.vector(n, 0), frame.vector(n, 0));
  }
  return v;
}

ComplexMatrix w_dagger(const PropagatorTrace& trace, const EigenFrame& frame, std::size_t k) {
  require_shared_grid(trace, frame);
  frame.require_node(k);
  const ComplexMatrix u_dag = trace.U[k].adjoint();
  ComplexMatrix w(frame.levels());
  for (std::size_t n = 0; n < frame.levels(); ++n) {
    w += ComplexMatrix::outer(u_dag * frame.vector(n, k), frame.vector(n, 0));
  }
  return w;
}

ComplexMatrix inconsistency_operator(const EigenFrame& frame, std::size_t k) {
  frame.require_node(k);
  ComplexMatrix m(frame.levels());
  for (std::size_t n = 0; n < frame.levels(); ++n) {
    m += ComplexMatrix::outer(frame.vector(n, k), frame.vector(n, 0));
  }
  return m;
}

double equivalence_residual(const PropagatorTrace& trace, const EigenFrame& frame, std::size_t k) {
  const ComplexMatrix w = w_dagger(trace, frame, k);
  const ComplexMatrix product =
      trace.U[k].adjoint() * adiabatic_propagator(frame, k) * v_dagger(frame, k);
  return operator_distance(w, product);
}

ComplexMatrix h1_adia(const EigenFrame& frame, const HamiltonianSource& src, std::size_t k) {
  const ComplexMatrix u = adiabatic_propagator(frame, k);
  return hermitian_part(cplx{-1.0} * (u.adjoint() * src(frame.grid().time(k)) * u));
}

HermitizedGenerator h2_adia(const EigenFrame& frame, std::size_t k) {
  frame.require_interior(k);
  const ComplexMatrix derivative =
      cplx{0.5 / frame.grid().dt} *
      (adiabatic_propagator(frame, k + 1) - adiabatic_propagator(frame, k - 1));
  const ComplexMatrix raw = cplx{0.0, -1.0} * (adiabatic_propagator(frame, k).adjoint() * derivative);
  return {hermitian_part(raw), 0.5 * operator_distance(raw, raw.adjoint())};
}

HamiltonianSource h2_adia_source(const EigenFrame& frame) {
  if (frame.nodes() < 4) {
    throw Error(ErrorCode::IndexOutOfRange, "h2_adia_source needs at least two interior nodes");
  }
  std::vector<HamiltonianSample> samples;
  samples.reserve(frame.nodes() - 2);
  for (std::size_t k = 1; k + 1 < frame.nodes(); ++k) {
    samples.push_back({frame.grid().time(k), h2_adia(frame, k).matrix});
  }
  return sampled_hamiltonian(std::move(samples));
}

}  // namespace adlab
