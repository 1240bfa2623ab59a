#include "adlab/kernels.hpp"

#include <cmath>

#if defined(ADLAB_HAVE_OPENMP)
#include <omp.h>
#endif

namespace adlab::kernels {

namespace {

struct SerialExec {
  template <class Fn>
  static void run(std::size_t n, Fn&& fn) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
  }
};

struct OmpExec {
  template <class Fn>
  static void run(std::size_t n, Fn&& fn) {
    parallel_for(n, std::forward<Fn>(fn));
  }
};

template <class Exec>
EigenSeries eigen_series_impl(const HamiltonianSource& src, const TimeGrid& grid) {
  EigenSeries out;
  out.decompositions.resize(grid.nodes());
  out.norms.resize(grid.nodes());
  Exec::run(grid.nodes(), [&](std::size_t k) {
    const ComplexMatrix h = src(grid.time(k));
    out.norms[k] = h.frobenius_norm();
    out.decompositions[k] = eig_hermitian(h);
  });
  return out;
}

template <class Exec>
std::vector<ComplexMatrix> dual_series_impl(const HamiltonianSource& src,
                                            const PropagatorTrace& trace) {
  std::vector<ComplexMatrix> out(trace.U.size());
  Exec::run(out.size(), [&](std::size_t k) { out[k] = dual_hamiltonian_at(src, trace, k); });
  return out;
}

template <class Exec>
std::vector<double> unitarity_impl(const PropagatorTrace& trace) {
  std::vector<double> out(trace.U.size());
  Exec::run(out.size(), [&](std::size_t k) { out[k] = unitarity_residual(trace.U[k]); });
  return out;
}

template <class Exec>
std::vector<double> equivalence_impl(const PropagatorTrace& trace, const EigenFrame& frame) {
  if (!trace.grid.matches(frame.grid())) throw Error(ErrorCode::GridMismatch, "trace vs frame");
  std::vector<double> out(frame.nodes());
  Exec::run(out.size(), [&](std::size_t k) { out[k] = equivalence_residual(trace, frame, k); });
  return out;
}

template <class Exec>
std::vector<ComplexMatrix> adiabatic_impl(const EigenFrame& frame) {
  std::vector<ComplexMatrix> out(frame.nodes());
  Exec::run(out.size(), [&](std::size_t k) { out[k] = adiabatic_propagator(frame, k); });
  return out;
}

template <class Exec>
std::vector<double> fidelity_impl(const PropagatorTrace& exact, const OperatorAt& approx,
                                  const ComplexVector& psi0) {
  if (std::abs(psi0.norm() - 1.0) > 1e-10) {
    throw Error(ErrorCode::NotNormalized, "initial state must be normalized");
  }
  std::vector<double> out(exact.U.size());
  Exec::run(out.size(), [&](std::size_t k) {
    out[k] = std::norm(inner(exact.U[k] * psi0, approx(k) * psi0));
  });
  return out;
}

}  // namespace

int max_threads() {
#if defined(ADLAB_HAVE_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace serial {
EigenSeries eigen_series(const HamiltonianSource& src, const TimeGrid& grid) {
  return eigen_series_impl<SerialExec>(src, grid);
}
EigenFrame build_eigenframe(const HamiltonianSource& src, const TimeGrid& grid) {
  const auto series = eigen_series(src, grid);
  return adlab::build_eigenframe(grid, series.decompositions, series.norms);
}
std::vector<ComplexMatrix> dual_hamiltonian_series(const HamiltonianSource& src,
                                                   const PropagatorTrace& trace) {
  return dual_series_impl<SerialExec>(src, trace);
}
std::vector<double> unitarity_series(const PropagatorTrace& trace) {
  return unitarity_impl<SerialExec>(trace);
}
std::vector<double> equivalence_residual_series(const PropagatorTrace& trace, const EigenFrame& frame) {
  return equivalence_impl<SerialExec>(trace, frame);
}
std::vector<ComplexMatrix> adiabatic_propagator_series(const EigenFrame& frame) {
  return adiabatic_impl<SerialExec>(frame);
}
std::vector<double> fidelity_series(const PropagatorTrace& exact, const OperatorAt& approx,
                                    const ComplexVector& psi0) {
  return fidelity_impl<SerialExec>(exact, approx, psi0);
}
}  // namespace serial

namespace omp {
EigenSeries eigen_series(const HamiltonianSource& src, const TimeGrid& grid) {
  return eigen_series_impl<OmpExec>(src, grid);
}
EigenFrame build_eigenframe(const HamiltonianSource& src, const TimeGrid& grid) {
  const auto series = eigen_series(src, grid);
  return adlab::build_eigenframe(grid, series.decompositions, series.norms);
}
std::vector<ComplexMatrix> dual_hamiltonian_series(const HamiltonianSource& src,
                                                   const PropagatorTrace& trace) {
  return dual_series_impl<OmpExec>(src, trace);
}
std::vector<double> unitarity_series(const PropagatorTrace& trace) {
  return unitarity_impl<OmpExec>(trace);
}
std::vector<double> equivalence_residual_series(const PropagatorTrace& trace, const EigenFrame& frame) {
  return equivalence_impl<OmpExec>(trace, frame);
}
std::vector<ComplexMatrix> adiabatic_propagator_series(const EigenFrame& frame) {
  return adiabatic_impl<OmpExec>(frame);
}
std::vector<double> fidelity_series(const PropagatorTrace& exact, const OperatorAt& approx,
                                    const ComplexVector& psi0) {
  return fidelity_impl<OmpExec>(exact, approx, psi0);
}
}  // namespace omp

}  // namespace adlab::kernels
