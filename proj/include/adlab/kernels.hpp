#pragma once

// Batch evaluations over grid nodes. Each kernel exists twice: `serial` is
// the reference loop, `omp` splits nodes across OpenMP threads. Both produce
// identical results (every node is computed by the same code).

#include <cstddef>
#include <exception>
#include <vector>

#include "adlab/diagnostics.hpp"
#include "adlab/duality.hpp"
#include "adlab/linalg.hpp"
#include "adlab/propagation.hpp"
#include "adlab/spectral_flow.hpp"

namespace adlab::kernels {

struct EigenSeries {
  std::vector<EigenDecomposition> decompositions;
  std::vector<double> norms;
};

int max_threads();

// Runs fn(i) for i in [0, n) across OpenMP threads; the first exception is rethrown.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  std::exception_ptr error;
#if defined(ADLAB_HAVE_OPENMP)
#pragma omp parallel for schedule(static)
#endif
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#if defined(ADLAB_HAVE_OPENMP)
#pragma omp critical(adlab_parallel_for_error)
#endif
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

namespace serial {
EigenSeries eigen_series(const HamiltonianSource& src, const TimeGrid& grid);
EigenFrame build_eigenframe(const HamiltonianSource& src, const TimeGrid& grid);
std::vector<ComplexMatrix> dual_hamiltonian_series(const HamiltonianSource& src,
                                                   const PropagatorTrace& trace);
std::vector<double> unitarity_series(const PropagatorTrace& trace);
std::vector<double> equivalence_residual_series(const PropagatorTrace& trace, const EigenFrame& frame);
std::vector<ComplexMatrix> adiabatic_propagator_series(const EigenFrame& frame);
std::vector<double> fidelity_series(const PropagatorTrace& exact, const OperatorAt& approx,
                                    const ComplexVector& psi0);
}  // namespace serial

namespace omp {
EigenSeries eigen_series(const HamiltonianSource& src, const TimeGrid& grid);
EigenFrame build_eigenframe(const HamiltonianSource& src, const TimeGrid& grid);
std::vector<ComplexMatrix> dual_hamiltonian_series(const HamiltonianSource& src,
                                                   const PropagatorTrace& trace);
std::vector<double> unitarity_series(const PropagatorTrace& trace);
std::vector<double> equivalence_residual_series(const PropagatorTrace& trace, const EigenFrame& frame);
std::vector<ComplexMatrix> adiabatic_propagator_series(const EigenFrame& frame);
std::vector<double> fidelity_series(const PropagatorTrace& exact, const OperatorAt& approx,
                                    const ComplexVector& psi0);
}  // namespace omp

}  // namespace adlab::kernels
