#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "adlab/linalg.hpp"
#include "adlab/source.hpp"

namespace adlab {

struct TimeGrid {
  double t_start = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;

  TimeGrid() = default;
  // Throws InvalidParams unless dt > 0 and steps > 0.
  TimeGrid(double t_start, double dt, std::size_t steps);
  // Uniform grid over [t_start, t_end] with steps = round((t_end - t_start)/dt).
  static TimeGrid spanning(double t_start, double t_end, double dt);

  double time(std::size_t k) const { return t_start + static_cast<double>(k) * dt; }
  double t_end() const { return time(steps); }
  std::size_t nodes() const { return steps + 1; }

  bool matches(const TimeGrid& other) const;
};

enum class Method { midpoint2, magnus4 };

std::string_view to_string(Method m);
Method parse_method(std::string_view name);

struct PropagatorTrace {
  TimeGrid grid;
  Method method = Method::midpoint2;
  std::vector<ComplexMatrix> U;  // one per node, U[0] = I
  // Per-level running integrals of the instantaneous energies; filled by
  // attach_phase_integrals() once an eigenframe exists.
  std::vector<std::vector<double>> phase_integrals;
  double max_unitarity_residual = 0.0;

  std::size_t dim() const { return U.empty() ? 0 : U.front().dim(); }
};

// Solves i dU/dt = h(t) U, U(t_start) = I, one exact exponential per step.
PropagatorTrace propagate(const HamiltonianSource& src, const TimeGrid& grid,
                          Method method = Method::midpoint2);

// One step U(t + dt) = step * U(t) of the chosen scheme.
ComplexMatrix step_operator(const HamiltonianSource& src, double t, double dt, Method method);

// H(t_k) = -U[k]† h(t_k) U[k]
ComplexMatrix dual_hamiltonian_at(const HamiltonianSource& src, const PropagatorTrace& trace,
                                  std::size_t k);

// H(t) as a source on the trace window. Off-node times advance U from the
// nearest node by one midpoint sub-step (ties go to the earlier node).
HamiltonianSource dual_source(const HamiltonianSource& src, const PropagatorTrace& trace);

// max_k ||A.U[k] - B.U[k]†||_F ; traces must share a grid.
double max_adjoint_mismatch(const PropagatorTrace& a, const PropagatorTrace& b);

}  // namespace adlab
