#include "adlab/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

namespace adlab {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

void require_index(const PropagatorTrace& trace, std::size_t k) {
  if (k >= trace.U.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "node " + std::to_string(k) + " of " + std::to_string(trace.U.size()));
  }
}

// One Newton-Schulz step toward the nearest unitary.
void polish_unitary(ComplexMatrix& u) {
  const ComplexMatrix gram = u.adjoint() * u;
  const ComplexMatrix identity = ComplexMatrix::identity(u.dim());
  if (operator_distance(gram, identity) <= 1e-14) return;
  u = u * (cplx{1.5} * identity - cplx{0.5} * gram);
}

}  // namespace

TimeGrid::TimeGrid(double t_start_, double dt_, std::size_t steps_)
    : t_start(t_start_), dt(dt_), steps(steps_) {
  if (!(dt > 0.0) || !std::isfinite(dt) || !std::isfinite(t_start) || steps == 0) {
    throw Error(ErrorCode::InvalidParams, "time grid needs finite dt > 0 and steps > 0");
  }
}

TimeGrid TimeGrid::spanning(double t_start, double t_end, double dt) {
  if (!(dt > 0.0) || !(t_end > t_start)) {
    throw Error(ErrorCode::InvalidParams, "time grid needs t_end > t_start and dt > 0");
  }
  const auto steps = static_cast<std::size_t>(std::llround((t_end - t_start) / dt));
  return TimeGrid(t_start, dt, std::max<std::size_t>(steps, 1));
}

bool TimeGrid::matches(const TimeGrid& other) const {
  const double scale = std::max({1.0, std::abs(t_start), std::abs(other.t_start)});
  return steps == other.steps && std::abs(t_start - other.t_start) <= 1e-12 * scale &&
         std::abs(dt - other.dt) <= 1e-12 * dt;
}

std::string_view to_string(Method m) {
  return m == Method::midpoint2 ? "midpoint2" : "magnus4";
}

Method parse_method(std::string_view name) {
  if (name == "midpoint2") return Method::midpoint2;
  if (name == "magnus4") return Method::magnus4;
  throw Error(ErrorCode::ConfigError, "unknown method '" + std::string(name) + "'");
}

ComplexMatrix step_operator(const HamiltonianSource& src, double t, double dt, Method method) {
  if (method == Method::midpoint2) {
    return expm_hermitian_generator(src(t + 0.5 * dt), dt);
  }
  // Fourth-order Magnus with two Gauss-Legendre nodes:
  // Omega = -i dt (h1 + h2)/2 - (sqrt3/12) dt^2 [h2, h1], written as -i dt G.
  const ComplexMatrix h1 = src(t + (0.5 - kSqrt3 / 6.0) * dt);
  const ComplexMatrix h2 = src(t + (0.5 + kSqrt3 / 6.0) * dt);
  ComplexMatrix g = cplx{0.5} * (h1 + h2);
  g += cplx{0.0, -kSqrt3 / 12.0 * dt} * commutator(h2, h1);
  return expm_hermitian_generator(hermitian_part(g), dt);
}

PropagatorTrace propagate(const HamiltonianSource& src, const TimeGrid& grid, Method method) {
  PropagatorTrace trace;
  trace.grid = grid;
  trace.method = method;
  trace.U.reserve(grid.nodes());
  trace.U.push_back(ComplexMatrix::identity(src.dim()));
  for (std::size_t k = 0; k < grid.steps; ++k) {
    ComplexMatrix next = step_operator(src, grid.time(k), grid.dt, method) * trace.U.back();
    polish_unitary(next);
    trace.max_unitarity_residual =
        std::max(trace.max_unitarity_residual, unitarity_residual(next));
    trace.U.push_back(std::move(next));
  }
  return trace;
}

ComplexMatrix dual_hamiltonian_at(const HamiltonianSource& src, const PropagatorTrace& trace,
                                  std::size_t k) {
  require_index(trace, k);
  const ComplexMatrix& u = trace.U[k];
  const ComplexMatrix h = src(trace.grid.time(k));
  ComplexMatrix dual = cplx{-1.0} * (u.adjoint() * h * u);
  if (!check_hermitian(dual, 1e-12 * std::max(1.0, dual.frobenius_norm()))) {
    throw Error(ErrorCode::NotHermitian, "dual Hamiltonian lost Hermiticity at node " +
                                             std::to_string(k));
  }
  return hermitian_part(dual);
}

HamiltonianSource dual_source(const HamiltonianSource& src, const PropagatorTrace& trace) {
  auto shared = std::make_shared<const PropagatorTrace>(trace);
  const TimeGrid grid = trace.grid;
  auto rule = [src, shared, grid](double t) -> ComplexMatrix {
    const double x = (t - grid.t_start) / grid.dt;
    const double lower = std::clamp(std::floor(x), 0.0, static_cast<double>(grid.steps));
    const double frac = x - lower;
    std::size_t node = static_cast<std::size_t>(lower);
    if (frac > 0.5 && node < grid.steps) ++node;
    const double offset = t - grid.time(node);
    if (std::abs(offset) <= 1e-12 * grid.dt) return dual_hamiltonian_at(src, *shared, node);

    const ComplexMatrix u =
        expm_hermitian_generator(src(grid.time(node) + 0.5 * offset), offset) * shared->U[node];
    return hermitian_part(cplx{-1.0} * (u.adjoint() * src(t) * u));
  };
  return HamiltonianSource(src.dim(), std::move(rule), TimeWindow{grid.t_start, grid.t_end()},
                           "dual(" + src.label() + ")");
}

double max_adjoint_mismatch(const PropagatorTrace& a, const PropagatorTrace& b) {
  if (!a.grid.matches(b.grid)) throw Error(ErrorCode::GridMismatch, "traces on different grids");
  double worst = 0.0;
  for (std::size_t k = 0; k < a.U.size(); ++k) {
    worst = std::max(worst, operator_distance(a.U[k], b.U[k].adjoint()));
  }
  return worst;
}

}  // namespace adlab
