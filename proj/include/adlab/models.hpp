#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "adlab/linalg.hpp"
#include "adlab/source.hpp"

namespace adlab {

// Spin-1/2 in a field of strength omega0 tilted by theta from z and rotating
// about z at angular frequency omega:
//   h(t) = -(omega0/2) [[cos th, sin th e^{-i w t}], [sin th e^{i w t}, -cos th]]
struct RotatingModelParams {
  double omega0 = 1.0;
  double omega = 0.0;
  double theta = 0.0;

  // Throws InvalidParams.
  void validate() const;
};

ComplexMatrix rotating_hamiltonian_at(const RotatingModelParams& p, double t);
HamiltonianSource rotating_hamiltonian(const RotatingModelParams& p);

// Constant generator in the frame co-rotating with the field,
//   h_eff = -(1/2) [(omega0 cos th + omega) sz + omega0 sin th sx],
// so that U(t) = exp(-i omega t sz / 2) exp(-i h_eff t).
ComplexMatrix rotating_effective_hamiltonian(const RotatingModelParams& p);
ComplexMatrix rotating_exact_propagator(const RotatingModelParams& p, double t);

// Splitting of h_eff: sqrt(omega0^2 + omega^2 + 2 omega0 omega cos th).
double rotating_nu(const RotatingModelParams& p);

// Parallel-transport eigenspinors. With the overall minus sign of h(t),
// `plus` carries energy -omega0/2 (solver index 0) and `minus` +omega0/2.
struct EigenSpinors {
  ComplexVector plus;
  ComplexVector minus;
  double plus_energy = 0.0;
  double minus_energy = 0.0;
};
EigenSpinors rotating_eigenspinors(const RotatingModelParams& p, double t);

// A_{+-}(t) = -i <+|d/dt|-> = (omega/2) sin th exp(-i omega t cos th)
cplx rotating_coupling(const RotatingModelParams& p, double t);

struct HamiltonianSample {
  double t = 0.0;
  ComplexMatrix h;
};

// Entrywise piecewise-linear interpolation; window is [first t, last t].
// Throws NonMonotoneTimes, NotHermitian, DimensionMismatch.
HamiltonianSource sampled_hamiltonian(std::vector<HamiltonianSample> samples);

// JSON: {"dim": n, "times": [...], "matrices": [[[re, im], ... n*n], ...]}
std::vector<HamiltonianSample> load_samples(const std::filesystem::path& path);
void save_samples(const std::filesystem::path& path, const std::vector<HamiltonianSample>& samples);

// Smooth, well-gapped random Hermitian family
//   h(t) = diag(0, 2, 4, ...) + sum_j sin(w_j t + phi_j) B_j,
// with three seeded random Hermitian B_j of norm ~0.3.
HamiltonianSource random_smooth_hamiltonian(std::size_t dim, std::uint64_t seed);

// Samples `src` at t_start + k * dt for k = 0..count-1.
std::vector<HamiltonianSample> sample_source(const HamiltonianSource& src, double t_start,
                                             double dt, std::size_t count);

}  // namespace adlab
