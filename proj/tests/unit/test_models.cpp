#include "adlab/models.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>

#include <gtest/gtest.h>

#include "adlab/propagation.hpp"
#include "adlab/spectral_flow.hpp"
#include "test_util.hpp"

using namespace adlab;
using adlab::testing::sigma_x;
using adlab::testing::sigma_z;

namespace {

constexpr double kPi = std::numbers::pi;
const RotatingModelParams kModel{1.0, 0.1, kPi / 4};

}  // namespace

TEST(RotatingModel, Examples) {
  const RotatingModelParams flat{2.0, 0.3, 0.0};
  for (double t : {0.0, 1.0, 55.0})
    EXPECT_LE(operator_distance(rotating_hamiltonian_at(flat, t), cplx{-1.0} * sigma_z()), 1e-15);
  EXPECT_LE(operator_distance(rotating_hamiltonian_at({2.0, 0.3, kPi / 2}, 0.0), cplx{-1.0} * sigma_x()),
            1e-15);
}

TEST(RotatingModel, InvalidParams) {
  EXPECT_THROW((RotatingModelParams{0.0, 0.1, 0.3}.validate()), Error);
  EXPECT_THROW((RotatingModelParams{1.0, -0.1, 0.3}.validate()), Error);
  EXPECT_THROW((RotatingModelParams{1.0, 0.1, 3.5}.validate()), Error);
  try {
    rotating_hamiltonian({1.0, 0.1, -0.1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidParams);
  }
}

TEST(ExactPropagator, IdentityAtZeroAndUnitary) {
  EXPECT_LE(operator_distance(rotating_exact_propagator(kModel, 0.0), ComplexMatrix::identity(2)), 1e-15);
  for (double t = 0.0; t < 500.0; t += 13.7)
    EXPECT_LE(unitarity_residual(rotating_exact_propagator(kModel, t)), 1e-13);
}

// Frozen from tests/oracles/rotating_model_oracle.py (adaptive DOP853, rtol 1e-12).
TEST(ExactPropagator, MatchesIndependentOdeOracle) {
  const ComplexMatrix oracle{
      {cplx{-0.8552144259150586, -0.23663074223077346}, cplx{-0.1645896941808611, -0.43072544631995296}},
      {cplx{0.1645896941808608, -0.4307254463199527}, cplx{-0.8552144259150588, 0.23663074223077368}}};
  EXPECT_LE(operator_distance(rotating_exact_propagator(kModel, 7.3), oracle), 1e-10);
}

TEST(ExactPropagator, MatchesIntegrator) {
  const auto trace = propagate(rotating_hamiltonian(kModel), TimeGrid(0.0, 1e-4, 73000), Method::magnus4);
  EXPECT_LE(operator_distance(trace.U.back(), rotating_exact_propagator(kModel, 7.3)), 1e-8);
  const auto mid = propagate(rotating_hamiltonian(kModel), TimeGrid(0.0, 1e-4, 73000));
  EXPECT_LE(operator_distance(mid.U.back(), rotating_exact_propagator(kModel, 7.3)), 1e-7);
}

TEST(ExactPropagator, CoRotatingGroupProperty) {
  const ComplexMatrix heff = rotating_effective_hamiltonian(kModel);
  for (double t1 : {0.4, 3.3}) {
    for (double t2 : {1.1, 20.0}) {
      const ComplexMatrix frame = expm_hermitian_generator(cplx{0.5 * kModel.omega} * sigma_z(), t1 + t2);
      const ComplexMatrix composed =
          frame * expm_hermitian_generator(heff, t1) * expm_hermitian_generator(heff, t2);
      EXPECT_LE(operator_distance(composed, rotating_exact_propagator(kModel, t1 + t2)), 1e-12);
    }
  }
}

TEST(Nu, SplittingOfEffectiveGenerator) {
  for (const RotatingModelParams& p :
       {kModel, RotatingModelParams{1.0, 0.01, kPi / 4}, RotatingModelParams{2.5, 0.7, 2.0}}) {
    const auto e = eig_hermitian(rotating_effective_hamiltonian(p));
    EXPECT_NEAR(e.values[1] - e.values[0], rotating_nu(p), 1e-13);
  }
  EXPECT_NEAR(rotating_nu(kModel), 1.0730430355942437, 1e-15);
  EXPECT_NEAR(rotating_nu({1.0, 0.01, kPi / 4}), 1.0070958919704374, 1e-15);
}

TEST(Nu, SlowRotationLimit) {
  for (double theta = 0.0; theta <= kPi; theta += 0.25) {
    const RotatingModelParams p{1.0, 0.01, theta};
    EXPECT_LE(std::abs(rotating_nu(p) - p.omega0), 0.011 * p.omega0);
  }
}

TEST(Eigenspinors, FlatField) {
  for (double t : {0.0, 2.0, 100.0}) {
    const auto s = rotating_eigenspinors({1.0, 0.3, 0.0}, t);
    EXPECT_LE((s.plus - ComplexVector{1.0, 0.0}).norm(), 1e-15);
    EXPECT_LE((s.minus - ComplexVector{0.0, 1.0}).norm(), 1e-15);
  }
}

TEST(Eigenspinors, EigenResidualAndOrthonormality) {
  for (double theta : {0.0, 0.3, kPi / 4, kPi / 2, 2.5, kPi}) {
    const RotatingModelParams p{1.3, 0.2, theta};
    for (double t : {0.0, 0.7, 9.0, 123.4}) {
      const auto s = rotating_eigenspinors(p, t);
      const ComplexMatrix h = rotating_hamiltonian_at(p, t);
      EXPECT_LE((h * s.plus - cplx{s.plus_energy} * s.plus).norm(), 1e-12);
      EXPECT_LE((h * s.minus - cplx{s.minus_energy} * s.minus).norm(), 1e-12);
      EXPECT_NEAR(s.plus.norm(), 1.0, 1e-13);
      EXPECT_NEAR(s.minus.norm(), 1.0, 1e-13);
      EXPECT_LE(std::abs(inner(s.plus, s.minus)), 1e-13);
    }
  }
  const auto s = rotating_eigenspinors(kModel, 1.0);
  EXPECT_DOUBLE_EQ(s.plus_energy, -0.5);
  EXPECT_DOUBLE_EQ(s.minus_energy, 0.5);
}

TEST(Eigenspinors, ParallelTransportIsSecondOrder) {
  const double t = 3.0;
  auto residual = [&](double dt) {
    return std::abs(inner(rotating_eigenspinors(kModel, t).plus,
                          rotating_eigenspinors(kModel, t + dt).plus) - 1.0);
  };
  const double ratio = residual(1e-2) / residual(5e-3);
  EXPECT_GT(ratio, 3.5);
  EXPECT_LT(ratio, 4.5);
  const double h = 1e-4;
  const cplx d = inner(rotating_eigenspinors(kModel, t).plus,
                       rotating_eigenspinors(kModel, t + h).plus - rotating_eigenspinors(kModel, t - h).plus);
  EXPECT_LE(std::abs(d) / (2 * h), 1e-8);
}

TEST(Coupling, ClosedFormProperties) {
  for (double t : {0.0, 5.0, 77.0}) EXPECT_EQ(rotating_coupling({1.0, 0.4, 0.0}, t), cplx{0.0});
  for (double t : {0.0, 5.0, 77.0})
    EXPECT_NEAR(std::abs(rotating_coupling(kModel, t)), 0.05 * std::sin(kPi / 4), 1e-15);
}

TEST(Coupling, MatchesFiniteDifferenceOfSpinors) {
  const double h = 1e-4;
  for (double t : {0.5, 4.0, 31.0}) {
    const auto mid = rotating_eigenspinors(kModel, t);
    const ComplexVector dminus =
        cplx{1.0 / (2 * h)} *
        (rotating_eigenspinors(kModel, t + h).minus - rotating_eigenspinors(kModel, t - h).minus);
    EXPECT_LE(std::abs(-kI * inner(mid.plus, dminus) - rotating_coupling(kModel, t)), 1e-6);
  }
}

TEST(Coupling, MatchesFrameCouplingMatrix) {
  const TimeGrid grid(0.0, 1e-4, 60000);
  const auto frame = build_eigenframe(rotating_hamiltonian(kModel), grid);
  for (std::size_t k : {1u, 12345u, 59999u}) {
    const auto a = coupling_matrix(frame, k);
    EXPECT_LE(std::abs(a.entries(0, 1) - rotating_coupling(kModel, grid.time(k))), 1e-6) << k;
  }
}

TEST(SampledHamiltonian, ConstantFromIdenticalSamples) {
  const ComplexMatrix h{{1.0, cplx{0.0, 0.5}}, {cplx{0.0, -0.5}, -2.0}};
  const auto src = sampled_hamiltonian({{0.0, h}, {3.0, h}});
  for (double t : {0.0, 1.234, 3.0}) EXPECT_LE(operator_distance(src(t), h), 1e-15);
  EXPECT_THROW(src(3.1), Error);
  try {
    src(-0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SourceOutOfWindow);
  }
}

TEST(SampledHamiltonian, LinearInterpolation) {
  const ComplexMatrix a = sigma_z(), b = sigma_x();
  const auto src = sampled_hamiltonian({{1.0, a}, {2.0, b}});
  EXPECT_LE(operator_distance(src(1.25), cplx{0.75} * a + cplx{0.25} * b), 1e-15);
}

TEST(SampledHamiltonian, PropagationMatchesParametric) {
  const auto param = rotating_hamiltonian(kModel);
  const auto src = sampled_hamiltonian(sample_source(param, 0.0, 1e-3, 10001));
  const TimeGrid grid(0.0, 1e-3, 10000);
  const auto a = propagate(param, grid), b = propagate(src, grid);
  double worst = 0.0;
  for (std::size_t k = 0; k < a.U.size(); ++k) worst = std::max(worst, operator_distance(a.U[k], b.U[k]));
  EXPECT_LE(worst, 1e-6);
}

TEST(SampledHamiltonian, Errors) {
  auto expect_code = [](auto&& fn, ErrorCode code) {
    try {
      fn();
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), code);
    }
  };
  expect_code([] { sampled_hamiltonian({{1.0, sigma_z()}, {1.0, sigma_x()}}); }, ErrorCode::NonMonotoneTimes);
  expect_code([] { sampled_hamiltonian({{1.0, sigma_z()}, {0.5, sigma_x()}}); }, ErrorCode::NonMonotoneTimes);
  expect_code([] { sampled_hamiltonian({{0.0, sigma_z()}, {1.0, ComplexMatrix{{0.0, kI}, {kI, 0.0}}}}); },
              ErrorCode::NotHermitian);
  expect_code([] { sampled_hamiltonian({{0.0, sigma_z()}, {1.0, ComplexMatrix::identity(3)}}); },
              ErrorCode::DimensionMismatch);
}

TEST(SampledHamiltonian, JsonRoundTrip) {
  const auto samples = sample_source(random_smooth_hamiltonian(3, 42), 0.0, 0.5, 9);
  const auto path = std::filesystem::temp_directory_path() / "adlab_samples_roundtrip.json";
  save_samples(path, samples);
  const auto loaded = load_samples(path);
  std::filesystem::remove(path);
  ASSERT_EQ(loaded.size(), samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    EXPECT_EQ(loaded[k].t, samples[k].t);
    EXPECT_EQ(operator_distance(loaded[k].h, samples[k].h), 0.0);
  }
  EXPECT_THROW(load_samples(std::filesystem::temp_directory_path() / "adlab_missing.json"), Error);
}

TEST(RandomSmooth, DeterministicHermitianAndGapped) {
  const auto a = random_smooth_hamiltonian(4, 7), b = random_smooth_hamiltonian(4, 7);
  const auto c = random_smooth_hamiltonian(4, 8);
  EXPECT_EQ(operator_distance(a(3.3), b(3.3)), 0.0);
  EXPECT_GT(operator_distance(a(3.3), c(3.3)), 0.0);
  for (double t = 0.0; t < 100.0; t += 2.5) {
    const auto e = eig_hermitian(a(t));
    for (std::size_t n = 0; n + 1 < 4; ++n) EXPECT_GT(e.values[n + 1] - e.values[n], 0.5);
  }
}
