#include "adlab/linalg.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "adlab/models.hpp"
#include "test_util.hpp"

using namespace adlab;
using adlab::testing::random_hermitian;
using adlab::testing::sigma_x;
using adlab::testing::sigma_z;

namespace {

Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  Eigen::MatrixXcd out(m.dim(), m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) out(i, j) = m(i, j);
  return out;
}

ComplexMatrix reconstruct(const EigenDecomposition& e) {
  ComplexMatrix m(e.vectors.front().dim());
  for (std::size_t k = 0; k < e.values.size(); ++k)
    m += cplx{e.values[k]} * ComplexMatrix::outer(e.vectors[k], e.vectors[k]);
  return m;
}

}  // namespace

TEST(CheckHermitian, Examples) {
  EXPECT_TRUE(check_hermitian(sigma_z(), 1e-12));
  EXPECT_FALSE(check_hermitian(ComplexMatrix{{0.0, kI}, {kI, 0.0}}, 1e-12));
  RotatingModelParams p{1.0, 0.3, std::numbers::pi / 4};
  EXPECT_TRUE(check_hermitian(rotating_hamiltonian_at(p, 0.0), 1e-12));
}

TEST(EigHermitian, SigmaX) {
  const auto e = eig_hermitian(sigma_x());
  ASSERT_EQ(e.values.size(), 2u);
  EXPECT_NEAR(e.values[0], -1.0, 1e-15);
  EXPECT_NEAR(e.values[1], 1.0, 1e-15);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(e.vectors[0][0] - r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e.vectors[0][1] + r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e.vectors[1][0] - r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e.vectors[1][1] - r), 0.0, 1e-15);
  EXPECT_FALSE(e.degenerate);
}

TEST(EigHermitian, RotatingModelLevels) {
  for (double t : {0.0, 1.3, 17.0}) {
    for (double theta : {0.0, 0.4, std::numbers::pi / 2, 2.9}) {
      const auto e = eig_hermitian(rotating_hamiltonian_at({2.0, 0.1, theta}, t));
      EXPECT_NEAR(e.values[0], -1.0, 1e-14);
      EXPECT_NEAR(e.values[1], 1.0, 1e-14);
    }
  }
}

TEST(EigHermitian, PhaseConventionLargestComponentRealPositive) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto e = eig_hermitian(random_hermitian(5, rng));
    for (const auto& v : e.vectors) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < v.dim(); ++i)
        if (std::abs(v[i]) > std::abs(v[best]) * (1 + 1e-12)) best = i;
      EXPECT_EQ(v[best].imag(), 0.0);
      EXPECT_GT(v[best].real(), 0.0);
    }
  }
}

// Property: reconstruction, orthonormality, eigen-residual, ascending order,
// and agreement with Eigen's solver as an independent oracle.
TEST(EigHermitian, RandomHermitianProperties) {
  std::mt19937_64 rng(20240611);
  for (std::size_t dim = 2; dim <= 8; ++dim) {
    for (int trial = 0; trial < 25; ++trial) {
      const ComplexMatrix m = random_hermitian(dim, rng, 3.0);
      const double scale = m.frobenius_norm();
      const auto e = eig_hermitian(m);
      EXPECT_LE(operator_distance(reconstruct(e), m), 1e-12 * scale) << "dim " << dim;
      for (std::size_t a = 0; a < dim; ++a) {
        if (a + 1 < dim) EXPECT_LE(e.values[a], e.values[a + 1]);
        EXPECT_LE((m * e.vectors[a] - cplx{e.values[a]} * e.vectors[a]).norm(), 1e-10 * scale);
        for (std::size_t b = 0; b < dim; ++b) {
          const cplx ip = inner(e.vectors[a], e.vectors[b]);
          EXPECT_NEAR(std::abs(ip - cplx{a == b ? 1.0 : 0.0}), 0.0, 1e-12);
        }
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> oracle(to_eigen(m));
      for (std::size_t a = 0; a < dim; ++a)
        EXPECT_NEAR(e.values[a], oracle.eigenvalues()(static_cast<Eigen::Index>(a)), 1e-12 * scale);
    }
  }
}

TEST(EigHermitian, LargerJacobiConverges) {
  std::mt19937_64 rng(3);
  const ComplexMatrix m = random_hermitian(16, rng);
  const auto e = eig_hermitian(m);
  EXPECT_LE(operator_distance(reconstruct(e), m), 1e-12 * m.frobenius_norm());
}

TEST(EigHermitian, DegenerateFlag) {
  EXPECT_TRUE(eig_hermitian(ComplexMatrix::identity(3)).degenerate);
  EXPECT_TRUE(eig_hermitian(ComplexMatrix::identity(2)).degenerate);
  EXPECT_FALSE(eig_hermitian(sigma_z()).degenerate);
}

TEST(EigHermitian, Errors) {
  try {
    eig_hermitian(ComplexMatrix{{0.0, kI}, {kI, 0.0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotHermitian);
  }
  ComplexMatrix nan_matrix = sigma_z();
  nan_matrix(0, 0) = std::nan("");
  EXPECT_THROW(eig_hermitian(nan_matrix), Error);
}

TEST(Expm, Examples) {
  const ComplexMatrix u = expm_hermitian_generator(sigma_z(), std::numbers::pi);
  EXPECT_LE(operator_distance(u, cplx{-1.0} * ComplexMatrix::identity(2)), 1e-15);

  const ComplexMatrix half = expm_hermitian_generator(sigma_z(), std::numbers::pi / 2);
  EXPECT_LE(operator_distance(half, ComplexMatrix{{-kI, 0.0}, {0.0, kI}}), 1e-15);

  EXPECT_LE(operator_distance(expm_hermitian_generator(ComplexMatrix(3), 4.2),
                              ComplexMatrix::identity(3)),
            0.0);
}

TEST(Expm, UnitarityAndGroupProperty) {
  std::mt19937_64 rng(99);
  for (std::size_t dim : {2u, 3u, 4u, 6u}) {
    for (int trial = 0; trial < 10; ++trial) {
      const ComplexMatrix m = random_hermitian(dim, rng);
      const double s1 = 0.37 * (trial + 1), s2 = -1.1 + 0.2 * trial;
      const ComplexMatrix a = expm_hermitian_generator(m, s1);
      EXPECT_LE(unitarity_residual(a), 1e-13);
      EXPECT_LE(operator_distance(a * expm_hermitian_generator(m, s2),
                                  expm_hermitian_generator(m, s1 + s2)),
                1e-12);
    }
  }
}

TEST(Expm, MatchesEigenMatrixExponentialViaSeries) {
  // Independent route: exp(-iMs) by scaling and squaring a Taylor series.
  std::mt19937_64 rng(5);
  const ComplexMatrix m = random_hermitian(4, rng);
  const double s = 0.8;
  Eigen::MatrixXcd x = to_eigen(m) * std::complex<double>(0.0, -s / 1024.0);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(4, 4), sum = term;
  for (int n = 1; n < 20; ++n) {
    term = term * x / static_cast<double>(n);
    sum += term;
  }
  for (int i = 0; i < 10; ++i) sum = sum * sum;
  const ComplexMatrix u = expm_hermitian_generator(m, s);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      EXPECT_NEAR(std::abs(u(i, j) - sum(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))),
                  0.0, 1e-12);
}

TEST(OperatorDistance, Examples) {
  EXPECT_EQ(operator_distance(sigma_x(), sigma_x()), 0.0);
  EXPECT_NEAR(operator_distance(ComplexMatrix::identity(2), sigma_z()), 2.0, 1e-15);
  EXPECT_NEAR(spectral_distance(ComplexMatrix::identity(2), sigma_z()), 2.0, 1e-14);
  try {
    operator_distance(ComplexMatrix::identity(2), ComplexMatrix::identity(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(OperatorDistance, SpectralNormMatchesSingularValues) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  ComplexMatrix a(4), b(4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      a(i, j) = cplx{g(rng), g(rng)};
      b(i, j) = cplx{g(rng), g(rng)};
    }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(a - b));
  EXPECT_NEAR(spectral_distance(a, b), svd.singularValues()(0), 1e-12);
}
