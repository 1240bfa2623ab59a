#pragma once

// Dense complex linear algebra for small Hermitian problems (dim <= 64).

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "adlab/error.hpp"

namespace adlab {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

class ComplexVector {
 public:
  ComplexVector() = default;
  explicit ComplexVector(std::size_t dim) : data_(dim) {}
  ComplexVector(std::initializer_list<cplx> values) : data_(values) {}
  explicit ComplexVector(std::vector<cplx> values) : data_(std::move(values)) {}

  std::size_t dim() const noexcept { return data_.size(); }
  cplx& operator[](std::size_t i) { return data_[i]; }
  const cplx& operator[](std::size_t i) const { return data_[i]; }

  std::span<const cplx> entries() const noexcept { return data_; }
  std::span<cplx> entries() noexcept { return data_; }

  double norm() const;
  ComplexVector normalized() const;

  ComplexVector& operator*=(cplx s);
  ComplexVector& operator+=(const ComplexVector& o);
  ComplexVector& operator-=(const ComplexVector& o);

  friend ComplexVector operator*(cplx s, ComplexVector v) { return v *= s; }
  friend ComplexVector operator+(ComplexVector a, const ComplexVector& b) { return a += b; }
  friend ComplexVector operator-(ComplexVector a, const ComplexVector& b) { return a -= b; }

 private:
  std::vector<cplx> data_;
};

// <a, b>, conjugate-linear in the first argument.
cplx inner(const ComplexVector& a, const ComplexVector& b);

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}
  // Row-major; throws DimensionMismatch unless rows form a square.
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);
  ComplexMatrix(std::size_t dim, std::vector<cplx> row_major);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const cplx> diag);
  static ComplexMatrix outer(const ComplexVector& ket, const ComplexVector& bra);

  std::size_t dim() const noexcept { return dim_; }
  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  std::span<const cplx> entries() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  double frobenius_norm() const;
  bool all_finite() const;
  ComplexVector column(std::size_t j) const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexVector operator*(const ComplexMatrix& a, const ComplexVector& v);

 private:
  std::size_t dim_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
// (M + M†)/2
ComplexMatrix hermitian_part(const ComplexMatrix& m);

struct EigenDecomposition {
  std::vector<double> values;          // ascending
  std::vector<ComplexVector> vectors;  // orthonormal, vectors[k] pairs with values[k]
  bool degenerate = false;             // some gap < 1e-9 * ||M||
};

bool check_hermitian(const ComplexMatrix& m, double tol);

// dim 2: closed form; dim > 2: cyclic complex Jacobi. Each eigenvector is
// rephased so its largest-magnitude component is real and positive.
EigenDecomposition eig_hermitian(const ComplexMatrix& m);

// exp(-i * M * s) for Hermitian M.
ComplexMatrix expm_hermitian_generator(const ComplexMatrix& m, double s);

double operator_distance(const ComplexMatrix& a, const ComplexMatrix& b);
double spectral_distance(const ComplexMatrix& a, const ComplexMatrix& b);

// ||U†U - I||_F
double unitarity_residual(const ComplexMatrix& u);

}  // namespace adlab
