#include "adlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace adlab {

namespace {

constexpr int kMaxJacobiSweeps = 64;
constexpr double kJacobiOffTol = 1e-13;
constexpr double kDegenerateGap = 1e-9;

void require_same_dim(std::size_t a, std::size_t b, const char* where) {
  if (a != b) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(where) + ": " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

// Largest-magnitude component real positive; first index wins within rounding.
void fix_phase(ComplexVector& v) {
  double best = 0.0;
  for (std::size_t i = 0; i < v.dim(); ++i) best = std::max(best, std::abs(v[i]));
  if (best == 0.0) return;
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (std::abs(v[i]) >= best * (1.0 - 1e-12)) {
      v *= std::conj(v[i]) / std::abs(v[i]);
      v[i] = std::abs(v[i]);
      return;
    }
  }
}

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

EigenDecomposition eig_two_by_two(const ComplexMatrix& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const cplx b = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
  const double mean = 0.5 * (a + d);
  const double half_diff = 0.5 * (a - d);
  const double r = std::hypot(half_diff, std::abs(b));

  EigenDecomposition out;
  out.values = {mean - r, mean + r};
  if (r == 0.0) {
    out.vectors = {ComplexVector{1.0, 0.0}, ComplexVector{0.0, 1.0}};
    return out;
  }
  // Upper eigenvector, picking the formula without cancellation.
  ComplexVector upper = half_diff >= 0.0 ? ComplexVector{half_diff + r, std::conj(b)}
                                         : ComplexVector{b, r - half_diff};
  upper = upper.normalized();
  ComplexVector lower{-std::conj(upper[1]), std::conj(upper[0])};
  out.vectors = {lower, upper};
  return out;
}

EigenDecomposition eig_jacobi(const ComplexMatrix& m, double scale) {
  const std::size_t n = m.dim();
  ComplexMatrix a = hermitian_part(m);
  ComplexMatrix v = ComplexMatrix::identity(n);

  int sweep = 0;
  while (off_diagonal_norm(a) > kJacobiOffTol * scale) {
    if (++sweep > kMaxJacobiSweeps) {
      throw Error(ErrorCode::NoConvergence,
                  "Jacobi exceeded " + std::to_string(kMaxJacobiSweeps) + " sweeps");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const cplx phase = apq / mag;
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx s_phase = s * phase;
        const cplx s_conj_phase = s * std::conj(phase);

        // A <- A J, V <- V J
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s_conj_phase * akq;
          a(k, q) = s_phase * akp + c * akq;
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s_conj_phase * vkq;
          v(k, q) = s_phase * vkp + c * vkq;
        }
        // A <- J† A
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s_phase * aqk;
          a(q, k) = s_conj_phase * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });

  EigenDecomposition out;
  out.values.reserve(n);
  out.vectors.reserve(n);
  for (std::size_t idx : order) {
    out.values.push_back(a(idx, idx).real());
    out.vectors.push_back(v.column(idx));
  }
  return out;
}

}  // namespace

double ComplexVector::norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

ComplexVector ComplexVector::normalized() const {
  const double n = norm();
  ComplexVector out(*this);
  if (n > 0.0) out *= 1.0 / n;
  return out;
}

ComplexVector& ComplexVector::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexVector& ComplexVector::operator+=(const ComplexVector& o) {
  require_same_dim(dim(), o.dim(), "vector add");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexVector& ComplexVector::operator-=(const ComplexVector& o) {
  require_same_dim(dim(), o.dim(), "vector subtract");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

cplx inner(const ComplexVector& a, const ComplexVector& b) {
  require_same_dim(a.dim(), b.dim(), "inner");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
    : dim_(rows.size()) {
  data_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    require_same_dim(row.size(), dim_, "matrix literal");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<cplx> row_major)
    : dim_(dim), data_(std::move(row_major)) {
  require_same_dim(data_.size(), dim_ * dim_, "matrix entries");
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> diag) {
  ComplexMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(const ComplexVector& ket, const ComplexVector& bra) {
  require_same_dim(ket.dim(), bra.dim(), "outer");
  ComplexMatrix m(ket.dim());
  for (std::size_t i = 0; i < ket.dim(); ++i)
    for (std::size_t j = 0; j < bra.dim(); ++j) m(i, j) = ket[i] * std::conj(bra[j]);
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

ComplexVector ComplexMatrix::column(std::size_t j) const {
  ComplexVector v(dim_);
  for (std::size_t i = 0; i < dim_; ++i) v[i] = (*this)(i, j);
  return v;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  require_same_dim(dim_, o.dim_, "matrix add");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  require_same_dim(dim_, o.dim_, "matrix subtract");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a.dim_, b.dim_, "matrix product");
  const std::size_t n = a.dim_;
  ComplexMatrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const cplx aik = a(i, k);
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

ComplexVector operator*(const ComplexMatrix& a, const ComplexVector& v) {
  require_same_dim(a.dim_, v.dim(), "matrix-vector product");
  ComplexVector out(a.dim_);
  for (std::size_t i = 0; i < a.dim_; ++i) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < a.dim_; ++j) s += a(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return cplx{0.5} * (m + m.adjoint()); }

bool check_hermitian(const ComplexMatrix& m, double tol) {
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = i; j < m.dim(); ++j)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
  return true;
}

EigenDecomposition eig_hermitian(const ComplexMatrix& m) {
  if (m.dim() == 0) throw Error(ErrorCode::DimensionMismatch, "eig_hermitian on empty matrix");
  if (!m.all_finite()) throw Error(ErrorCode::NotHermitian, "matrix has non-finite entries");
  const double scale = m.frobenius_norm();
  if (!check_hermitian(m, 1e-10 * scale)) {
    throw Error(ErrorCode::NotHermitian, "eig_hermitian input fails Hermiticity check");
  }

  EigenDecomposition out;
  if (m.dim() == 1) {
    out.values = {m(0, 0).real()};
    out.vectors = {ComplexVector{1.0}};
  } else if (m.dim() == 2) {
    out = eig_two_by_two(m);
  } else {
    out = eig_jacobi(m, scale);
  }
  for (auto& v : out.vectors) fix_phase(v);
  for (std::size_t k = 0; k + 1 < out.values.size(); ++k) {
    if (out.values[k + 1] - out.values[k] <= kDegenerateGap * scale) out.degenerate = true;
  }
  return out;
}

ComplexMatrix expm_hermitian_generator(const ComplexMatrix& m, double s) {
  const auto eig = eig_hermitian(m);
  const std::size_t n = m.dim();
  ComplexMatrix out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx phase = std::exp(-kI * (eig.values[k] * s));
    const auto& v = eig.vectors[k];
    for (std::size_t i = 0; i < n; ++i) {
      const cplx vi = phase * v[i];
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vi * std::conj(v[j]);
    }
  }
  return out;
}

double operator_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "operator_distance");
  return (a - b).frobenius_norm();
}

double spectral_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "spectral_distance");
  const ComplexMatrix d = a - b;
  if (d.frobenius_norm() == 0.0) return 0.0;
  const auto eig = eig_hermitian(hermitian_part(d.adjoint() * d));
  return std::sqrt(std::max(0.0, eig.values.back()));
}

double unitarity_residual(const ComplexMatrix& u) {
  return operator_distance(u.adjoint() * u, ComplexMatrix::identity(u.dim()));
}

}  // namespace adlab
