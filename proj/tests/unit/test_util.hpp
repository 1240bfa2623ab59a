#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include "adlab/linalg.hpp"

namespace adlab::testing {

inline ComplexMatrix random_hermitian(std::size_t dim, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) m(i, j) = cplx{g(rng), g(rng)};
  return cplx{scale} * hermitian_part(m);
}

inline ComplexMatrix sigma_x() { return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}; }
inline ComplexMatrix sigma_z() { return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}}; }

}  // namespace adlab::testing
