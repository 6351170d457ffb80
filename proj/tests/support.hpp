#pragma once

#include <cmath>
#include <random>
#include <string>

#include "emcorr/numerics.hpp"
#include "emcorr/sampling.hpp"

namespace emcorr::testing {

inline ComplexMatrix random_complex(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = {g(rng), g(rng)};
  return m;
}

inline ComplexMatrix random_hermitian(std::size_t n, Rng& rng) {
  const auto a = random_complex(n, n, rng);
  ComplexMatrix h = a;
  h += adjoint(a);
  return h * 0.5;
}

/// Unitary from Gram-Schmidt on the columns of a Gaussian matrix.
inline ComplexMatrix random_unitary(std::size_t n, Rng& rng) {
  auto q = random_complex(n, n, rng);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t p = 0; p < c; ++p) {
      cplx dot{};
      for (std::size_t r = 0; r < n; ++r) dot += std::conj(q(r, p)) * q(r, c);
      for (std::size_t r = 0; r < n; ++r) q(r, c) -= dot * q(r, p);
    }
    double norm = 0.0;
    for (std::size_t r = 0; r < n; ++r) norm += std::norm(q(r, c));
    norm = std::sqrt(norm);
    for (std::size_t r = 0; r < n; ++r) q(r, c) /= norm;
  }
  return q;
}

inline std::string data_path(const std::string& name) {
  return std::string(EMCORR_DATA_DIR) + "/" + name;
}

}  // namespace emcorr::testing
