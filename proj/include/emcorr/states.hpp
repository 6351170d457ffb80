#pragma once

// Pure Schmidt states, isotropic mixtures and their density matrices.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "emcorr/error.hpp"
#include "emcorr/numerics.hpp"
#include "emcorr/sampling.hpp"

namespace emcorr {

/// Pure bipartite state sum_i c_i |i>|i> with c_i >= 0 and sum c_i^2 = 1.
/// Coefficients keep the order they were given in.
class SchmidtState {
 public:
  std::size_t dim() const noexcept { return coefficients_.size(); }
  std::span<const double> coefficients() const noexcept { return coefficients_; }
  double operator[](std::size_t i) const { return coefficients_[i]; }

  /// Squared coefficients, i.e. the spectrum of either reduced state.
  std::vector<double> weights() const {
    std::vector<double> w(coefficients_.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = coefficients_[i] * coefficients_[i];
    return w;
  }

  /// |sum c_i^2 - 1| of the input before normalization exceeded the warning level.
  bool renormalized() const noexcept { return renormalized_; }

  /// Column vector of the joint state in the |i>|j> product basis.
  std::vector<cplx> state_vector() const {
    const std::size_t d = dim();
    std::vector<cplx> v(d * d, cplx{});
    for (std::size_t i = 0; i < d; ++i) v[i * d + i] = coefficients_[i];
    return v;
  }

  BipartiteShape shape() const noexcept { return {dim(), dim()}; }

  friend SchmidtState make_schmidt_state(std::span<const double> coefficients);

 private:
  std::vector<double> coefficients_;
  bool renormalized_ = false;
};

inline SchmidtState make_schmidt_state(std::span<const double> coefficients) {
  if (coefficients.size() < 2)
    throw Error(Errc::InvalidArgument, "a Schmidt state needs at least 2 coefficients");
  double norm2 = 0.0;
  for (double c : coefficients) {
    if (!std::isfinite(c)) throw Error(Errc::InvalidArgument, "non-finite Schmidt coefficient");
    if (c < 0.0) throw Error(Errc::NegativeCoefficient, "Schmidt coefficients must be >= 0");
    norm2 += c * c;
  }
  if (norm2 <= 0.0) throw Error(Errc::AllZero, "all Schmidt coefficients are zero");

  SchmidtState s;
  const double norm = std::sqrt(norm2);
  s.coefficients_.assign(coefficients.begin(), coefficients.end());
  for (auto& c : s.coefficients_) c /= norm;
  s.renormalized_ = std::abs(norm2 - 1.0) > kTol.renormalization_warning;
  return s;
}

inline SchmidtState make_schmidt_state(std::initializer_list<double> coefficients) {
  return make_schmidt_state(std::span<const double>(coefficients.begin(), coefficients.size()));
}

inline SchmidtState maximally_entangled(std::size_t dim) {
  return make_schmidt_state(std::vector<double>(dim, 1.0));
}

/// Schmidt state with weights c_i^2 drawn uniformly from the simplex.
inline SchmidtState random_schmidt(std::size_t dim, Rng& rng) {
  if (dim < 2) throw Error(Errc::InvalidArgument, "dim must be >= 2");
  auto w = flat_dirichlet(dim, rng);
  for (auto& x : w) x = std::sqrt(x);
  return make_schmidt_state(w);
}

inline SchmidtState random_schmidt(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  return random_schmidt(dim, rng);
}

inline ComplexMatrix to_density(const SchmidtState& s) {
  return ComplexMatrix::outer(s.state_vector());
}

/// alpha |phi+><phi+| + (1 - alpha) I / d^2 around the maximally entangled state.
/// Fidelity with |phi+> is F = alpha + (1 - alpha) / d^2.
class IsotropicState {
 public:
  static IsotropicState from_alpha(std::size_t dim, double alpha) {
    if (dim < 2) throw Error(Errc::InvalidArgument, "dim must be >= 2");
    if (!(alpha >= 0.0 && alpha <= 1.0))
      throw Error(Errc::AlphaOutOfRange, "alpha must lie in [0, 1], got " + std::to_string(alpha));
    return IsotropicState(dim, alpha);
  }

  static IsotropicState from_fidelity(std::size_t dim, double fidelity) {
    if (dim < 2) throw Error(Errc::InvalidArgument, "dim must be >= 2");
    const double dd = static_cast<double>(dim * dim);
    const double alpha = (fidelity - 1.0 / dd) / (1.0 - 1.0 / dd);
    // F in [1/d^2, 1] maps onto alpha in [0, 1]; allow rounding at the ends.
    if (!(alpha >= -1e-12 && alpha <= 1.0 + 1e-12))
      throw Error(Errc::AlphaOutOfRange,
                  "fidelity " + std::to_string(fidelity) + " is outside [1/d^2, 1]");
    return IsotropicState(dim, std::clamp(alpha, 0.0, 1.0));
  }

  std::size_t dim() const noexcept { return dim_; }
  double alpha() const noexcept { return alpha_; }
  double fidelity() const noexcept {
    return alpha_ + (1.0 - alpha_) / static_cast<double>(dim_ * dim_);
  }

 private:
  IsotropicState(std::size_t dim, double alpha) : dim_(dim), alpha_(alpha) {}
  std::size_t dim_;
  double alpha_;
};

inline ComplexMatrix isotropic_density(const IsotropicState& iso) {
  const std::size_t d = iso.dim();
  ComplexMatrix rho = to_density(maximally_entangled(d)) * iso.alpha();
  const double noise = (1.0 - iso.alpha()) / static_cast<double>(d * d);
  for (std::size_t i = 0; i < d * d; ++i) rho(i, i) += noise;
  return rho;
}

}  // namespace emcorr
