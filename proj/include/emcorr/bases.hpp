#pragma once

// Local measurement bases, outcome-value assignments and observables.

#include <cmath>
#include <numbers>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "emcorr/error.hpp"
#include "emcorr/numerics.hpp"

namespace emcorr {

enum class BasisKind { computational, fourier, conjugate_fourier, mub, conjugate_mub, custom };

struct BasisLabel {
  BasisKind kind = BasisKind::custom;
  int index = 0;  // power index k for the mub kinds

  std::string str() const {
    switch (kind) {
      case BasisKind::computational: return "computational";
      case BasisKind::fourier: return "fourier";
      case BasisKind::conjugate_fourier: return "conjugate_fourier";
      case BasisKind::mub: return "mub(" + std::to_string(index) + ")";
      case BasisKind::conjugate_mub: return "conjugate_mub(" + std::to_string(index) + ")";
      case BasisKind::custom: return "custom";
    }
    return "custom";
  }
  friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
};

/// Ordered orthonormal basis of C^d; vectors()[i] is the state for outcome i.
class MeasurementBasis {
 public:
  MeasurementBasis(std::vector<std::vector<cplx>> vectors, BasisLabel label)
      : vectors_(std::move(vectors)), label_(label) {
    const std::size_t d = vectors_.size();
    if (d < 2) throw Error(Errc::InvalidArgument, "basis needs at least 2 vectors");
    for (const auto& v : vectors_)
      if (v.size() != d) throw Error(Errc::DimMismatch, "basis vectors must have length d");
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const cplx g = inner(vectors_[i], vectors_[j]);
        if (std::abs(g - cplx(i == j ? 1.0 : 0.0)) > 1e-10)
          throw Error(Errc::InvalidArgument, "basis is not orthonormal");
      }
  }

  std::size_t dim() const noexcept { return vectors_.size(); }
  const BasisLabel& label() const noexcept { return label_; }
  std::span<const cplx> operator[](std::size_t i) const { return vectors_[i]; }
  const std::vector<std::vector<cplx>>& vectors() const noexcept { return vectors_; }

  /// <u|v>
  static cplx inner(std::span<const cplx> u, std::span<const cplx> v) {
    cplx s{};
    for (std::size_t k = 0; k < u.size(); ++k) s += std::conj(u[k]) * v[k];
    return s;
  }

 private:
  std::vector<std::vector<cplx>> vectors_;
  BasisLabel label_;
};

namespace detail {
inline cplx root_of_unity(std::size_t dim, long long power) {
  const long long d = static_cast<long long>(dim);
  const long long r = ((power % d) + d) % d;
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(d);
  return {std::cos(angle), std::sin(angle)};
}
}  // namespace detail

inline MeasurementBasis computational_basis(std::size_t dim) {
  std::vector<std::vector<cplx>> v(dim, std::vector<cplx>(dim, cplx{}));
  for (std::size_t i = 0; i < dim; ++i) v[i][i] = 1.0;
  return {std::move(v), {BasisKind::computational, 0}};
}

/// Vector i has entries w^{ij} / sqrt(d), w = exp(2 pi i / d).
inline MeasurementBasis fourier_basis(std::size_t dim) {
  if (dim < 2) throw Error(Errc::InvalidArgument, "dim must be >= 2");
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
  std::vector<std::vector<cplx>> v(dim, std::vector<cplx>(dim));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      v[i][j] = norm * detail::root_of_unity(dim, static_cast<long long>(i * j));
  return {std::move(v), {BasisKind::fourier, 0}};
}

/// Entrywise complex conjugate of every basis vector.
inline MeasurementBasis conjugate_basis(const MeasurementBasis& b) {
  auto v = b.vectors();
  for (auto& vec : v)
    for (auto& x : vec) x = std::conj(x);
  BasisLabel label = b.label();
  switch (label.kind) {
    case BasisKind::fourier: label.kind = BasisKind::conjugate_fourier; break;
    case BasisKind::conjugate_fourier: label.kind = BasisKind::fourier; break;
    case BasisKind::mub: label.kind = BasisKind::conjugate_mub; break;
    case BasisKind::conjugate_mub: label.kind = BasisKind::mub; break;
    default: break;
  }
  return {std::move(v), label};
}

/// |<a_i|b_j>| = 1/sqrt(d) for every pair of outcomes.
inline bool is_mutually_unbiased(const MeasurementBasis& a, const MeasurementBasis& b,
                                 double tol = kTol.unbiased) {
  if (a.dim() != b.dim()) throw Error(Errc::DimMismatch, "bases of different dimension");
  const double target = 1.0 / std::sqrt(static_cast<double>(a.dim()));
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j)
      if (std::abs(std::abs(MeasurementBasis::inner(a[i], b[j])) - target) > tol) return false;
  return true;
}

inline bool is_prime(std::size_t n) {
  if (n < 2) return false;
  for (std::size_t k = 2; k * k <= n; ++k)
    if (n % k == 0) return false;
  return true;
}

/// Complete set of d+1 mutually unbiased bases for prime d: the computational
/// basis followed by the power family v_{k,m}[j] = w^{k j^2 + m j} / sqrt(d),
/// k = 0..d-1 (k = 0 is the Fourier basis). For d = 2 the quadratic phase is
/// i^{k j}, giving the X and Y eigenbases.
inline std::vector<MeasurementBasis> mub_family(std::size_t dim) {
  if (!is_prime(dim)) throw Error(Errc::NotPrime, std::to_string(dim) + " is not prime");
  std::vector<MeasurementBasis> family;
  family.push_back(computational_basis(dim));
  family.push_back(fourier_basis(dim));
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
  for (std::size_t k = 1; k < dim; ++k) {
    std::vector<std::vector<cplx>> v(dim, std::vector<cplx>(dim));
    for (std::size_t m = 0; m < dim; ++m)
      for (std::size_t j = 0; j < dim; ++j) {
        cplx quad;
        if (dim == 2) {
          quad = (k * j) % 2 ? cplx{0.0, 1.0} : cplx{1.0, 0.0};
        } else {
          quad = detail::root_of_unity(dim, static_cast<long long>((k * j * j) % dim));
        }
        v[m][j] = norm * quad * detail::root_of_unity(dim, static_cast<long long>(m * j));
      }
    family.emplace_back(std::move(v), BasisLabel{BasisKind::mub, static_cast<int>(k)});
  }
  return family;
}

/// Real value attached to each measurement outcome (eigenvalue of the observable).
class OutcomeValues {
 public:
  explicit OutcomeValues(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) throw Error(Errc::InvalidArgument, "need at least 2 outcome values");
    if (std::set<double>(values_.begin(), values_.end()).size() < 2)
      throw Error(Errc::InvalidArgument, "outcome values must contain two distinct entries");
  }

  std::size_t dim() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  /// Relabels so that outcome pairing[i] carries the value of outcome i.
  OutcomeValues permuted(std::span<const int> pairing) const {
    if (pairing.size() != values_.size())
      throw Error(Errc::DimMismatch, "pairing length differs from value count");
    std::vector<double> out(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i)
      out[static_cast<std::size_t>(pairing[i])] = values_[i];
    return OutcomeValues(std::move(out));
  }

 private:
  std::vector<double> values_;
};

/// 0, 1, -1, 2, -2, ... truncated to d entries.
inline OutcomeValues default_outcome_values(std::size_t dim) {
  std::vector<double> v;
  v.reserve(dim);
  for (std::size_t i = 0; v.size() < dim; ++i) {
    if (i == 0) {
      v.push_back(0.0);
      continue;
    }
    v.push_back(static_cast<double>(i));
    if (v.size() < dim) v.push_back(-static_cast<double>(i));
  }
  return OutcomeValues(std::move(v));
}

/// sum_i value_i |b_i><b_i|
inline ComplexMatrix observable(const MeasurementBasis& b, const OutcomeValues& values) {
  if (values.dim() != b.dim()) throw Error(Errc::DimMismatch, "values and basis differ in dim");
  ComplexMatrix op(b.dim(), b.dim());
  for (std::size_t i = 0; i < b.dim(); ++i) op += ComplexMatrix::outer(b[i]) * values[i];
  return op;
}

/// Z = sum_i i |i><i|.
inline ComplexMatrix z_operator(std::size_t dim) {
  std::vector<double> v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = static_cast<double>(i);
  return ComplexMatrix::diagonal(v);
}

/// Zero diagonal, 2 in every off-diagonal entry, so that
/// X^2 = 2(d-2) X + 4(d-1) I.
inline ComplexMatrix x_operator(std::size_t dim) {
  if (dim < 2) throw Error(Errc::InvalidArgument, "dim must be >= 2");
  ComplexMatrix x(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      if (i != j) x(i, j) = 2.0;
  return x;
}

}  // namespace emcorr
