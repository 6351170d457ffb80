#pragma once

// Dense complex linear algebra for small bipartite systems (side <= ~100).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "emcorr/error.hpp"

namespace emcorr {

using cplx = std::complex<double>;

/// Numerical thresholds shared by every module.
struct Tolerances {
  double hermiticity = 1e-10;
  double psd_cutoff = -1e-9;  // smallest eigenvalue still accepted as PSD
  double normalization = 1e-9;
  double jacobi_off_diagonal = 1e-12;
  int jacobi_max_sweeps = 100;
  double unbiased = 1e-9;
  double renormalization_warning = 1e-6;
};

inline constexpr Tolerances kTol{};

/// Row-major dense complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_)
      throw Error(Errc::ShapeMismatch, "entry count does not equal rows*cols");
  }
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw Error(Errc::ShapeMismatch, "ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  /// |v><v| for a column vector v.
  static ComplexMatrix outer(std::span<const cplx> v) {
    ComplexMatrix m(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const cplx> entries() const noexcept { return data_; }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  ComplexMatrix& operator*=(cplx s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  void require_same_shape(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw Error(Errc::ShapeMismatch, "elementwise operation on different shapes");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

enum class Subsystem { A, B };

/// Split of a square matrix side into dim_a * dim_b.
struct BipartiteShape {
  std::size_t dim_a = 2;
  std::size_t dim_b = 2;

  std::size_t side() const noexcept { return dim_a * dim_b; }

  void validate(const ComplexMatrix& m) const {
    if (dim_a < 2 || dim_b < 2)
      throw Error(Errc::ShapeMismatch, "bipartite dimensions must be >= 2");
    if (!m.is_square() || m.rows() != side())
      throw Error(Errc::ShapeMismatch, "matrix side " + std::to_string(m.rows()) +
                                           " does not match " + std::to_string(dim_a) + "x" +
                                           std::to_string(dim_b));
  }
};

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw Error(Errc::ShapeMismatch, "matmul inner dimensions differ");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

inline ComplexMatrix adjoint(const ComplexMatrix& m) {
  ComplexMatrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = std::conj(m(i, j));
  return out;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// Tensor product of two column vectors.
inline std::vector<cplx> kron(std::span<const cplx> a, std::span<const cplx> b) {
  std::vector<cplx> out;
  out.reserve(a.size() * b.size());
  for (const cplx x : a)
    for (const cplx y : b) out.push_back(x * y);
  return out;
}

inline cplx trace(const ComplexMatrix& m) {
  if (!m.is_square()) throw Error(Errc::ShapeMismatch, "trace of non-square matrix");
  cplx t{};
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

/// Tr(a b) without forming the product.
inline cplx trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols())
    throw Error(Errc::ShapeMismatch, "trace_of_product shapes incompatible");
  cplx t{};
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) t += a(i, k) * b(k, i);
  return t;
}

/// <v|m|v>
inline cplx expectation(const ComplexMatrix& m, std::span<const cplx> v) {
  if (!m.is_square() || m.rows() != v.size())
    throw Error(Errc::ShapeMismatch, "expectation vector length mismatch");
  cplx acc{};
  for (std::size_t i = 0; i < v.size(); ++i) {
    cplx row{};
    for (std::size_t j = 0; j < v.size(); ++j) row += m(i, j) * v[j];
    acc += std::conj(v[i]) * row;
  }
  return acc;
}

inline double max_abs(const ComplexMatrix& m) {
  double mx = 0.0;
  for (const cplx& x : m.entries()) mx = std::max(mx, std::abs(x));
  return mx;
}

inline double frobenius_norm(const ComplexMatrix& m) {
  double s = 0.0;
  for (const cplx& x : m.entries()) s += std::norm(x);
  return std::sqrt(s);
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = kTol.hermiticity) {
  if (!m.is_square()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
  return true;
}

inline bool is_unit_trace(const ComplexMatrix& m, double tol = kTol.normalization) {
  return m.is_square() && std::abs(trace(m) - cplx{1.0, 0.0}) <= tol;
}

/// Eigenvalues of a Hermitian matrix, sorted descending.
///
/// Cyclic Jacobi: each pivot (p,q) is first made real by a diagonal phase
/// similarity, then annihilated by a real plane rotation. Converged when the
/// off-diagonal Frobenius norm drops below `tol.jacobi_off_diagonal` times
/// max(1, ||m||_F).
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m,
                                                 const Tolerances& tol = kTol) {
  if (!m.is_square()) throw Error(Errc::ShapeMismatch, "eigenvalues of non-square matrix");
  if (!is_hermitian(m, tol.hermiticity * std::max(1.0, max_abs(m))))
    throw Error(Errc::NonHermitian, "matrix is not Hermitian within tolerance");

  const std::size_t n = m.rows();
  ComplexMatrix a = m;
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  const double threshold = tol.jacobi_off_diagonal * std::max(1.0, frobenius_norm(m));
  bool converged = n < 2 || off_norm() <= threshold;
  for (int sweep = 0; sweep < tol.jacobi_max_sweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double g = std::abs(a(p, q));
        if (g == 0.0) continue;

        // Phase similarity D = diag(.., e^{-i phi} at q, ..) makes a(p,q) = |a(p,q)|.
        const cplx phase = a(p, q) / g;
        for (std::size_t k = 0; k < n; ++k) {
          a(k, q) *= std::conj(phase);
          a(q, k) *= phase;
        }
        a(q, q) = a(q, q).real();

        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * g);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
          a(p, k) = std::conj(a(k, p));
          a(q, k) = std::conj(a(k, q));
        }
        a(p, p) = app - t * g;
        a(q, q) = aqq + t * g;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
    converged = off_norm() <= threshold;
  }
  if (!converged)
    throw Error(Errc::NoConvergence, "Jacobi sweep limit reached for side " + std::to_string(n));

  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i).real();
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

inline bool is_psd(const ComplexMatrix& m, const Tolerances& tol = kTol) {
  if (!is_hermitian(m, tol.hermiticity)) return false;
  const auto ev = hermitian_eigenvalues(m, tol);
  return ev.empty() || ev.back() >= tol.psd_cutoff;
}

/// Throws InvalidDensity unless m is Hermitian, unit trace and PSD.
inline void require_density(const ComplexMatrix& m, const Tolerances& tol = kTol) {
  if (!m.is_square()) throw Error(Errc::InvalidDensity, "density matrix must be square");
  if (!is_hermitian(m, tol.hermiticity)) throw Error(Errc::InvalidDensity, "not Hermitian");
  if (!is_unit_trace(m, tol.normalization)) throw Error(Errc::InvalidDensity, "trace is not 1");
  const auto ev = hermitian_eigenvalues(m, tol);
  if (!ev.empty() && ev.back() < tol.psd_cutoff)
    throw Error(Errc::InvalidDensity, "negative eigenvalue " + std::to_string(ev.back()));
}

/// Transposes the index of one subsystem: (i a, j b) -> (i b, j a) for B.
inline ComplexMatrix partial_transpose(const ComplexMatrix& m, const BipartiteShape& shape,
                                       Subsystem which) {
  shape.validate(m);
  const std::size_t da = shape.dim_a;
  const std::size_t db = shape.dim_b;
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t a = 0; a < db; ++a)
      for (std::size_t j = 0; j < da; ++j)
        for (std::size_t b = 0; b < db; ++b) {
          const cplx v = m(i * db + a, j * db + b);
          if (which == Subsystem::B)
            out(i * db + b, j * db + a) = v;
          else
            out(j * db + a, i * db + b) = v;
        }
  return out;
}

/// Reduced state on `keep`, tracing out the other subsystem.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, const BipartiteShape& shape,
                                   Subsystem keep) {
  shape.validate(m);
  const std::size_t da = shape.dim_a;
  const std::size_t db = shape.dim_b;
  if (keep == Subsystem::A) {
    ComplexMatrix out(da, da);
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t j = 0; j < da; ++j)
        for (std::size_t k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
    return out;
  }
  ComplexMatrix out(db, db);
  for (std::size_t a = 0; a < db; ++a)
    for (std::size_t b = 0; b < db; ++b)
      for (std::size_t k = 0; k < da; ++k) out(a, b) += m(k * db + a, k * db + b);
  return out;
}

/// Sum of |eigenvalues|; equals the sum of singular values for Hermitian input.
inline double trace_norm(const ComplexMatrix& m, const Tolerances& tol = kTol) {
  double s = 0.0;
  for (double e : hermitian_eigenvalues(m, tol)) s += std::abs(e);
  return s;
}

/// -Tr(rho log2 rho) from the spectrum, with 0 log 0 = 0.
inline double von_neumann_entropy(const ComplexMatrix& rho, const Tolerances& tol = kTol) {
  double s = 0.0;
  for (double e : hermitian_eigenvalues(rho, tol))
    if (e > 0.0) s -= e * std::log2(e);
  return s;
}

}  // namespace emcorr
