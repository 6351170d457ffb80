#pragma once

// Joint outcome distributions and the three statistical correlators:
// mutual predictability, mutual information and the Pearson coefficient.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emcorr/bases.hpp"
#include "emcorr/error.hpp"
#include "emcorr/numerics.hpp"
#include "emcorr/states.hpp"

namespace emcorr {

inline bool is_permutation_of_range(std::span<const int> p) {
  std::vector<bool> seen(p.size(), false);
  for (int v : p) {
    if (v < 0 || static_cast<std::size_t>(v) >= p.size() || seen[static_cast<std::size_t>(v)])
      return false;
    seen[static_cast<std::size_t>(v)] = true;
  }
  return true;
}

inline std::vector<int> identity_pairing(std::size_t dim) {
  std::vector<int> p(dim);
  for (std::size_t i = 0; i < dim; ++i) p[i] = static_cast<int>(i);
  return p;
}

/// i -> (d - i) mod d; pairs Fourier outcome i with its complex-conjugate partner.
inline std::vector<int> conjugate_pairing(std::size_t dim) {
  std::vector<int> p(dim);
  for (std::size_t i = 0; i < dim; ++i) p[i] = static_cast<int>((dim - i) % dim);
  return p;
}

/// Joint distribution P(a_i, b_j) over d x d outcomes, stored probs(i, j) with
/// i the A outcome. `pairing()[i]` is the B outcome correlated with A outcome i.
class JointProbabilityMatrix {
 public:
  /// Normalizes `raw` (row-major, A index major) to unit sum.
  static JointProbabilityMatrix from_raw(std::size_t dim, std::vector<double> raw,
                                         std::vector<int> pairing, std::string basis_a = "custom",
                                         std::string basis_b = "custom") {
    if (dim < 2) throw Error(Errc::InvalidArgument, "dim must be >= 2");
    if (raw.size() != dim * dim) throw Error(Errc::DimMismatch, "raw grid must be d*d entries");
    if (pairing.empty()) pairing = identity_pairing(dim);
    if (pairing.size() != dim || !is_permutation_of_range(pairing))
      throw Error(Errc::InvalidArgument, "pairing is not a permutation of 0..d-1");
    double total = 0.0;
    for (double x : raw) {
      if (!std::isfinite(x)) throw Error(Errc::InvalidArgument, "non-finite probability entry");
      if (x < 0.0) throw Error(Errc::NegativeEntry, "joint probability entries must be >= 0");
      total += x;
    }
    if (total <= 0.0) throw Error(Errc::AllZero, "joint probability grid sums to zero");
    for (auto& x : raw) x /= total;

    JointProbabilityMatrix j;
    j.dim_ = dim;
    j.probs_ = std::move(raw);
    j.pairing_ = std::move(pairing);
    j.basis_a_ = std::move(basis_a);
    j.basis_b_ = std::move(basis_b);
    j.normalization_ = total;
    return j;
  }

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t a, std::size_t b) const { return probs_[a * dim_ + b]; }
  std::span<const double> probs() const noexcept { return probs_; }
  std::span<const int> pairing() const noexcept { return pairing_; }
  const std::string& basis_a() const noexcept { return basis_a_; }
  const std::string& basis_b() const noexcept { return basis_b_; }
  /// Sum of the raw entries that was divided out.
  double normalization() const noexcept { return normalization_; }

  JointProbabilityMatrix with_pairing(std::vector<int> pairing) const {
    return from_raw(dim_, probs_, std::move(pairing), basis_a_, basis_b_);
  }

  std::vector<double> marginal_a() const {
    std::vector<double> m(dim_, 0.0);
    for (std::size_t a = 0; a < dim_; ++a)
      for (std::size_t b = 0; b < dim_; ++b) m[a] += (*this)(a, b);
    return m;
  }
  std::vector<double> marginal_b() const {
    std::vector<double> m(dim_, 0.0);
    for (std::size_t a = 0; a < dim_; ++a)
      for (std::size_t b = 0; b < dim_; ++b) m[b] += (*this)(a, b);
    return m;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<double> probs_;
  std::vector<int> pairing_;
  std::string basis_a_;
  std::string basis_b_;
  double normalization_ = 1.0;
};

/// pi(i) = argmax_j |sum_k a_i[k] b_j[k]|: the B outcome whose vector is the
/// complex conjugate of a_i, which is the outcome perfectly correlated with a_i
/// on sum_k |k>|k>. Falls back to the identity when the rule is ambiguous
/// (e.g. mutually unbiased a and b).
inline std::vector<int> correlated_pairing(const MeasurementBasis& a, const MeasurementBasis& b) {
  if (a.dim() != b.dim()) throw Error(Errc::DimMismatch, "bases of different dimension");
  const std::size_t d = a.dim();
  std::vector<int> p(d);
  for (std::size_t i = 0; i < d; ++i) {
    double best = -1.0;
    for (std::size_t j = 0; j < d; ++j) {
      cplx s{};
      for (std::size_t k = 0; k < d; ++k) s += a[i][k] * b[j][k];
      if (std::abs(s) > best + 1e-9) {
        best = std::abs(s);
        p[i] = static_cast<int>(j);
      }
    }
  }
  return is_permutation_of_range(p) ? p : identity_pairing(d);
}

inline JointProbabilityMatrix joint_probability_matrix(const SchmidtState& state,
                                                       const MeasurementBasis& basis_a,
                                                       const MeasurementBasis& basis_b) {
  const std::size_t d = state.dim();
  if (basis_a.dim() != d || basis_b.dim() != d)
    throw Error(Errc::DimMismatch, "basis and state dimensions differ");
  std::vector<double> p(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      cplx amp{};
      for (std::size_t k = 0; k < d; ++k)
        amp += state[k] * std::conj(basis_a[i][k]) * std::conj(basis_b[j][k]);
      p[i * d + j] = std::norm(amp);
    }
  return JointProbabilityMatrix::from_raw(d, std::move(p), correlated_pairing(basis_a, basis_b),
                                          basis_a.label().str(), basis_b.label().str());
}

inline JointProbabilityMatrix joint_probability_matrix(const ComplexMatrix& rho,
                                                       const MeasurementBasis& basis_a,
                                                       const MeasurementBasis& basis_b) {
  const std::size_t da = basis_a.dim();
  const std::size_t db = basis_b.dim();
  if (da != db) throw Error(Errc::DimMismatch, "joint matrix needs equal local dimensions");
  if (!rho.is_square() || rho.rows() != da * db)
    throw Error(Errc::DimMismatch, "density side does not match the bases");
  require_density(rho);
  std::vector<double> p(da * db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < db; ++j) {
      const auto u = kron(basis_a[i], basis_b[j]);
      p[i * db + j] = std::max(0.0, expectation(rho, u).real());
    }
  return JointProbabilityMatrix::from_raw(da, std::move(p), correlated_pairing(basis_a, basis_b),
                                          basis_a.label().str(), basis_b.label().str());
}

/// sum_i P(a_i, b_{pi(i)})
inline double mutual_predictability(const JointProbabilityMatrix& j) {
  double s = 0.0;
  for (std::size_t i = 0; i < j.dim(); ++i) s += j(i, static_cast<std::size_t>(j.pairing()[i]));
  return s;
}

/// Shannon mutual information in bits; zero cells contribute nothing.
inline double mutual_information(const JointProbabilityMatrix& j) {
  const auto pa = j.marginal_a();
  const auto pb = j.marginal_b();
  double mi = 0.0;
  for (std::size_t a = 0; a < j.dim(); ++a)
    for (std::size_t b = 0; b < j.dim(); ++b) {
      const double p = j(a, b);
      if (p > 0.0) mi += p * std::log2(p / (pa[a] * pb[b]));
    }
  return std::max(0.0, mi);
}

inline double pcc_from_joint(const JointProbabilityMatrix& j, const OutcomeValues& values_a,
                             const OutcomeValues& values_b) {
  if (values_a.dim() != j.dim() || values_b.dim() != j.dim())
    throw Error(Errc::DimMismatch, "outcome values do not match the matrix dimension");
  const auto pa = j.marginal_a();
  const auto pb = j.marginal_b();
  double ea = 0.0, eb = 0.0, ea2 = 0.0, eb2 = 0.0, eab = 0.0;
  for (std::size_t i = 0; i < j.dim(); ++i) {
    ea += pa[i] * values_a[i];
    ea2 += pa[i] * values_a[i] * values_a[i];
    eb += pb[i] * values_b[i];
    eb2 += pb[i] * values_b[i] * values_b[i];
    for (std::size_t k = 0; k < j.dim(); ++k) eab += j(i, k) * values_a[i] * values_b[k];
  }
  const double var_a = ea2 - ea * ea;
  const double var_b = eb2 - eb * eb;
  if (var_a <= 1e-14 || var_b <= 1e-14)
    throw Error(Errc::ZeroVariance, "a marginal is deterministic under the value assignment");
  return (eab - ea * eb) / std::sqrt(var_a * var_b);
}

/// Pearson coefficient of the joint observable op_a (x) op_b evaluated on rho.
inline double pcc_operator(const ComplexMatrix& rho, const ComplexMatrix& op_a,
                           const ComplexMatrix& op_b) {
  if (!is_hermitian(op_a) || !is_hermitian(op_b))
    throw Error(Errc::NonHermitian, "observables must be Hermitian");
  const BipartiteShape shape{op_a.rows(), op_b.rows()};
  if (!rho.is_square() || rho.rows() != shape.side())
    throw Error(Errc::DimMismatch, "operator dimensions do not match the state");
  const auto rho_a = partial_trace(rho, shape, Subsystem::A);
  const auto rho_b = partial_trace(rho, shape, Subsystem::B);
  const double ea = trace_of_product(rho_a, op_a).real();
  const double eb = trace_of_product(rho_b, op_b).real();
  const double ea2 = trace_of_product(rho_a, matmul(op_a, op_a)).real();
  const double eb2 = trace_of_product(rho_b, matmul(op_b, op_b)).real();
  const double eab = trace_of_product(rho, kron(op_a, op_b)).real();
  const double var_a = ea2 - ea * ea;
  const double var_b = eb2 - eb * eb;
  if (var_a <= 1e-14 || var_b <= 1e-14)
    throw Error(Errc::ZeroVariance, "observable has zero variance on this state");
  return (eab - ea * eb) / std::sqrt(var_a * var_b);
}

inline double pcc_operator(const SchmidtState& state, const ComplexMatrix& op_a,
                           const ComplexMatrix& op_b) {
  return pcc_operator(to_density(state), op_a, op_b);
}

struct Statistic {
  double value = 0.0;
  std::optional<double> std;
};

struct CorrelatorReport {
  Statistic mp;
  Statistic mi;  // bits
  Statistic pcc;
};

inline CorrelatorReport correlator_report(const JointProbabilityMatrix& j,
                                          const OutcomeValues& values_a,
                                          const OutcomeValues& values_b) {
  return {{mutual_predictability(j), {}},
          {mutual_information(j), {}},
          {pcc_from_joint(j, values_a, values_b), {}}};
}

}  // namespace emcorr
