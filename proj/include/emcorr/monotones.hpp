#pragma once

// Negativity and entanglement of formation: closed forms for pure states, a
// partial-transpose route for arbitrary densities, and the linear relations
// that turn measured correlators into monotone values.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emcorr/bases.hpp"
#include "emcorr/correlators.hpp"
#include "emcorr/error.hpp"
#include "emcorr/numerics.hpp"
#include "emcorr/states.hpp"

namespace emcorr {

/// 1/2 sum_{i != j} c_i c_j = ((sum c_i)^2 - 1) / 2
inline double negativity_pure(const SchmidtState& s) {
  double sum = 0.0;
  for (double c : s.coefficients()) sum += c;
  return std::max(0.0, (sum * sum - 1.0) / 2.0);
}

/// -sum c_i^2 log2 c_i^2, in bits.
inline double eof_pure(const SchmidtState& s) {
  double e = 0.0;
  for (double w : s.weights())
    if (w > 0.0) e -= w * std::log2(w);
  return e;
}

/// (||rho^{T_B}||_1 - 1) / 2, floored at zero.
inline double negativity_ppt(const ComplexMatrix& rho, const BipartiteShape& shape) {
  shape.validate(rho);
  require_density(rho);
  const double tn = trace_norm(partial_transpose(rho, shape, Subsystem::B));
  return std::max(0.0, (tn - 1.0) / 2.0);
}

/// max((d F - 1) / 2, 0)
inline double negativity_isotropic(const IsotropicState& iso) {
  return std::max(0.0, (static_cast<double>(iso.dim()) * iso.fidelity() - 1.0) / 2.0);
}

enum class MonotoneKind { negativity, eof, mixedness };

enum class Relation {
  pure_schmidt,
  ppt_oracle,
  from_mp_pure,
  from_pcc,
  from_pcc_sum,
  from_mp_isotropic,
  alpha,
  from_mi,
  iso_fidelity,
};

inline std::string to_string(MonotoneKind k) {
  switch (k) {
    case MonotoneKind::negativity: return "negativity";
    case MonotoneKind::eof: return "eof";
    case MonotoneKind::mixedness: return "mixedness";
  }
  return "?";
}

inline std::string to_string(Relation r) {
  switch (r) {
    case Relation::pure_schmidt: return "pure_schmidt";
    case Relation::ppt_oracle: return "ppt_oracle";
    case Relation::from_mp_pure: return "from_mp_pure";
    case Relation::from_pcc: return "from_pcc";
    case Relation::from_pcc_sum: return "from_pcc_sum";
    case Relation::from_mp_isotropic: return "from_mp_isotropic";
    case Relation::alpha: return "alpha";
    case Relation::from_mi: return "from_mi";
    case Relation::iso_fidelity: return "iso_fidelity";
  }
  return "?";
}

struct MonotoneEstimate {
  MonotoneKind kind = MonotoneKind::negativity;
  double value = 0.0;
  std::optional<double> sigma;
  Relation method = Relation::pure_schmidt;
  std::optional<int> mubs;  // only for from_mp_isotropic
  bool clamped = false;     // raw inversion fell outside the physical range

  std::string method_name() const {
    auto s = to_string(method);
    if (mubs) s += "(m=" + std::to_string(*mubs) + ")";
    return s;
  }
};

/// A measured correlator with optional one-sigma uncertainty.
struct Measured {
  double value = 0.0;
  std::optional<double> sigma;
};

namespace detail {

struct Linear {
  double slope;
  double offset;
};

inline MonotoneEstimate finish(MonotoneKind kind, Relation method, Linear f,
                               std::span<const Measured> in, double lo, double hi) {
  double x = 0.0;
  double var = 0.0;
  bool have_sigma = false;
  for (const auto& m : in) {
    x += m.value;
    if (m.sigma) {
      have_sigma = true;
      var += *m.sigma * *m.sigma;
    }
  }
  MonotoneEstimate e;
  e.kind = kind;
  e.method = method;
  const double raw = f.slope * x + f.offset;
  e.value = std::clamp(raw, lo, hi);
  e.clamped = raw < lo - 1e-12 || raw > hi + 1e-12;
  if (have_sigma) e.sigma = std::abs(f.slope) * std::sqrt(var);
  return e;
}

inline void require_in(double v, double lo, double hi, const char* what) {
  if (!(v >= lo - 1e-12 && v <= hi + 1e-12))
    throw Error(Errc::OutOfRangeInput, std::string(what) + " = " + std::to_string(v) +
                                           " outside [" + std::to_string(lo) + ", " +
                                           std::to_string(hi) + "]");
}

}  // namespace detail

/// Inverts a correlator/monotone relation for a d x d state.
///
/// `measures` are summed before inversion (several for the summed relations,
/// one otherwise); their sigmas combine in quadrature.
///  - from_mp_pure:      N = (d MP - 1) / 2
///  - from_pcc:          N = C (d - 1) / 2
///  - from_pcc_sum:      N = (C_ZZ + C_XX - 1)(d - 1) / 2
///  - from_mp_isotropic: N = (sum MP)(d + 1) / (2 m) - 1
///  - alpha:             alpha = (d MP - 1) / (d - 1)
///  - iso_fidelity:      N = max((d F - 1)/2, 0) with F from alpha(MP)
///  - from_mi:           EOF = MI
/// Values outside the physical range are clamped and flagged.
inline MonotoneEstimate invert_relation(Relation mode, std::span<const Measured> measures,
                                        std::size_t dim, std::optional<int> mubs = {}) {
  using detail::finish;
  using detail::Linear;
  using detail::require_in;
  if (dim < 2) throw Error(Errc::OutOfRangeInput, "dim must be >= 2");
  if (measures.empty()) throw Error(Errc::OutOfRangeInput, "no measured value supplied");
  const double d = static_cast<double>(dim);
  const double n_max = (d - 1.0) / 2.0;
  const auto single = [&](const char* what) {
    if (measures.size() != 1)
      throw Error(Errc::OutOfRangeInput, std::string(what) + " takes exactly one measured value");
  };

  switch (mode) {
    case Relation::from_mp_pure:
      single("from_mp_pure");
      require_in(measures[0].value, 0.0, 1.0, "MP");
      return finish(MonotoneKind::negativity, mode, {d / 2.0, -0.5}, measures, 0.0, n_max);
    case Relation::from_pcc:
      single("from_pcc");
      require_in(measures[0].value, -1.0, 1.0, "PCC");
      return finish(MonotoneKind::negativity, mode, {(d - 1.0) / 2.0, 0.0}, measures, 0.0, n_max);
    case Relation::from_pcc_sum:
      for (const auto& m : measures) require_in(m.value, -1.0, 1.0, "PCC");
      return finish(MonotoneKind::negativity, mode, {(d - 1.0) / 2.0, -(d - 1.0) / 2.0}, measures,
                    0.0, n_max);
    case Relation::from_mp_isotropic: {
      if (!mubs || *mubs < 1) throw Error(Errc::OutOfRangeInput, "number of MUBs must be >= 1");
      for (const auto& m : measures) require_in(m.value, 0.0, 1.0, "MP");
      const double m = static_cast<double>(*mubs);
      auto e = finish(MonotoneKind::negativity, mode, {(d + 1.0) / (2.0 * m), -1.0}, measures,
                      0.0, n_max);
      e.mubs = mubs;
      return e;
    }
    case Relation::alpha:
      single("alpha");
      require_in(measures[0].value, 0.0, 1.0, "MP");
      return finish(MonotoneKind::mixedness, mode, {d / (d - 1.0), -1.0 / (d - 1.0)}, measures,
                    0.0, 1.0);
    case Relation::iso_fidelity: {
      single("iso_fidelity");
      require_in(measures[0].value, 0.0, 1.0, "MP");
      // Agrees with from_mp_isotropic at m = 1 whenever N > 0.
      const double alpha = std::clamp((d * measures[0].value - 1.0) / (d - 1.0), 0.0, 1.0);
      const double f = alpha + (1.0 - alpha) / (d * d);
      MonotoneEstimate e;
      e.kind = MonotoneKind::negativity;
      e.method = mode;
      e.value = std::clamp((d * f - 1.0) / 2.0, 0.0, n_max);
      e.clamped = (d * f - 1.0) / 2.0 < 0.0;
      if (measures[0].sigma) e.sigma = (d + 1.0) / 2.0 * *measures[0].sigma;
      return e;
    }
    case Relation::from_mi:
      single("from_mi");
      if (!(measures[0].value >= -1e-12))
        throw Error(Errc::OutOfRangeInput, "mutual information must be >= 0");
      return finish(MonotoneKind::eof, mode, {1.0, 0.0}, measures, 0.0, std::log2(d));
    case Relation::pure_schmidt:
    case Relation::ppt_oracle:
      break;
  }
  throw Error(Errc::InvalidArgument, "relation " + to_string(mode) + " is not invertible");
}

inline MonotoneEstimate invert_relation(Relation mode, double measure, std::size_t dim,
                                        std::optional<int> mubs = {}) {
  const Measured m{measure, {}};
  return invert_relation(mode, std::span<const Measured>(&m, 1), dim, mubs);
}

struct MpRelation {
  double mp_fourier;  // Fourier on A, conjugate Fourier on B
  double mp_schmidt;  // Schmidt basis on both sides
  double mp_sum;
};

/// Evaluates both mutual predictabilities on the exact joint distributions.
/// Closed forms: (1 + 2N)/d, 1 and their sum.
inline MpRelation mp_relation_forward(const SchmidtState& s) {
  const std::size_t d = s.dim();
  const auto f = fourier_basis(d);
  const auto z = computational_basis(d);
  const double mp_f = mutual_predictability(joint_probability_matrix(s, f, conjugate_basis(f)));
  const double mp_z = mutual_predictability(joint_probability_matrix(s, z, z));
  return {mp_f, mp_z, mp_f + mp_z};
}

}  // namespace emcorr
