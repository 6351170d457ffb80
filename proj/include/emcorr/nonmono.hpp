#pragma once

// Comparing negativity and entanglement of formation over the Schmidt simplex:
// percentage deviations from the maximally entangled state, their difference,
// closed-form gradients, and a grid scan for extrema and order inversions.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include <fmt/format.h>

#include "emcorr/error.hpp"
#include "emcorr/monotones.hpp"
#include "emcorr/states.hpp"

namespace emcorr {

/// One point of the simplex. For d = 3 the third coefficient is
/// sqrt(1 - c0^2 - c1^2); for d = 2, c1 = sqrt(1 - c0^2).
struct DeviationRecord {
  double c0 = 0.0;
  double c1 = 0.0;
  double e = 0.0;    // entanglement of formation, bits
  double n = 0.0;    // negativity
  double q_e = 0.0;  // % below log2(d)
  double q_n = 0.0;  // % below (d - 1)/2
  double dq = 0.0;   // |q_e - q_n|
};

struct GradientRecord {
  double de_dc0 = 0.0;
  double de_dc1 = 0.0;
  double dn_dc0 = 0.0;
  double dn_dc1 = 0.0;
};

namespace detail {

inline DeviationRecord deviation_for(std::size_t dim, std::span<const double> coeffs) {
  const auto s = make_schmidt_state(coeffs);
  DeviationRecord r;
  r.c0 = coeffs[0];
  r.c1 = coeffs[1];
  r.e = eof_pure(s);
  r.n = negativity_pure(s);
  const double e_max = std::log2(static_cast<double>(dim));
  const double n_max = (static_cast<double>(dim) - 1.0) / 2.0;
  r.q_e = 100.0 * (e_max - r.e) / e_max;
  r.q_n = 100.0 * (1.0 - r.n / n_max);
  r.dq = std::abs(r.q_e - r.q_n);
  return r;
}

// Fast path for the scan: no validation or renormalization.
inline DeviationRecord deviation_qutrit(double c0, double c1) {
  const double w0 = c0 * c0, w1 = c1 * c1, w2 = 1.0 - w0 - w1;
  const double c2 = std::sqrt(w2);
  const auto xlog = [](double w) { return w > 0.0 ? w * std::log2(w) : 0.0; };
  DeviationRecord r;
  r.c0 = c0;
  r.c1 = c1;
  r.e = -(xlog(w0) + xlog(w1) + xlog(w2));
  r.n = c0 * c1 + c2 * (c0 + c1);
  r.q_e = 100.0 * (std::log2(3.0) - r.e) / std::log2(3.0);
  r.q_n = 100.0 * (1.0 - r.n);
  r.dq = std::abs(r.q_e - r.q_n);
  return r;
}

inline DeviationRecord deviation_qubit(double c0) {
  const double w0 = c0 * c0, w1 = 1.0 - w0;
  const double c1 = std::sqrt(w1);
  const auto xlog = [](double w) { return w > 0.0 ? w * std::log2(w) : 0.0; };
  DeviationRecord r;
  r.c0 = c0;
  r.c1 = c1;
  r.e = -(xlog(w0) + xlog(w1));
  r.n = c0 * c1;
  r.q_e = 100.0 * (1.0 - r.e);
  r.q_n = 100.0 * (1.0 - 2.0 * r.n);
  r.dq = std::abs(r.q_e - r.q_n);
  return r;
}

}  // namespace detail

/// Deviations of a two-qutrit pure state.
inline DeviationRecord deviation_metrics(const SchmidtState& s) {
  if (s.dim() != 3) throw Error(Errc::WrongDimension, "deviation metrics are defined for d = 3");
  return detail::deviation_for(3, s.coefficients());
}

/// Closed-form partial derivatives of E and N in (c0, c1) with
/// c2 = sqrt(1 - c0^2 - c1^2). Singular on the simplex boundary.
inline GradientRecord gradients(double c0, double c1) {
  const double w2 = 1.0 - c0 * c0 - c1 * c1;
  if (!(c0 > 0.0 && c1 > 0.0 && w2 > 0.0))
    throw Error(Errc::BoundaryPoint,
                fmt::format("({}, {}) is not in the interior of the simplex", c0, c1));
  const double c2 = std::sqrt(w2);
  const double k = 2.0 / std::numbers::ln2;
  GradientRecord g;
  g.de_dc0 = k * c0 * std::log(w2 / (c0 * c0));
  g.de_dc1 = k * c1 * std::log(w2 / (c1 * c1));
  g.dn_dc0 = c1 + (1.0 - c0 * c1 - c1 * c1 - 2.0 * c0 * c0) / c2;
  g.dn_dc1 = c0 + (1.0 - c0 * c1 - c0 * c0 - 2.0 * c1 * c1) / c2;
  return g;
}

/// (first, second) with E(first) > E(second) but N(first) < N(second).
struct NonMonotonePair {
  DeviationRecord first;
  DeviationRecord second;
};

struct ScanResult {
  std::size_t dim = 3;
  std::size_t resolution = 0;
  std::vector<DeviationRecord> grid;          // row-major over c0, then c1
  std::optional<DeviationRecord> interior_max;  // largest interior local max, polished
  double interior_max_c2 = 0.0;
  DeviationRecord grid_max;                   // largest grid value (may sit at the boundary)
  std::size_t non_monotone_states = 0;        // states with at least one inverted partner
  std::vector<NonMonotonePair> pairs;         // up to max_pairs examples
};

namespace detail {

inline constexpr double kBoundaryMargin = 1e-4;  // minimum implied last coefficient
inline constexpr double kOrderEps = 1e-12;

inline double golden_max(const auto& f, double lo, double hi, double tol) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

inline bool qutrit_valid(double c0, double c1) {
  return c0 > 0.0 && c1 > 0.0 &&
         1.0 - c0 * c0 - c1 * c1 >= kBoundaryMargin * kBoundaryMargin;
}

/// Coordinate-wise golden-section ascent inside a box of half-width `radius`.
inline std::array<double, 2> polish_qutrit(double c0, double c1, double radius) {
  const auto f = [](double a, double b) {
    return qutrit_valid(a, b) ? deviation_qutrit(a, b).dq : -1.0;
  };
  for (int it = 0; it < 2000; ++it) {
    const double n0 = golden_max([&](double x) { return f(x, c1); }, c0 - radius, c0 + radius, 1e-12);
    const double n1 = golden_max([&](double y) { return f(n0, y); }, c1 - radius, c1 + radius, 1e-12);
    const double step = std::max(std::abs(n0 - c0), std::abs(n1 - c1));
    c0 = n0;
    c1 = n1;
    if (step < 1e-10) break;
  }
  return {c0, c1};
}

inline void find_inversions(ScanResult& r, std::size_t max_pairs) {
  const auto& g = r.grid;
  std::vector<std::size_t> order(g.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return g[a].e < g[b].e; });
  // Sweep in increasing E; `best` holds the largest N among states whose E is
  // strictly (by kOrderEps) below the current one.
  std::size_t p = 0;
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& s1 = g[order[k]];
    while (p < k && g[order[p]].e < s1.e - kOrderEps) {
      if (!best || g[order[p]].n > g[*best].n) best = order[p];
      ++p;
    }
    if (best && g[*best].n > s1.n + kOrderEps) {
      ++r.non_monotone_states;
      if (r.pairs.size() < max_pairs) r.pairs.push_back({s1, g[*best]});
    }
  }
}

}  // namespace detail

/// Uniform grid with step 1/resolution over the valid (c0, c1) region
/// (d = 3) or over c0 (d = 2). Points whose implied last coefficient is below
/// 1e-4 are excluded.
inline ScanResult scan_simplex(std::size_t resolution, std::size_t dim = 3,
                               std::size_t max_pairs = 1000) {
  if (resolution < 50) throw Error(Errc::InvalidArgument, "resolution must be >= 50");
  if (dim != 2 && dim != 3) throw Error(Errc::WrongDimension, "scan supports d = 2 or 3");
  const double h = 1.0 / static_cast<double>(resolution);
  ScanResult r;
  r.dim = dim;
  r.resolution = resolution;

  std::optional<std::size_t> best_local;
  if (dim == 2) {
    for (std::size_t i = 1; i < resolution; ++i) {
      const double c0 = static_cast<double>(i) * h;
      if (1.0 - c0 * c0 < detail::kBoundaryMargin * detail::kBoundaryMargin) break;
      r.grid.push_back(detail::deviation_qubit(c0));
    }
    for (std::size_t i = 1; i + 1 < r.grid.size(); ++i) {
      const double v = r.grid[i].dq;
      if (v >= r.grid[i - 1].dq && v >= r.grid[i + 1].dq && v > std::min(r.grid[i - 1].dq, r.grid[i + 1].dq))
        if (!best_local || v > r.grid[*best_local].dq) best_local = i;
    }
    if (best_local) {
      const double c0 = detail::golden_max(
          [](double x) { return x > 0.0 && x < 1.0 ? detail::deviation_qubit(x).dq : -1.0; },
          r.grid[*best_local].c0 - h, r.grid[*best_local].c0 + h, 1e-12);
      auto rec = detail::deviation_qubit(std::min(c0, std::sqrt(1.0 - c0 * c0)));
      r.interior_max = rec;
      r.interior_max_c2 = 0.0;
    }
  } else {
    // Row i holds c1 = h, 2h, ... while the point stays valid.
    std::vector<std::size_t> row_start, row_len;
    for (std::size_t i = 1; i < resolution; ++i) {
      const double c0 = static_cast<double>(i) * h;
      row_start.push_back(r.grid.size());
      std::size_t len = 0;
      for (std::size_t j = 1; j < resolution; ++j) {
        const double c1 = static_cast<double>(j) * h;
        if (!detail::qutrit_valid(c0, c1)) break;
        r.grid.push_back(detail::deviation_qutrit(c0, c1));
        ++len;
      }
      row_len.push_back(len);
    }
    const auto at = [&](std::size_t row, std::size_t col) -> const DeviationRecord* {
      if (row >= row_len.size() || col >= row_len[row]) return nullptr;
      return &r.grid[row_start[row] + col];
    };
    for (std::size_t i = 1; i + 1 < row_len.size(); ++i)
      for (std::size_t j = 1; j + 1 < row_len[i]; ++j) {
        const double v = at(i, j)->dq;
        bool is_max = true, strict = false;
        for (int di = -1; di <= 1 && is_max; ++di)
          for (int dj = -1; dj <= 1; ++dj) {
            if (!di && !dj) continue;
            const auto* nb = at(i + di, j + dj);
            if (!nb || nb->dq > v) {
              is_max = false;
              break;
            }
            strict = strict || nb->dq < v;
          }
        if (is_max && strict && (!best_local || v > r.grid[*best_local].dq))
          best_local = row_start[i] + j;
      }
    if (best_local) {
      const auto& start = r.grid[*best_local];
      const auto [c0, c1] = detail::polish_qutrit(start.c0, start.c1, 2.0 * h);
      // Report the permutation with c0 <= c1 <= c2; dQ is symmetric in the coefficients.
      std::array<double, 3> c{c0, c1, std::sqrt(1.0 - c0 * c0 - c1 * c1)};
      std::sort(c.begin(), c.end());
      r.interior_max = detail::deviation_qutrit(c[0], c[1]);
      r.interior_max_c2 = c[2];
    }
  }
  if (r.grid.empty()) throw Error(Errc::InvalidArgument, "scan grid is empty");
  r.grid_max = *std::max_element(r.grid.begin(), r.grid.end(),
                                 [](const auto& a, const auto& b) { return a.dq < b.dq; });
  detail::find_inversions(r, max_pairs);
  return r;
}

/// c0,c1,E,N,Q_E,Q_N,dQ rows at full precision; every `stride`-th grid point.
inline void write_scan_csv(std::ostream& out, const ScanResult& r, std::size_t stride = 1) {
  out << "c0,c1,E,N,Q_E,Q_N,dQ\n";
  fmt::memory_buffer buf;
  for (std::size_t i = 0; i < r.grid.size(); i += std::max<std::size_t>(1, stride)) {
    const auto& g = r.grid[i];
    fmt::format_to(std::back_inserter(buf), "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                   g.c0, g.c1, g.e, g.n, g.q_e, g.q_n, g.dq);
    if (buf.size() > (1u << 20)) {
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

}  // namespace emcorr
