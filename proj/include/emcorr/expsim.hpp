#pragma once

// Multi-slit spatial-bin qudit experiment: far-field phase, detection
// envelope, eigenstate detector positions, focal-plane coincidence profiles and
// synthetic correlation matrices.
//
// Lengths are in metres.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <ostream>
#include <vector>

#include <fmt/format.h>

#include "emcorr/error.hpp"
#include "emcorr/estimation.hpp"
#include "emcorr/sampling.hpp"
#include "emcorr/states.hpp"

namespace emcorr {

struct SlitGeometry {
  double slit_width = 30e-6;
  double slit_pitch = 100e-6;
  double wavelength = 0.810e-6;
  double focal_length = 0.075;

  void validate() const {
    if (!(slit_width > 0.0 && slit_pitch > 0.0 && wavelength > 0.0 && focal_length > 0.0))
      throw Error(Errc::InvalidArgument, "slit geometry lengths must be positive");
    if (!(slit_width < slit_pitch))
      throw Error(Errc::InvalidArgument, "slit width must be smaller than the slit pitch");
  }

  /// lambda f / pitch
  double fringe_period() const { return wavelength * focal_length / slit_pitch; }
};

/// 30 um slits at 100 um pitch, 810 nm, f = 7.5 cm.
inline SlitGeometry reference_geometry() { return {}; }

struct ScanConfig {
  Plane plane = Plane::focal;
  double fixed_arm_position = 0.0;
  double scan_range = 2e-3;
  double step = 30e-6;
  std::optional<std::int64_t> counts_budget;
  std::optional<std::uint64_t> seed;
  std::optional<double> pixel_window;  // top-hat detector width; point sampling if unset

  void validate() const {
    if (!(step > 0.0)) throw Error(Errc::InvalidArgument, "scan step must be positive");
    if (!(scan_range > 0.0)) throw Error(Errc::InvalidArgument, "scan range must be positive");
    if (counts_budget && *counts_budget <= 0)
      throw Error(Errc::InvalidArgument, "counts budget must be positive");
    if (counts_budget && !seed)
      throw Error(Errc::InvalidArgument, "a seed is required when a counts budget is set");
    if (pixel_window && !(*pixel_window > 0.0))
      throw Error(Errc::InvalidArgument, "pixel window must be positive");
  }
};

/// 2 pi x pitch / (lambda f)
inline double theta_at(double x, const SlitGeometry& g) {
  return 2.0 * std::numbers::pi * x * g.slit_pitch / (g.wavelength * g.focal_length);
}

/// x_k = k lambda f / (d pitch): detector positions projecting onto the Fourier
/// basis vectors.
inline std::vector<double> eigen_positions(const SlitGeometry& g, std::size_t dim) {
  g.validate();
  if (dim < 2) throw Error(Errc::InvalidArgument, "dim must be >= 2");
  std::vector<double> x(dim);
  for (std::size_t k = 0; k < dim; ++k)
    x[k] = static_cast<double>(k) * g.wavelength * g.focal_length /
           (static_cast<double>(dim) * g.slit_pitch);
  return x;
}

/// Single-slit diffraction factor sinc^2(pi x a / (lambda f)).
inline double detection_envelope(double x, const SlitGeometry& g) {
  const double u = std::numbers::pi * x * g.slit_width / (g.wavelength * g.focal_length);
  if (std::abs(u) < 1e-12) return 1.0;
  const double s = std::sin(u) / u;
  return s * s;
}

/// |<phi(theta_s) phi(theta_i)|psi>|^2 with phi(theta) = d^{-1/2} sum_k e^{i k theta}|k>.
inline double focal_joint_probability(const SchmidtState& s, double theta_s, double theta_i) {
  std::complex<double> amp{};
  for (std::size_t k = 0; k < s.dim(); ++k)
    amp += s[k] * std::polar(1.0, -static_cast<double>(k) * (theta_s + theta_i));
  return std::norm(amp) / static_cast<double>(s.dim() * s.dim());
}

namespace detail {

inline constexpr int kPixelSamples = 33;

/// Mean of f over the detector window centred at x (or f(x) for point sampling).
inline double pixel_average(const auto& f, double x, const std::optional<double>& window) {
  if (!window) return f(x);
  double sum = 0.0;
  for (int k = 0; k < kPixelSamples; ++k) {
    const double t = (static_cast<double>(k) + 0.5) / kPixelSamples - 0.5;
    sum += f(x + t * *window);
  }
  return sum / kPixelSamples;
}

}  // namespace detail

struct ProfilePoint {
  double position = 0.0;
  double rate = 0.0;
};

/// Coincidence rate with the signal detector fixed and the idler scanned over
/// [-range/2, range/2]: scanned-arm envelope times the joint probability,
/// normalized to the maximum sample.
inline std::vector<ProfilePoint> coincidence_profile(const SchmidtState& s, const SlitGeometry& g,
                                                     const ScanConfig& cfg) {
  g.validate();
  cfg.validate();
  if (cfg.plane != Plane::focal)
    throw Error(Errc::WrongPlane, "coincidence profiles are defined in the focal plane");
  const double theta_s = theta_at(cfg.fixed_arm_position, g);
  const auto n = static_cast<std::size_t>(std::floor(cfg.scan_range / cfg.step + 1e-9)) + 1;
  std::vector<ProfilePoint> out(n);
  const auto rate = [&](double x) {
    return detection_envelope(x, g) * focal_joint_probability(s, theta_s, theta_at(x, g));
  };
  double peak = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = -cfg.scan_range / 2.0 + static_cast<double>(k) * cfg.step;
    out[k] = {x, detail::pixel_average(rate, x, cfg.pixel_window)};
    peak = std::max(peak, out[k].rate);
  }
  if (peak > 0.0)
    for (auto& p : out) p.rate /= peak;
  return out;
}

/// (max - min) / (max + min) of the sampled rates.
inline double visibility(const std::vector<ProfilePoint>& profile) {
  if (profile.empty()) throw Error(Errc::InvalidArgument, "empty profile");
  const auto [lo, hi] = std::minmax_element(profile.begin(), profile.end(),
                                            [](const auto& a, const auto& b) { return a.rate < b.rate; });
  const double den = hi->rate + lo->rate;
  return den > 0.0 ? (hi->rate - lo->rate) / den : 0.0;
}

/// Simulated matrix in file orientation (rows = idler/B outcome).
///
/// Image plane: detectors on the slit images, entries lambda_i^2 on the
/// diagonal. Focal plane: detectors at the eigen positions on both arms,
/// envelope divided out, so noiseless entries are the joint probabilities of
/// the Fourier basis on both sides (correlated pairs i, (d - i) mod d). With a
/// counts budget the entries are multinomial counts.
inline RawGrid simulate_raw_grid(const SchmidtState& s, const SlitGeometry& g, const ScanConfig& cfg) {
  g.validate();
  cfg.validate();
  const std::size_t d = s.dim();
  std::vector<double> p(d * d, 0.0);  // [a][b]
  if (cfg.plane == Plane::image) {
    for (std::size_t i = 0; i < d; ++i) p[i * d + i] = s[i] * s[i];
  } else {
    const auto x = eigen_positions(g, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        if (!cfg.pixel_window) {
          p[i * d + j] = focal_joint_probability(s, theta_at(x[i], g), theta_at(x[j], g));
          continue;
        }
        // Window-integrated rate over window-integrated envelope.
        double num = 0.0, den = 0.0;
        for (int u = 0; u < detail::kPixelSamples; ++u)
          for (int v = 0; v < detail::kPixelSamples; ++v) {
            const double xs = x[i] + ((u + 0.5) / detail::kPixelSamples - 0.5) * *cfg.pixel_window;
            const double xi = x[j] + ((v + 0.5) / detail::kPixelSamples - 0.5) * *cfg.pixel_window;
            const double env = detection_envelope(xs, g) * detection_envelope(xi, g);
            num += env * focal_joint_probability(s, theta_at(xs, g), theta_at(xi, g));
            den += env;
          }
        p[i * d + j] = num / den;
      }
  }
  if (cfg.counts_budget) {
    Rng rng(*cfg.seed);
    const auto counts = multinomial(*cfg.counts_budget, p, rng);
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = static_cast<double>(counts[k]);
  }
  RawGrid grid;
  grid.dim = d;
  grid.rows_b_cols_a.resize(d * d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) grid.rows_b_cols_a[b * d + a] = p[a * d + b];
  return grid;
}

inline MatrixSet simulate_correlation_matrix(const SchmidtState& s, const SlitGeometry& g,
                                             const ScanConfig& cfg) {
  MatrixConfig mc;
  mc.plane = cfg.plane;
  return make_matrix_set({simulate_raw_grid(s, g, cfg)}, mc, {"simulated"});
}

/// position_m,normalized_rate at full precision.
inline void write_profile_csv(std::ostream& out, const std::vector<ProfilePoint>& profile) {
  out << "position_m,normalized_rate\n";
  for (const auto& p : profile) out << fmt::format("{:.17g},{:.17g}\n", p.position, p.rate);
}

}  // namespace emcorr
