#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "emcorr/error.hpp"

namespace emcorr {

using Rng = std::mt19937_64;

/// Uniform point on the probability simplex (flat Dirichlet) via normalized
/// exponential spacings.
inline std::vector<double> flat_dirichlet(std::size_t dim, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(dim);
  double total = 0.0;
  for (auto& x : w) {
    x = expo(rng);
    total += x;
  }
  for (auto& x : w) x /= total;
  return w;
}

/// Multinomial draw of `trials` events over cells with the given (unnormalized)
/// weights, by sequential conditional binomials.
inline std::vector<std::int64_t> multinomial(std::int64_t trials, std::span<const double> weights,
                                             Rng& rng) {
  double remaining_mass = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error(Errc::InvalidArgument, "multinomial weight must be >= 0");
    remaining_mass += w;
  }
  if (remaining_mass <= 0.0) throw Error(Errc::InvalidArgument, "multinomial weights sum to 0");

  std::vector<std::int64_t> counts(weights.size(), 0);
  std::int64_t left = trials;
  for (std::size_t k = 0; k < weights.size() && left > 0; ++k) {
    if (k + 1 == weights.size()) {
      counts[k] = left;
      break;
    }
    const double p = remaining_mass > 0.0 ? std::min(1.0, weights[k] / remaining_mass) : 0.0;
    std::binomial_distribution<std::int64_t> bin(left, p);
    counts[k] = bin(rng);
    left -= counts[k];
    remaining_mass -= weights[k];
  }
  return counts;
}

}  // namespace emcorr
