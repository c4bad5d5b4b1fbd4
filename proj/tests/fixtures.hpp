#pragma once

#include <cmath>
#include <vector>

#include "spoofwatch/kernels.hpp"
#include "spoofwatch/model.hpp"
#include "spoofwatch/numerics.hpp"

namespace spoofwatch::testing {

// The model the synthetic market runs under in the closure tests.
inline MarketModel reference_model() {
  MarketModel m;
  m.weights.w = {0.1, 0.15, 0.2, 0.25, 0.3};
  m.dp_plus = PriceDist{-4, {0.004, 0.012, 0.04, 0.14, 0.30, 0.28, 0.14, 0.066, 0.018}};
  m.dq = PriceDist{-5, {0.0005, 0.0015, 0.003, 0.01, 0.035, 0.9, 0.035, 0.01, 0.003, 0.0015, 0.0005}};
  m.tick_size = 0.01;
  return m;
}

// Conditioning representation: (u0, u) jointly normal, keep u when u0 > 0.
inline void sample_bivariate_skewnormal(const BivariateSkewNormal& p, std::size_t n, Rng& rng,
                                        std::vector<double>& x1, std::vector<double>& x2) {
  const double w1 = std::sqrt(p.o11), w2 = std::sqrt(p.o22);
  const double c = p.o12 / (w1 * w2);
  const double ob_a1 = p.alpha1 + c * p.alpha2, ob_a2 = c * p.alpha1 + p.alpha2;
  const double q = std::sqrt(1.0 + p.alpha1 * ob_a1 + p.alpha2 * ob_a2);
  const double d1 = ob_a1 / q, d2 = ob_a2 / q;
  // covariance of (u0, u1, u2): [[1, d1, d2], [d1, 1, c], [d2, c, 1]]
  const double l10 = d1, l11 = std::sqrt(1.0 - d1 * d1);
  const double l20 = d2, l21 = (c - d1 * d2) / l11, l22 = std::sqrt(1.0 - d2 * d2 - l21 * l21);
  x1.resize(n);
  x2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z0 = rng.normal(), z1 = rng.normal(), z2 = rng.normal();
    double u1 = l10 * z0 + l11 * z1;
    double u2 = l20 * z0 + l21 * z1 + l22 * z2;
    if (z0 < 0.0) {
      u1 = -u1;
      u2 = -u2;
    }
    x1[i] = p.xi1 + w1 * u1;
    x2[i] = p.xi2 + w2 * u2;
  }
}

}  // namespace spoofwatch::testing
