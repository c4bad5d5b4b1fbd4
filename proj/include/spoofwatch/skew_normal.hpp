#pragma once

#include <span>

#include "spoofwatch/numerics.hpp"

namespace spoofwatch {

struct SkewNormalParams {
  double alpha = 0.0;  // shape
  double xi = 0.0;     // location
  double omega = 1.0;  // scale
};

// log of 2/omega phi(z) Phi(alpha z), z = (x - xi)/omega
double skewnormal_logpdf(const SkewNormalParams& p, double x);
double skewnormal_mean(const SkewNormalParams& p);
double sample_skewnormal(const SkewNormalParams& p, Rng& rng);

struct SkewNormalFit {
  SkewNormalParams params;
  double log_likelihood = 0.0;
  int evals = 0;
};

// Maximum likelihood. Throws InsufficientSamples (< min_samples),
// DegenerateSample (zero spread), NonConvergence.
SkewNormalFit fit_skewnormal(std::span<const double> x, std::size_t min_samples = 500,
                             const NelderMeadOptions& opt = {});

}  // namespace spoofwatch
