#include "spoofwatch/skew_normal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "spoofwatch/error.hpp"

namespace spoofwatch {

double skewnormal_logpdf(const SkewNormalParams& p, double x) {
  const double z = (x - p.xi) / p.omega;
  return std::numbers::ln2 - std::log(p.omega) + log_norm_pdf(z) + log_norm_cdf(p.alpha * z);
}

double skewnormal_mean(const SkewNormalParams& p) {
  const double d = p.alpha / std::sqrt(1.0 + p.alpha * p.alpha);
  return p.xi + p.omega * d * std::sqrt(2.0 / std::numbers::pi);
}

double sample_skewnormal(const SkewNormalParams& p, Rng& rng) {
  const double d = p.alpha / std::sqrt(1.0 + p.alpha * p.alpha);
  const double u0 = rng.normal();
  const double u1 = rng.normal();
  return p.xi + p.omega * (d * std::abs(u0) + std::sqrt(1.0 - d * d) * u1);
}

SkewNormalFit fit_skewnormal(std::span<const double> x, std::size_t min_samples, const NelderMeadOptions& opt) {
  const std::size_t n = x.size();
  if (n < min_samples)
    throw Error(ErrorCode::InsufficientSamples, fmt::format("{} samples, need {}", n, min_samples));
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double m2 = 0.0, m3 = 0.0;
  for (double v : x) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  const double sd = std::sqrt(m2);
  if (!(sd > 1e-12 * std::max(1.0, std::abs(mean))))
    throw Error(ErrorCode::DegenerateSample, "sample has no spread");

  // standardized data keeps the simplex well scaled
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = (x[i] - mean) / sd;
  auto nll = [&](std::span<const double> th) {
    const SkewNormalParams p{th[0], th[1], std::exp(th[2])};
    double s = 0.0;
    for (double v : z) s -= skewnormal_logpdf(p, v);
    return s / static_cast<double>(n);
  };

  // method-of-moments start
  const double kMaxSkew = 0.99 * 0.9952717;
  const double g = std::clamp(m3 / (m2 * sd), -kMaxSkew, kMaxSkew);
  const double c = std::cbrt(std::abs(g) * 2.0 / (4.0 - std::numbers::pi));
  double delta = std::sqrt(std::numbers::pi / 2.0) * c / std::sqrt(1.0 + c * c);
  delta = std::copysign(std::min(delta, 0.995), g);
  const double a0 = delta / std::sqrt(1.0 - delta * delta);
  const double om0 = 1.0 / std::sqrt(1.0 - 2.0 * delta * delta / std::numbers::pi);
  const double xi0 = -om0 * delta * std::sqrt(2.0 / std::numbers::pi);

  SkewNormalFit best;
  NelderMeadResult br;
  bool have = false;
  for (const auto& start : {std::vector<double>{a0, xi0, std::log(om0)}, std::vector<double>{0.0, 0.0, 0.0}}) {
    auto r = nelder_mead(nll, start, opt);
    best.evals += r.evals;
    if (!have || r.f < br.f) {
      br = std::move(r);
      have = true;
    }
  }
  if (!br.converged || !std::isfinite(br.f))
    throw Error(ErrorCode::NonConvergence, "skew-normal likelihood did not converge");
  best.params = {br.x[0], mean + sd * br.x[1], sd * std::exp(br.x[2])};
  best.log_likelihood = -br.f * static_cast<double>(n) - static_cast<double>(n) * std::log(sd);
  return best;
}

}  // namespace spoofwatch
