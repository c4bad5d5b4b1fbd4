#include "spoofwatch/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spoofwatch/error.hpp"

namespace spoofwatch {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

double binormal_logpdf(double d1, double d2, double o11, double o12, double o22) {
  const double det = o11 * o22 - o12 * o12;
  const double q = (o22 * d1 * d1 - 2.0 * o12 * d1 * d2 + o11 * d2 * d2) / det;
  return -kLog2Pi - 0.5 * std::log(det) - 0.5 * q;
}

}  // namespace

double BivariateNormal::logpdf(double x1, double x2) const {
  return binormal_logpdf(x1 - mu1, x2 - mu2, s1 * s1, r * s1 * s2, s2 * s2);
}

double BivariateSkewNormal::logpdf(double x1, double x2) const {
  const double d1 = x1 - xi1, d2 = x2 - xi2;
  return std::numbers::ln2 + binormal_logpdf(d1, d2, o11, o12, o22) +
         log_norm_cdf(alpha1 * d1 / std::sqrt(o11) + alpha2 * d2 / std::sqrt(o22));
}

BivariateNormal fit_bivariate_normal(std::span<const double> x1, std::span<const double> x2) {
  const std::size_t n = x1.size();
  if (n < 2 || x2.size() != n) throw Error(ErrorCode::InsufficientSamples, "need paired samples");
  BivariateNormal p;
  for (std::size_t i = 0; i < n; ++i) {
    p.mu1 += x1[i];
    p.mu2 += x2[i];
  }
  p.mu1 /= static_cast<double>(n);
  p.mu2 /= static_cast<double>(n);
  double c11 = 0, c12 = 0, c22 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d1 = x1[i] - p.mu1, d2 = x2[i] - p.mu2;
    c11 += d1 * d1;
    c12 += d1 * d2;
    c22 += d2 * d2;
  }
  c11 /= static_cast<double>(n);
  c12 /= static_cast<double>(n);
  c22 /= static_cast<double>(n);
  if (!(c11 > 0.0) || !(c22 > 0.0)) throw Error(ErrorCode::SingularCovariance, "zero variance");
  p.s1 = std::sqrt(c11);
  p.s2 = std::sqrt(c22);
  p.r = c12 / (p.s1 * p.s2);
  if (!(std::abs(p.r) < 1.0 - 1e-12)) throw Error(ErrorCode::SingularCovariance, "perfectly correlated sample");
  return p;
}

BivariateSkewNormal fit_bivariate_skewnormal(std::span<const double> x1, std::span<const double> x2,
                                             const NelderMeadOptions& opt) {
  const BivariateNormal g = fit_bivariate_normal(x1, x2);
  const std::size_t n = x1.size();
  std::vector<double> z1(n), z2(n);
  for (std::size_t i = 0; i < n; ++i) {
    z1[i] = (x1[i] - g.mu1) / g.s1;
    z2[i] = (x2[i] - g.mu2) / g.s2;
  }
  auto make = [](std::span<const double> th) {
    BivariateSkewNormal p;
    p.xi1 = th[0];
    p.xi2 = th[1];
    const double w1 = std::exp(th[2]), w2 = std::exp(th[3]), rho = std::tanh(th[4]);
    p.o11 = w1 * w1;
    p.o22 = w2 * w2;
    p.o12 = rho * w1 * w2;
    p.alpha1 = th[5];
    p.alpha2 = th[6];
    return p;
  };
  auto nll = [&](std::span<const double> th) {
    const double w1 = std::exp(th[2]), w2 = std::exp(th[3]), rho = std::tanh(th[4]);
    const double one_m = 1.0 - rho * rho;
    const double c = -std::log(w1 * w2) - 0.5 * std::log(one_m);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double u1 = (z1[i] - th[0]) / w1, u2 = (z2[i] - th[1]) / w2;
      s += 0.5 * (u1 * u1 - 2.0 * rho * u1 * u2 + u2 * u2) / one_m - log_norm_cdf(th[5] * u1 + th[6] * u2);
    }
    return s / static_cast<double>(n) - c - std::numbers::ln2 + kLog2Pi;
  };
  const double rho0 = std::atanh(std::clamp(g.r, -0.99, 0.99));
  NelderMeadOptions coarse = opt;
  coarse.ftol = std::max(opt.ftol, 1e-7);
  coarse.xtol = std::max(opt.xtol, 1e-4);
  coarse.restarts = 0;
  NelderMeadResult best;
  bool have = false;
  const double starts[][2] = {{0, 0}, {-2, 0}, {2, 0}, {0, -2}, {0, 2}};
  for (const auto& a : starts) {
    // location shifted so the start has roughly the sample mean
    const double d = std::sqrt(2.0 / std::numbers::pi) / std::sqrt(1.0 + a[0] * a[0] + a[1] * a[1]);
    std::vector<double> th0{-a[0] * d, -a[1] * d, 0.0, 0.0, rho0, a[0], a[1]};
    auto r = nelder_mead(nll, th0, coarse);
    if (!have || r.f < best.f) {
      best = std::move(r);
      have = true;
    }
  }
  best = nelder_mead(nll, best.x, opt);
  if (!best.converged || !std::isfinite(best.f))
    throw Error(ErrorCode::NonConvergence, "bivariate skew-normal likelihood did not converge");
  BivariateSkewNormal z = make(best.x);
  BivariateSkewNormal p = z;
  p.xi1 = g.mu1 + g.s1 * z.xi1;
  p.xi2 = g.mu2 + g.s2 * z.xi2;
  p.o11 = z.o11 * g.s1 * g.s1;
  p.o22 = z.o22 * g.s2 * g.s2;
  p.o12 = z.o12 * g.s1 * g.s2;
  if (!(p.o11 * p.o22 - p.o12 * p.o12 > 0.0)) throw Error(ErrorCode::SingularCovariance, "degenerate scale matrix");
  return p;
}

NormalKernel::NormalKernel(const BivariateNormal& p) : p_(p), sd_(std::sqrt(1.0 - p.r * p.r) * p.s1) {
  if (!(p.s1 > 0.0 && p.s2 > 0.0 && std::abs(p.r) < 1.0))
    throw Error(ErrorCode::SingularCovariance, "invalid bivariate normal");
}

double NormalKernel::pdf(double y, double x) const { return norm_pdf((x - mean(y)) / sd_) / sd_; }

SkewKernel::SkewKernel(const BivariateSkewNormal& p) : p_(p) {
  const double o112 = p.o11 - p.o12 * p.o12 / p.o22;
  if (!(p.o11 > 0.0 && p.o22 > 0.0 && o112 > 0.0))
    throw Error(ErrorCode::SingularCovariance, "invalid skew-normal scale matrix");
  scale_ = std::sqrt(o112);
  const double corr = p.o12 / std::sqrt(p.o11 * p.o22);
  alpha2_bar_ = (p.alpha2 + corr * p.alpha1) / std::sqrt(1.0 + o112 / p.o11 * p.alpha1 * p.alpha1);
}

SkewKernel::Slice SkewKernel::at(double y) const {
  Slice s;
  s.xi_c = p_.xi1 + p_.o12 / p_.o22 * (y - p_.xi2);
  s.scale = scale_;
  s.slope = p_.alpha1 / std::sqrt(p_.o11);
  s.x0 = alpha2_bar_ / std::sqrt(p_.o22) * (y - p_.xi2);
  s.x0p = std::sqrt(1.0 + scale_ * scale_ / p_.o11 * p_.alpha1 * p_.alpha1) * s.x0;
  return s;
}

double SkewKernel::Slice::logpdf(double x) const {
  const double d = x - xi_c;
  return log_norm_pdf(d / scale) - std::log(scale) + log_norm_cdf(slope * d + x0p) - log_norm_cdf(x0);
}

double SkewKernel::Slice::pdf(double x) const { return std::exp(logpdf(x)); }

double SkewKernel::Slice::mode() const {
  // derivative of the log density is decreasing
  auto deriv = [&](double x) {
    const double d = x - xi_c;
    const double u = slope * d + x0p;
    const double mills = std::exp(log_norm_pdf(u) - log_norm_cdf(u));
    return -d / (scale * scale) + slope * mills;
  };
  double lo = xi_c - 20.0 * scale, hi = xi_c + 20.0 * scale;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (deriv(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

GridSampler::GridSampler(const SkewKernel::Slice& s, std::size_t points, double half_width) {
  const double m = s.mode();
  const double lo = m - half_width * s.scale, hi = m + half_width * s.scale;
  x_.resize(points);
  cdf_.resize(points);
  std::vector<double> pdf(points);
  for (std::size_t i = 0; i < points; ++i) {
    x_[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    pdf[i] = s.pdf(x_[i]);
  }
  cdf_[0] = 0.0;
  for (std::size_t i = 1; i < points; ++i) cdf_[i] = cdf_[i - 1] + 0.5 * (pdf[i] + pdf[i - 1]) * (x_[i] - x_[i - 1]);
  const double total = cdf_.back();
  for (double& c : cdf_) c /= total;
}

double GridSampler::quantile(double u) const {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.begin()) return x_.front();
  if (it == cdf_.end()) return x_.back();
  const std::size_t j = static_cast<std::size_t>(it - cdf_.begin());
  const double c0 = cdf_[j - 1], c1 = cdf_[j];
  const double t = c1 > c0 ? (u - c0) / (c1 - c0) : 0.0;
  return x_[j - 1] + t * (x_[j] - x_[j - 1]);
}

}  // namespace spoofwatch
