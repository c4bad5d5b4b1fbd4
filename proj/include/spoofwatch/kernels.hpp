#pragma once

#include <span>
#include <vector>

#include "spoofwatch/numerics.hpp"

namespace spoofwatch {

struct BivariateNormal {
  double mu1 = 0.0, mu2 = 0.0;
  double s1 = 1.0, s2 = 1.0;
  double r = 0.0;  // correlation

  double logpdf(double x1, double x2) const;
};

// Azzalini bivariate skew-normal: 2 phi_2(x - xi; Omega) Phi(alpha' diag(Omega)^{-1/2} (x - xi)).
struct BivariateSkewNormal {
  double alpha1 = 0.0, alpha2 = 0.0;
  double xi1 = 0.0, xi2 = 0.0;
  double o11 = 1.0, o12 = 0.0, o22 = 1.0;

  double logpdf(double x1, double x2) const;
};

// Sample moments (the Gaussian MLE). Throws SingularCovariance.
BivariateNormal fit_bivariate_normal(std::span<const double> x1, std::span<const double> x2);

// Maximum likelihood. Throws SingularCovariance, NonConvergence.
BivariateSkewNormal fit_bivariate_skewnormal(std::span<const double> x1, std::span<const double> x2,
                                             const NelderMeadOptions& opt = {});

// Law of the first coordinate given the second equals y.
class NormalKernel {
 public:
  explicit NormalKernel(const BivariateNormal& p);
  double mean(double y) const { return p_.mu1 + p_.s1 / p_.s2 * p_.r * (y - p_.mu2); }
  double sd() const { return sd_; }
  double pdf(double y, double x) const;
  double sample(double y, Rng& rng) const { return mean(y) + sd_ * rng.normal(); }

 private:
  BivariateNormal p_;
  double sd_;
};

class SkewKernel {
 public:
  explicit SkewKernel(const BivariateSkewNormal& p);

  struct Slice {
    double xi_c;   // conditional location
    double scale;  // sqrt(omega_11.2)
    double slope;  // alpha1 / sqrt(omega_11)
    double x0;
    double x0p;

    double logpdf(double x) const;
    double pdf(double x) const;
    double mode() const;
  };

  Slice at(double y) const;
  double pdf(double y, double x) const { return at(y).pdf(x); }

 private:
  BivariateSkewNormal p_;
  double scale_;
  double alpha2_bar_;
};

// Inverse-CDF sampler from a tabulated log-concave density.
class GridSampler {
 public:
  GridSampler(const SkewKernel::Slice& s, std::size_t points = 2048, double half_width = 10.0);
  double quantile(double u) const;
  double sample(Rng& rng) const { return quantile(rng.uniform()); }

 private:
  std::vector<double> x_;
  std::vector<double> cdf_;
};

}  // namespace spoofwatch
