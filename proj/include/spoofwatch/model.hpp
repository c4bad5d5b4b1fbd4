#pragma once

#include <string>
#include <vector>

namespace spoofwatch {

// Weights per tick level k = 0..N, on the simplex.
struct DepthWeights {
  std::vector<double> w;

  std::size_t depth() const { return w.empty() ? 0 : w.size() - 1; }
  void validate(double tol = 1e-12) const;
  static DepthWeights uniform(std::size_t depth);
};

// Probabilities on consecutive integer tick offsets lo, lo+1, ..., hi().
struct PriceDist {
  int lo = 0;
  std::vector<double> probs;

  int hi() const { return lo + static_cast<int>(probs.size()) - 1; }
  double prob(int x) const;
  double mean() const;
  double central_moment(int order) const;
  double variance() const { return central_moment(2); }
  double skewness() const;
  double kurtosis() const;  // non-excess
  PriceDist mirrored() const;
  void validate(double tol = 1e-12) const;

  static PriceDist point(int x);
  // Builds a distribution from counts or weights on lo..lo+n-1, normalizing.
  static PriceDist normalized(int lo, std::vector<double> weights);
};

struct MarketModel {
  DepthWeights weights;
  PriceDist dp_plus;
  PriceDist dq;
  double tick_size = 0.01;
  double nu_tolerance = 0.1;

  PriceDist dp_minus() const { return dp_plus.mirrored(); }
  double mu_plus() const { return dp_plus.mean(); }
  void validate() const;
};

}  // namespace spoofwatch
