#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spoofwatch/model.hpp"
#include "spoofwatch/numerics.hpp"
#include "spoofwatch/skew_normal.hpp"
#include "spoofwatch/timeline.hpp"

namespace spoofwatch {

struct SampleConfig {
  double target_variance = 2.0;
  std::vector<double> candidate_frequencies{0.5, 1.0, 2.0, 4.0};  // a single entry is used as is
  double depth_quantile = 0.99;
};

struct FrequencySample {
  double f = 0.0;  // seconds
  std::vector<double> changes;
};

// Mid-price changes in ticks (rounded) over consecutive non-overlapping windows.
std::vector<double> sample_price_changes(const BookTimeline& tl, double f);

// argmin_f (sigma_f - sigma)^2, ties to the smaller f. Throws InsufficientSamples.
double select_frequency(std::span<const FrequencySample> candidates, double target_variance);

// Smallest N with empirical P(|change| <= N) >= q.
int select_depth(std::span<const double> changes, double q);

struct DqEstimate {
  PriceDist dq;
  std::size_t used = 0;
  std::size_t skipped = 0;  // not enough visible depth, or no pre-trade book
};

// Signed tick depth swept by each market order (+ buys, - sells).
DqEstimate estimate_dq(std::span<const MarketOrder> orders);

// Per-window integrated depth profile and the following price change.
struct JointSamples {
  std::size_t levels = 0;
  std::vector<double> bid;    // size() x levels
  std::vector<double> total;  // bid + ask, size() x levels
  std::vector<int> x;
  std::size_t clipped = 0;    // changes clipped into the support

  std::size_t size() const { return x.size(); }
  std::vector<double> imbalances(std::span<const double> w) const;
  void add(std::span<const double> bid_mass, std::span<const double> ask_mass, int change);
};

JointSamples build_joint_samples(const BookTimeline& tl, double f, std::size_t depth, int support);

enum class MleObjective { Conditional, Joint };

struct MleOptions {
  int max_evals = 20000;
  int starts = 5;
  std::uint64_t seed = 1;
  MleObjective objective = MleObjective::Conditional;
  int outer_iters = 4;  // skew-normal refits for the joint objective
  double penalty = 1e4;
  std::size_t min_samples = 10000;
};

struct DistMoments {
  double mu_plus = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
};

DistMoments moments_of(const PriceDist& d);

struct JointMleResult {
  PriceDist dp_plus;
  DepthWeights weights;
  DistMoments moments;
  double conditional_nll = 0.0;    // -(1/M) sum log dp_x(i)
  double neg_log_likelihood = 0.0; // conditional + skew-normal marginal term
  SkewNormalFit skew;
  bool converged = true;
  int evals = 0;
  int best_start = 0;
  std::vector<double> history;  // best objective per iteration of the winning start
};

JointMleResult joint_mle(const JointSamples& s, int support, const MleOptions& opt = {});

// Mean negative log of i dp+_x + (1 - i) dp+_{-x}.
double conditional_nll(const PriceDist& dp_plus, std::span<const double> imb, std::span<const int> x);

struct GofBucket {
  double ibar = 0.0;
  std::size_t n = 0;
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  bool pooled = false;
  bool sparse = false;
};

GofBucket chi_square_cell_test(std::span<const double> observed, std::span<const double> expected);

// Pearson test per equal-count bucket of the imbalance.
std::vector<GofBucket> chi_square_gof(const PriceDist& dp_plus, std::span<const double> imb, std::span<const int> x,
                                      int buckets = 20);

struct CalibrationConfig {
  SampleConfig sample;
  MleOptions mle;
  double tick_size = 0.01;
  int gof_buckets = 20;
};

struct CalibrationResult {
  double f = 0.0;
  int depth = 0;
  std::vector<FrequencySample> frequency_samples;
  DqEstimate dq;
  JointMleResult mle;
  std::vector<GofBucket> gof;
  std::size_t samples = 0;

  MarketModel model(double tick_size) const;
};

CalibrationResult calibrate(const BookTimeline& tl, const CalibrationConfig& cfg);

}  // namespace spoofwatch
