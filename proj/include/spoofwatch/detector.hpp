#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spoofwatch/kernels.hpp"
#include "spoofwatch/model.hpp"
#include "spoofwatch/timeline.hpp"

namespace spoofwatch {

struct MarketOrderMark {
  TimeNs t = 0;
  double i_minus = 0.0;
  double i_plus = 0.0;
  double a_t = 0.0;  // mean per-level depth on the side being bought
  double b_t = 0.0;  // mean per-level depth on the opposite side
  double rho_t = 0.0;
  double i_spoof = 0.0;
  Qty volume = 0;
};

struct MarkConfig {
  double f = 1.0;            // trailing window, seconds
  double post_window = 1.0;  // seconds
  Side side = Side::Bid;     // aggressor side to monitor; sells see mirrored imbalances
};

struct MarkStats {
  std::size_t underflow = 0;  // windows reaching before the first state or past the last
  std::size_t empty = 0;
  std::size_t other_side = 0;
};

std::vector<MarketOrderMark> mark_market_orders(const BookTimeline& tl, const MarketModel& model,
                                                const MarkConfig& cfg = {}, MarkStats* stats = nullptr);

// Imbalance after the optimal per-depth spoof volumes given the mark's
// pre-order imbalance, depth and market-order mass.
double compute_spoof_imbalance(const MarketOrderMark& mark, const MarketModel& model);

struct JointFit {
  BivariateNormal legit;      // (i_minus, i_plus)
  BivariateSkewNormal spoofed;  // (i_spoof, i_plus)
};

JointFit fit_joint_kernels(std::span<const MarketOrderMark> marks, std::size_t min_marks = 1000);

// Equal sizes use the sorted coupling; otherwise the quantile functions are
// integrated piecewise. Throws EmptySample.
double wasserstein2(std::span<const double> a, std::span<const double> b);

struct MonitorConfig {
  std::size_t window = 100;
  std::size_t buckets = 5;
  int repetitions = 10;
  int consecutive = 10;
  std::uint64_t seed = 1;

  void validate() const;
};

struct MonitorPoint {
  TimeNs t = 0;
  double d_legit = 0.0;
  double d_spoof = 0.0;
  bool no_spoof_region = false;
  bool flagged = false;
};

std::vector<MonitorPoint> monitor(std::span<const MarketOrderMark> marks, const JointFit& fit,
                                  const MarketModel& model, const MonitorConfig& cfg = {});

struct FlagEpisode {
  TimeNs start = 0;
  TimeNs end = 0;
  std::size_t points = 0;
};

std::vector<FlagEpisode> flag_episodes(std::span<const MonitorPoint> points);

}  // namespace spoofwatch
