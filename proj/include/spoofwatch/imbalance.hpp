#pragma once

#include "spoofwatch/model.hpp"
#include "spoofwatch/order_book.hpp"
#include "spoofwatch/timeline.hpp"

namespace spoofwatch {

// B / (A + B) with B = <w, bid>, A = <w, ask>. Throws EmptyBook when A + B = 0.
double weighted_imbalance(const BookSnapshot& snap, const DepthWeights& w);
double weighted_imbalance(std::span<const double> bid, std::span<const double> ask, std::span<const double> w);

// Time-averaged imbalance over [lo, hi). Throws EmptyWindow.
double time_avg_imbalance(const BookTimeline& tl, TimeNs lo, TimeNs hi, const DepthWeights& w);
double imbalance_of_mass(const WindowMass& m, const DepthWeights& w);

// Imbalance after posting v at depth k on the ask side of a block book.
double spoofed_imbalance(double ibar, double a, double wk, double v);

// i dp+ + (1 - i) dp-.
PriceDist dp_of_imbalance(const MarketModel& model, double i);
PriceDist mix_with_mirror(const PriceDist& dp_plus, double i);

struct TailStats {
  double Q;   // sum_{y>k} dq_y
  double nu;  // sum_{y>k} (y-k) dq_y
};

TailStats tail_stats(const PriceDist& dq, int k);

}  // namespace spoofwatch
