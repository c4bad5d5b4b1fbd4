#include "spoofwatch/imbalance.hpp"

#include <algorithm>

#include "spoofwatch/error.hpp"

namespace spoofwatch {

double weighted_imbalance(std::span<const double> bid, std::span<const double> ask, std::span<const double> w) {
  if (bid.size() < w.size() || ask.size() < w.size())
    throw Error(ErrorCode::InvalidArgument, "book shallower than weight vector");
  double B = 0.0;
  double A = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    B += w[k] * bid[k];
    A += w[k] * ask[k];
  }
  if (!(A + B > 0.0)) throw Error(ErrorCode::EmptyBook, "no weighted volume");
  return B / (A + B);
}

double weighted_imbalance(const BookSnapshot& snap, const DepthWeights& w) {
  return weighted_imbalance(snap.bid, snap.ask, w.w);
}

double imbalance_of_mass(const WindowMass& m, const DepthWeights& w) {
  return weighted_imbalance(m.bid, m.ask, w.w);
}

double time_avg_imbalance(const BookTimeline& tl, TimeNs lo, TimeNs hi, const DepthWeights& w) {
  return imbalance_of_mass(tl.window(lo, hi), w);
}

double spoofed_imbalance(double ibar, double a, double wk, double v) {
  const double b = a * ibar / (1.0 - ibar);
  return b / (a + b + wk * v);
}

PriceDist mix_with_mirror(const PriceDist& dp_plus, double i) {
  const int X = std::max(dp_plus.hi(), -dp_plus.lo);
  PriceDist out;
  out.lo = -X;
  out.probs.resize(static_cast<std::size_t>(2 * X + 1));
  for (int x = -X; x <= X; ++x)
    out.probs[static_cast<std::size_t>(x + X)] = i * dp_plus.prob(x) + (1.0 - i) * dp_plus.prob(-x);
  return out;
}

PriceDist dp_of_imbalance(const MarketModel& model, double i) { return mix_with_mirror(model.dp_plus, i); }

TailStats tail_stats(const PriceDist& dq, int k) {
  TailStats t{0.0, 0.0};
  for (int y = std::max(k + 1, dq.lo); y <= dq.hi(); ++y) {
    const double p = dq.prob(y);
    t.Q += p;
    t.nu += static_cast<double>(y - k) * p;
  }
  return t;
}

}  // namespace spoofwatch
