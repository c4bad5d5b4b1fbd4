#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "spoofwatch/order_book.hpp"

namespace spoofwatch {

// A run of fills at one timestamp against one aggressor.
struct MarketOrder {
  TimeNs timestamp = 0;
  Side aggressor = Side::Bid;  // Bid: buy order lifting asks
  Qty volume = 0;
  std::optional<OrderId> aggressor_id;
  std::optional<BookSnapshot> pre;  // book just before the first fill
};

// Time-integrated per-level volume over a window (units: shares x seconds).
struct WindowMass {
  std::vector<double> ask;
  std::vector<double> bid;
  double duration = 0.0;
  std::size_t points = 0;
};

// Book states at each distinct event timestamp, truncated to a fixed depth.
// Each state holds from its timestamp until the next one.
class BookTimeline {
 public:
  explicit BookTimeline(std::size_t depth = 10);

  // Timestamps must be strictly increasing.
  void push(const BookSnapshot& snap);

  std::size_t depth() const { return depth_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  TimeNs time(std::size_t i) const { return times_[i]; }
  Price best_ask(std::size_t i) const { return best_ask_[i]; }
  Price best_bid(std::size_t i) const { return best_bid_[i]; }
  double mid(std::size_t i) const { return 0.5 * static_cast<double>(best_ask_[i] + best_bid_[i]); }
  std::span<const double> ask(std::size_t i) const { return {ask_.data() + i * width(), width()}; }
  std::span<const double> bid(std::size_t i) const { return {bid_.data() + i * width(), width()}; }
  BookSnapshot snapshot(std::size_t i) const;

  // Last state with timestamp <= t.
  std::optional<std::size_t> index_at(TimeNs t) const;

  // Integrates the states whose timestamps fall in [lo, hi); each contributes
  // until the next state or hi, whichever is first. Throws EmptyWindow.
  WindowMass window(TimeNs lo, TimeNs hi) const;

  std::vector<MarketOrder> market_orders;
  std::size_t one_sided_states = 0;

 private:
  std::size_t width() const { return depth_ + 1; }

  std::size_t depth_;
  std::vector<TimeNs> times_;
  std::vector<Price> best_ask_;
  std::vector<Price> best_bid_;
  std::vector<double> ask_;
  std::vector<double> bid_;
  // cum_*[i] = sum over j < i of volume_j * (t_{j+1} - t_j)
  std::vector<double> cum_ask_;
  std::vector<double> cum_bid_;
};

// Replays events through an OrderBook and records the timeline.
class TimelineBuilder {
 public:
  TimelineBuilder(double tick_size, std::size_t depth);

  void apply(const OrderEvent& ev);
  BookTimeline finish();

  const OrderBook& book() const { return book_; }

 private:
  void flush_state();

  OrderBook book_;
  BookTimeline timeline_;
  std::optional<TimeNs> pending_ts_;
  bool in_trade_run_ = false;
  std::optional<OrderId> run_key_id_;
  Side run_resting_side_ = Side::Ask;
};

BookTimeline build_timeline(std::span<const OrderEvent> events, double tick_size, std::size_t depth);

}  // namespace spoofwatch
