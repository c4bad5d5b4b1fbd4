#include "spoofwatch/timeline.hpp"

#include <algorithm>

#include "spoofwatch/error.hpp"

namespace spoofwatch {

BookTimeline::BookTimeline(std::size_t depth) : depth_(depth) {}

void BookTimeline::push(const BookSnapshot& snap) {
  if (snap.ask.size() != width() || snap.bid.size() != width())
    throw Error(ErrorCode::InvalidArgument, "snapshot depth does not match timeline depth");
  const std::size_t w = width();
  if (times_.empty()) {
    cum_ask_.assign(w, 0.0);
    cum_bid_.assign(w, 0.0);
  } else {
    if (snap.timestamp <= times_.back())
      throw Error(ErrorCode::OutOfOrderTimestamp, "timeline timestamps must increase");
    const double dt = static_cast<double>(snap.timestamp - times_.back()) / kNsPerSecond;
    const std::size_t prev = (times_.size() - 1) * w;
    for (std::size_t k = 0; k < w; ++k) {
      cum_ask_.push_back(cum_ask_[prev + k] + ask_[prev + k] * dt);
      cum_bid_.push_back(cum_bid_[prev + k] + bid_[prev + k] * dt);
    }
  }
  times_.push_back(snap.timestamp);
  best_ask_.push_back(snap.best_ask);
  best_bid_.push_back(snap.best_bid);
  ask_.insert(ask_.end(), snap.ask.begin(), snap.ask.end());
  bid_.insert(bid_.end(), snap.bid.begin(), snap.bid.end());
}

BookSnapshot BookTimeline::snapshot(std::size_t i) const {
  BookSnapshot s;
  s.timestamp = times_[i];
  s.best_ask = best_ask_[i];
  s.best_bid = best_bid_[i];
  auto a = ask(i);
  auto b = bid(i);
  s.ask.assign(a.begin(), a.end());
  s.bid.assign(b.begin(), b.end());
  return s;
}

std::optional<std::size_t> BookTimeline::index_at(TimeNs t) const {
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return std::nullopt;
  return static_cast<std::size_t>(it - times_.begin()) - 1;
}

WindowMass BookTimeline::window(TimeNs lo, TimeNs hi) const {
  const auto first = std::lower_bound(times_.begin(), times_.end(), lo);
  const auto end = std::lower_bound(first, times_.end(), hi);
  if (first == end) throw Error(ErrorCode::EmptyWindow, "no book state in window");
  const std::size_t i0 = static_cast<std::size_t>(first - times_.begin());
  const std::size_t last = static_cast<std::size_t>(end - times_.begin()) - 1;
  const std::size_t w = width();
  const double tail = static_cast<double>(hi - times_[last]) / kNsPerSecond;

  WindowMass m;
  m.ask.resize(w);
  m.bid.resize(w);
  for (std::size_t k = 0; k < w; ++k) {
    m.ask[k] = cum_ask_[last * w + k] - cum_ask_[i0 * w + k] + ask_[last * w + k] * tail;
    m.bid[k] = cum_bid_[last * w + k] - cum_bid_[i0 * w + k] + bid_[last * w + k] * tail;
  }
  m.duration = static_cast<double>(hi - times_[i0]) / kNsPerSecond;
  m.points = last - i0 + 1;
  return m;
}

TimelineBuilder::TimelineBuilder(double tick_size, std::size_t depth) : book_(tick_size), timeline_(depth) {}

void TimelineBuilder::flush_state() {
  if (!pending_ts_) return;
  if (book_.best_bid() && book_.best_ask()) {
    timeline_.push(book_.snapshot(timeline_.depth()));
  } else {
    ++timeline_.one_sided_states;
  }
  pending_ts_.reset();
}

void TimelineBuilder::apply(const OrderEvent& ev) {
  if (pending_ts_ && ev.timestamp != *pending_ts_) {
    flush_state();
    in_trade_run_ = false;
  }

  std::optional<BookSnapshot> pre;
  if (ev.action == Action::Trade) {
    const OpenOrder* resting = book_.find(ev.order_id);
    const bool continues = in_trade_run_ && resting && resting->side == run_resting_side_ &&
                           run_key_id_ == ev.counterparty_id;
    if (resting && !continues && book_.best_bid() && book_.best_ask())
      pre = book_.snapshot(timeline_.depth());
  }

  const ApplyOutcome out = book_.apply(ev);
  pending_ts_ = ev.timestamp;

  if (out.kind == ApplyKind::AggressorEcho) return;
  if (out.kind != ApplyKind::Filled) {
    in_trade_run_ = false;
    return;
  }
  const Fill& fill = *out.fill;
  const bool continues =
      in_trade_run_ && fill.resting_side == run_resting_side_ && run_key_id_ == fill.aggressor_id;
  if (continues) {
    timeline_.market_orders.back().volume += fill.volume;
    return;
  }
  MarketOrder mo;
  mo.timestamp = ev.timestamp;
  mo.aggressor = opposite(fill.resting_side);
  mo.volume = fill.volume;
  mo.aggressor_id = fill.aggressor_id;
  mo.pre = std::move(pre);
  timeline_.market_orders.push_back(std::move(mo));
  in_trade_run_ = true;
  run_key_id_ = fill.aggressor_id;
  run_resting_side_ = fill.resting_side;
}

BookTimeline TimelineBuilder::finish() {
  flush_state();
  in_trade_run_ = false;
  return std::move(timeline_);
}

BookTimeline build_timeline(std::span<const OrderEvent> events, double tick_size, std::size_t depth) {
  TimelineBuilder builder(tick_size, depth);
  for (const auto& ev : events) builder.apply(ev);
  return builder.finish();
}

}  // namespace spoofwatch
