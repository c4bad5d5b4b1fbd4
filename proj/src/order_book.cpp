#include "spoofwatch/order_book.hpp"

#include <string>

#include "spoofwatch/error.hpp"

namespace spoofwatch {

namespace {

std::string describe(const OrderEvent& ev) {
  return "record ts=" + std::to_string(ev.timestamp) + " order_id=" + std::to_string(ev.order_id);
}

}  // namespace

OrderBook::OrderBook(double tick_size) : tick_size_(tick_size) {
  if (!(tick_size > 0.0)) throw Error(ErrorCode::InvalidArgument, "tick size must be positive");
}

void OrderBook::reduce(OrderId id, OpenOrder& order, Qty amount) {
  auto& lv = side_levels(order.side);
  auto it = lv.find(order.price);
  it->second -= amount;
  if (it->second == 0) lv.erase(it);
  order.remaining -= amount;
  if (order.remaining == 0) orders_.erase(id);
}

ApplyOutcome OrderBook::apply(const OrderEvent& ev) {
  if (ev.timestamp < last_ts_)
    throw Error(ErrorCode::OutOfOrderTimestamp, describe(ev));
  if (ev.volume < 0) throw Error(ErrorCode::InvalidArgument, "negative volume, " + describe(ev));

  ApplyOutcome out{ApplyKind::Booked, std::nullopt};
  switch (ev.action) {
    case Action::Book: {
      if (ev.price <= 0 || ev.volume == 0)
        throw Error(ErrorCode::InvalidArgument, "book needs price > 0 and volume > 0, " + describe(ev));
      if (orders_.contains(ev.order_id)) throw Error(ErrorCode::DuplicateOrderId, describe(ev));
      if (ev.side == Side::Bid && !asks_.empty() && ev.price >= asks_.begin()->first)
        throw Error(ErrorCode::CrossedBook, describe(ev));
      if (ev.side == Side::Ask && !bids_.empty() && ev.price <= bids_.rbegin()->first)
        throw Error(ErrorCode::CrossedBook, describe(ev));
      orders_.emplace(ev.order_id, OpenOrder{ev.side, ev.price, ev.volume});
      side_levels(ev.side)[ev.price] += ev.volume;
      break;
    }
    case Action::Cancel: {
      auto it = orders_.find(ev.order_id);
      if (it == orders_.end()) throw Error(ErrorCode::UnknownOrderId, describe(ev));
      const Qty amount = ev.volume == 0 ? it->second.remaining : ev.volume;
      if (amount > it->second.remaining) throw Error(ErrorCode::NegativeResidual, describe(ev));
      reduce(ev.order_id, it->second, amount);
      out.kind = ApplyKind::Cancelled;
      break;
    }
    case Action::Trade: {
      auto it = orders_.find(ev.order_id);
      if (it == orders_.end()) {
        if (ev.counterparty_id && orders_.contains(*ev.counterparty_id)) {
          out.kind = ApplyKind::AggressorEcho;
          break;
        }
        throw Error(ErrorCode::UnknownOrderId, describe(ev));
      }
      if (ev.volume > it->second.remaining) throw Error(ErrorCode::NegativeResidual, describe(ev));
      Fill fill{ev.timestamp, ev.order_id, ev.counterparty_id, it->second.side, it->second.price,
                ev.volume, ev.volume == it->second.remaining};
      reduce(ev.order_id, it->second, ev.volume);
      out.kind = ApplyKind::Filled;
      out.fill = fill;
      break;
    }
  }
  last_ts_ = ev.timestamp;
  return out;
}

std::optional<Price> OrderBook::best_bid() const {
  if (bids_.empty()) return std::nullopt;
  return bids_.rbegin()->first;
}

std::optional<Price> OrderBook::best_ask() const {
  if (asks_.empty()) return std::nullopt;
  return asks_.begin()->first;
}

Qty OrderBook::volume_at(Side side, Price price) const {
  const auto& lv = side_levels(side);
  auto it = lv.find(price);
  return it == lv.end() ? 0 : it->second;
}

std::size_t OrderBook::level_count(Side side) const { return side_levels(side).size(); }

const OpenOrder* OrderBook::find(OrderId id) const {
  auto it = orders_.find(id);
  return it == orders_.end() ? nullptr : &it->second;
}

std::vector<std::pair<Price, Qty>> OrderBook::levels(Side side) const {
  std::vector<std::pair<Price, Qty>> out;
  if (side == Side::Ask) {
    out.assign(asks_.begin(), asks_.end());
  } else {
    out.assign(bids_.rbegin(), bids_.rend());
  }
  return out;
}

BookSnapshot OrderBook::snapshot(std::size_t depth) const {
  if (bids_.empty() || asks_.empty()) throw Error(ErrorCode::EmptySide, "snapshot needs both sides");
  BookSnapshot s;
  s.timestamp = last_ts_;
  s.best_ask = asks_.begin()->first;
  s.best_bid = bids_.rbegin()->first;
  s.ask.assign(depth + 1, 0.0);
  s.bid.assign(depth + 1, 0.0);
  const Price ask_end = s.best_ask + static_cast<Price>(depth);
  for (auto it = asks_.begin(); it != asks_.end() && it->first <= ask_end; ++it)
    s.ask[static_cast<std::size_t>(it->first - s.best_ask)] = static_cast<double>(it->second);
  const Price bid_end = s.best_bid - static_cast<Price>(depth);
  for (auto it = bids_.rbegin(); it != bids_.rend() && it->first >= bid_end; ++it)
    s.bid[static_cast<std::size_t>(s.best_bid - it->first)] = static_cast<double>(it->second);
  return s;
}

bool OrderBook::consistent() const {
  std::map<Price, Qty> b, a;
  for (const auto& [id, o] : orders_) {
    if (o.remaining <= 0) return false;
    (o.side == Side::Bid ? b : a)[o.price] += o.remaining;
  }
  if (b != bids_ || a != asks_) return false;
  if (!bids_.empty() && !asks_.empty() && bids_.rbegin()->first >= asks_.begin()->first) return false;
  return true;
}

}  // namespace spoofwatch
