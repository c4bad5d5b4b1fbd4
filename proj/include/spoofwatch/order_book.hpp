#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

namespace spoofwatch {

using OrderId = std::uint64_t;
using Price = std::int64_t;   // integer tick multiples
using Qty = std::int64_t;     // shares
using TimeNs = std::int64_t;  // nanoseconds since epoch
inline constexpr double kNsPerSecond = 1e9;

enum class Side : std::uint8_t { Bid, Ask };
enum class Action : std::uint8_t { Book, Cancel, Trade };

constexpr Side opposite(Side s) { return s == Side::Bid ? Side::Ask : Side::Bid; }

// One level-2 diff record.
//
// For CANCEL, `volume` is the cancelled amount; 0 cancels whatever remains.
// For TRADE, `order_id` names the resting order and `counterparty_id` the
// aggressor. A record whose order_id is unknown but whose counterparty is a
// resting order is the aggressor-side echo of a match and changes nothing.
struct OrderEvent {
  TimeNs timestamp = 0;
  OrderId order_id = 0;
  Side side = Side::Bid;
  Price price = 0;
  Qty volume = 0;
  Action action = Action::Book;
  std::optional<OrderId> counterparty_id;

  friend bool operator==(const OrderEvent&, const OrderEvent&) = default;
};

struct OpenOrder {
  Side side;
  Price price;
  Qty remaining;

  friend bool operator==(const OpenOrder&, const OpenOrder&) = default;
};

struct Fill {
  TimeNs timestamp;
  OrderId resting_id;
  std::optional<OrderId> aggressor_id;
  Side resting_side;
  Price price;
  Qty volume;
  bool order_done;
};

enum class ApplyKind { Booked, Cancelled, Filled, AggressorEcho };

struct ApplyOutcome {
  ApplyKind kind;
  std::optional<Fill> fill;
};

// Relative-depth view of the book: ask[k] is the volume resting at
// best_ask + k ticks, bid[k] the volume at best_bid - k ticks.
struct BookSnapshot {
  TimeNs timestamp = 0;
  Price best_ask = 0;
  Price best_bid = 0;
  std::vector<double> ask;
  std::vector<double> bid;

  std::size_t depth() const { return ask.empty() ? 0 : ask.size() - 1; }
  double mid() const { return 0.5 * static_cast<double>(best_ask + best_bid); }
};

class OrderBook {
 public:
  explicit OrderBook(double tick_size = 0.01);

  // Applies a diff record. Throws Error{UnknownOrderId, DuplicateOrderId,
  // NegativeResidual, OutOfOrderTimestamp, CrossedBook, InvalidArgument};
  // on throw the book is left unchanged.
  ApplyOutcome apply(const OrderEvent& ev);

  BookSnapshot snapshot(std::size_t depth) const;

  std::optional<Price> best_bid() const;
  std::optional<Price> best_ask() const;
  Qty volume_at(Side side, Price price) const;
  std::size_t level_count(Side side) const;
  std::size_t open_order_count() const { return orders_.size(); }
  const OpenOrder* find(OrderId id) const;
  double tick_size() const { return tick_size_; }
  TimeNs last_timestamp() const { return last_ts_; }

  // Levels in price priority (bids high to low, asks low to high).
  std::vector<std::pair<Price, Qty>> levels(Side side) const;

  // Checks resident volumes against the open-order table.
  bool consistent() const;

  friend bool operator==(const OrderBook& a, const OrderBook& b) {
    return a.bids_ == b.bids_ && a.asks_ == b.asks_ && a.orders_ == b.orders_;
  }

 private:
  std::map<Price, Qty>& side_levels(Side s) { return s == Side::Bid ? bids_ : asks_; }
  const std::map<Price, Qty>& side_levels(Side s) const { return s == Side::Bid ? bids_ : asks_; }
  void reduce(OrderId id, OpenOrder& order, Qty amount);

  double tick_size_;
  std::map<Price, Qty> bids_;
  std::map<Price, Qty> asks_;
  std::unordered_map<OrderId, OpenOrder> orders_;
  TimeNs last_ts_ = std::numeric_limits<TimeNs>::min();
};

}  // namespace spoofwatch
