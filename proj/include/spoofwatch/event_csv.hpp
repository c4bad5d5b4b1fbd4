#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "spoofwatch/order_book.hpp"

namespace spoofwatch {

inline constexpr std::string_view kEventCsvHeader =
    "timestamp,order_id,side,price,volume,action,counterparty_id";

// Maps opaque textual order ids onto dense integers.
class IdInterner {
 public:
  OrderId intern(std::string_view name);
  const std::string& name(OrderId id) const { return names_.at(id); }
  std::size_t size() const { return names_.size(); }

 private:
  std::unordered_map<std::string, OrderId> ids_;
  std::vector<std::string> names_;
};

// Converts a decimal price to ticks; throws ParseError if it is not a tick
// multiple within 1e-9 relative tolerance.
Price price_to_ticks(double price, double tick_size);

// Streaming reader. Errors name the offending line.
class EventCsvReader {
 public:
  EventCsvReader(std::istream& in, double tick_size);

  bool next(OrderEvent& ev);
  std::size_t line() const { return line_; }
  const IdInterner& ids() const { return ids_; }

 private:
  std::istream& in_;
  double tick_size_;
  std::size_t line_ = 0;
  IdInterner ids_;
  std::string buf_;
};

std::vector<OrderEvent> read_events(const std::string& path, double tick_size);

// Writes numeric ids verbatim and prices with exactly as many decimals as the tick.
class EventCsvWriter {
 public:
  EventCsvWriter(std::ostream& out, double tick_size);
  void write(const OrderEvent& ev);

 private:
  std::ostream& out_;
  double tick_size_;
  int decimals_;
};

}  // namespace spoofwatch
