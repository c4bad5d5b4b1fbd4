#include "spoofwatch/event_csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "spoofwatch/error.hpp"

namespace spoofwatch {

OrderId IdInterner::intern(std::string_view name) {
  auto it = ids_.find(std::string(name));
  if (it != ids_.end()) return it->second;
  const OrderId id = names_.size();
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

Price price_to_ticks(double price, double tick_size) {
  const double ticks = std::round(price / tick_size);
  if (std::abs(ticks * tick_size - price) > 1e-9 * std::abs(price))
    throw Error(ErrorCode::ParseError, fmt::format("price {} is not a multiple of tick {}", price, tick_size));
  return static_cast<Price>(ticks);
}

namespace {

template <typename T>
T parse_int(std::string_view s, std::size_t line, const char* field) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorCode::ParseError, fmt::format("line {}: bad {} '{}'", line, field, s));
  return value;
}

int tick_decimals(double tick) {
  for (int d = 0; d <= 12; ++d) {
    const double scaled = tick * std::pow(10.0, d);
    if (std::abs(scaled - std::round(scaled)) < 1e-9 * scaled) return d;
  }
  return 12;
}

}  // namespace

EventCsvReader::EventCsvReader(std::istream& in, double tick_size) : in_(in), tick_size_(tick_size) {
  if (!(tick_size > 0.0)) throw Error(ErrorCode::InvalidArgument, "tick size must be positive");
  if (!std::getline(in_, buf_)) throw Error(ErrorCode::ParseError, "missing header");
  ++line_;
  if (!buf_.empty() && buf_.back() == '\r') buf_.pop_back();
  if (buf_ != kEventCsvHeader) throw Error(ErrorCode::ParseError, "unexpected header '" + buf_ + "'");
}

bool EventCsvReader::next(OrderEvent& ev) {
  while (std::getline(in_, buf_)) {
    ++line_;
    if (!buf_.empty() && buf_.back() == '\r') buf_.pop_back();
    if (buf_.empty()) continue;

    std::array<std::string_view, 7> f;
    std::string_view rest(buf_);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const auto comma = rest.find(',');
      if (i + 1 < f.size()) {
        if (comma == std::string_view::npos)
          throw Error(ErrorCode::ParseError, fmt::format("line {}: expected 7 fields", line_));
        f[i] = rest.substr(0, comma);
        rest.remove_prefix(comma + 1);
      } else {
        if (comma != std::string_view::npos)
          throw Error(ErrorCode::ParseError, fmt::format("line {}: expected 7 fields", line_));
        f[i] = rest;
      }
    }

    ev = OrderEvent{};
    ev.timestamp = parse_int<TimeNs>(f[0], line_, "timestamp");
    if (f[1].empty()) throw Error(ErrorCode::ParseError, fmt::format("line {}: empty order_id", line_));
    ev.order_id = ids_.intern(f[1]);
    if (f[2] == "B") {
      ev.side = Side::Bid;
    } else if (f[2] == "S") {
      ev.side = Side::Ask;
    } else {
      throw Error(ErrorCode::ParseError, fmt::format("line {}: bad side '{}'", line_, f[2]));
    }
    double price = 0.0;
    {
      auto [ptr, ec] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), price);
      if (ec != std::errc() || ptr != f[3].data() + f[3].size())
        throw Error(ErrorCode::ParseError, fmt::format("line {}: bad price '{}'", line_, f[3]));
    }
    try {
      ev.price = price_to_ticks(price, tick_size_);
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, fmt::format("line {}: {}", line_, e.what()));
    }
    ev.volume = parse_int<Qty>(f[4], line_, "volume");
    if (f[5] == "BOOK") {
      ev.action = Action::Book;
    } else if (f[5] == "CANCEL") {
      ev.action = Action::Cancel;
    } else if (f[5] == "TRADE") {
      ev.action = Action::Trade;
    } else {
      throw Error(ErrorCode::ParseError, fmt::format("line {}: bad action '{}'", line_, f[5]));
    }
    if (!f[6].empty()) ev.counterparty_id = ids_.intern(f[6]);
    return true;
  }
  return false;
}

std::vector<OrderEvent> read_events(const std::string& path, double tick_size) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  EventCsvReader reader(in, tick_size);
  std::vector<OrderEvent> out;
  OrderEvent ev;
  while (reader.next(ev)) out.push_back(ev);
  return out;
}

EventCsvWriter::EventCsvWriter(std::ostream& out, double tick_size)
    : out_(out), tick_size_(tick_size), decimals_(tick_decimals(tick_size)) {
  out_ << kEventCsvHeader << '\n';
}

void EventCsvWriter::write(const OrderEvent& ev) {
  static constexpr std::array<const char*, 3> kAction{"BOOK", "CANCEL", "TRADE"};
  const double price = static_cast<double>(ev.price) * tick_size_;
  out_ << fmt::format("{},{},{},{:.{}f},{},{},", ev.timestamp, ev.order_id, ev.side == Side::Bid ? "B" : "S",
                      price, decimals_, ev.volume, kAction[static_cast<std::size_t>(ev.action)]);
  if (ev.counterparty_id) out_ << *ev.counterparty_id;
  out_ << '\n';
}

}  // namespace spoofwatch
