#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spoofwatch/model.hpp"
#include "spoofwatch/order_book.hpp"

namespace spoofwatch {

// Spoofing runs over periods [start, end). The agent spoofs in every other
// period, spoof_delay after the re-lay, and buys spoof_delay after the next one.
struct SpoofEpisode {
  std::int64_t start = 0;
  std::int64_t end = 0;
  std::vector<std::size_t> depths;  // empty: every depth of the model
  double rho = 0.8;                 // H = rho * a
};

struct SimConfig {
  double a = 100.0;
  double b = 100.0;
  std::size_t levels = 10;
  MarketModel model;
  std::int64_t horizon = 20000;  // periods
  double period = 1.0;           // seconds
  double mo_rate = 0.2;          // market orders per period
  double volume_shape = 1.0;     // gamma shape of per-level volume multipliers
  Price ref_price = 10000;       // initial best bid, ticks
  std::vector<SpoofEpisode> episodes;
  double spoof_delay = 0.001;  // seconds after the re-lay
  std::optional<double> fixed_imbalance;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SpoofMarketOrder {
  TimeNs t = 0;
  OrderId aggressor_id = 0;
  Qty volume = 0;
};

struct SimLabels {
  struct Episode {
    std::int64_t start_period = 0;
    std::int64_t end_period = 0;
    TimeNs start = 0;
    TimeNs end = 0;
  };
  std::vector<Episode> episodes;
  std::vector<OrderId> spoof_order_ids;
  std::vector<SpoofMarketOrder> spoof_market_orders;
};

// Optional per-period record for tests and diagnostics.
struct SimTrace {
  std::vector<BookSnapshot> period_end_books;  // just before each re-lay
  std::vector<int> x;                          // limit-order price move
  std::vector<int> y;                          // summed market-order moves
  std::vector<double> imbalance;               // time-averaged over the period
};

using EventSink = std::function<void(const OrderEvent&)>;

SimLabels simulate(const SimConfig& cfg, const EventSink& sink, SimTrace* trace = nullptr);

std::vector<OrderEvent> simulate_events(const SimConfig& cfg, SimLabels* labels = nullptr, SimTrace* trace = nullptr);

std::string labels_json(const SimLabels& labels);

}  // namespace spoofwatch
