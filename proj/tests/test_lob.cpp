#include <map>
#include <random>
#include <sstream>

#include "doctest.h"
#include "spoofwatch/error.hpp"
#include "spoofwatch/event_csv.hpp"
#include "spoofwatch/liquidity.hpp"
#include "spoofwatch/order_book.hpp"
#include "spoofwatch/timeline.hpp"

using namespace spoofwatch;

namespace {

OrderEvent book(TimeNs t, OrderId id, Side s, Price p, Qty v) { return {t, id, s, p, v, Action::Book, {}}; }
OrderEvent cancel(TimeNs t, OrderId id, Side s, Price p, Qty v) { return {t, id, s, p, v, Action::Cancel, {}}; }
OrderEvent trade(TimeNs t, OrderId id, Side s, Price p, Qty v, OrderId cp) {
  return {t, id, s, p, v, Action::Trade, cp};
}

// Walks the book share by share.
double brute_cost(const std::vector<double>& v, int H) {
  double cost = 0.0;
  std::size_t k = 0;
  double left = v[0];
  for (int s = 0; s < H; ++s) {
    while (left < 1.0) left = v[++k];
    cost += static_cast<double>(k);
    left -= 1.0;
  }
  return cost;
}

}  // namespace

TEST_CASE("booking an ask creates a level") {
  OrderBook b(1.0);
  b.apply(book(1, 1, Side::Ask, 100, 10));
  CHECK(b.volume_at(Side::Ask, 100) == 10);
  CHECK(b.best_ask() == 100);
}

TEST_CASE("full trade removes the level and recomputes best ask") {
  OrderBook b(1.0);
  b.apply(book(1, 1, Side::Ask, 100, 10));
  b.apply(book(1, 2, Side::Ask, 101, 7));
  auto out = b.apply(trade(2, 1, Side::Ask, 100, 10, 99));
  CHECK(out.kind == ApplyKind::Filled);
  CHECK(out.fill->order_done);
  CHECK(b.volume_at(Side::Ask, 100) == 0);
  CHECK(b.best_ask() == 101);
  CHECK(b.find(1) == nullptr);
}

TEST_CASE("cancel of one of two orders at a level") {
  OrderBook b(1.0);
  b.apply(book(1, 1, Side::Ask, 100, 10));
  b.apply(book(2, 2, Side::Ask, 100, 5));
  b.apply(cancel(3, 2, Side::Ask, 100, 0));
  CHECK(b.volume_at(Side::Ask, 100) == 10);
  CHECK(b.consistent());
}

TEST_CASE("corrupt records are rejected and leave the book unchanged") {
  OrderBook b(1.0);
  b.apply(book(5, 1, Side::Ask, 100, 10));
  b.apply(book(5, 2, Side::Bid, 99, 10));
  const OrderBook before = b;
  auto code_of = [&](const OrderEvent& ev) {
    try {
      b.apply(ev);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoError;
  };
  CHECK(code_of(cancel(6, 42, Side::Ask, 100, 0)) == ErrorCode::UnknownOrderId);
  CHECK(code_of(trade(6, 42, Side::Ask, 100, 1, 7)) == ErrorCode::UnknownOrderId);
  CHECK(code_of(trade(6, 1, Side::Ask, 100, 11, 7)) == ErrorCode::NegativeResidual);
  CHECK(code_of(cancel(6, 1, Side::Ask, 100, 11)) == ErrorCode::NegativeResidual);
  CHECK(code_of(book(4, 3, Side::Ask, 101, 1)) == ErrorCode::OutOfOrderTimestamp);
  CHECK(code_of(book(6, 1, Side::Ask, 101, 1)) == ErrorCode::DuplicateOrderId);
  CHECK(code_of(book(6, 3, Side::Bid, 100, 1)) == ErrorCode::CrossedBook);
  CHECK(b == before);
}

TEST_CASE("aggressor-side echo of a trade is ignored") {
  OrderBook b(1.0);
  b.apply(book(1, 1, Side::Ask, 100, 10));
  b.apply(trade(2, 1, Side::Ask, 100, 4, 50));
  auto out = b.apply(trade(2, 50, Side::Bid, 100, 4, 1));
  CHECK(out.kind == ApplyKind::AggressorEcho);
  CHECK(b.volume_at(Side::Ask, 100) == 6);
}

TEST_CASE("snapshot vectors") {
  OrderBook b(1.0);
  b.apply(book(1, 1, Side::Ask, 100, 10));
  b.apply(book(1, 2, Side::Bid, 98, 4));
  auto s = b.snapshot(2);
  CHECK(s.ask == std::vector<double>{10, 0, 0});
  CHECK(s.bid == std::vector<double>{4, 0, 0});

  b.apply(book(2, 3, Side::Ask, 102, 6));
  b.apply(book(2, 4, Side::Ask, 103, 1));
  s = b.snapshot(2);
  CHECK(s.ask == std::vector<double>{10, 0, 6});
  CHECK(s.depth() == 2);

  OrderBook blk(1.0);
  for (int k = 0; k < 5; ++k) {
    blk.apply(book(1, 10 + k, Side::Ask, 100 + k, 10));
    blk.apply(book(1, 20 + k, Side::Bid, 99 - k, 10));
  }
  CHECK(blk.snapshot(4).ask == std::vector<double>(5, 10.0));

  OrderBook empty(1.0);
  empty.apply(book(1, 1, Side::Ask, 100, 1));
  CHECK_THROWS_AS(empty.snapshot(2), Error);
}

TEST_CASE("replay matches a per-price diff oracle and is deterministic") {
  std::mt19937_64 rng(7);
  std::vector<OrderEvent> evs;
  std::map<OrderId, OpenOrder> live;
  OrderId next = 1;
  for (int i = 0; i < 3000; ++i) {
    const TimeNs t = i / 3;
    std::uniform_int_distribution<int> pick(0, 9);
    const int r = pick(rng);
    if (r < 5 || live.empty()) {
      const Side s = (rng() & 1) ? Side::Ask : Side::Bid;
      const Price p = s == Side::Ask ? 101 + static_cast<Price>(rng() % 8) : 100 - static_cast<Price>(rng() % 8);
      const Qty v = 1 + static_cast<Qty>(rng() % 50);
      evs.push_back(book(t, next, s, p, v));
      live[next++] = {s, p, v};
    } else {
      auto it = live.begin();
      std::advance(it, static_cast<long>(rng() % live.size()));
      const Qty amount = 1 + static_cast<Qty>(rng() % static_cast<std::uint64_t>(it->second.remaining));
      evs.push_back(r < 8 ? cancel(t, it->first, it->second.side, it->second.price, amount)
                          : trade(t, it->first, it->second.side, it->second.price, amount, 999999));
      it->second.remaining -= amount;
      if (it->second.remaining == 0) live.erase(it);
    }
  }
  OrderBook a(1.0), b(1.0);
  for (const auto& e : evs) a.apply(e);
  for (const auto& e : evs) b.apply(e);
  CHECK(a == b);
  CHECK(a.consistent());

  std::map<Price, Qty> asks, bids;
  for (const auto& [id, o] : live) (o.side == Side::Ask ? asks : bids)[o.price] += o.remaining;
  for (const auto& [p, q] : asks) CHECK(a.volume_at(Side::Ask, p) == q);
  for (const auto& [p, q] : bids) CHECK(a.volume_at(Side::Bid, p) == q);
  CHECK(a.level_count(Side::Ask) == asks.size());
  CHECK(a.level_count(Side::Bid) == bids.size());
}

TEST_CASE("tick depth and liquidity cost") {
  const std::vector<double> v{10, 10, 10};
  CHECK(tick_depth(v, 25) == 2);
  CHECK(liquidity_cost(v, 25) == doctest::Approx(20.0));
  CHECK(tick_depth(v, 7) == 0);
  CHECK(liquidity_cost(v, 0) == 0.0);
  CHECK_THROWS_AS(tick_depth(v, 31), Error);
  try {
    liquidity_cost(v, 31);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientLiquidity);
  }
  CHECK(block_liquidity_cost(100, 150) == doctest::Approx(112.5));
  CHECK(block_tick_depth(100, 250) == doctest::Approx(2.5));
}

TEST_CASE("liquidity cost matches the share-by-share walk and is convex") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(8);
    double total = 0.0;
    for (auto& x : v) {
      x = static_cast<double>(rng() % 40);
      total += x;
    }
    if (total < 2) continue;
    for (int H = 0; H <= static_cast<int>(total); ++H) CHECK(liquidity_cost(v, H) == brute_cost(v, H));
    for (int H = 0; H + 2 <= static_cast<int>(total); ++H) {
      const double g0 = liquidity_cost(v, H), g1 = liquidity_cost(v, H + 1), g2 = liquidity_cost(v, H + 2);
      CHECK(g1 >= g0);
      CHECK(2 * g1 <= g0 + g2 + 1e-9);
    }
  }
}

TEST_CASE("block liquidity cost converges to the quadratic approximation") {
  const double a = 100.0;
  std::vector<double> v(2000, a);
  for (double H : {150.0, 1000.0, 10000.0, 100000.0}) {
    const double g = liquidity_cost(v, H);
    const double approx = block_liquidity_cost(a, H);
    const auto F = static_cast<double>(tick_depth(v, H));
    CHECK(std::abs(g - approx) / approx <= 1.0 / F);
  }
}

TEST_CASE("csv round trip") {
  std::ostringstream out;
  EventCsvWriter w(out, 0.01);
  std::vector<OrderEvent> evs{book(1, 1, Side::Ask, 10001, 10), book(1, 2, Side::Bid, 9999, 5),
                              trade(2, 1, Side::Ask, 10001, 3, 77), cancel(3, 2, Side::Bid, 9999, 0)};
  for (const auto& e : evs) w.write(e);
  CHECK(out.str().find("100.01") != std::string::npos);
  std::istringstream in(out.str());
  EventCsvReader r(in, 0.01);
  OrderEvent ev;
  std::vector<OrderEvent> back;
  while (r.next(ev)) back.push_back(ev);
  REQUIRE(back.size() == evs.size());
  for (std::size_t i = 0; i < evs.size(); ++i) {
    CHECK(back[i].timestamp == evs[i].timestamp);
    CHECK(back[i].price == evs[i].price);
    CHECK(back[i].volume == evs[i].volume);
    CHECK(back[i].action == evs[i].action);
    CHECK(back[i].side == evs[i].side);
    CHECK(back[i].counterparty_id.has_value() == evs[i].counterparty_id.has_value());
  }
  CHECK(r.ids().name(back[2].order_id) == "1");
}

TEST_CASE("csv rejects off-tick prices and bad headers") {
  std::istringstream bad_header("time,order\n");
  CHECK_THROWS_AS(EventCsvReader(bad_header, 0.01), Error);
  std::istringstream off("timestamp,order_id,side,price,volume,action,counterparty_id\n1,a,S,100.005,10,BOOK,\n");
  EventCsvReader r(off, 0.01);
  OrderEvent ev;
  CHECK_THROWS_AS(r.next(ev), Error);
  CHECK(price_to_ticks(100.01, 0.01) == 10001);
}

TEST_CASE("timeline window integration") {
  BookTimeline tl(1);
  auto snap = [](TimeNs t, double b0, double a0) {
    BookSnapshot s;
    s.timestamp = t;
    s.best_ask = 101;
    s.best_bid = 100;
    s.ask = {a0, 0};
    s.bid = {b0, 0};
    return s;
  };
  tl.push(snap(0, 4, 6));
  tl.push(snap(1'000'000'000, 6, 4));
  auto m = tl.window(0, 2'000'000'000);
  CHECK(m.bid[0] == doctest::Approx(10.0));
  CHECK(m.ask[0] == doctest::Approx(10.0));
  CHECK(m.points == 2);
  m = tl.window(500'000'000, 2'000'000'000);
  CHECK(m.points == 1);
  CHECK(m.bid[0] == doctest::Approx(6.0));
  CHECK_THROWS_AS(tl.window(1'500'000'000, 1'800'000'000), Error);
  CHECK(tl.index_at(999'999'999) == 0u);
  CHECK(!tl.index_at(-1).has_value());
}

TEST_CASE("timeline groups fills into market orders with pre-trade books") {
  TimelineBuilder tb(1.0, 3);
  tb.apply(book(1, 1, Side::Ask, 100, 10));
  tb.apply(book(1, 2, Side::Ask, 101, 10));
  tb.apply(book(1, 3, Side::Bid, 99, 10));
  tb.apply(trade(2, 1, Side::Ask, 100, 10, 500));
  tb.apply(trade(2, 2, Side::Ask, 101, 5, 500));
  tb.apply(trade(3, 3, Side::Bid, 99, 2, 501));
  auto tl = tb.finish();
  REQUIRE(tl.market_orders.size() == 2);
  CHECK(tl.market_orders[0].volume == 15);
  CHECK(tl.market_orders[0].aggressor == Side::Bid);
  REQUIRE(tl.market_orders[0].pre.has_value());
  CHECK(tl.market_orders[0].pre->ask[0] == 10.0);
  CHECK(tl.market_orders[1].aggressor == Side::Ask);
  CHECK(tl.size() == 3);
  CHECK(tl.best_ask(1) == 101);
}
