#include "spoofwatch/synth_market.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "spoofwatch/error.hpp"
#include "spoofwatch/imbalance.hpp"
#include "spoofwatch/numerics.hpp"
#include "spoofwatch/optimizer.hpp"

namespace spoofwatch {

void SimConfig::validate() const {
  model.validate();
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorCode::InvalidArgument, "base depths must be positive");
  if (levels < 2 || levels < model.weights.w.size())
    throw Error(ErrorCode::InvalidArgument, "need at least as many levels as weights, and two");
  if (horizon <= 0 || !(period > 0.0)) throw Error(ErrorCode::InvalidArgument, "horizon and period must be positive");
  if (!(mo_rate >= 0.0) || !(volume_shape > 0.0) || !(spoof_delay > 0.0 && spoof_delay < period))
    throw Error(ErrorCode::InvalidArgument, "invalid flow parameters");
  if (ref_price <= static_cast<Price>(levels)) throw Error(ErrorCode::InvalidArgument, "reference price too low");
  if (fixed_imbalance && !(*fixed_imbalance >= 0.0 && *fixed_imbalance <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "fixed imbalance outside [0, 1]");
  std::int64_t prev_end = 0;
  for (const auto& e : episodes) {
    if (e.start < prev_end || e.end <= e.start || e.end > horizon)
      throw Error(ErrorCode::InvalidArgument, "episodes must be ordered, non-overlapping and inside the horizon");
    if (!(e.rho > 0.0)) throw Error(ErrorCode::InvalidArgument, "episode rho must be positive");
    for (std::size_t k : e.depths)
      if (k >= model.weights.w.size()) throw Error(ErrorCode::InvalidArgument, "episode depth beyond the model");
    prev_end = e.end;
  }
}

namespace {

struct Resting {
  OrderId id;
  Qty qty;
};

struct Level {
  Price price;
  std::vector<Resting> orders;

  Qty volume() const {
    Qty s = 0;
    for (const auto& o : orders) s += o.qty;
    return s;
  }
};

class Market {
 public:
  Market(const SimConfig& cfg, const EventSink& sink, SimTrace* trace)
      : cfg_(cfg), sink_(sink), trace_(trace), rng_(cfg.seed), depths_(depth_params(cfg.model)) {}

  SimLabels run() {
    const TimeNs f = static_cast<TimeNs>(std::llround(cfg_.period * kNsPerSecond));
    const TimeNs delay = static_cast<TimeNs>(std::llround(cfg_.spoof_delay * kNsPerSecond));
    const auto& w = cfg_.model.weights.w;
    Price r = cfg_.ref_price;
    std::size_t ep = 0;
    bool buy_pending = false;
    double pending_rho = 0.0;
    for (const auto& e : cfg_.episodes)
      labels_.episodes.push_back({e.start, e.end, e.start * f, e.end * f});

    for (std::int64_t j = 0; j < cfg_.horizon; ++j) {
      const TimeNs t0 = j * f;
      if (trace_ && j > 0) trace_->period_end_books.push_back(snapshot(t0 - 1));
      relay(t0, r);
      while (ep < cfg_.episodes.size() && cfg_.episodes[ep].end <= j) ++ep;
      const SpoofEpisode* episode =
          ep < cfg_.episodes.size() && cfg_.episodes[ep].start <= j ? &cfg_.episodes[ep] : nullptr;
      const bool spoof_now = episode && (j - episode->start) % 2 == 0;

      // market orders in (t0, t0 + f); the agent acts a fixed delay after the re-lay
      enum class Kind { Buy, Post, Legit };
      struct Pending {
        TimeNs t;
        Kind kind;
      };
      std::vector<Pending> actions;
      const std::uint64_t n = rng_.poisson(cfg_.mo_rate);
      for (std::uint64_t m = 0; m < n; ++m) {
        TimeNs t = t0 + static_cast<TimeNs>(rng_.uniform_open() * static_cast<double>(f));
        actions.push_back({std::clamp(t, t0 + 1, t0 + f - 1), Kind::Legit});
      }
      if (buy_pending) actions.push_back({t0 + delay, Kind::Buy});
      if (spoof_now) actions.push_back({t0 + delay, Kind::Post});
      std::stable_sort(actions.begin(), actions.end(), [](const Pending& u, const Pending& v) {
        return u.t != v.t ? u.t < v.t : u.kind < v.kind;
      });

      auto [B, A] = masses(w);
      double mass_b = 0.0, mass_a = 0.0;
      TimeNs cur = t0;
      int ysum = 0;
      for (const auto& o : actions) {
        mass_b += B * static_cast<double>(o.t - cur);
        mass_a += A * static_cast<double>(o.t - cur);
        cur = o.t;
        switch (o.kind) {
          case Kind::Buy:
            ysum += spoofer_buy(o.t, pending_rho);
            break;
          case Kind::Post:
            post_spoof(o.t, *episode);
            break;
          case Kind::Legit:
            ysum += market_order(o.t);
            break;
        }
        std::tie(B, A) = masses(w);
      }
      mass_b += B * static_cast<double>(t0 + f - cur);
      mass_a += A * static_cast<double>(t0 + f - cur);
      buy_pending = false;
      if (spoof_now) {
        buy_pending = true;
        pending_rho = episode->rho;
      }

      const double i = cfg_.fixed_imbalance ? *cfg_.fixed_imbalance : mass_b / (mass_a + mass_b);
      const PriceDist dp = mix_with_mirror(cfg_.model.dp_plus, i);
      const int x = dp.lo + static_cast<int>(rng_.categorical(dp.probs));
      r += x + ysum;
      if (r <= static_cast<Price>(cfg_.levels)) throw Error(ErrorCode::InvalidArgument, "price walked to zero");
      if (trace_) {
        trace_->x.push_back(x);
        trace_->y.push_back(ysum);
        trace_->imbalance.push_back(i);
      }
    }
    if (trace_) trace_->period_end_books.push_back(snapshot(cfg_.horizon * f - 1));
    // the run ends with an empty book
    cancel_all(cfg_.horizon * f);
    return std::move(labels_);
  }

 private:
  void emit(const OrderEvent& ev) { sink_(ev); }

  void cancel_all(TimeNs t) {
    for (auto* side : {&asks_, &bids_}) {
      const Side s = side == &asks_ ? Side::Ask : Side::Bid;
      for (const auto& lvl : *side)
        for (const auto& o : lvl.orders) emit({t, o.id, s, lvl.price, 0, Action::Cancel, std::nullopt});
      side->clear();
    }
  }

  Qty draw_volume(double base) {
    const double g = rng_.gamma(cfg_.volume_shape, 1.0 / cfg_.volume_shape);
    return std::max<Qty>(1, static_cast<Qty>(std::llround(base * g)));
  }

  void relay(TimeNs t, Price r) {
    cancel_all(t);
    for (std::size_t k = 0; k < cfg_.levels; ++k) {
      const Price pa = r + 1 + static_cast<Price>(k), pb = r - static_cast<Price>(k);
      const Qty va = draw_volume(cfg_.a), vb = draw_volume(cfg_.b);
      asks_.push_back({pa, {{next_id_, va}}});
      emit({t, next_id_++, Side::Ask, pa, va, Action::Book, std::nullopt});
      bids_.push_back({pb, {{next_id_, vb}}});
      emit({t, next_id_++, Side::Bid, pb, vb, Action::Book, std::nullopt});
    }
  }

  // Weighted bid and ask volume by tick offset from each best quote.
  std::pair<double, double> masses(const std::vector<double>& w) const {
    double B = 0.0, A = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      B += w[k] * static_cast<double>(volume_at(bids_, bids_.empty() ? 0 : bids_.front().price - static_cast<Price>(k)));
      A += w[k] * static_cast<double>(volume_at(asks_, asks_.empty() ? 0 : asks_.front().price + static_cast<Price>(k)));
    }
    return {B, A};
  }

  static Qty volume_at(const std::vector<Level>& side, Price p) {
    for (const auto& l : side)
      if (l.price == p) return l.volume();
    return 0;
  }

  BookSnapshot snapshot(TimeNs t) const {
    BookSnapshot s;
    s.timestamp = t;
    s.best_ask = asks_.front().price;
    s.best_bid = bids_.front().price;
    for (std::size_t k = 0; k <= cfg_.levels; ++k) {
      s.ask.push_back(static_cast<double>(volume_at(asks_, s.best_ask + static_cast<Price>(k))));
      s.bid.push_back(static_cast<double>(volume_at(bids_, s.best_bid - static_cast<Price>(k))));
    }
    return s;
  }

  void post_spoof(TimeNs t, const SpoofEpisode& e) {
    const auto [B, A] = masses(cfg_.model.weights.w);
    SpoofParams p;
    p.ibar = B / (A + B);
    p.rho = e.rho;
    p.a = cfg_.a;
    p.mu_plus = cfg_.model.mu_plus();
    p.tick_size = cfg_.model.tick_size;
    p.depths = depths_;
    std::vector<std::size_t> targets = e.depths;
    if (targets.empty())
      for (std::size_t k = 0; k < depths_.size(); ++k) targets.push_back(k);
    for (std::size_t k : targets) {
      const Qty v = static_cast<Qty>(std::llround(optimal_spoof_at_depth(p, k).v_spoof));
      if (v < 1 || k >= asks_.size()) continue;
      asks_[k].orders.push_back({next_id_, v});
      labels_.spoof_order_ids.push_back(next_id_);
      emit({t, next_id_++, Side::Ask, asks_[k].price, v, Action::Book, std::nullopt});
    }
  }

  // Sweeps `side` for `volume` shares; returns the tick depth reached.
  int execute(TimeNs t, Side resting, Qty volume, OrderId aggressor) {
    auto& side = resting == Side::Ask ? asks_ : bids_;
    const Price best = side.front().price;
    Price last = best;
    while (volume > 0 && !side.empty()) {
      Level& lvl = side.front();
      last = lvl.price;
      std::size_t n = 0;
      while (n < lvl.orders.size() && volume > 0) {
        Resting& o = lvl.orders[n];
        const Qty fill = std::min(volume, o.qty);
        emit({t, o.id, resting, lvl.price, fill, Action::Trade, aggressor});
        o.qty -= fill;
        volume -= fill;
        if (o.qty == 0) ++n;
      }
      lvl.orders.erase(lvl.orders.begin(), lvl.orders.begin() + static_cast<std::ptrdiff_t>(n));
      if (lvl.orders.empty()) side.erase(side.begin());
    }
    return static_cast<int>(std::abs(last - best));
  }

  // Volume chosen so the swept depth equals the drawn one.
  int market_order(TimeNs t) {
    const PriceDist& dq = cfg_.model.dq;
    int y = dq.lo + static_cast<int>(rng_.categorical(dq.probs));
    Side resting = y > 0 ? Side::Ask : Side::Bid;
    if (y == 0 && rng_.uniform() < 0.5) resting = Side::Ask;
    const auto& side = resting == Side::Ask ? asks_ : bids_;
    if (side.size() < 2) return 0;
    const std::size_t d = std::min<std::size_t>(static_cast<std::size_t>(std::abs(y)), side.size() - 2);
    Qty H = 0;
    for (std::size_t k = 0; k < d; ++k) H += side[k].volume();
    const Qty vd = side[d].volume();
    H += std::clamp<Qty>(static_cast<Qty>(std::ceil(rng_.uniform_open() * static_cast<double>(vd))), 1, vd);
    const int reached = execute(t, resting, H, next_id_++);
    return resting == Side::Ask ? reached : -reached;
  }

  int spoofer_buy(TimeNs t, double rho) {
    Qty total = 0;
    for (std::size_t k = 0; k + 1 < asks_.size(); ++k) total += asks_[k].volume();
    const Qty H = std::min(std::max<Qty>(1, static_cast<Qty>(std::llround(rho * cfg_.a))), total);
    if (H < 1) return 0;
    const OrderId id = next_id_++;
    labels_.spoof_market_orders.push_back({t, id, H});
    return execute(t, Side::Ask, H, id);
  }

  const SimConfig& cfg_;
  const EventSink& sink_;
  SimTrace* trace_;
  Rng rng_;
  std::vector<DepthParams> depths_;
  std::vector<Level> asks_;  // best first
  std::vector<Level> bids_;
  OrderId next_id_ = 1;
  SimLabels labels_;
};

}  // namespace

SimLabels simulate(const SimConfig& cfg, const EventSink& sink, SimTrace* trace) {
  cfg.validate();
  Market m(cfg, sink, trace);
  return m.run();
}

std::vector<OrderEvent> simulate_events(const SimConfig& cfg, SimLabels* labels, SimTrace* trace) {
  std::vector<OrderEvent> out;
  SimLabels l = simulate(cfg, [&](const OrderEvent& ev) { out.push_back(ev); }, trace);
  if (labels) *labels = std::move(l);
  return out;
}

std::string labels_json(const SimLabels& labels) {
  nlohmann::ordered_json j;
  j["episodes"] = nlohmann::ordered_json::array();
  for (const auto& e : labels.episodes)
    j["episodes"].push_back(
        {{"start_period", e.start_period}, {"end_period", e.end_period}, {"start_ns", e.start}, {"end_ns", e.end}});
  j["spoof_order_ids"] = labels.spoof_order_ids;
  j["spoof_market_orders"] = nlohmann::ordered_json::array();
  for (const auto& m : labels.spoof_market_orders)
    j["spoof_market_orders"].push_back({{"t_ns", m.t}, {"aggressor_id", m.aggressor_id}, {"volume", m.volume}});
  return j.dump(2) + "\n";
}

}  // namespace spoofwatch
