#include "spoofwatch/detector.hpp"

#include <algorithm>
#include <cmath>

#include "spoofwatch/error.hpp"
#include "spoofwatch/imbalance.hpp"
#include "spoofwatch/optimizer.hpp"

namespace spoofwatch {

namespace {

TimeNs to_ns(double seconds) { return static_cast<TimeNs>(std::llround(seconds * kNsPerSecond)); }

double mean_level(std::span<const double> mass, std::size_t levels, double duration) {
  double s = 0.0;
  for (std::size_t k = 0; k < levels; ++k) s += mass[k];
  return s / (static_cast<double>(levels) * duration);
}

}  // namespace

std::vector<MarketOrderMark> mark_market_orders(const BookTimeline& tl, const MarketModel& model,
                                                const MarkConfig& cfg, MarkStats* stats) {
  if (!(cfg.f > 0.0) || !(cfg.post_window > 0.0)) throw Error(ErrorCode::InvalidArgument, "windows must be positive");
  const std::size_t levels = model.weights.w.size();
  if (levels > tl.depth() + 1) throw Error(ErrorCode::InvalidArgument, "timeline shallower than the model");
  MarkStats local;
  MarkStats& st = stats ? *stats : local;
  std::vector<MarketOrderMark> out;
  if (tl.empty()) return out;

  const TimeNs f = to_ns(cfg.f);
  const TimeNs post = to_ns(cfg.post_window);
  const bool buy = cfg.side == Side::Bid;
  const auto& orders = tl.market_orders;
  std::size_t head = 0;  // first order inside [t - f, t]
  double window_volume = 0.0;
  std::size_t tail = 0;  // next order to enter the running sum

  for (std::size_t n = 0; n < orders.size(); ++n) {
    const MarketOrder& mo = orders[n];
    const TimeNs t = mo.timestamp;
    while (tail < orders.size() && orders[tail].timestamp <= t) {
      if (orders[tail].aggressor == cfg.side) window_volume += static_cast<double>(orders[tail].volume);
      ++tail;
    }
    while (head < tail && orders[head].timestamp < t - f) {
      if (orders[head].aggressor == cfg.side) window_volume -= static_cast<double>(orders[head].volume);
      ++head;
    }
    if (mo.aggressor != cfg.side) {
      ++st.other_side;
      continue;
    }
    if (t - f < tl.time(0) || t + post > tl.time(tl.size() - 1)) {
      ++st.underflow;
      continue;
    }
    WindowMass pre, after;
    try {
      pre = tl.window(t - f, t);
      after = tl.window(t, t + post);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EmptyWindow) throw;
      ++st.empty;
      continue;
    }
    if (!buy) {
      std::swap(pre.ask, pre.bid);
      std::swap(after.ask, after.bid);
    }
    MarketOrderMark m;
    m.t = t;
    m.volume = mo.volume;
    m.i_minus = imbalance_of_mass(pre, model.weights);
    m.i_plus = imbalance_of_mass(after, model.weights);
    m.a_t = mean_level(pre.ask, levels, pre.duration);
    m.b_t = mean_level(pre.bid, levels, pre.duration);
    if (!(m.a_t > 0.0) || !(m.b_t > 0.0) || !(m.i_minus > 0.0 && m.i_minus < 1.0) ||
        !(m.i_plus > 0.0 && m.i_plus < 1.0)) {
      ++st.empty;
      continue;
    }
    m.rho_t = std::max(window_volume, static_cast<double>(mo.volume)) / m.a_t;
    m.i_spoof = compute_spoof_imbalance(m, model);
    out.push_back(m);
  }
  return out;
}

double compute_spoof_imbalance(const MarketOrderMark& mark, const MarketModel& model) {
  SpoofParams p;
  p.ibar = mark.i_minus;
  p.rho = mark.rho_t;
  p.a = mark.a_t;
  p.mu_plus = model.mu_plus();
  p.tick_size = model.tick_size;
  p.depths = depth_params(model);
  const double b = p.b();
  double spoofed = 0.0;
  for (std::size_t k = 0; k < p.depths.size(); ++k) {
    const SpoofSolution s = optimal_spoof_at_depth(p, k);
    spoofed += p.depths[k].w * s.v_spoof;
  }
  if (spoofed <= 0.0) return mark.i_minus;
  return b / (b + p.a + spoofed);
}

JointFit fit_joint_kernels(std::span<const MarketOrderMark> marks, std::size_t min_marks) {
  if (marks.size() < min_marks)
    throw Error(ErrorCode::InsufficientSamples, "need at least " + std::to_string(min_marks) + " marks");
  std::vector<double> im(marks.size()), ip(marks.size()), is(marks.size());
  for (std::size_t i = 0; i < marks.size(); ++i) {
    im[i] = marks[i].i_minus;
    ip[i] = marks[i].i_plus;
    is[i] = marks[i].i_spoof;
  }
  JointFit fit;
  fit.legit = fit_bivariate_normal(im, ip);
  NelderMeadOptions opt;
  opt.max_evals = 20000;
  opt.ftol = 1e-12;
  opt.xtol = 1e-7;
  fit.spoofed = fit_bivariate_skewnormal(is, ip, opt);
  return fit;
}

double wasserstein2(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptySample, "empty sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  double s = 0.0;
  if (x.size() == y.size()) {
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
    return std::sqrt(s / static_cast<double>(x.size()));
  }
  // quantile steps at i/n and j/m; compare in integers to stay exact
  const std::size_t n = x.size(), m = y.size();
  std::size_t i = 0, j = 0;
  std::size_t pos = 0;  // current level, in units of 1/(n m)
  while (i < n && j < m) {
    const std::size_t next_x = (i + 1) * m, next_y = (j + 1) * n;
    const std::size_t next = std::min(next_x, next_y);
    const double d = x[i] - y[j];
    s += d * d * static_cast<double>(next - pos);
    pos = next;
    if (next_x == next) ++i;
    if (next_y == next) ++j;
  }
  return std::sqrt(s / static_cast<double>(n * m));
}

void MonitorConfig::validate() const {
  if (window == 0 || buckets == 0 || window % buckets != 0)
    throw Error(ErrorCode::InvalidArgument, "bucket count must divide the window");
  if (repetitions < 1) throw Error(ErrorCode::InvalidArgument, "need at least one repetition");
  if (consecutive < 0) throw Error(ErrorCode::InvalidArgument, "negative consecutive threshold");
}

std::vector<MonitorPoint> monitor(std::span<const MarketOrderMark> marks, const JointFit& fit,
                                  const MarketModel& model, const MonitorConfig& cfg) {
  cfg.validate();
  if (marks.size() < cfg.window) throw Error(ErrorCode::InsufficientSamples, "fewer marks than the window");
  const NormalKernel legit(fit.legit);
  const SkewKernel spoofed(fit.spoofed);
  const std::size_t N = cfg.window, L = cfg.buckets, per = N / L;

  SpoofParams region;
  region.a = 1.0;
  region.mu_plus = model.mu_plus();
  region.tick_size = model.tick_size;
  region.depths = depth_params(model);

  std::vector<MonitorPoint> out;
  out.reserve(marks.size() - N + 1);
  std::vector<std::size_t> order(N);
  std::vector<double> emp(per), s_legit(per), s_spoof(per);
  int run = 0;
  for (std::size_t end = N; end <= marks.size(); ++end) {
    const std::size_t begin = end - N;
    for (std::size_t k = 0; k < N; ++k) order[k] = begin + k;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t u, std::size_t v) { return marks[u].i_plus < marks[v].i_plus; });

    std::vector<double> mid(L);
    std::vector<GridSampler> samplers;
    samplers.reserve(L);
    for (std::size_t l = 0; l < L; ++l) {
      double s = 0.0;
      for (std::size_t k = 0; k < per; ++k) s += marks[order[l * per + k]].i_plus;
      mid[l] = s / static_cast<double>(per);
      samplers.emplace_back(spoofed.at(mid[l]));
    }

    Rng rng(substream_seed(cfg.seed, end - 1));
    double dl = 0.0, ds = 0.0;
    for (int r = 0; r < cfg.repetitions; ++r) {
      for (std::size_t l = 0; l < L; ++l) {
        for (std::size_t k = 0; k < per; ++k) {
          emp[k] = marks[order[l * per + k]].i_minus;
          s_legit[k] = legit.sample(mid[l], rng);
          s_spoof[k] = samplers[l].sample(rng);
        }
        dl += wasserstein2(emp, s_legit);
        ds += wasserstein2(emp, s_spoof);
      }
    }
    const double norm = static_cast<double>(L) * cfg.repetitions;

    MonitorPoint p;
    p.t = marks[end - 1].t;
    p.d_legit = dl / norm;
    p.d_spoof = ds / norm;
    double rho = 0.0, ibar = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
      rho += marks[k].rho_t;
      ibar += marks[k].i_plus;
    }
    region.rho = rho / static_cast<double>(N);
    region.ibar = ibar / static_cast<double>(N);
    p.no_spoof_region = !admits_spoofing(region).any;
    run = p.d_spoof <= p.d_legit ? run + 1 : 0;
    p.flagged = run > cfg.consecutive && !p.no_spoof_region;
    out.push_back(p);
  }
  return out;
}

std::vector<FlagEpisode> flag_episodes(std::span<const MonitorPoint> points) {
  std::vector<FlagEpisode> out;
  bool open = false;
  for (const MonitorPoint& p : points) {
    if (p.flagged) {
      if (!open) out.push_back({p.t, p.t, 0});
      open = true;
      out.back().end = p.t;
      ++out.back().points;
    } else {
      open = false;
    }
  }
  return out;
}

}  // namespace spoofwatch
