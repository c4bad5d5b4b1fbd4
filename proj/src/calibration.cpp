#include "spoofwatch/calibration.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "spoofwatch/error.hpp"
#include "spoofwatch/imbalance.hpp"
#include "spoofwatch/liquidity.hpp"

namespace spoofwatch {

namespace {

constexpr double kNs = 1e9;

TimeNs to_ns(double seconds) { return static_cast<TimeNs>(std::llround(seconds * kNs)); }

}  // namespace

std::vector<double> sample_price_changes(const BookTimeline& tl, double f) {
  std::vector<double> out;
  if (tl.empty()) return out;
  const TimeNs step = to_ns(f);
  if (step <= 0) throw Error(ErrorCode::InvalidArgument, "frequency must be positive");
  const TimeNs t0 = tl.time(0);
  const TimeNs end = tl.time(tl.size() - 1);
  double prev = tl.mid(0);
  for (TimeNs t = t0 + step; t <= end; t += step) {
    const double mid = tl.mid(*tl.index_at(t));
    out.push_back(std::round(mid - prev));
    prev = mid;
  }
  return out;
}

double select_frequency(std::span<const FrequencySample> candidates, double target_variance) {
  if (candidates.size() < 2) throw Error(ErrorCode::InsufficientSamples, "need at least two candidate frequencies");
  if (!(target_variance > 0.0)) throw Error(ErrorCode::InvalidArgument, "target variance must be positive");
  const double sigma = std::sqrt(target_variance);
  double best_f = 0.0;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) {
    const std::size_t n = c.changes.size();
    if (n < 100)
      throw Error(ErrorCode::InsufficientSamples, fmt::format("f={}s has {} price changes, need 100", c.f, n));
    const double mean = std::accumulate(c.changes.begin(), c.changes.end(), 0.0) / static_cast<double>(n);
    double var = 0.0;
    for (double x : c.changes) var += (x - mean) * (x - mean);
    var /= static_cast<double>(n - 1);
    const double d = (std::sqrt(var) - sigma) * (std::sqrt(var) - sigma);
    if (d < best_d || (d == best_d && c.f < best_f)) {
      best_d = d;
      best_f = c.f;
    }
  }
  return best_f;
}

int select_depth(std::span<const double> changes, double q) {
  if (changes.empty()) throw Error(ErrorCode::InsufficientSamples, "no price changes");
  std::vector<double> a(changes.size());
  std::transform(changes.begin(), changes.end(), a.begin(), [](double x) { return std::abs(x); });
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  const int max_n = static_cast<int>(std::ceil(a.back()));
  for (int N = 0; N < max_n; ++N) {
    const auto count = std::upper_bound(a.begin(), a.end(), static_cast<double>(N)) - a.begin();
    if (static_cast<double>(count) >= q * n - 1e-9) return N;
  }
  return max_n;
}

DqEstimate estimate_dq(std::span<const MarketOrder> orders) {
  DqEstimate est;
  std::map<int, double> counts;
  for (const auto& mo : orders) {
    if (!mo.pre) {
      ++est.skipped;
      continue;
    }
    const auto& side = mo.aggressor == Side::Bid ? mo.pre->ask : mo.pre->bid;
    try {
      const int F = static_cast<int>(tick_depth(side, static_cast<double>(mo.volume)));
      counts[mo.aggressor == Side::Bid ? F : -F] += 1.0;
      ++est.used;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InsufficientLiquidity) throw;
      ++est.skipped;
    }
  }
  if (counts.empty()) throw Error(ErrorCode::InsufficientSamples, "no usable market orders for dq");
  const int lo = counts.begin()->first;
  const int hi = counts.rbegin()->first;
  std::vector<double> w(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (const auto& [y, c] : counts) w[static_cast<std::size_t>(y - lo)] = c;
  est.dq = PriceDist::normalized(lo, std::move(w));
  return est;
}

void JointSamples::add(std::span<const double> bid_mass, std::span<const double> ask_mass, int change) {
  for (std::size_t k = 0; k < levels; ++k) {
    bid.push_back(bid_mass[k]);
    total.push_back(bid_mass[k] + ask_mass[k]);
  }
  x.push_back(change);
}

std::vector<double> JointSamples::imbalances(std::span<const double> w) const {
  std::vector<double> out(size());
  for (std::size_t m = 0; m < size(); ++m) {
    const double* b = bid.data() + m * levels;
    const double* t = total.data() + m * levels;
    double B = 0.0, T = 0.0;
    for (std::size_t k = 0; k < levels; ++k) {
      B += w[k] * b[k];
      T += w[k] * t[k];
    }
    out[m] = B / T;
  }
  return out;
}

JointSamples build_joint_samples(const BookTimeline& tl, double f, std::size_t depth, int support) {
  if (depth > tl.depth())
    throw Error(ErrorCode::InvalidArgument, fmt::format("depth {} exceeds recorded depth {}", depth, tl.depth()));
  JointSamples s;
  s.levels = depth + 1;
  if (tl.empty()) return s;
  const TimeNs step = to_ns(f);
  const TimeNs end = tl.time(tl.size() - 1);
  double prev = tl.mid(0);
  for (TimeNs lo = tl.time(0); lo + step <= end; lo += step) {
    const TimeNs hi = lo + step;
    const double mid = tl.mid(*tl.index_at(hi));
    int x = static_cast<int>(std::round(mid - prev));
    prev = mid;
    WindowMass m;
    try {
      m = tl.window(lo, hi);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EmptyWindow) throw;
      continue;
    }
    double T = 0.0;
    for (std::size_t k = 0; k < s.levels; ++k) T += m.bid[k] + m.ask[k];
    if (!(T > 0.0)) continue;
    if (std::abs(x) > support) {
      x = std::clamp(x, -support, support);
      ++s.clipped;
    }
    s.add(m.bid, m.ask, x);
  }
  return s;
}

DistMoments moments_of(const PriceDist& d) { return {d.mean(), d.variance(), d.skewness(), d.kurtosis()}; }

double conditional_nll(const PriceDist& dp_plus, std::span<const double> imb, std::span<const int> x) {
  double s = 0.0;
  for (std::size_t m = 0; m < x.size(); ++m) {
    const double p = imb[m] * dp_plus.prob(x[m]) + (1.0 - imb[m]) * dp_plus.prob(-x[m]);
    s -= std::log(std::max(p, 1e-300));
  }
  return s / static_cast<double>(x.size());
}

namespace {

struct Unpacked {
  std::vector<double> w;
  std::vector<double> dp;  // offsets -X..X
};

Unpacked unpack(std::span<const double> th, std::size_t levels) {
  return {simplex_from_logits(th.subspan(0, levels - 1)), simplex_from_logits(th.subspan(levels - 1))};
}

double skew_penalty(const std::vector<double>& dp, int X) {
  double pen = 0.0;
  for (int x = 1; x <= X; ++x) {
    const double d = dp[static_cast<std::size_t>(X - x)] - dp[static_cast<std::size_t>(X + x)];
    if (d > 0.0) pen += d * d;
  }
  return pen;
}

}  // namespace

JointMleResult joint_mle(const JointSamples& s, int support, const MleOptions& opt) {
  const std::size_t M = s.size();
  if (M < opt.min_samples)
    throw Error(ErrorCode::InsufficientSamples, fmt::format("{} joint samples, need {}", M, opt.min_samples));
  if (support < 0) throw Error(ErrorCode::InvalidArgument, "support must be non-negative");
  const int X = support;
  const std::size_t levels = s.levels;
  const std::size_t width = static_cast<std::size_t>(2 * X + 1);

  // index of x and -x in the dp vector
  std::vector<std::uint32_t> ip(M), im(M);
  std::vector<double> hist(width, 0.5);
  for (std::size_t m = 0; m < M; ++m) {
    ip[m] = static_cast<std::uint32_t>(s.x[m] + X);
    im[m] = static_cast<std::uint32_t>(X - s.x[m]);
    hist[ip[m]] += 1.0;
  }

  std::vector<double> imb(M);
  SkewNormalParams sn;
  bool with_marginal = false;
  auto objective = [&](std::span<const double> th) {
    const Unpacked u = unpack(th, levels);
    double nll = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
      const double* b = s.bid.data() + m * levels;
      const double* t = s.total.data() + m * levels;
      double B = 0.0, T = 0.0;
      for (std::size_t k = 0; k < levels; ++k) {
        B += u.w[k] * b[k];
        T += u.w[k] * t[k];
      }
      const double i = B / T;
      imb[m] = i;
      nll -= std::log(std::max(i * u.dp[ip[m]] + (1.0 - i) * u.dp[im[m]], 1e-300));
      if (with_marginal) nll -= skewnormal_logpdf(sn, i);
    }
    return nll / static_cast<double>(M) + opt.penalty * skew_penalty(u.dp, X);
  };

  std::vector<double> base(levels - 1, 0.0);
  {
    auto hz = logits_from_simplex(hist);
    base.insert(base.end(), hz.begin(), hz.end());
  }

  NelderMeadOptions nm;
  nm.max_evals = opt.max_evals;
  nm.ftol = 1e-11;
  nm.xtol = 1e-6;
  nm.initial_step = 0.5;
  nm.restarts = 1;

  JointMleResult res;
  NelderMeadResult best;
  bool have = false;
  for (int st = 0; st < std::max(opt.starts, 1); ++st) {
    std::vector<double> th0 = base;
    if (st > 0) {
      Rng rng(substream_seed(opt.seed, static_cast<std::uint64_t>(st)));
      for (double& v : th0) v += 0.5 * rng.normal();
    }
    auto r = nelder_mead(objective, th0, nm);
    res.evals += r.evals;
    spdlog::debug("joint mle start {}: f={:.10f} evals={} converged={}", st, r.f, r.evals, r.converged);
    if (!have || r.f < best.f) {
      best = std::move(r);
      res.best_start = st;
      have = true;
    }
  }

  if (opt.objective == MleObjective::Joint) {
    with_marginal = true;
    for (int outer = 0; outer < opt.outer_iters; ++outer) {
      const Unpacked u = unpack(best.x, levels);
      sn = fit_skewnormal(s.imbalances(u.w), 0).params;
      auto r = nelder_mead(objective, best.x, nm);
      res.evals += r.evals;
      const Unpacked v = unpack(r.x, levels);
      double change = 0.0;
      for (std::size_t k = 0; k < levels; ++k) change += std::abs(v.w[k] - u.w[k]);
      best.x = r.x;
      best.f = r.f;
      best.converged = r.converged;
      if (change < 1e-6) break;
    }
  }

  res.converged = best.converged;
  res.history = best.best_history;
  Unpacked u = unpack(best.x, levels);
  for (int x = 1; x <= X; ++x) {
    double& neg = u.dp[static_cast<std::size_t>(X - x)];
    double& pos = u.dp[static_cast<std::size_t>(X + x)];
    if (neg > pos) neg = pos = 0.5 * (neg + pos);
  }
  res.dp_plus = PriceDist::normalized(-X, u.dp);
  res.weights = DepthWeights{u.w};
  const double wsum = std::accumulate(res.weights.w.begin(), res.weights.w.end(), 0.0);
  for (double& v : res.weights.w) v /= wsum;
  res.moments = moments_of(res.dp_plus);

  const auto final_imb = s.imbalances(res.weights.w);
  res.conditional_nll = conditional_nll(res.dp_plus, final_imb, s.x);
  res.skew = fit_skewnormal(final_imb, 0);
  res.neg_log_likelihood = res.conditional_nll - res.skew.log_likelihood / static_cast<double>(M);
  if (!res.converged) spdlog::warn("joint mle hit the evaluation cap; returning best iterate");
  return res;
}

GofBucket chi_square_cell_test(std::span<const double> observed, std::span<const double> expected) {
  GofBucket g;
  // pool adjacent cells until each expected count reaches 5
  std::vector<double> obs, exp;
  double o = 0.0, e = 0.0;
  std::size_t merged = 0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    o += observed[i];
    e += expected[i];
    ++merged;
    if (e >= 5.0) {
      if (merged > 1) g.pooled = true;
      obs.push_back(o);
      exp.push_back(e);
      o = e = 0.0;
      merged = 0;
    }
  }
  if (merged > 0) {
    if (exp.empty()) {
      obs.push_back(o);
      exp.push_back(e);
    } else {
      obs.back() += o;
      exp.back() += e;
    }
    g.pooled = true;
  }
  g.dof = static_cast<int>(exp.size()) - 1;
  if (g.dof < 1 || exp.back() < 5.0) {
    g.sparse = true;
    g.p_value = 1.0;
    if (g.dof < 1) return g;
  }
  for (std::size_t i = 0; i < exp.size(); ++i) {
    const double d = obs[i] - exp[i];
    g.statistic += d * d / exp[i];
  }
  boost::math::chi_squared chi(g.dof);
  g.p_value = boost::math::cdf(boost::math::complement(chi, g.statistic));
  return g;
}

std::vector<GofBucket> chi_square_gof(const PriceDist& dp_plus, std::span<const double> imb, std::span<const int> x,
                                      int buckets) {
  if (buckets < 1) throw Error(ErrorCode::InvalidArgument, "need at least one bucket");
  const std::size_t n = x.size();
  if (n < static_cast<std::size_t>(buckets)) throw Error(ErrorCode::InsufficientSamples, "fewer samples than buckets");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return imb[a] < imb[b]; });

  int X = std::max(dp_plus.hi(), -dp_plus.lo);
  for (int v : x) X = std::max(X, std::abs(v));
  const std::size_t width = static_cast<std::size_t>(2 * X + 1);

  std::vector<GofBucket> out;
  const auto L = static_cast<std::size_t>(buckets);
  for (std::size_t l = 0; l < L; ++l) {
    const std::size_t lo = l * n / L;
    const std::size_t hi = (l + 1) * n / L;
    std::vector<double> obs(width, 0.0);
    double mean = 0.0;
    for (std::size_t j = lo; j < hi; ++j) {
      mean += imb[idx[j]];
      obs[static_cast<std::size_t>(x[idx[j]] + X)] += 1.0;
    }
    const double cnt = static_cast<double>(hi - lo);
    mean /= cnt;
    std::vector<double> exp(width);
    for (int v = -X; v <= X; ++v)
      exp[static_cast<std::size_t>(v + X)] = cnt * (mean * dp_plus.prob(v) + (1.0 - mean) * dp_plus.prob(-v));
    GofBucket g = chi_square_cell_test(obs, exp);
    g.ibar = mean;
    g.n = hi - lo;
    out.push_back(g);
  }
  return out;
}

MarketModel CalibrationResult::model(double tick_size) const {
  MarketModel m;
  m.weights = mle.weights;
  m.dp_plus = mle.dp_plus;
  m.dq = dq.dq;
  m.tick_size = tick_size;
  return m;
}

CalibrationResult calibrate(const BookTimeline& tl, const CalibrationConfig& cfg) {
  CalibrationResult r;
  for (double f : cfg.sample.candidate_frequencies) r.frequency_samples.push_back({f, sample_price_changes(tl, f)});
  r.f = r.frequency_samples.size() == 1 ? r.frequency_samples[0].f
                                       : select_frequency(r.frequency_samples, cfg.sample.target_variance);
  const auto chosen = std::find_if(r.frequency_samples.begin(), r.frequency_samples.end(),
                                   [&](const FrequencySample& s) { return s.f == r.f; });
  r.depth = select_depth(chosen->changes, cfg.sample.depth_quantile);
  if (static_cast<std::size_t>(r.depth) > tl.depth()) {
    spdlog::warn("selected depth {} exceeds recorded depth {}; truncating", r.depth, tl.depth());
    r.depth = static_cast<int>(tl.depth());
  }
  spdlog::info("sampling frequency {}s, depth {}", r.f, r.depth);
  r.dq = estimate_dq(tl.market_orders);
  spdlog::info("dq from {} market orders ({} skipped)", r.dq.used, r.dq.skipped);

  const JointSamples s = build_joint_samples(tl, r.f, static_cast<std::size_t>(r.depth), r.depth);
  r.samples = s.size();
  spdlog::info("{} joint samples ({} changes clipped to the support)", s.size(), s.clipped);
  r.mle = joint_mle(s, r.depth, cfg.mle);
  const auto imb = s.imbalances(r.mle.weights.w);
  r.gof = chi_square_gof(r.mle.dp_plus, imb, s.x, cfg.gof_buckets);
  return r;
}

}  // namespace spoofwatch
