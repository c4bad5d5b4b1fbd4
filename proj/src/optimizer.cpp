#include "spoofwatch/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "spoofwatch/error.hpp"
#include "spoofwatch/imbalance.hpp"
#include "spoofwatch/liquidity.hpp"

namespace spoofwatch {

void SpoofParams::validate() const {
  if (!(ibar > 0.0 && ibar < 1.0)) throw Error(ErrorCode::InvalidArgument, fmt::format("ibar={} not in (0,1)", ibar));
  if (!(rho > 0.0)) throw Error(ErrorCode::InvalidArgument, "rho must be positive");
  if (!(a > 0.0)) throw Error(ErrorCode::InvalidArgument, "a must be positive");
  if (!(mu_plus > 0.0)) throw Error(ErrorCode::InvalidArgument, "mu_plus must be positive");
  if (!(tick_size > 0.0)) throw Error(ErrorCode::InvalidArgument, "tick size must be positive");
  for (const auto& d : depths) {
    if (!(d.w >= 0.0) || !(d.Q >= 0.0 && d.Q <= 1.0) || !(d.nu >= 0.0))
      throw Error(ErrorCode::InvalidArgument, "invalid depth parameters");
  }
}

std::vector<DepthParams> depth_params(const MarketModel& model) {
  std::vector<DepthParams> out;
  for (std::size_t k = 0; k < model.weights.w.size(); ++k) {
    const TailStats t = tail_stats(model.dq, static_cast<int>(k));
    out.push_back({model.weights.w[k], t.Q, t.nu});
  }
  return out;
}

double expected_cost(const SpoofParams& p, std::size_t k, double v) {
  const DepthParams& d = p.depths.at(k);
  const double H = p.H();
  const double i = spoofed_imbalance(p.ibar, p.a, d.w, v);
  return p.tick_size * (p.ask_price * H + (1.0 - d.Q) * block_liquidity_cost(p.a, H) +
                        H * p.mu_plus * (2.0 * i - 1.0) + d.Q * block_liquidity_cost(p.a, H + v) + v * d.nu);
}

double multi_expected_cost(const SpoofParams& p, std::span<const double> v) {
  const double H = p.H();
  const double b = p.b();
  const double GH = block_liquidity_cost(p.a, H);
  double mass = 0.0;
  double exec = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const DepthParams& d = p.depths.at(k);
    mass += d.w * v[k];
    exec += d.Q * (block_liquidity_cost(p.a, H + v[k]) - GH) + v[k] * d.nu;
  }
  const double i = b / (p.a + b + mass);
  return p.tick_size * (p.ask_price * H + GH + H * p.mu_plus * (2.0 * i - 1.0) + exec);
}

std::string_view ns_regime_name(NsRegime r) { return r == NsRegime::Exact ? "exact" : "sufficient_only"; }

AdmitsReport admits_spoofing(const SpoofParams& p) {
  p.validate();
  AdmitsReport r;
  r.regime = p.ibar <= 0.5 ? NsRegime::Exact : NsRegime::SufficientOnly;
  for (const auto& d : p.depths) {
    const double lhs = 2.0 * p.rho * p.mu_plus * (1.0 - p.ibar) * p.ibar * d.w;
    const double m = lhs - (d.Q * p.rho + d.nu);
    r.margin.push_back(m);
    r.admits.push_back(m > 0.0);
    r.any = r.any || m > 0.0;
  }
  return r;
}

namespace {

// 2 rho w mu (1-ibar)/ibar i^2 - (Q rho + nu)
double bracket_term(const SpoofParams& p, const DepthParams& d, double i) {
  return 2.0 * p.rho * d.w * p.mu_plus * ((1.0 - p.ibar) / p.ibar) * i * i - (d.Q * p.rho + d.nu);
}

// Minimizes a convex function on [0, cap] given its derivative. Returns the
// minimizer and whether the cap was binding.
template <typename Deriv>
std::pair<double, bool> convex_argmin(Deriv deriv, double scale, double cap) {
  if (deriv(0.0) >= 0.0) return {0.0, false};
  double hi = scale;
  while (hi < cap && deriv(hi) < 0.0) hi *= 2.0;
  if (hi >= cap) {
    hi = cap;
    if (deriv(hi) < 0.0) return {cap, true};
  }
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (deriv(mid) < 0.0 ? lo : hi) = mid;
  }
  return {0.5 * (lo + hi), false};
}

}  // namespace

SpoofSolution optimal_spoof_at_depth(const SpoofParams& p, std::size_t k, const SpoofOptions& opt) {
  p.validate();
  const DepthParams& d = p.depths.at(k);
  SpoofSolution s;
  s.depth = k;
  s.admits = bracket_term(p, d, p.ibar) > 0.0;
  s.i_spoof = p.ibar;
  if (s.admits) {
    if (d.Q > 0.0) {
      const double c = (1.0 - p.ibar) * d.w / d.Q;
      auto g = [&](double i) { return p.ibar / i - 1.0 - c * std::max(bracket_term(p, d, i), 0.0); };
      double lo = 0.0;
      double hi = p.ibar;
      for (int it = 0; it < 2000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gm = g(mid);
        if (gm == 0.0) {
          lo = hi = mid;
          break;
        }
        (gm > 0.0 ? lo : hi) = mid;
      }
      s.i_spoof = std::abs(g(lo)) < std::abs(g(hi)) && lo > 0.0 ? lo : hi;
      s.v_spoof = (p.a / d.Q) * std::max(bracket_term(p, d, s.i_spoof), 0.0);
    } else {
      const double H = p.H();
      const double b = p.b();
      auto deriv = [&](double v) {
        const double i = b / (p.a + b + d.w * v);
        return -2.0 * H * p.mu_plus * d.w * i * i / b + d.nu;
      };
      auto [v, capped] = convex_argmin(deriv, p.a, opt.v_max_factor * p.a);
      s.v_spoof = v;
      s.capped = capped;
      s.i_spoof = spoofed_imbalance(p.ibar, p.a, d.w, v);
    }
  }
  if (s.v_spoof == 0.0) s.i_spoof = p.ibar;
  s.expected_cost = expected_cost(p, k, s.v_spoof);
  return s;
}

double fixed_point_residual(const SpoofParams& p, const SpoofSolution& s) {
  const double w = p.depths.at(s.depth).w;
  return std::abs(1.0 / s.i_spoof - 1.0 / p.ibar - w * (1.0 - p.ibar) / (p.a * p.ibar) * s.v_spoof);
}

MultiSpoofSolution optimal_spoof_multi(const SpoofParams& p, const SpoofOptions& opt) {
  p.validate();
  const std::size_t n = p.depths.size();
  MultiSpoofSolution r;
  r.v.assign(n, 0.0);
  if (n == 0) {
    r.i_spoof = p.ibar;
    r.expected_cost = multi_expected_cost(p, r.v);
    return r;
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    r.per_depth.push_back(optimal_spoof_at_depth(p, k, opt));
    if (r.per_depth.back().expected_cost < best) {
      best = r.per_depth.back().expected_cost;
      r.best_single = k;
    }
  }
  r.v[r.best_single] = r.per_depth[r.best_single].v_spoof;

  const double H = p.H();
  const double b = p.b();
  const double cap = opt.v_max_factor * p.a;
  double cost = multi_expected_cost(p, r.v);
  r.converged = false;
  for (r.iterations = 1; r.iterations <= opt.max_iters; ++r.iterations) {
    double max_step = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const DepthParams& d = p.depths[k];
      double others = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) others += p.depths[j].w * r.v[j];
      auto deriv = [&](double v) {
        const double i = b / (p.a + b + others + d.w * v);
        return -2.0 * H * p.mu_plus * d.w * i * i / b + d.Q * (H + v) / p.a + d.nu;
      };
      const double local_cap = d.Q > 0.0 ? std::numeric_limits<double>::infinity() : cap;
      const double v = convex_argmin(deriv, p.a, local_cap).first;
      max_step = std::max(max_step, std::abs(v - r.v[k]));
      r.v[k] = v;
    }
    const double next = multi_expected_cost(p, r.v);
    const bool small_gain = cost - next <= opt.tol * std::abs(cost);
    cost = next;
    if (max_step <= opt.tol * p.a || small_gain) {
      r.converged = true;
      break;
    }
  }
  if (!r.converged) r.iterations = opt.max_iters;
  double mass = 0.0;
  for (std::size_t k = 0; k < n; ++k) mass += p.depths[k].w * r.v[k];
  r.i_spoof = b / (p.a + b + mass);
  r.expected_cost = cost;
  if (r.expected_cost > best) {
    // keep the single-depth optimum if descent drifted above it
    std::fill(r.v.begin(), r.v.end(), 0.0);
    r.v[r.best_single] = r.per_depth[r.best_single].v_spoof;
    r.i_spoof = r.per_depth[r.best_single].i_spoof;
    r.expected_cost = best;
  }
  return r;
}

std::string_view regime_name(Regime r) {
  switch (r) {
    case Regime::NoTrade: return "no-trade";
    case Regime::PureTaker: return "pure-taker";
    case Regime::PureMaker: return "pure-maker";
    case Regime::Spoof: return "spoof";
  }
  return "?";
}

namespace {

double impact(const RoundTripInput& in, double v) {
  return in.mu_plus * (2.0 * spoofed_imbalance(in.ibar, in.a, in.w, v) - 1.0);
}

}  // namespace

double round_trip_revenue(const RoundTripInput& in, double H, double v) {
  const double m = impact(in, v);
  return -H * (2.0 * in.Delta + m) - H * H / (2.0 * in.a * in.ibar) + in.Q * v * (in.k + m) -
         in.Q / in.a * v * v / 2.0;
}

double round_trip_H_star(const RoundTripInput& in, double v) {
  return in.a * in.ibar * std::max(-(2.0 * in.Delta + impact(in, v)), 0.0);
}

double round_trip_revenue(const RoundTripInput& in, double v) {
  return round_trip_revenue(in, round_trip_H_star(in, v), v);
}

RoundTripSolution round_trip_optimal(const RoundTripInput& in, const RoundTripOptions& opt) {
  if (!(in.ibar > 0.0 && in.ibar < 1.0) || !(in.a > 0.0) || !(in.mu_plus > 0.0) || !(in.Delta >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "invalid round-trip parameters");
  auto R = [&](double v) { return round_trip_revenue(in, v); };
  const double vmax = opt.v_max_factor * in.a;
  const int n = std::max(opt.grid, 2);
  int best = 0;
  double best_r = R(0.0);
  for (int j = 1; j <= n; ++j) {
    const double r = R(vmax * j / n);
    if (r > best_r) {
      best_r = r;
      best = j;
    }
  }
  double v = 0.0;
  if (best > 0) {
    // golden-section refinement on the neighbouring grid cells
    double lo = vmax * (best - 1) / n;
    double hi = std::min(vmax, vmax * (best + 1) / n);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double f1 = R(x1);
    double f2 = R(x2);
    while (hi - lo > opt.rel_step * in.a) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = R(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = R(x1);
      }
    }
    v = 0.5 * (lo + hi);
    if (R(v) < best_r) v = vmax * best / n;
  }
  const double r0 = R(0.0);
  if (R(v) - r0 <= 1e-12 * std::max(1.0, std::abs(r0))) v = 0.0;

  RoundTripSolution s;
  s.v_star = v;
  s.H_star = round_trip_H_star(in, v);
  s.revenue = R(v);
  s.i_spoof = spoofed_imbalance(in.ibar, in.a, in.w, v);
  const bool h = s.H_star > 0.0;
  const bool sp = s.v_star > 0.0;
  s.regime = h ? (sp ? Regime::Spoof : Regime::PureTaker) : (sp ? Regime::PureMaker : Regime::NoTrade);
  return s;
}

}  // namespace spoofwatch
