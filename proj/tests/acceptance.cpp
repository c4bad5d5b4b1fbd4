// Acceptance run: one PASS/FAIL line per criterion.
//
// usage: acceptance <path-to-spoofwatch-cli> <work-dir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "fixtures.hpp"
#include "spoofwatch/calibration.hpp"
#include "spoofwatch/detector.hpp"
#include "spoofwatch/model_io.hpp"
#include "spoofwatch/optimizer.hpp"
#include "spoofwatch/synth_market.hpp"
#include "spoofwatch/timeline.hpp"

namespace fs = std::filesystem;
using namespace spoofwatch;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail, double seconds) {
  std::printf("%s criterion %d: %s (%s; %.1fs)\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

SpoofParams single(double ibar, double rho, double mu, double w, double Q, double nu, double a) {
  SpoofParams p;
  p.ibar = ibar;
  p.rho = rho;
  p.mu_plus = mu;
  p.a = a;
  p.ask_price = 1000.0;
  p.depths = {{w, Q, nu}};
  return p;
}

// Flat tail dq_y = c for k < y <= 10.
DepthParams flat_tail(double w, double c, int k) {
  DepthParams d{w, 0.0, 0.0};
  for (int y = k + 1; y <= 10; ++y) {
    d.Q += c;
    d.nu += c * (y - k);
  }
  return d;
}

std::vector<SpoofParams> optimizer_sweep() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<SpoofParams> out;
  for (int t = 0; t < 1000; ++t)
    out.push_back(single(0.02 + 0.96 * U(rng), 0.1 + 3.0 * U(rng), 0.1 + 4.0 * U(rng), 0.02 + 0.98 * U(rng),
                         0.001 + 0.3 * U(rng), 0.5 * U(rng), 10.0 + 990.0 * U(rng)));
  return out;
}

void criterion1() {
  const auto t0 = Clock::now();
  std::size_t bad_cost = 0, bad_res = 0;
  double worst_gap = -INFINITY, worst_res = 0.0;
  for (const SpoofParams& p : optimizer_sweep()) {
    const SpoofSolution s = optimal_spoof_at_depth(p, 0);
    double grid = INFINITY;
    for (int j = 0; j <= 10000; ++j) grid = std::min(grid, expected_cost(p, 0, j * p.a / 1000.0));
    const double gap = (s.expected_cost - grid) / std::abs(grid);
    worst_gap = std::max(worst_gap, gap);
    bad_cost += gap > 1e-8;
    const double r = fixed_point_residual(p, s);
    worst_res = std::max(worst_res, r);
    bad_res += r > 1e-10;
  }
  report(1, bad_cost == 0 && bad_res == 0 && since(t0) <= 60.0, "optimizer matches grid search over 1000 draws",
         fmt::format("worst relative gap {:.3g}, worst residual {:.3g}", worst_gap, worst_res), since(t0));
}

void criterion2() {
  const auto t0 = Clock::now();
  std::size_t n = 0, exceptions = 0;
  for (const SpoofParams& p : optimizer_sweep()) {
    if (p.ibar > 0.5) continue;
    ++n;
    const bool spoofs = optimal_spoof_at_depth(p, 0).v_spoof > 0.0;
    const AdmitsReport r = admits_spoofing(p);
    exceptions += spoofs != r.admits[0] || r.regime != NsRegime::Exact;
  }
  report(2, exceptions == 0 && n > 0, "v_spoof > 0 iff the no-spoofing condition fails, ibar <= 1/2",
         fmt::format("{} draws, {} exceptions", n, exceptions), since(t0));
}

void criterion3() {
  const auto t0 = Clock::now();
  const SpoofParams p = single(0.5, 2.0, 3.0, 0.5, 0.05, 0.05, 100.0);
  const SpoofSolution s = optimal_spoof_at_depth(p, 0);
  // independent root of 60 i^3 + 0.5 i - 1
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (lo + hi);
    (60 * m * m * m + 0.5 * m - 1 < 0 ? lo : hi) = m;
  }
  const bool ok = std::abs(s.i_spoof - 0.24457) <= 1e-4 && std::abs(s.v_spoof / p.a - 4.178) <= 1e-3 &&
                  std::abs(s.i_spoof - lo) <= 1e-10;
  report(3, ok, "worked example", fmt::format("i_spoof {:.6f} (cubic root {:.6f}), v/a {:.5f}", s.i_spoof, lo, s.v_spoof / p.a),
         since(t0));
}

// Spoofing-condition value per unit of rho: 2 mu (1-i) i w - Q - nu/rho.
double ns_value(double ibar, double rho, double mu, const DepthParams& d) {
  return 2.0 * mu * (1.0 - ibar) * ibar * d.w - d.Q - d.nu / rho;
}

void criterion4() {
  const auto t0 = Clock::now();
  std::size_t violations = 0, checks = 0;
  auto expect = [&](bool ok) {
    ++checks;
    violations += !ok;
  };
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double tol = 1e-12;
  for (int t = 0; t < 200; ++t) {
    const double ibar = 0.02 + 0.96 * U(rng), rho = 0.2 + 3 * U(rng), mu = 0.2 + 3 * U(rng), w = 0.05 + 0.9 * U(rng);
    const double Q = 0.001 + 0.2 * U(rng), nu = 0.3 * U(rng);
    const DepthParams d{w, Q, nu};
    auto sweep = [&](auto value, bool increasing) {
      double prev = value(0);
      for (int j = 1; j <= 100; ++j) {
        const double v = value(j);
        expect(increasing ? v >= prev - tol : v <= prev + tol);
        prev = v;
      }
    };
    // condition value
    sweep([&](int j) { return ns_value(ibar, rho, 0.05 * (j + 1), d); }, true);
    sweep([&](int j) { return ns_value(ibar, 0.05 * (j + 1), mu, d); }, true);
    sweep([&](int j) { return ns_value(ibar, rho, mu, {0.01 * j, Q, nu}); }, true);
    sweep([&](int j) { return ns_value(ibar, rho, mu, {w, 0.003 * j, nu}); }, false);
    sweep([&](int j) { return ns_value(ibar, rho, mu, {w, Q * 0.03 * j, nu * 0.03 * j}); }, false);
    // spoofed imbalance deepens with mu, rho, w and recedes with the tail
    auto i_of = [&](double ib, double r, double m, DepthParams dd) {
      return optimal_spoof_at_depth(single(ib, r, m, dd.w, dd.Q, dd.nu, 100.0), 0).i_spoof;
    };
    sweep([&](int j) { return i_of(ibar, rho, 0.05 * (j + 1), d); }, false);
    sweep([&](int j) { return i_of(ibar, 0.05 * (j + 1), mu, d); }, false);
    sweep([&](int j) { return i_of(ibar, rho, mu, {0.01 * (j + 1), Q, nu}); }, false);
    sweep([&](int j) { return i_of(ibar, rho, mu, {w, 0.003 * (j + 1), nu}); }, true);
    sweep([&](int j) { return i_of(ibar, rho, mu, {w, Q, 0.005 * j}); }, true);
  }

  // Fig. 1 panels: each change moves the curve in the stated direction at every ibar
  struct Panel {
    double mu, rho, w, dq;
    int k;
  };
  const Panel f1a{1, 1, 0.2, 0.025, 3};
  const std::vector<std::pair<Panel, bool>> f1{{{1, 1, 0.2, 0.03, 3}, false}, {{2, 1, 0.2, 0.025, 3}, true},
                                               {{1, 2, 0.2, 0.025, 3}, true},  {{1, 1, 0.5, 0.025, 3}, true},
                                               {{1, 1, 0.2, 0.025, 4}, true}};
  for (int j = 1; j < 1000; ++j) {
    const double ib = j / 1000.0;
    const double base = ns_value(ib, f1a.rho, f1a.mu, flat_tail(f1a.w, f1a.dq, f1a.k));
    for (const auto& [p, up] : f1) {
      const double v = ns_value(ib, p.rho, p.mu, flat_tail(p.w, p.dq, p.k));
      expect(up ? v >= base - tol : v <= base + tol);
    }
  }
  // Fig. 2 panels: curves below the diagonal, increasing in ibar, deeper for larger k
  const Panel f2a{1, 1, 0.2, 0.003, 0};
  const std::vector<std::pair<Panel, bool>> f2{{{1, 1, 0.2, 0.006, 0}, false}, {{3, 1, 0.2, 0.003, 0}, true},
                                               {{1, 3, 0.2, 0.003, 0}, true},  {{1, 1, 0.5, 0.003, 0}, true}};
  auto curve = [&](const Panel& p, int k, double ib) {
    const DepthParams d = flat_tail(p.w, p.dq, k);
    return optimal_spoof_at_depth(single(ib, p.rho, p.mu, d.w, d.Q, d.nu, 100.0), 0).i_spoof;
  };
  std::vector<Panel> all{f2a};
  for (const auto& [p, deeper] : f2) all.push_back(p);
  for (const Panel& p : all) {
    for (int k : {0, 2, 4}) {
      double prev = 0.0;
      for (int j = 1; j < 1000; ++j) {
        const double ib = j / 1000.0;
        const double i = curve(p, k, ib);
        expect(i <= ib + tol);
        expect(i >= prev - tol);
        prev = i;
        if (k > 0) expect(i <= curve(p, k - 2, ib) + tol);
      }
    }
  }
  for (const auto& [p, deeper] : f2)
    for (int k : {0, 2, 4})
      for (int j = 1; j < 1000; j += 7) {
        const double ib = j / 1000.0;
        const double base = curve(f2a, k, ib), v = curve(p, k, ib);
        expect(deeper ? v <= base + tol : v >= base - tol);
      }
  report(4, violations == 0 && since(t0) <= 60.0, "comparative statics",
         fmt::format("{} monotonicity checks, {} violations", checks, violations), since(t0));
}

double brute_w2(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[perm[i]]) * (a[i] - b[perm[i]]);
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::sqrt(best / static_cast<double>(a.size()));
}

void criterion5() {
  const auto t0 = Clock::now();
  Rng rng(5);
  std::size_t mismatches = 0, axiom = 0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 1 + rng.next_u64() % 6;
    std::vector<double> a(n), b(n);
    for (double& v : a) v = static_cast<double>(static_cast<int>(rng.next_u64() % 256) - 128) / 16.0;
    for (double& v : b) v = static_cast<double>(static_cast<int>(rng.next_u64() % 256) - 128) / 16.0;
    mismatches += wasserstein2(a, b) != brute_w2(a, b);
  }
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 1 + rng.next_u64() % 50;
    std::vector<double> a(n), b(n), c(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.normal();
      b[i] = 0.5 + 2.0 * rng.normal();
      c[i] = rng.uniform();
    }
    axiom += wasserstein2(a, a) != 0.0;
    axiom += std::abs(wasserstein2(a, b) - wasserstein2(b, a)) > 1e-12;
    axiom += wasserstein2(a, c) > wasserstein2(a, b) + wasserstein2(b, c) + 1e-12;
    axiom += !(wasserstein2(a, b) >= 0.0);
  }
  report(5, mismatches == 0 && axiom == 0, "sorted coupling equals brute-force assignment; metric axioms",
         fmt::format("500 instances, {} mismatches, {} axiom violations", mismatches, axiom), since(t0));
}

// Sup-norm gap between a closed-form slice and the grid-normalized joint density.
double grid_gap(const std::function<double(double)>& joint, const std::function<double(double)>& closed, double lo,
                double hi) {
  const std::size_t n = 1000;
  std::vector<double> x(n), f(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    f[i] = joint(x[i]);
  }
  double z = 0.0;
  for (std::size_t i = 1; i < n; ++i) z += 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1]);
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(f[i] / z - closed(x[i])));
  return err;
}

void criterion6() {
  const auto t0 = Clock::now();
  Rng rng(6);
  double gap_k = 0.0, gap_s = 0.0, norm_err = 0.0, red_alpha = 0.0, red_r = 0.0;
  for (int t = 0; t < 50; ++t) {
    const double s1 = 0.05 + 0.2 * rng.uniform(), s2 = 0.05 + 0.2 * rng.uniform();
    const double r = 1.8 * rng.uniform() - 0.9;
    const BivariateNormal bn{rng.uniform(), rng.uniform(), s1, s2, r};
    const NormalKernel K(bn);
    const double y = bn.mu2 + s2 * rng.normal();
    gap_k = std::max(gap_k, grid_gap([&](double x) { return std::exp(bn.logpdf(x, y)); },
                                     [&](double x) { return K.pdf(y, x); }, K.mean(y) - 10 * K.sd(),
                                     K.mean(y) + 10 * K.sd()));

    BivariateSkewNormal sn;
    sn.alpha1 = 6.0 * rng.uniform() - 3.0;
    sn.alpha2 = 6.0 * rng.uniform() - 3.0;
    sn.xi1 = rng.uniform();
    sn.xi2 = rng.uniform();
    sn.o11 = s1 * s1;
    sn.o22 = s2 * s2;
    sn.o12 = r * s1 * s2;
    const SkewKernel KS(sn);
    const double yy = sn.xi2 + s2 * rng.normal();
    const auto sl = KS.at(yy);
    const double lo = sl.xi_c - 12 * sl.scale, hi = sl.xi_c + 12 * sl.scale;
    gap_s = std::max(gap_s, grid_gap([&](double x) { return std::exp(sn.logpdf(x, yy)); },
                                     [&](double x) { return sl.pdf(x); }, lo, hi));
    // normalization on a fine grid
    const std::size_t m = 40001;
    double z = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(m - 1);
      z += sl.pdf(x) * ((i == 0 || i == m - 1) ? 0.5 : 1.0);
    }
    norm_err = std::max(norm_err, std::abs(z * (hi - lo) / static_cast<double>(m - 1) - 1.0));

    // zero shape: Gaussian conditional of the core
    BivariateSkewNormal core = sn;
    core.alpha1 = core.alpha2 = 0.0;
    const SkewKernel K0(core);
    const NormalKernel KN(BivariateNormal{sn.xi1, sn.xi2, s1, s2, r});
    // zero correlation: conditional equals the marginal
    const NormalKernel KI(BivariateNormal{bn.mu1, bn.mu2, s1, s2, 0.0});
    for (int j = 0; j < 20; ++j) {
      const double x = bn.mu1 + 3 * s1 * rng.normal(), yj = bn.mu2 + 3 * s2 * rng.normal();
      red_alpha = std::max(red_alpha, std::abs(K0.pdf(yj, x) - KN.pdf(yj, x)));
      red_r = std::max(red_r, std::abs(KI.pdf(yj, x) - norm_pdf((x - bn.mu1) / s1) / s1));
    }
  }
  const bool ok = gap_k <= 1e-6 && gap_s <= 1e-6 && norm_err <= 1e-6 && red_alpha <= 1e-12 && red_r <= 1e-12;
  report(6, ok, "conditional kernels match numeric conditioning",
         fmt::format("K gap {:.2g}, K_spoof gap {:.2g}, normalization {:.2g}, alpha=0 {:.2g}, r=0 {:.2g}", gap_k, gap_s,
                     norm_err, red_alpha, red_r),
         since(t0));
}

void criterion7() {
  const auto t0 = Clock::now();
  SimConfig cfg;
  cfg.model = testing::reference_model();
  cfg.horizon = 100000;
  cfg.seed = 7;
  TimelineBuilder tb(cfg.model.tick_size, 10);
  simulate(cfg, [&](const OrderEvent& ev) { tb.apply(ev); });
  const BookTimeline tl = tb.finish();
  CalibrationConfig cc;
  cc.tick_size = cfg.model.tick_size;
  const CalibrationResult r = calibrate(tl, cc);
  double l1 = 0.0, tv = 0.0;
  const bool same_depth = r.mle.weights.w.size() == cfg.model.weights.w.size();
  if (same_depth)
    for (std::size_t k = 0; k < r.mle.weights.w.size(); ++k) l1 += std::abs(r.mle.weights.w[k] - cfg.model.weights.w[k]);
  for (int x = -10; x <= 10; ++x) tv += 0.5 * std::abs(r.mle.dp_plus.prob(x) - cfg.model.dp_plus.prob(x));
  int pass = 0;
  for (const auto& g : r.gof) pass += g.p_value >= 0.05;
  const bool ok = same_depth && l1 <= 0.1 && tv <= 0.05 && pass >= 18 && since(t0) <= 600.0;
  report(7, ok, "calibration closure on a 1e5-period clean simulation",
         fmt::format("f {} s, depth {}, w L1 {:.4f}, dp+ TV {:.4f}, GoF {}/{} buckets pass", r.f, r.depth, l1, tv, pass,
                     r.gof.size()),
         since(t0));
}

std::vector<MarketOrderMark> run_marks(const SimConfig& cfg) {
  TimelineBuilder tb(cfg.model.tick_size, 10);
  simulate(cfg, [&](const OrderEvent& ev) { tb.apply(ev); });
  return mark_market_orders(tb.finish(), cfg.model);
}

void criterion8() {
  const auto t0 = Clock::now();
  SimConfig base;
  base.model = testing::reference_model();
  base.horizon = 40000;
  base.seed = 1000;
  const JointFit fit = fit_joint_kernels(run_marks(base));

  constexpr std::int64_t kLen = 400;
  const TimeNs f = 1'000'000'000;
  struct Segment {
    double score;
    bool positive;
  };
  std::vector<Segment> segments;
  std::size_t n_in = 0, f_in = 0, n_out = 0, f_out = 0, region_points = 0, region_flags = 0;
  for (int s = 0; s < 20; ++s) {
    SimConfig cfg = base;
    cfg.horizon = 20000;
    cfg.seed = 1 + static_cast<std::uint64_t>(s);
    Rng place(substream_seed(77, static_cast<std::uint64_t>(s)));
    // five 400-period episodes, one in each 4000-period block: 10% of the time
    for (int e = 0; e < 5; ++e) {
      const std::int64_t start = 4000 * e + 400 + static_cast<std::int64_t>(place.uniform() * 3000);
      cfg.episodes.push_back({start, start + kLen, {}, 0.8});
    }
    MonitorConfig mc;
    mc.seed = 100 + static_cast<std::uint64_t>(s);
    const auto marks = run_marks(cfg);
    const auto points = monitor(marks, fit, cfg.model, mc);
    if (s == 0) {
      // near-flat impact: every window sits in the no-spoof region
      MarketModel flat = cfg.model;
      flat.dp_plus = PriceDist::normalized(0, {999.0, 1.0});
      for (const auto& p : monitor(marks, fit, flat, mc)) {
        region_points += p.no_spoof_region;
        region_flags += p.no_spoof_region && p.flagged;
      }
    }

    auto inside = [&](TimeNs t) {
      return std::any_of(cfg.episodes.begin(), cfg.episodes.end(),
                         [&](const SpoofEpisode& e) { return t >= e.start * f && t < e.end * f; });
    };
    for (const auto& p : points) {
      const bool in = inside(p.t);
      (in ? n_in : n_out) += 1;
      (in ? f_in : f_out) += p.flagged;
      region_points += p.no_spoof_region;
      region_flags += p.no_spoof_region && p.flagged;
    }
    auto score = [&](std::int64_t a, std::int64_t b) {
      std::size_t n = 0, fl = 0;
      for (const auto& p : points)
        if (p.t >= a * f && p.t < b * f) {
          ++n;
          fl += p.flagged;
        }
      return n ? static_cast<double>(fl) / static_cast<double>(n) : 0.0;
    };
    // episodes against equal-length clean segments
    std::int64_t cur = 0;
    for (const auto& e : cfg.episodes) {
      for (std::int64_t a = cur; a + kLen <= e.start; a += kLen) segments.push_back({score(a, a + kLen), false});
      segments.push_back({score(e.start, e.end), true});
      cur = e.end;
    }
    for (std::int64_t a = cur; a + kLen <= cfg.horizon; a += kLen) segments.push_back({score(a, a + kLen), false});
  }
  double wins = 0.0;
  std::size_t pos = 0, neg = 0;
  for (const auto& a : segments) {
    if (!a.positive) {
      ++neg;
      continue;
    }
    ++pos;
    for (const auto& b : segments)
      if (!b.positive) wins += a.score > b.score ? 1.0 : (a.score == b.score ? 0.5 : 0.0);
  }
  const double auc = wins / static_cast<double>(pos * neg);
  const double rate_in = static_cast<double>(f_in) / static_cast<double>(n_in);
  const double rate_out = static_cast<double>(f_out) / static_cast<double>(n_out);
  const bool ok = rate_in > rate_out && auc >= 0.8 && region_flags == 0 && since(t0) <= 600.0;
  report(8, ok, "detection power over 20 seeded runs",
         fmt::format("flag rate inside {:.3f} vs outside {:.3f}, episode AUC {:.3f} ({} episodes, {} clean segments), "
                     "{} points in the no-spoof region, {} of them flagged",
                     rate_in, rate_out, auc, pos, neg, region_points, region_flags),
         since(t0));
}

std::string run_length(const std::string& s) {
  std::string out;
  for (char c : s)
    if (out.empty() || out.back() != c) out.push_back(c);
  return out;
}

void criterion9() {
  const auto t0 = Clock::now();
  struct Panel {
    const char* name;
    double mu, Delta;
    int k;
    double w, dq;
    const char* expected;
  };
  // expected sequences from an independent brute-force grid over v
  const Panel panels[] = {{"a", 3, 0, 1, 0.1, 0.001, "TSM"}, {"b", 3, 0, 1, 0.1, 0.002, "TSM"},
                          {"c", 4, 0, 1, 0.1, 0.001, "TSM"}, {"d", 3, 2, 1, 0.1, 0.001, "NM"},
                          {"e", 3, 0, 1, 0.4, 0.001, "TSM"}, {"f", 3, 0, 4, 0.1, 0.001, "SM"}};
  std::string seen_all, detail;
  bool ok = true;
  for (const Panel& p : panels) {
    std::string seq;
    for (int j = 1; j <= 99; ++j) {
      RoundTripInput in;
      in.ibar = j / 100.0;
      in.a = 1.0;
      in.mu_plus = p.mu;
      in.Delta = p.Delta;
      in.k = p.k;
      in.w = p.w;
      in.Q = p.dq * (10 - p.k);
      const RoundTripSolution s = round_trip_optimal(in);
      const char c = s.regime == Regime::NoTrade ? 'N' : s.regime == Regime::PureTaker ? 'T'
                     : s.regime == Regime::PureMaker ? 'M' : 'S';
      seq.push_back(c);
    }
    const std::string rl = run_length(seq);
    ok = ok && rl == p.expected;
    seen_all += rl;
    detail += fmt::format("{}:{} ", p.name, rl);
  }
  for (char c : std::string("NTMS")) ok = ok && seen_all.find(c) != std::string::npos;

  // v = 0 branch profitable iff ibar < 1/2 - Delta/mu
  std::size_t exceptions = 0;
  const std::pair<double, double> dm[] = {{0, 1}, {0.5, 3}, {1, 4}, {0.25, 0.8}, {2, 4}, {1.5, 2}};
  for (const auto& [Delta, mu] : dm) {
    for (int j = 0; j < 1000; ++j) {
      RoundTripInput in;
      in.ibar = (j + 0.5) / 1000.0;
      in.a = 100.0;
      in.mu_plus = mu;
      in.Delta = Delta;
      in.k = 1;
      in.w = 0.1;
      in.Q = 0.01;
      exceptions += (round_trip_revenue(in, 0.0) > 0.0) != (in.ibar < 0.5 - Delta / mu);
    }
  }
  ok = ok && exceptions == 0;
  report(9, ok, "round-trip regime map and v=0 threshold",
         fmt::format("{}; threshold exceptions {} over 6x1000 points", detail, exceptions), since(t0));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void criterion10(const std::string& cli, const fs::path& work) {
  const auto t0 = Clock::now();
  fs::remove_all(work);
  fs::create_directories(work);
  save_model(testing::reference_model(), (work / "model.json").string());
  {
    std::ofstream c(work / "run.toml");
    c << "instrument = \"SYN\"\ntick_size = 0.01\n\n[paths]\nmodel = \"" << (work / "model.json").string()
      << "\"\nevents = \"" << (work / "sim_a" / "events.csv").string() << "\"\nlabels = \""
      << (work / "sim_a" / "labels.json").string() << "\"\n\n[mle]\nstarts = 2\n\n[sim]\nhorizon = 20000\n"
      << "episode_starts = [3000, 9000, 15000]\nepisode_length = 400\n\n"
      << "[optimize]\nibar = 0.45\nrho = 1.0\na = 100.0\n\n[round_trip]\nDelta = 0.0\nk = 1\nw = 0.1\nQ = 0.009\n";
  }
  const std::string config = (work / "run.toml").string();
  std::string detail;
  bool ok = true;
  for (const std::string cmd : {"simulate", "reconstruct", "calibrate", "optimize", "monitor", "gof"}) {
    std::vector<fs::path> outs;
    for (const char* tag : {"a", "b"}) {
      const fs::path out = work / (cmd == "simulate" ? std::string("sim_") + tag : cmd + "_" + tag);
      const std::string line = fmt::format("\"{}\" --config \"{}\" --seed 42 --out \"{}\" {} 2> \"{}\"", cli, config,
                                           out.string(), cmd, (work / (cmd + "_" + tag + ".log")).string());
      if (std::system(line.c_str()) != 0) {
        ok = false;
        detail += cmd + " failed; ";
      }
      outs.push_back(out);
    }
    std::size_t files = 0, differ = 0;
    for (const auto& e : fs::directory_iterator(outs[0])) {
      ++files;
      differ += slurp(e.path()) != slurp(outs[1] / e.path().filename());
    }
    for (const auto& e : fs::directory_iterator(outs[1])) differ += !fs::exists(outs[0] / e.path().filename());
    ok = ok && files > 0 && differ == 0;
    detail += fmt::format("{} {} files {} differ; ", cmd, files, differ);
  }
  report(10, ok, "byte-identical outputs across two seeded runs", detail, since(t0));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <spoofwatch-cli> <work-dir>\n");
    return 2;
  }
  spdlog::set_level(spdlog::level::warn);
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10(argv[1], argv[2]);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
