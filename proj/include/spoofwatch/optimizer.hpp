#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "spoofwatch/model.hpp"

namespace spoofwatch {

struct DepthParams {
  double w = 0.0;   // imbalance weight of the level
  double Q = 0.0;   // probability a market order reaches past the level
  double nu = 0.0;  // expected overshoot past the level
};

// Block-book setting with H = rho * a shares to buy.
struct SpoofParams {
  double ibar = 0.5;
  double rho = 1.0;
  double a = 100.0;
  double mu_plus = 1.0;
  double tick_size = 1.0;
  double ask_price = 0.0;  // in ticks
  std::vector<DepthParams> depths;

  double H() const { return rho * a; }
  double b() const { return a * ibar / (1.0 - ibar); }
  void validate() const;
};

// Fills per-depth (w_k, Q_k, nu_k) from a calibrated model.
std::vector<DepthParams> depth_params(const MarketModel& model);

// Expected cost of buying H after posting v at depth k, in currency.
double expected_cost(const SpoofParams& p, std::size_t k, double v);

// Same with simultaneous volumes v_k at every depth.
double multi_expected_cost(const SpoofParams& p, std::span<const double> v);

enum class NsRegime { Exact, SufficientOnly };

std::string_view ns_regime_name(NsRegime r);

struct AdmitsReport {
  std::vector<bool> admits;
  std::vector<double> margin;  // 2 rho mu (1-i) i w_k - (Q_k rho + nu_k)
  bool any = false;
  NsRegime regime = NsRegime::Exact;
};

AdmitsReport admits_spoofing(const SpoofParams& p);

struct SpoofSolution {
  std::size_t depth = 0;
  double v_spoof = 0.0;
  double i_spoof = 0.0;
  double expected_cost = 0.0;
  bool admits = false;
  bool capped = false;
};

struct SpoofOptions {
  double v_max_factor = 10.0;  // cap, in units of a, used only when Q_k = 0
  int max_iters = 1000;        // coordinate-descent sweeps
  double tol = 1e-12;          // relative step tolerance for coordinate descent
};

SpoofSolution optimal_spoof_at_depth(const SpoofParams& p, std::size_t k, const SpoofOptions& opt = {});

// |1/i_spoof - 1/ibar - w (1 - ibar) v / (a ibar)|
double fixed_point_residual(const SpoofParams& p, const SpoofSolution& s);

struct MultiSpoofSolution {
  std::vector<double> v;
  double i_spoof = 0.0;
  double expected_cost = 0.0;
  std::vector<SpoofSolution> per_depth;
  std::size_t best_single = 0;
  int iterations = 0;
  bool converged = true;
};

MultiSpoofSolution optimal_spoof_multi(const SpoofParams& p, const SpoofOptions& opt = {});

struct RoundTripInput {
  double ibar = 0.5;
  double a = 100.0;
  double mu_plus = 1.0;
  double Delta = 0.0;  // effective half spread in ticks
  int k = 1;
  double w = 0.1;
  double Q = 0.0;
};

enum class Regime { NoTrade, PureTaker, PureMaker, Spoof };

std::string_view regime_name(Regime r);

struct RoundTripSolution {
  double H_star = 0.0;
  double v_star = 0.0;
  double revenue = 0.0;  // per tick value
  double i_spoof = 0.0;
  Regime regime = Regime::NoTrade;
};

// R(H, v) / delta.
double round_trip_revenue(const RoundTripInput& in, double H, double v);
// Revenue with H set to its optimum given v.
double round_trip_revenue(const RoundTripInput& in, double v);
double round_trip_H_star(const RoundTripInput& in, double v);

struct RoundTripOptions {
  double v_max_factor = 10.0;
  int grid = 2000;
  double rel_step = 1e-6;
};

RoundTripSolution round_trip_optimal(const RoundTripInput& in, const RoundTripOptions& opt = {});

}  // namespace spoofwatch
