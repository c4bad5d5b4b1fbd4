#include "spoofwatch/model.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

#include <fmt/format.h>

#include "spoofwatch/error.hpp"
#include "spoofwatch/model_io.hpp"

namespace spoofwatch {

void DepthWeights::validate(double tol) const {
  if (w.empty()) throw Error(ErrorCode::InvalidArgument, "weights are empty");
  double sum = 0.0;
  for (double x : w) {
    if (!(x >= 0.0)) throw Error(ErrorCode::InvalidArgument, "weights must be non-negative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > tol) throw Error(ErrorCode::InvalidArgument, fmt::format("weights sum to {}", sum));
}

DepthWeights DepthWeights::uniform(std::size_t depth) {
  return DepthWeights{std::vector<double>(depth + 1, 1.0 / static_cast<double>(depth + 1))};
}

double PriceDist::prob(int x) const {
  if (x < lo || x > hi()) return 0.0;
  return probs[static_cast<std::size_t>(x - lo)];
}

double PriceDist::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) m += static_cast<double>(lo + static_cast<int>(i)) * probs[i];
  return m;
}

double PriceDist::central_moment(int order) const {
  const double mu = mean();
  double m = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i)
    m += std::pow(static_cast<double>(lo + static_cast<int>(i)) - mu, order) * probs[i];
  return m;
}

double PriceDist::skewness() const {
  const double v = variance();
  return v > 0.0 ? central_moment(3) / std::pow(v, 1.5) : 0.0;
}

double PriceDist::kurtosis() const {
  const double v = variance();
  return v > 0.0 ? central_moment(4) / (v * v) : 0.0;
}

PriceDist PriceDist::mirrored() const {
  PriceDist m;
  m.lo = -hi();
  m.probs.assign(probs.rbegin(), probs.rend());
  return m;
}

void PriceDist::validate(double tol) const {
  if (probs.empty()) throw Error(ErrorCode::InvalidArgument, "distribution has empty support");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw Error(ErrorCode::InvalidArgument, "probabilities must be non-negative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > tol)
    throw Error(ErrorCode::InvalidArgument, fmt::format("probabilities sum to {}", sum));
}

PriceDist PriceDist::point(int x) { return PriceDist{x, {1.0}}; }

PriceDist PriceDist::normalized(int lo, std::vector<double> weights) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(sum > 0.0)) throw Error(ErrorCode::InvalidArgument, "cannot normalize zero mass");
  for (double& x : weights) x /= sum;
  return PriceDist{lo, std::move(weights)};
}

void MarketModel::validate() const {
  weights.validate();
  dp_plus.validate();
  dq.validate();
  if (!(tick_size > 0.0)) throw Error(ErrorCode::InvalidArgument, "tick size must be positive");
  for (int x = 1; x <= std::max(dp_plus.hi(), -dp_plus.lo); ++x)
    if (dp_plus.prob(x) < dp_plus.prob(-x))
      throw Error(ErrorCode::InvalidArgument, fmt::format("dp+ not skewed upward at offset {}", x));
  const double nu = dq.mean();
  if (std::abs(nu) > nu_tolerance)
    throw Error(ErrorCode::InvalidArgument, fmt::format("dq mean {} exceeds tolerance {}", nu, nu_tolerance));
}

void to_json(nlohmann::json& j, const DepthWeights& w) { j = w.w; }

void from_json(const nlohmann::json& j, DepthWeights& w) { w.w = j.get<std::vector<double>>(); }

void to_json(nlohmann::json& j, const PriceDist& d) { j = nlohmann::json{{"lo", d.lo}, {"probs", d.probs}}; }

void from_json(const nlohmann::json& j, PriceDist& d) {
  d.lo = j.at("lo").get<int>();
  d.probs = j.at("probs").get<std::vector<double>>();
}

void to_json(nlohmann::json& j, const MarketModel& m) {
  j = nlohmann::json{{"weights", m.weights},     {"dp_plus", m.dp_plus},
                     {"dq", m.dq},               {"tick_size", m.tick_size},
                     {"mu_plus", m.mu_plus()},   {"nu_tolerance", m.nu_tolerance}};
}

void from_json(const nlohmann::json& j, MarketModel& m) {
  m.weights = j.at("weights").get<DepthWeights>();
  m.dp_plus = j.at("dp_plus").get<PriceDist>();
  m.dq = j.at("dq").get<PriceDist>();
  m.tick_size = j.at("tick_size").get<double>();
  if (j.contains("nu_tolerance")) m.nu_tolerance = j.at("nu_tolerance").get<double>();
  if (j.contains("mu_plus") && std::abs(j.at("mu_plus").get<double>() - m.mu_plus()) > 1e-12)
    throw Error(ErrorCode::ConfigError, "mu_plus inconsistent with dp_plus");
}

MarketModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  MarketModel m;
  try {
    m = nlohmann::json::parse(in).get<MarketModel>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
  m.validate();
  return m;
}

void save_model(const MarketModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << nlohmann::json(m).dump(2) << '\n';
}

}  // namespace spoofwatch
