#include "spoofwatch/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace spoofwatch {

namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

bool run_simplex(const Objective& f, std::vector<Vertex>& s, const NelderMeadOptions& opt, NelderMeadResult& res) {
  const std::size_t n = s.front().x.size();
  auto eval = [&](const std::vector<double>& x) {
    ++res.evals;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };
  auto order = [&] { std::stable_sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; }); };
  const double dn = static_cast<double>(n);
  const bool adaptive = opt.adaptive && n >= 2;
  const double kExpand = adaptive ? 1.0 + 2.0 / dn : 2.0;
  const double kContract = adaptive ? 0.75 - 0.5 / dn : 0.5;
  const double kShrink = adaptive ? 1.0 - 1.0 / dn : 0.5;
  order();
  while (res.evals < opt.max_evals) {
    double diam = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = 0; j < n; ++j) diam = std::max(diam, std::abs(s[i].x[j] - s[0].x[j]));
    if (std::abs(s[n].f - s[0].f) <= opt.ftol * (std::abs(s[0].f) + 1e-300) + 1e-300 && diam <= opt.xtol) return true;
    if (std::abs(s[n].f - s[0].f) <= 1e-15 * std::abs(s[0].f) && diam <= opt.xtol * 1e3) return true;

    std::vector<double> c(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) c[j] += s[i].x[j] / static_cast<double>(n);
    auto along = [&](double t) {
      std::vector<double> y(n);
      for (std::size_t j = 0; j < n; ++j) y[j] = c[j] + t * (s[n].x[j] - c[j]);
      return y;
    };
    auto xr = along(-1.0);
    const double fr = eval(xr);
    if (fr < s[0].f) {
      auto xe = along(-kExpand);
      const double fe = eval(xe);
      s[n] = fe < fr ? Vertex{std::move(xe), fe} : Vertex{std::move(xr), fr};
    } else if (fr < s[n - 1].f) {
      s[n] = {std::move(xr), fr};
    } else {
      const bool outside = fr < s[n].f;
      auto xc = along(outside ? -kContract : kContract);
      const double fc = eval(xc);
      if (fc < (outside ? fr : s[n].f)) {
        s[n] = {std::move(xc), fc};
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t j = 0; j < n; ++j) s[i].x[j] = s[0].x[j] + kShrink * (s[i].x[j] - s[0].x[j]);
          s[i].f = eval(s[i].x);
        }
      }
    }
    order();
    res.best_history.push_back(s[0].f);
  }
  return false;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& opt) {
  NelderMeadResult res;
  const std::size_t n = x0.size();
  std::vector<Vertex> s;
  for (int round = 0; round <= opt.restarts; ++round) {
    s.clear();
    ++res.evals;
    s.push_back({x0, f(x0)});
    if (!std::isfinite(s[0].f)) s[0].f = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      auto x = x0;
      x[i] += opt.initial_step;
      ++res.evals;
      const double v = f(x);
      s.push_back({x, std::isfinite(v) ? v : std::numeric_limits<double>::infinity()});
    }
    res.converged = run_simplex(f, s, opt, res);
    const bool improved = res.x.empty() || s[0].f < res.f;
    if (improved) {
      res.x = s[0].x;
      res.f = s[0].f;
    }
    x0 = res.x;
    if (!res.converged || !improved) break;
  }
  return res;
}

double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double log_norm_pdf(double x) { return -0.5 * x * x - 0.5 * std::log(2.0 * std::numbers::pi); }

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double log_norm_cdf(double x) {
  if (x > -20.0) return std::log(norm_cdf(x));
  // asymptotic Mills-ratio expansion
  const double x2 = x * x;
  return log_norm_pdf(x) - std::log(-x) + std::log1p(-1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2));
}

std::vector<double> simplex_from_logits(std::span<const double> z) {
  std::vector<double> p(z.size() + 1);
  double m = 0.0;
  for (double v : z) m = std::max(m, v);
  p[0] = std::exp(-m);
  for (std::size_t i = 0; i < z.size(); ++i) p[i + 1] = std::exp(z[i] - m);
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= s;
  return p;
}

std::vector<double> logits_from_simplex(std::span<const double> p) {
  std::vector<double> z(p.size() - 1);
  const double floor = 1e-12;
  for (std::size_t i = 1; i < p.size(); ++i) z[i - 1] = std::log(std::max(p[i], floor) / std::max(p[0], floor));
  return z;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t Rng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform_open() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_open();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(th);
  has_spare_ = true;
  return r * std::cos(th);
}

double Rng::exponential(double rate) { return -std::log(uniform_open()) / rate; }

double Rng::gamma(double shape, double scale) {
  // Marsaglia-Tsang
  if (shape < 1.0) {
    const double u = uniform_open();
    return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
  }
}

std::uint64_t Rng::poisson(double mean) {
  if (mean <= 0.0) return 0;
  if (mean > 50.0) {
    const double x = std::round(mean + std::sqrt(mean) * normal());
    return x < 0 ? 0 : static_cast<std::uint64_t>(x);
  }
  const double L = std::exp(-mean);
  std::uint64_t k = 0;
  double p = uniform_open();
  while (p > L) {
    ++k;
    p *= uniform_open();
  }
  return k;
}

std::size_t Rng::categorical(std::span<const double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double u = uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  for (std::size_t i = weights.size(); i-- > 0;)
    if (weights[i] > 0.0) return i;
  return 0;
}

}  // namespace spoofwatch
