#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace spoofwatch {

struct NelderMeadOptions {
  int max_evals = 20000;
  double ftol = 1e-10;  // spread of simplex values
  double xtol = 1e-8;   // simplex diameter
  double initial_step = 0.5;
  int restarts = 1;     // fresh simplex around the best point after convergence
  bool adaptive = true; // dimension-dependent coefficients
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  int evals = 0;
  bool converged = false;
  std::vector<double> best_history;  // best value after each iteration
};

using Objective = std::function<double(std::span<const double>)>;

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& opt = {});

// log Phi(x), accurate far into the lower tail.
double log_norm_cdf(double x);
double norm_cdf(double x);
double norm_pdf(double x);
double log_norm_pdf(double x);

// Softmax with the first logit pinned at zero: maps R^{n-1} onto the n-simplex.
std::vector<double> simplex_from_logits(std::span<const double> z);
std::vector<double> logits_from_simplex(std::span<const double> p);

// Deterministic, platform-independent random source.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  double uniform();   // [0, 1)
  double uniform_open();  // (0, 1)
  double normal();
  double exponential(double rate);
  double gamma(double shape, double scale);
  std::uint64_t poisson(double mean);
  // Index drawn from unnormalized weights.
  std::size_t categorical(std::span<const double> weights);

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

// Stream seed for the i-th independent substream.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) { return splitmix64(seed ^ splitmix64(index)); }

}  // namespace spoofwatch
