#include "spoofwatch/liquidity.hpp"

#include <string>

#include "spoofwatch/error.hpp"

namespace spoofwatch {

std::size_t tick_depth(std::span<const double> v, double H) {
  if (H < 0.0) throw Error(ErrorCode::InvalidArgument, "H must be non-negative");
  double cum = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    cum += v[k];
    if (cum >= H) return k;
  }
  throw Error(ErrorCode::InsufficientLiquidity,
              "H=" + std::to_string(H) + " exceeds visible depth " + std::to_string(cum));
}

double liquidity_cost(std::span<const double> v, double H) {
  const std::size_t F = tick_depth(v, H);
  double weighted = 0.0;
  double cum = 0.0;
  for (std::size_t k = 0; k <= F; ++k) {
    weighted += static_cast<double>(k) * v[k];
    cum += v[k];
  }
  return weighted - static_cast<double>(F) * (cum - H);
}

}  // namespace spoofwatch
