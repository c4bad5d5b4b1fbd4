#pragma once

#include <cstddef>
#include <span>

namespace spoofwatch {

// F(H): smallest tick offset x with v[0] + ... + v[x] >= H.
// Throws InsufficientLiquidity when the visible volume is below H.
std::size_t tick_depth(std::span<const double> v, double H);

// G(H) = sum_{k<=F} k v_k - F (sum_{k<=F} v_k - H), in ticks times shares.
double liquidity_cost(std::span<const double> v, double H);

// Block-book approximations with constant depth a per level.
inline double block_tick_depth(double a, double H) { return H / a; }
inline double block_liquidity_cost(double a, double H) { return H * H / (2.0 * a); }

}  // namespace spoofwatch
