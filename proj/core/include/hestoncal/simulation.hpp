#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "hestoncal/model.hpp"

namespace hestoncal {

struct SimulatedPath {
  TimeGrid grid;
  std::vector<double> prices;    // S(k dt), k = 0..n
  std::vector<double> true_vol;  // v(k dt), k = 0..n
  std::set<std::size_t> jump_times;
  std::map<std::size_t, double> jump_sizes;  // step -> Z
};

/// rho * eps_s + sqrt(1 - rho^2) * eps_add, elementwise.
std::vector<double> correlate_noise(std::span<const double> eps_s,
                                    std::span<const double> eps_add, double rho);

/// One Euler step of the variance with full truncation: the drift and
/// diffusion see max(v_prev, 0) and the result is clamped at 0.
double step_volatility(double v_prev, const HestonParams& params, double dt, double eps_v);

/// One Euler step of the price, s_prev * (1 + mu dt + sqrt(v+ dt) eps_s).
/// Empty when the bracket is not positive.
std::optional<double> step_price(double s_prev, double v_prev, const HestonParams& params,
                                 double dt, double eps_s);

SimulatedPath simulate_heston(const HestonParams& params, const TimeGrid& grid, double s0,
                              double v0, std::uint64_t seed);

/// Heston diffusion plus at most one lognormal jump per step, occurring with
/// probability lambda * dt. `forced_jumps` injects jumps of a given log size
/// at given steps (1-based) on top of the random ones.
SimulatedPath simulate_bates(const HestonParams& params, const JumpParams& jumps,
                             const TimeGrid& grid, double s0, double v0, std::uint64_t seed,
                             const std::map<std::size_t, double>& forced_jumps = {});

}  // namespace hestoncal
