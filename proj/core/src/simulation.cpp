#include "hestoncal/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hestoncal/errors.hpp"
#include "hestoncal/rng.hpp"

namespace hestoncal {

namespace {

constexpr int kMaxPriceRejections = 100;

enum SimulationUnit : std::uint32_t {
  kPriceNoise = 0,
  kExtraNoise = 1,
  kJumpFlag = 2,
  kJumpSize = 3,
};

StreamKey sim_key(SimulationUnit unit) { return {0, Phase::Simulate, unit}; }

}  // namespace

std::vector<double> correlate_noise(std::span<const double> eps_s,
                                    std::span<const double> eps_add, double rho) {
  if (eps_s.size() != eps_add.size()) {
    throw ParameterError("correlate_noise: length mismatch");
  }
  if (!(rho >= -1.0 && rho <= 1.0)) {
    throw ParameterError("correlate_noise: rho must lie in [-1, 1]");
  }
  const double complement = std::sqrt(1.0 - rho * rho);
  std::vector<double> out(eps_s.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = rho * eps_s[i] + complement * eps_add[i];
  }
  return out;
}

double step_volatility(double v_prev, const HestonParams& params, double dt, double eps_v) {
  const double v_plus = std::max(v_prev, 0.0);
  const double next = v_prev + params.kappa * (params.theta - v_plus) * dt +
                      params.sigma * std::sqrt(v_plus * dt) * eps_v;
  return std::max(next, 0.0);
}

std::optional<double> step_price(double s_prev, double v_prev, const HestonParams& params,
                                 double dt, double eps_s) {
  const double v_plus = std::max(v_prev, 0.0);
  const double bracket = 1.0 + params.mu * dt + std::sqrt(v_plus * dt) * eps_s;
  if (!(bracket > 0.0)) return std::nullopt;
  return s_prev * bracket;
}

SimulatedPath simulate_heston(const HestonParams& params, const TimeGrid& grid, double s0,
                              double v0, std::uint64_t seed) {
  return simulate_bates(params, JumpParams{}, grid, s0, v0, seed);
}

SimulatedPath simulate_bates(const HestonParams& params, const JumpParams& jumps,
                             const TimeGrid& grid, double s0, double v0, std::uint64_t seed,
                             const std::map<std::size_t, double>& forced_jumps) {
  // kappa = 0 and theta = 0 are legal for simulation (frozen variance), so
  // only the parts of validate() that matter here are checked.
  if (!(params.sigma >= 0.0)) throw ParameterError("sigma must be non-negative");
  if (!(params.rho >= -1.0 && params.rho <= 1.0)) throw ParameterError("rho must lie in [-1, 1]");
  if (!(s0 > 0.0)) throw ParameterError("initial price must be positive");
  if (!(v0 >= 0.0)) throw ParameterError("initial variance must be non-negative");
  jumps.validate();

  const double dt = grid.dt();
  const double jump_prob = jumps.lambda * dt;
  if (jump_prob >= 1.0) {
    throw ParameterError("lambda * dt = " + std::to_string(jump_prob) +
                         " >= 1: grid too coarse for the jump intensity");
  }

  const RandomSource source(seed);
  auto price_noise = source.stream(sim_key(kPriceNoise));
  auto extra_noise = source.stream(sim_key(kExtraNoise));
  auto jump_flag = source.stream(sim_key(kJumpFlag));
  auto jump_size = source.stream(sim_key(kJumpSize));
  const double complement = std::sqrt(1.0 - params.rho * params.rho);

  const std::size_t n = grid.n_steps();
  SimulatedPath path{grid, {}, {}, {}, {}};
  path.prices.resize(n + 1);
  path.true_vol.resize(n + 1);
  path.prices[0] = s0;
  path.true_vol[0] = v0;

  for (std::size_t k = 1; k <= n; ++k) {
    const double v_prev = path.true_vol[k - 1];
    const double s_prev = path.prices[k - 1];

    double eps_s = price_noise.normal();
    std::optional<double> price = step_price(s_prev, v_prev, params, dt, eps_s);
    for (int attempt = 0; !price && attempt < kMaxPriceRejections; ++attempt) {
      eps_s = price_noise.normal();
      price = step_price(s_prev, v_prev, params, dt, eps_s);
    }
    if (!price) {
      throw SimulationError("price step " + std::to_string(k) + " rejected " +
                            std::to_string(kMaxPriceRejections) + " times");
    }

    const double eps_v = params.rho * eps_s + complement * extra_noise.normal();
    path.true_vol[k] = step_volatility(v_prev, params, dt, eps_v);

    double s_next = *price;
    if (jump_prob > 0.0 && jump_flag.bernoulli(jump_prob)) {
      const double z = jump_size.normal(jumps.mu_j, jumps.sigma_j);
      path.jump_times.insert(k);
      path.jump_sizes[k] = z;
      s_next *= std::exp(z);
    }
    if (const auto forced = forced_jumps.find(k); forced != forced_jumps.end()) {
      path.jump_times.insert(k);
      path.jump_sizes[k] += forced->second;
      s_next *= std::exp(forced->second);
    }
    path.prices[k] = s_next;
  }
  return path;
}

}  // namespace hestoncal
