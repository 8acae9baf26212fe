#include "hestoncal/particle_filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "hestoncal/errors.hpp"

namespace hestoncal {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kReturnFloor = 1e-12;

double log_normal_pdf(double x, double mean, double variance) {
  const double r = x - mean;
  return -0.5 * std::log(2.0 * std::numbers::pi * variance) - 0.5 * r * r / variance;
}

}  // namespace

// --- PiecewiseLinearCdf --------------------------------------------------------

PiecewiseLinearCdf::PiecewiseLinearCdf(std::vector<double> knots, std::vector<double> levels)
    : knots_(std::move(knots)), levels_(std::move(levels)) {
  if (knots_.size() != levels_.size() || knots_.size() < 2) {
    throw ParameterError("piecewise-linear CDF needs matching knots and levels, at least 2");
  }
}

double PiecewiseLinearCdf::operator()(double v) const {
  if (v <= knots_.front()) return 0.0;
  if (v > knots_.back()) return 1.0;
  // first knot >= v; the one before it is strictly below v, so the segment
  // has positive length
  const auto hi = static_cast<std::size_t>(
      std::lower_bound(knots_.begin(), knots_.end(), v) - knots_.begin());
  const std::size_t lo = hi - 1;
  const double frac = (v - knots_[lo]) / (knots_[hi] - knots_[lo]);
  return levels_[lo] + frac * (levels_[hi] - levels_[lo]);
}

double PiecewiseLinearCdf::sample(double u) const {
  const auto it = std::upper_bound(levels_.begin(), levels_.end(), u);
  if (it == levels_.begin()) return knots_.front();
  if (it == levels_.end()) return knots_.back();
  const auto hi = static_cast<std::size_t>(it - levels_.begin());
  const std::size_t lo = hi - 1;
  if (knots_[hi] == knots_[lo]) return knots_[lo];
  const double frac = (u - levels_[lo]) / (levels_[hi] - levels_[lo]);
  return knots_[lo] + frac * (knots_[hi] - knots_[lo]);
}

double PiecewiseLinearCdf::mean() const {
  double m = 0.0;
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    m += (levels_[i] - levels_[i - 1]) * 0.5 * (knots_[i] + knots_[i - 1]);
  }
  return m;
}

PiecewiseLinearCdf build_cdf(std::span<const double> values, std::span<const double> weights) {
  const std::size_t n = values.size();
  if (weights.size() != n) throw ParameterError("build_cdf: values and weights differ in length");
  if (n < 3) {
    throw ParameterError("build_cdf: at least 3 particles are required, got " +
                         std::to_string(n));
  }
  std::vector<std::pair<double, std::size_t>> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = {values[i], i};
  std::sort(order.begin(), order.end());

  std::vector<double> knots(n);
  std::vector<double> levels(n);
  double before = 0.0;  // sum of sorted weights strictly left of the knot
  for (std::size_t j = 0; j < n; ++j) {
    knots[j] = order[j].first;
    const double w = weights[order[j].second];
    levels[j] = std::min(before + 0.5 * w, 1.0);
    before += w;
  }
  levels.front() = 0.0;
  levels.back() = 1.0;
  for (std::size_t j = 1; j < n; ++j) levels[j] = std::max(levels[j], levels[j - 1]);
  return PiecewiseLinearCdf(std::move(knots), std::move(levels));
}

double sample_cdf(const PiecewiseLinearCdf& cdf, double u) { return cdf.sample(u); }

// --- particles -------------------------------------------------------------------

ParticleCloud init_particles(double theta, std::size_t n_particles) {
  if (!(theta > 0.0)) throw ParameterError("initial particle value theta must be positive");
  if (n_particles < 2) throw ParameterError("need at least 2 particles");
  ParticleCloud cloud;
  cloud.values.assign(n_particles, theta);
  cloud.weights.assign(n_particles, 1.0 / static_cast<double>(n_particles));
  return cloud;
}

ParticleCloud propagate(const ParticleCloud& cloud, double return_k, const HestonParams& params,
                        double dt, CounterStream& rng) {
  const double sqrt_dt = std::sqrt(dt);
  const double residual = return_k - params.mu * dt - 1.0;
  const double complement = std::sqrt(std::max(0.0, 1.0 - params.rho * params.rho));

  ParticleCloud next;
  next.values.resize(cloud.size());
  next.weights = cloud.weights;
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    const double v = cloud.values[j];
    if (!(v > 0.0)) {
      throw DomainError("particle " + std::to_string(j) + " has non-positive variance");
    }
    const double root = std::sqrt(v);
    const double z = residual / (sqrt_dt * root);
    const double w = z * params.rho + rng.normal() * complement;
    const double candidate =
        v + params.kappa * (params.theta - v) * dt + params.sigma * sqrt_dt * root * w;
    next.values[j] = std::max(candidate, 0.0);
  }
  return next;
}

std::vector<double> log_weight_nojump(std::span<const double> values, double observed_return,
                                      double mu, double dt) {
  const double mean = mu * dt + 1.0;
  std::vector<double> out(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double v = values[j];
    out[j] = v > 0.0 ? log_normal_pdf(observed_return, mean, v * dt) : kNegInf;
  }
  return out;
}

std::vector<double> log_weight_jump(const ParticleCloud& cloud, double observed_return, double mu,
                                    double dt) {
  if (!cloud.jump_flags || !cloud.jump_sizes) {
    throw ParameterError("log_weight_jump needs jump flags and sizes");
  }
  const auto& flags = *cloud.jump_flags;
  const auto& sizes = *cloud.jump_sizes;
  const double drift = mu * dt + 1.0;
  std::vector<double> out(cloud.size());
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    const double v = cloud.values[j];
    if (!(v > 0.0)) {
      out[j] = kNegInf;
      continue;
    }
    if (flags[j] == 0) {
      out[j] = log_normal_pdf(observed_return, drift, v * dt);
    } else {
      const double scale = std::exp(sizes[j]);
      // the 1/e^Z prefactor is the change of the standard deviation
      out[j] = log_normal_pdf(observed_return, scale * drift, scale * scale * v * dt);
    }
  }
  return out;
}

std::vector<double> normalize(std::span<const double> raw) {
  double total = 0.0;
  for (const double w : raw) {
    if (!(w >= 0.0)) throw ParameterError("weights must be non-negative");
    total += w;
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw DegenerateWeightsError("all particle weights are zero");
  }
  std::vector<double> out(raw.size());
  for (std::size_t j = 0; j < raw.size(); ++j) out[j] = raw[j] / total;
  return out;
}

std::vector<double> normalize_log(std::span<const double> log_weights) {
  double peak = kNegInf;
  for (const double lw : log_weights) {
    if (lw > peak) peak = lw;
  }
  if (!(peak > kNegInf) || !std::isfinite(peak)) {
    throw DegenerateWeightsError("all particle log-weights are -inf");
  }
  std::vector<double> raw(log_weights.size());
  for (std::size_t j = 0; j < raw.size(); ++j) raw[j] = std::exp(log_weights[j] - peak);
  return normalize(raw);
}

ParticleCloud resample(const ParticleCloud& cloud, CounterStream& value_rng,
                       CounterStream* size_rng) {
  const std::size_t n = cloud.size();
  ParticleCloud out;
  out.values.resize(n);
  out.weights.assign(n, 1.0 / static_cast<double>(n));

  const auto value_cdf = build_cdf(cloud.values, cloud.weights);
  for (auto& v : out.values) v = value_cdf.sample(value_rng.uniform());

  if (cloud.jump_sizes && size_rng != nullptr) {
    const auto size_cdf = build_cdf(*cloud.jump_sizes, cloud.weights);
    std::vector<double> sizes(n);
    for (auto& z : sizes) z = size_cdf.sample(size_rng->uniform());
    out.jump_sizes = std::move(sizes);
  }
  return out;
}

double cloud_mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (const double v : values) s += v;
  return s / static_cast<double>(values.size());
}

std::vector<double> estimate_vol(const std::vector<std::vector<double>>& clouds) {
  if (clouds.empty()) throw ParameterError("estimate_vol needs at least one cloud");
  std::vector<double> out;
  out.reserve(clouds.size() + 1);
  for (const auto& c : clouds) out.push_back(cloud_mean(c));
  out.push_back(out.back());
  return out;
}

JumpParticles init_jump_particles(const PriorConfig& priors, std::size_t n_particles,
                                  CounterStream& flag_rng, CounterStream& size_rng) {
  if (!(priors.lambda_th >= 0.0 && priors.lambda_th < 1.0)) {
    throw ParameterError("lambda_th must lie in [0, 1)");
  }
  JumpParticles jp;
  jp.flags.resize(n_particles);
  jp.sizes.resize(n_particles);
  for (auto& f : jp.flags) f = flag_rng.bernoulli(priors.lambda_th) ? 1 : 0;
  for (auto& z : jp.sizes) z = size_rng.normal(priors.mu0_j, priors.sigma0_j);
  return jp;
}

double step_jump_prob(std::span<const std::uint8_t> flags, std::span<const double> weights) {
  if (flags.size() != weights.size()) throw ParameterError("flags and weights differ in length");
  double p = 0.0;
  for (std::size_t j = 0; j < flags.size(); ++j) {
    if (flags[j] != 0) p += weights[j];
  }
  return std::clamp(p, 0.0, 1.0);
}

JumpAggregate aggregate_jump_params(std::span<const double> jump_prob,
                                    std::span<const double> jump_size, double maturity,
                                    const PriorConfig& priors) {
  if (jump_prob.size() != jump_size.size()) {
    throw ParameterError("jump traces differ in length");
  }
  if (!(maturity > 0.0)) throw ParameterError("maturity must be positive");
  const std::size_t n = jump_prob.size();
  double mass = 0.0;
  double weighted = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mass += jump_prob[k];
    weighted += jump_prob[k] * jump_size[k];
  }
  JumpAggregate agg;
  if (!(mass > 0.0) || n < 2) {
    agg.no_jumps = true;
    agg.mu_j = priors.mu0_j;
    agg.sigma_j = priors.sigma0_j;
    return agg;
  }
  agg.lambda = mass / maturity;
  agg.mu_j = weighted / mass;
  double spread = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = jump_size[k] - agg.mu_j;
    spread += jump_prob[k] * d * d;
  }
  const double nn = static_cast<double>(n);
  agg.sigma_j = std::sqrt(spread / ((nn - 1.0) / nn * mass));
  return agg;
}

ReturnSeries neutralize_returns(const ReturnSeries& returns, std::span<const double> jump_prob,
                                std::span<const double> jump_size, std::size_t* clamped) {
  const std::size_t n = returns.size();
  if (jump_prob.size() != n || jump_size.size() != n) {
    throw ParameterError("jump traces must match the return series length");
  }
  ReturnSeries out{std::vector<double>(n), returns.dt};
  std::size_t n_clamped = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double factor = 1.0 - jump_prob[k] * (1.0 - std::exp(-jump_size[k]));
    double r = returns.values[k] * factor;
    if (!(r > 0.0)) {
      r = kReturnFloor;
      ++n_clamped;
    }
    out.values[k] = r;
  }
  if (clamped != nullptr) *clamped = n_clamped;
  return out;
}

// --- full pass ---------------------------------------------------------------------

namespace {

std::vector<double> weights_or_uniform(std::span<const double> log_weights,
                                       std::size_t& degenerate_steps) {
  try {
    return normalize_log(log_weights);
  } catch (const DegenerateWeightsError&) {
    ++degenerate_steps;
    return std::vector<double>(log_weights.size(), 1.0 / static_cast<double>(log_weights.size()));
  }
}

FilterOutput filter_without_jumps(const ReturnSeries& returns, const HestonParams& params,
                                  std::size_t n_particles, const RandomSource& source,
                                  std::uint32_t cycle) {
  const std::size_t n = returns.size();
  const double dt = returns.dt;
  FilterOutput out;
  out.vol_estimate.resize(n + 1);
  out.jump_prob.assign(n, 0.0);
  out.jump_size.assign(n, 0.0);

  ParticleCloud cloud = init_particles(params.theta, n_particles);
  out.vol_estimate[0] = cloud_mean(cloud.values);
  for (std::size_t k = 1; k + 1 <= n; ++k) {
    const auto step = static_cast<std::uint32_t>(k);
    auto noise = source.stream({cycle, Phase::Propagate, step});
    ParticleCloud candidates = propagate(cloud, returns.values[k - 1], params, dt, noise);
    // v(k) drives R(k+1)
    const auto lw = log_weight_nojump(candidates.values, returns.values[k], params.mu, dt);
    candidates.weights = weights_or_uniform(lw, out.degenerate_steps);
    auto draws = source.stream({cycle, Phase::Resample, step});
    cloud = resample(candidates, draws);
    out.vol_estimate[k] = cloud_mean(cloud.values);
  }
  out.vol_estimate[n] = out.vol_estimate[n - 1];
  return out;
}

FilterOutput filter_with_jumps(const ReturnSeries& returns, const HestonParams& params,
                               const PriorConfig& priors, const RandomSource& source,
                               std::uint32_t cycle) {
  const std::size_t n = returns.size();
  const std::size_t n_particles = priors.n_particles;
  const double dt = returns.dt;
  FilterOutput out;
  out.vol_estimate.resize(n + 1);
  out.jump_prob.resize(n);
  out.jump_size.resize(n);

  ParticleCloud cloud = init_particles(params.theta, n_particles);
  for (std::size_t k = 1; k <= n; ++k) {
    const auto step = static_cast<std::uint32_t>(k);
    ParticleCloud candidates;
    if (k == 1) {
      candidates = cloud;
    } else {
      auto noise = source.stream({cycle, Phase::Propagate, step});
      candidates = propagate(cloud, returns.values[k - 2], params, dt, noise);
    }
    auto flag_rng = source.stream({cycle, Phase::JumpFlag, step});
    auto size_rng = source.stream({cycle, Phase::JumpSize, step});
    auto jumps = init_jump_particles(priors, n_particles, flag_rng, size_rng);
    candidates.jump_flags = std::move(jumps.flags);
    candidates.jump_sizes = std::move(jumps.sizes);

    const auto lw = log_weight_jump(candidates, returns.values[k - 1], params.mu, dt);
    candidates.weights = weights_or_uniform(lw, out.degenerate_steps);
    out.jump_prob[k - 1] = step_jump_prob(*candidates.jump_flags, candidates.weights);

    auto draws = source.stream({cycle, Phase::Resample, step});
    cloud = resample(candidates, draws, &draws);
    out.vol_estimate[k - 1] = cloud_mean(cloud.values);
    out.jump_size[k - 1] = cloud_mean(*cloud.jump_sizes);
    cloud.jump_sizes.reset();
  }
  out.vol_estimate[n] = out.vol_estimate[n - 1];
  return out;
}

}  // namespace

FilterOutput run_filter(const ReturnSeries& returns, const HestonParams& params,
                        const PriorConfig& priors, bool with_jumps, const RandomSource& source,
                        std::uint32_t cycle) {
  if (returns.size() < 2) throw ParameterError("particle filter needs at least 2 returns");
  if (priors.n_particles < 3) throw ParameterError("particle filter needs at least 3 particles");
  if (!(params.theta > 0.0)) throw ParameterError("filter theta must be positive");
  if (!(params.sigma >= 0.0)) throw ParameterError("filter sigma must be non-negative");
  if (!(std::abs(params.rho) <= 1.0)) throw ParameterError("filter rho must lie in [-1, 1]");
  return with_jumps ? filter_with_jumps(returns, params, priors, source, cycle)
                    : filter_without_jumps(returns, params, priors.n_particles, source, cycle);
}

}  // namespace hestoncal
