#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hestoncal/bayes.hpp"
#include "hestoncal/model.hpp"
#include "hestoncal/priors.hpp"
#include "hestoncal/rng.hpp"

// SIR particle filter for the latent variance, with optional jump particles.
//
// Resampling draws from a piecewise-linear CDF built over the sorted
// particle values, so refined particles fall between the raw ones instead
// of duplicating them.

namespace hestoncal {

struct ParticleCloud {
  std::vector<double> values;
  std::vector<double> weights;
  std::optional<std::vector<std::uint8_t>> jump_flags;
  std::optional<std::vector<double>> jump_sizes;

  std::size_t size() const { return values.size(); }
};

struct FilterOutput {
  std::vector<double> vol_estimate;  // n + 1 entries, last copies the one before
  std::vector<double> jump_prob;     // n entries, lambda(k dt); zero without jumps
  std::vector<double> jump_size;     // n entries, Z(k dt); zero without jumps
  std::size_t degenerate_steps = 0;  // steps that fell back to uniform weights
};

/// Continuous CDF through the sorted particles. Knot j carries
/// F_j = sum_{m<j} W_m + W_j / 2 for interior knots, 0 at the minimum and 1
/// at the maximum; F is linear between knots.
class PiecewiseLinearCdf {
 public:
  PiecewiseLinearCdf(std::vector<double> knots, std::vector<double> levels);

  double operator()(double v) const;
  /// Inverse transform; u in [0, 1).
  double sample(double u) const;
  /// Mean of the distribution, integrated segment by segment.
  double mean() const;

  std::span<const double> knots() const { return knots_; }
  std::span<const double> levels() const { return levels_; }

 private:
  std::vector<double> knots_;
  std::vector<double> levels_;
};

ParticleCloud init_particles(double theta, std::size_t n_particles);

/// Propagates every particle one step with the variance Euler scheme, the
/// noise correlated with the price residual of `return_k`. Candidates are
/// truncated at 0.
ParticleCloud propagate(const ParticleCloud& cloud, double return_k, const HestonParams& params,
                        double dt, CounterStream& rng);

/// Log of the normal likelihood of `observed_return` under each particle's
/// variance (mean mu dt + 1, variance V dt). -inf for zero particles.
std::vector<double> log_weight_nojump(std::span<const double> values, double observed_return,
                                      double mu, double dt);

/// Likelihood with jump particles: flagged particles scale the mean by e^Z
/// and the standard deviation by e^Z.
std::vector<double> log_weight_jump(const ParticleCloud& cloud, double observed_return, double mu,
                                    double dt);

/// Rescales non-negative weights to unit sum. Throws DegenerateWeightsError
/// when every entry is zero.
std::vector<double> normalize(std::span<const double> raw);
/// Same from log weights, subtracting the max before exponentiating.
std::vector<double> normalize_log(std::span<const double> log_weights);

/// Requires at least 3 particles. Sorting is stable on (value, index).
PiecewiseLinearCdf build_cdf(std::span<const double> values, std::span<const double> weights);

double sample_cdf(const PiecewiseLinearCdf& cdf, double u);

/// N inverse-CDF draws for the values (and jump sizes when present), one
/// uniform per output particle. Output weights are uniform; jump flags are
/// dropped.
ParticleCloud resample(const ParticleCloud& cloud, CounterStream& value_rng,
                       CounterStream* size_rng = nullptr);

double cloud_mean(std::span<const double> values);

/// Per-step particle means followed by a copy of the last one for the
/// terminal step the filter cannot reach.
std::vector<double> estimate_vol(const std::vector<std::vector<double>>& clouds);

struct JumpParticles {
  std::vector<std::uint8_t> flags;
  std::vector<double> sizes;
};

JumpParticles init_jump_particles(const PriorConfig& priors, std::size_t n_particles,
                                  CounterStream& flag_rng, CounterStream& size_rng);

/// Weighted share of jump-flagged particles.
double step_jump_prob(std::span<const std::uint8_t> flags, std::span<const double> weights);

struct JumpAggregate {
  double lambda = 0.0;
  double mu_j = 0.0;
  double sigma_j = 0.0;
  bool no_jumps = false;  // sum of lambda(t) was zero; prior values returned
};

JumpAggregate aggregate_jump_params(std::span<const double> jump_prob,
                                    std::span<const double> jump_size, double maturity,
                                    const PriorConfig& priors);

/// R'(k) = R(k) (1 - lambda(k) (1 - e^{-Z(k)})), clamped at 1e-12.
/// `clamped`, when given, receives the number of clamped steps.
ReturnSeries neutralize_returns(const ReturnSeries& returns, std::span<const double> jump_prob,
                                std::span<const double> jump_size,
                                std::size_t* clamped = nullptr);

/// One full filtering pass for calibration cycle `cycle`.
///
/// Without jumps the loop runs k = 1..n-1: candidates for v(k) are weighted
/// with R(k+1). With jumps it runs k = 1..n: candidates for v(k-1) and the
/// jump particles of step k are weighted with R(k). Either way the output has
/// n + 1 variance estimates with the last one copied.
FilterOutput run_filter(const ReturnSeries& returns, const HestonParams& params,
                        const PriorConfig& priors, bool with_jumps, const RandomSource& source,
                        std::uint32_t cycle);

}  // namespace hestoncal
