#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hestoncal/bayes.hpp"
#include "hestoncal/model.hpp"
#include "hestoncal/particle_filter.hpp"
#include "hestoncal/priors.hpp"
#include "hestoncal/rng.hpp"

namespace hestoncal {

struct ChainRecord {
  std::uint32_t cycle = 0;
  double mu = 0.0;
  double kappa = 0.0;
  double theta = 0.0;
  double sigma = 0.0;
  double rho = 0.0;
  std::optional<double> lambda;
  std::optional<double> mu_j;
  std::optional<double> sigma_j;
  bool filter_rerun = false;
  bool degenerate = false;  // some block or the filter kept its previous value
};

struct PointEstimates {
  double mu = 0.0;
  double kappa = 0.0;
  double theta = 0.0;
  double sigma = 0.0;
  double rho = 0.0;
  std::optional<double> lambda;
  std::optional<double> mu_j;
  std::optional<double> sigma_j;

  /// (name, value) pairs in chain.csv column order, jump entries only when set.
  std::vector<std::pair<std::string, double>> named() const;
};

struct TruthParams {
  HestonParams heston;
  std::optional<JumpParams> jumps;
};

struct ChainSummary {
  PointEstimates means;
  PointEstimates stddevs;  // sample standard deviations (n - 1); 0 for a single record
  std::optional<std::map<std::string, double>> relative_errors;  // percent, unrounded
};

/// |estimate - truth| / |truth| * 100.
double relative_error_percent(double estimate, double truth);

/// Means and spreads of the records after `burn_in`. Throws ParameterError on
/// an empty chain or burn_in >= chain length.
ChainSummary summarize(std::span<const ChainRecord> chain, std::size_t burn_in,
                       const std::optional<TruthParams>& truth = std::nullopt);

/// Posterior means of the last cycle's conjugate updates.
struct PosteriorMeans {
  double mu = 0.0;
  double kappa = 0.0;
  double theta = 0.0;
};

struct CycleDraw {
  HestonParams params;
  double sigma2 = 0.0;
  PosteriorMeans means;
  bool degenerate = false;
  bool sigma2_clamped = false;
  std::size_t beta_retries = 0;
};

/// One Gibbs sweep given a variance path: eta -> mu, beta -> (kappa, theta),
/// sigma^2, (psi, omega) -> rho. Blocks that cannot be drawn keep the value
/// from `previous` and mark the result degenerate.
CycleDraw run_posterior_cycle(const ReturnSeries& returns, std::span<const double> vol,
                              const PriorConfig& priors, const HestonParams& previous,
                              double sigma2_previous, CounterStream& rng);

struct CalibrationOptions {
  std::size_t burn_in = 0;
  std::optional<TruthParams> truth;
  /// Fixed variance path (n + 1 points) used instead of the particle filter.
  std::optional<std::vector<double>> known_vol;
};

struct CalibrationDiagnostics {
  std::size_t filter_runs = 0;
  std::size_t failed_filter_runs = 0;  // previous path kept
  std::size_t degenerate_cycles = 0;
  std::size_t degenerate_weight_steps = 0;
  std::size_t clamped_returns = 0;
  std::size_t clamped_sigma2 = 0;
  std::size_t beta_retries = 0;
  PosteriorMeans last_posterior_means;
};

struct CalibrationReport {
  PointEstimates point_estimates;
  PointEstimates point_stddevs;
  std::vector<ChainRecord> chain;
  FilterOutput vol_estimate;
  PriorConfig config_echo;
  std::optional<std::map<std::string, double>> relative_errors;
  bool with_jumps = false;
  double dt = 0.0;
  std::uint64_t seed = 0;
  std::size_t burn_in = 0;
  CalibrationDiagnostics diagnostics;
};

/// Number of recorded cycles that rerun the filter: ceil(pf_fraction * n_s).
std::size_t filter_cycle_count(const PriorConfig& priors);

/// Runs cycles 0..n_s. Cycle 0 starts from the configured initial values and
/// is not recorded; cycles 1..n_s form the chain.
CalibrationReport calibrate(std::span<const double> prices, double dt, const PriorConfig& priors,
                            bool with_jumps, std::uint64_t seed,
                            const CalibrationOptions& options = {});

// --- experiments -----------------------------------------------------------------

struct ExperimentSetup {
  HestonParams truth{0.1, 1.0, 0.05, 0.01, -0.5};
  TimeGrid grid{1.0 / 252.0, 756};
  double s0 = 100.0;
  std::size_t n_particles = 1000;
};

/// Priors centred on `truth` with the same shapes as the defaults; the
/// theta prior mean is scaled by (1 + theta_shift).
PriorConfig priors_centered_on(const HestonParams& truth, double dt, double theta_shift);

struct PriorShiftRow {
  double shift = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  double theta_hat = 0.0;
  double theta_true = 0.0;
  double theta_prior = 0.0;
};

std::vector<PriorShiftRow> experiment_prior_shift(const ExperimentSetup& setup,
                                                  std::span<const double> shifts,
                                                  std::span<const std::size_t> cycle_counts,
                                                  std::span<const std::uint64_t> seeds);

struct PfBudgetRow {
  double fraction = 0.0;
  std::uint64_t seed = 0;
  std::uint32_t cycle = 0;
  double theta = 0.0;
  bool filter_rerun = false;
};

std::vector<PfBudgetRow> experiment_pf_budget(const ExperimentSetup& setup, double theta_shift,
                                              std::size_t n_samples,
                                              std::span<const double> fractions,
                                              std::span<const std::uint64_t> seeds);

struct SigmaDispersionRow {
  double sigma = 0.0;
  std::uint64_t seed = 0;
  double kappa_mean = 0.0;
  double kappa_sd = 0.0;
  double kappa_true = 0.0;
};

std::vector<SigmaDispersionRow> experiment_sigma_dispersion(const ExperimentSetup& setup,
                                                            std::span<const double> sigmas,
                                                            std::size_t n_samples,
                                                            std::span<const std::uint64_t> seeds);

}  // namespace hestoncal
