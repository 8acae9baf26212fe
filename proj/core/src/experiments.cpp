#include <cmath>

#include "hestoncal/calibrator.hpp"
#include "hestoncal/errors.hpp"
#include "hestoncal/simulation.hpp"

namespace hestoncal {

namespace {

std::vector<double> simulate_prices(const ExperimentSetup& setup, const HestonParams& truth,
                                    std::uint64_t seed) {
  return simulate_heston(truth, setup.grid, setup.s0, truth.theta, seed).prices;
}

}  // namespace

PriorConfig priors_centered_on(const HestonParams& truth, double dt, double theta_shift) {
  truth.validate();
  if (!(1.0 + theta_shift > 0.0)) throw ParameterError("theta shift must keep theta positive");
  PriorConfig p;
  p.mu0_eta = mu_to_eta(truth.mu, dt);
  p.mu0_beta = kappa_theta_to_beta(truth.kappa, truth.theta * (1.0 + theta_shift), dt);
  const double sigma2 = truth.sigma * truth.sigma;
  p.b0_sigma = sigma2 * (p.a0_sigma - 1.0);
  p.mu0_psi = truth.sigma * truth.rho;
  p.b0_omega = sigma2 * (1.0 - truth.rho * truth.rho) * (p.a0_omega - 1.0);
  return p;
}

std::vector<PriorShiftRow> experiment_prior_shift(const ExperimentSetup& setup,
                                                  std::span<const double> shifts,
                                                  std::span<const std::size_t> cycle_counts,
                                                  std::span<const std::uint64_t> seeds) {
  setup.truth.validate();
  std::vector<PriorShiftRow> rows;
  rows.reserve(shifts.size() * cycle_counts.size() * seeds.size());
  for (const double shift : shifts) {
    PriorConfig priors = priors_centered_on(setup.truth, setup.grid.dt(), shift);
    priors.n_particles = setup.n_particles;
    for (const std::size_t n_s : cycle_counts) {
      priors.n_samples = n_s;
      for (const std::uint64_t seed : seeds) {
        const auto prices = simulate_prices(setup, setup.truth, seed);
        const auto report = calibrate(prices, setup.grid.dt(), priors, false, seed);
        rows.push_back({shift, n_s, seed, report.point_estimates.theta, setup.truth.theta,
                        setup.truth.theta * (1.0 + shift)});
      }
    }
  }
  return rows;
}

std::vector<PfBudgetRow> experiment_pf_budget(const ExperimentSetup& setup, double theta_shift,
                                              std::size_t n_samples,
                                              std::span<const double> fractions,
                                              std::span<const std::uint64_t> seeds) {
  setup.truth.validate();
  PriorConfig priors = priors_centered_on(setup.truth, setup.grid.dt(), theta_shift);
  priors.n_particles = setup.n_particles;
  priors.n_samples = n_samples;
  std::vector<PfBudgetRow> rows;
  rows.reserve(fractions.size() * seeds.size() * n_samples);
  for (const double fraction : fractions) {
    priors.pf_fraction = fraction;
    for (const std::uint64_t seed : seeds) {
      const auto prices = simulate_prices(setup, setup.truth, seed);
      const auto report = calibrate(prices, setup.grid.dt(), priors, false, seed);
      for (const auto& rec : report.chain) {
        rows.push_back({fraction, seed, rec.cycle, rec.theta, rec.filter_rerun});
      }
    }
  }
  return rows;
}

std::vector<SigmaDispersionRow> experiment_sigma_dispersion(const ExperimentSetup& setup,
                                                            std::span<const double> sigmas,
                                                            std::size_t n_samples,
                                                            std::span<const std::uint64_t> seeds) {
  std::vector<SigmaDispersionRow> rows;
  rows.reserve(sigmas.size() * seeds.size());
  for (const double sigma : sigmas) {
    HestonParams truth = setup.truth;
    truth.sigma = sigma;
    PriorConfig priors = priors_centered_on(truth, setup.grid.dt(), 0.0);
    priors.n_particles = setup.n_particles;
    priors.n_samples = n_samples;
    for (const std::uint64_t seed : seeds) {
      const auto prices = simulate_prices(setup, truth, seed);
      const auto report = calibrate(prices, setup.grid.dt(), priors, false, seed);
      rows.push_back({sigma, seed, report.point_estimates.kappa, report.point_stddevs.kappa,
                      truth.kappa});
    }
  }
  return rows;
}

}  // namespace hestoncal
