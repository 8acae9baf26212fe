#include "hestoncal/priors.hpp"

#include <cmath>
#include <string>

#include "hestoncal/errors.hpp"

namespace hestoncal {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid prior configuration: " + what);
}

// Mean of IG(a, b) when it exists, otherwise its mode.
double inverse_gamma_center(double a, double b) { return a > 1.0 ? b / (a - 1.0) : b / (a + 1.0); }

}  // namespace

void PriorConfig::validate() const {
  require(std::isfinite(mu0_eta), "mu0_eta must be finite");
  require(tau0_eta >= 0.0, "tau0_eta must be >= 0");
  require(is_symmetric(lambda0_beta), "lambda0_beta must be symmetric");
  require(is_positive_semidefinite(lambda0_beta), "lambda0_beta must be positive semidefinite");
  require(a0_sigma > 0.0 && b0_sigma > 0.0, "a0_sigma and b0_sigma must be > 0");
  require(tau0_psi >= 0.0, "tau0_psi must be >= 0");
  require(a0_omega > 0.0 && b0_omega > 0.0, "a0_omega and b0_omega must be > 0");
  require(lambda_th >= 0.0 && lambda_th < 1.0, "lambda_th must lie in [0, 1)");
  require(sigma0_j >= 0.0, "sigma0_j must be >= 0");
  require(n_samples >= 1, "n_samples must be >= 1");
  require(n_particles >= 3, "n_particles must be >= 3 for the continuous resampler");
  require(pf_fraction > 0.0 && pf_fraction <= 1.0, "pf_fraction must lie in (0, 1]");
  if (kappa_init) require(*kappa_init > 0.0, "kappa_init must be > 0");
  if (theta_init) require(*theta_init > 0.0, "theta_init must be > 0");
  if (sigma_init) require(*sigma_init > 0.0, "sigma_init must be > 0");
  if (rho_init) require(std::abs(*rho_init) < 1.0, "rho_init must lie in (-1, 1)");
}

HestonParams PriorConfig::prior_means(double dt) const {
  HestonParams p;
  p.mu = (mu0_eta - 1.0) / dt;
  p.kappa = (1.0 - mu0_beta[1]) / dt;
  p.theta = p.kappa != 0.0 ? mu0_beta[0] / (p.kappa * dt) : 0.0;
  p.sigma = std::sqrt(inverse_gamma_center(a0_sigma, b0_sigma));
  const double omega = inverse_gamma_center(a0_omega, b0_omega);
  p.rho = mu0_psi / std::sqrt(mu0_psi * mu0_psi + omega);
  return p;
}

HestonParams PriorConfig::initial_params(double dt) const {
  HestonParams p = prior_means(dt);
  if (mu_init) p.mu = *mu_init;
  if (kappa_init) p.kappa = *kappa_init;
  if (theta_init) p.theta = *theta_init;
  if (sigma_init) p.sigma = *sigma_init;
  if (rho_init) p.rho = *rho_init;
  if (!(p.kappa > 0.0) || !(p.theta > 0.0)) {
    throw ConfigError(
        "prior means for beta imply a non-positive kappa or theta; set kappa_init and "
        "theta_init explicitly");
  }
  return p;
}

}  // namespace hestoncal
