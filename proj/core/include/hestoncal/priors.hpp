#pragma once

#include <cstddef>
#include <optional>

#include "hestoncal/linalg2.hpp"
#include "hestoncal/model.hpp"

namespace hestoncal {

/// Prior metaparameters and run controls for a calibration. Defaults are the
/// exemplary-estimation priors (eta sd 0.001, Lambda0 = diag(10, 5), ...).
struct PriorConfig {
  // eta = mu dt + 1 ~ N(mu0_eta, 1 / tau0_eta)
  double mu0_eta = 1.00125;
  double tau0_eta = 1.0 / (0.001 * 0.001);
  // beta = (kappa theta dt, 1 - kappa dt) ~ N(mu0_beta, lambda0_beta^-1)
  Vec2 mu0_beta{35e-6, 0.988};
  Mat2 lambda0_beta{10.0, 0.0, 0.0, 5.0};
  // sigma^2 ~ IG(a0_sigma, b0_sigma)
  double a0_sigma = 149.0;
  double b0_sigma = 0.025;
  // psi = sigma rho ~ N(mu0_psi, 1 / tau0_psi)
  double mu0_psi = -0.45;
  double tau0_psi = 1.0 / (0.3 * 0.3);
  // omega = sigma^2 (1 - rho^2) ~ IG(a0_omega, b0_omega)
  double a0_omega = 1.03;
  double b0_omega = 0.05;
  // jump particles
  double lambda_th = 0.15;
  double mu0_j = -0.96;
  double sigma0_j = 0.3;

  std::size_t n_samples = 500;
  std::size_t n_particles = 1000;
  double pf_fraction = 1.0;

  // Cycle-0 parameter values; unset entries fall back to prior means.
  std::optional<double> mu_init;
  std::optional<double> kappa_init;
  std::optional<double> theta_init;
  std::optional<double> sigma_init;
  std::optional<double> rho_init;

  /// Throws ConfigError on any violated invariant.
  void validate() const;

  /// Parameters implied by the prior means at step dt; the default cycle-0
  /// starting point. rho uses E[psi] / sqrt(E[psi]^2 + E[omega]).
  HestonParams prior_means(double dt) const;
  /// Configured initial values with prior means filling the gaps.
  HestonParams initial_params(double dt) const;
};

}  // namespace hestoncal
