#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hestoncal/linalg2.hpp"
#include "hestoncal/priors.hpp"
#include "hestoncal/rng.hpp"

// Conjugate posteriors for the static parameters given a variance path.
//
// Indexing: returns R has n entries, R[k-1] = S(k dt) / S((k-1) dt); the
// variance path has n + 1 entries, vol[k] = v(k dt).

namespace hestoncal {

struct ReturnSeries {
  std::vector<double> values;
  double dt = 0.0;

  static ReturnSeries from_prices(std::span<const double> prices, double dt);
  std::size_t size() const { return values.size(); }
};

struct DesignVector {
  std::vector<double> y;
  std::vector<double> x;
};

struct DesignMatrix {
  std::vector<double> y;
  std::vector<double> x1;
  std::vector<double> x2;

  std::size_t rows() const { return y.size(); }
  Mat2 gram() const;   // X'X
  Vec2 cross() const;  // X'y
};

struct ScalarPosterior {
  double mean = 0.0;
  double precision = 0.0;
};

struct BetaPosterior {
  Vec2 mean{};
  Mat2 precision{};
  std::optional<Vec2> beta_hat;  // empty when X'X is singular
};

struct KappaTheta {
  double kappa = 0.0;
  double theta = 0.0;
  bool degenerate = false;
};

struct Sigma2Draw {
  double value = 0.0;
  bool clamped = false;  // b^sigma came out non-positive and was clamped
};

struct PsiOmegaPosterior {
  double mu_psi = 0.0;
  double tau_psi = 0.0;
  double a_omega = 0.0;
  double b_omega = 0.0;
};

struct RhoDraw {
  double rho = 0.0;
  double psi = 0.0;
  double omega = 0.0;
};

struct Residuals {
  std::vector<double> e1;  // price equation
  std::vector<double> e2;  // variance equation
};

// --- drift ------------------------------------------------------------------

/// y[k] = R / (sqrt(v_prev) sqrt(dt)), x[k] = 1 / (sqrt(v_prev) sqrt(dt)).
DesignVector build_eta_design(const ReturnSeries& returns, std::span<const double> vol);

/// Normal posterior for the slope of a no-intercept regression with unit noise.
ScalarPosterior posterior_scalar_normal(std::span<const double> y, std::span<const double> x,
                                        double mu0, double tau0);

double sample_eta(const ScalarPosterior& post, CounterStream& rng);

double eta_to_mu(double eta, double dt);
double mu_to_eta(double mu, double dt);

// --- kappa, theta, sigma -----------------------------------------------------

/// Rows k = 2..n of the variance regression y = X beta + sigma eps.
DesignMatrix build_beta_design(std::span<const double> vol, double dt);

BetaPosterior posterior_beta(const DesignMatrix& design, const Vec2& mu0, const Mat2& lambda0);

/// beta ~ N(mean, sigma2_prev * precision^-1).
Vec2 sample_beta(const BetaPosterior& post, double sigma2_prev, CounterStream& rng);

/// Smallest |kappa| accepted as a draw, 1e-8 / dt.
double kappa_floor(double dt);
KappaTheta beta_to_kappa_theta(const Vec2& beta, double dt);
Vec2 kappa_theta_to_beta(double kappa, double theta, double dt);

/// a = a0 + n_obs / 2, b = b0 + (y'y + mu0' L0 mu0 - mu' L mu) / 2.
Sigma2Draw sample_sigma2(std::span<const double> y, const Vec2& mu0, const Mat2& lambda0,
                         const Vec2& mu, const Mat2& lambda, double a0, double b0,
                         std::size_t n_obs, CounterStream& rng);

/// The (a, b) pair used by sample_sigma2, before clamping.
std::pair<double, double> sigma2_posterior(std::span<const double> y, const Vec2& mu0,
                                           const Mat2& lambda0, const Vec2& mu,
                                           const Mat2& lambda, double a0, double b0,
                                           std::size_t n_obs);

// --- rho ----------------------------------------------------------------------

Residuals compute_residuals(const ReturnSeries& returns, std::span<const double> vol,
                            double mu, double kappa, double theta);

PsiOmegaPosterior posterior_psi_omega(std::span<const double> e1, std::span<const double> e2,
                                      const PriorConfig& priors);

/// omega ~ IG, psi | omega ~ N(mu_psi, sqrt(omega / tau_psi)), rho = psi / sqrt(psi^2 + omega).
RhoDraw sample_rho(const PsiOmegaPosterior& post, CounterStream& rng);

double psi_omega_to_rho(double psi, double omega);

}  // namespace hestoncal
