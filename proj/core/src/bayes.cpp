#include "hestoncal/bayes.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hestoncal/errors.hpp"

namespace hestoncal {

namespace {

void require_positive_vol(double v, std::size_t index) {
  if (!(v > 0.0)) {
    throw DomainError("variance path must be strictly positive; v[" + std::to_string(index) +
                      "] = " + std::to_string(v));
  }
}

double sum_of_products(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Mat2 symmetrized(const Mat2& m) {
  const double off = 0.5 * (m.a01 + m.a10);
  return {m.a00, off, off, m.a11};
}

}  // namespace

ReturnSeries ReturnSeries::from_prices(std::span<const double> prices, double dt) {
  if (prices.size() < 2) throw ParameterError("need at least two prices for a return");
  if (!(dt > 0.0)) throw ParameterError("dt must be positive");
  ReturnSeries out{{}, dt};
  out.values.reserve(prices.size() - 1);
  for (std::size_t k = 0; k < prices.size(); ++k) {
    if (!(prices[k] > 0.0)) {
      throw DomainError("price " + std::to_string(k) + " is not positive");
    }
    if (k > 0) out.values.push_back(prices[k] / prices[k - 1]);
  }
  return out;
}

Mat2 DesignMatrix::gram() const {
  const double s11 = sum_of_products(x1, x1);
  const double s12 = sum_of_products(x1, x2);
  const double s22 = sum_of_products(x2, x2);
  return {s11, s12, s12, s22};
}

Vec2 DesignMatrix::cross() const { return {sum_of_products(x1, y), sum_of_products(x2, y)}; }

DesignVector build_eta_design(const ReturnSeries& returns, std::span<const double> vol) {
  const std::size_t n = returns.size();
  if (n == 0) throw ParameterError("empty return series");
  if (vol.size() < n) throw ParameterError("variance path shorter than the return series");
  const double sqrt_dt = std::sqrt(returns.dt);
  DesignVector d;
  d.y.resize(n);
  d.x.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    require_positive_vol(vol[k], k);
    const double scale = 1.0 / (std::sqrt(vol[k]) * sqrt_dt);
    d.x[k] = scale;
    d.y[k] = returns.values[k] * scale;
  }
  return d;
}

ScalarPosterior posterior_scalar_normal(std::span<const double> y, std::span<const double> x,
                                        double mu0, double tau0) {
  if (y.size() != x.size()) throw ParameterError("regression vectors differ in length");
  if (!(tau0 >= 0.0)) throw ParameterError("prior precision must be >= 0");
  const double xx = sum_of_products(x, x);
  if (!(xx > 0.0)) throw SingularDesignError("x'x = 0 in scalar regression");
  const double xy = sum_of_products(x, y);
  // x'x * eta_hat == x'y
  const double tau = xx + tau0;
  return {(tau0 * mu0 + xy) / tau, tau};
}

double sample_eta(const ScalarPosterior& post, CounterStream& rng) {
  if (!(post.precision > 0.0)) throw ParameterError("posterior precision must be positive");
  const double z = rng.normal();
  if (std::isinf(post.precision)) return post.mean;
  return post.mean + z / std::sqrt(post.precision);
}

double eta_to_mu(double eta, double dt) { return (eta - 1.0) / dt; }
double mu_to_eta(double mu, double dt) { return mu * dt + 1.0; }

DesignMatrix build_beta_design(std::span<const double> vol, double dt) {
  if (vol.size() < 3) throw ParameterError("variance regression needs at least 3 points");
  if (!(dt > 0.0)) throw ParameterError("dt must be positive");
  const std::size_t n = vol.size() - 1;
  const double sqrt_dt = std::sqrt(dt);
  DesignMatrix d;
  d.y.resize(n - 1);
  d.x1.resize(n - 1);
  d.x2.resize(n - 1);
  for (std::size_t k = 2; k <= n; ++k) {
    const double prev = vol[k - 1];
    require_positive_vol(prev, k - 1);
    require_positive_vol(vol[k], k);
    const double root = std::sqrt(prev);
    d.y[k - 2] = vol[k] / (sqrt_dt * root);
    d.x1[k - 2] = 1.0 / (sqrt_dt * root);
    d.x2[k - 2] = root / sqrt_dt;
  }
  return d;
}

BetaPosterior posterior_beta(const DesignMatrix& design, const Vec2& mu0, const Mat2& lambda0) {
  const Mat2 gram = design.gram();
  const Vec2 cross = design.cross();
  const Mat2 precision = gram + lambda0;
  const auto cov = inverse(precision);
  if (!cov) throw SingularDesignError("posterior precision of beta is singular");

  BetaPosterior post;
  post.precision = precision;
  if (const auto gram_inv = inverse(gram)) post.beta_hat = *gram_inv * cross;
  // X'X beta_hat == X'y; using X'y directly also covers the rank-deficient case.
  post.mean = *cov * (lambda0 * mu0 + cross);
  return post;
}

Vec2 sample_beta(const BetaPosterior& post, double sigma2_prev, CounterStream& rng) {
  if (!(sigma2_prev > 0.0)) throw ParameterError("sigma^2 from the previous cycle must be > 0");
  const auto cov = inverse(post.precision);
  if (!cov) throw NumericError("beta posterior precision is not invertible");
  const auto chol = cholesky(symmetrized(sigma2_prev * *cov));
  if (!chol) throw NumericError("beta posterior covariance is not positive definite");
  const Vec2 z{rng.normal(), rng.normal()};
  return post.mean + *chol * z;
}

double kappa_floor(double dt) { return 1e-8 / dt; }

KappaTheta beta_to_kappa_theta(const Vec2& beta, double dt) {
  KappaTheta out;
  out.kappa = (1.0 - beta[1]) / dt;
  if (!(out.kappa >= kappa_floor(dt))) {
    out.degenerate = true;
    out.theta = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  out.theta = beta[0] / (out.kappa * dt);
  out.degenerate = !(out.theta > 0.0);
  return out;
}

Vec2 kappa_theta_to_beta(double kappa, double theta, double dt) {
  return {kappa * theta * dt, 1.0 - kappa * dt};
}

std::pair<double, double> sigma2_posterior(std::span<const double> y, const Vec2& mu0,
                                           const Mat2& lambda0, const Vec2& mu,
                                           const Mat2& lambda, double a0, double b0,
                                           std::size_t n_obs) {
  const double yy = sum_of_products(y, y);
  const double a = a0 + 0.5 * static_cast<double>(n_obs);
  const double b = b0 + 0.5 * (yy + dot(mu0, lambda0 * mu0) - dot(mu, lambda * mu));
  return {a, b};
}

Sigma2Draw sample_sigma2(std::span<const double> y, const Vec2& mu0, const Mat2& lambda0,
                         const Vec2& mu, const Mat2& lambda, double a0, double b0,
                         std::size_t n_obs, CounterStream& rng) {
  if (!(a0 > 0.0) || !(b0 > 0.0)) throw ParameterError("sigma^2 prior needs a0, b0 > 0");
  auto [a, b] = sigma2_posterior(y, mu0, lambda0, mu, lambda, a0, b0, n_obs);
  Sigma2Draw draw;
  if (!(b > 0.0)) {
    b = b0 * 1e-6;
    draw.clamped = true;
  }
  draw.value = rng.inverse_gamma(a, b);
  return draw;
}

Residuals compute_residuals(const ReturnSeries& returns, std::span<const double> vol, double mu,
                            double kappa, double theta) {
  const std::size_t n = returns.size();
  if (vol.size() != n + 1) throw ParameterError("variance path must have n + 1 points");
  const double dt = returns.dt;
  const double sqrt_dt = std::sqrt(dt);
  Residuals r;
  r.e1.resize(n);
  r.e2.resize(n);
  for (std::size_t k = 1; k <= n; ++k) {
    const double prev = vol[k - 1];
    require_positive_vol(prev, k - 1);
    const double scale = 1.0 / (sqrt_dt * std::sqrt(prev));
    r.e1[k - 1] = (returns.values[k - 1] - mu * dt - 1.0) * scale;
    r.e2[k - 1] = (vol[k] - prev - kappa * (theta - prev) * dt) * scale;
  }
  return r;
}

PsiOmegaPosterior posterior_psi_omega(std::span<const double> e1, std::span<const double> e2,
                                      const PriorConfig& priors) {
  if (e1.size() != e2.size()) throw ParameterError("residual vectors differ in length");
  const double a11 = sum_of_products(e1, e1);
  const double a12 = sum_of_products(e1, e2);
  const double a22 = sum_of_products(e2, e2);
  if (!(a11 > 0.0)) throw SingularDesignError("price residuals are identically zero");

  PsiOmegaPosterior post;
  post.tau_psi = a11 + priors.tau0_psi;
  post.mu_psi = (a12 + priors.mu0_psi * priors.tau0_psi) / post.tau_psi;
  post.a_omega = priors.a0_omega + 0.5 * static_cast<double>(e1.size());
  // Cauchy-Schwarz keeps this >= 0 up to rounding.
  const double unexplained = std::max(a22 - a12 * a12 / a11, 0.0);
  post.b_omega = priors.b0_omega + 0.5 * unexplained;
  return post;
}

double psi_omega_to_rho(double psi, double omega) { return psi / std::sqrt(psi * psi + omega); }

RhoDraw sample_rho(const PsiOmegaPosterior& post, CounterStream& rng) {
  if (!(post.tau_psi > 0.0)) throw ParameterError("psi posterior precision must be positive");
  RhoDraw d;
  d.omega = rng.inverse_gamma(post.a_omega, post.b_omega);
  d.psi = post.mu_psi + std::sqrt(d.omega / post.tau_psi) * rng.normal();
  d.rho = psi_omega_to_rho(d.psi, d.omega);
  return d;
}

}  // namespace hestoncal
