#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "dense_oracle.hpp"
#include "hestoncal/bayes.hpp"
#include "hestoncal/errors.hpp"
#include "hestoncal/model.hpp"
#include "hestoncal/priors.hpp"
#include "hestoncal/rng.hpp"
#include "hestoncal/simulation.hpp"
#include "stats.hpp"

using namespace hestoncal;

namespace {

constexpr double kDaily = 1.0 / 252.0;

CounterStream draw_stream(std::uint64_t seed = 1) {
  return RandomSource(seed).stream({0, Phase::PosteriorDraw, 0});
}

oracle::Matrix to_dense(const Mat2& m) { return {{m.a00, m.a01}, {m.a10, m.a11}}; }

oracle::Matrix design_dense(const DesignMatrix& d) {
  oracle::Matrix x(d.rows(), oracle::Vector(2));
  for (std::size_t i = 0; i < d.rows(); ++i) x[i] = {d.x1[i], d.x2[i]};
  return x;
}

DesignMatrix random_design(std::mt19937_64& gen, std::size_t rows) {
  std::normal_distribution<double> n01;
  DesignMatrix d;
  for (std::size_t i = 0; i < rows; ++i) {
    d.x1.push_back(n01(gen));
    d.x2.push_back(2.0 + n01(gen));
    d.y.push_back(0.3 * d.x1.back() - 0.7 * d.x2.back() + 0.1 * n01(gen));
  }
  return d;
}

struct NoiselessPath {
  std::vector<double> prices;
  std::vector<double> vol;
};

// sigma = 0 and zero price noise: every step is exactly the model drift.
NoiselessPath noiseless_path(const HestonParams& p, double dt, std::size_t n, double v0) {
  NoiselessPath path{{100.0}, {v0}};
  for (std::size_t k = 1; k <= n; ++k) {
    path.prices.push_back(*step_price(path.prices.back(), path.vol.back(), p, dt, 0.0));
    path.vol.push_back(step_volatility(path.vol.back(), p, dt, 0.0));
  }
  return path;
}

}  // namespace

TEST(ReturnSeries, RatiosOfConsecutivePrices) {
  const std::vector<double> prices{100.0, 101.0, 99.99};
  const auto r = ReturnSeries::from_prices(prices, kDaily);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_DOUBLE_EQ(r.values[0], 1.01);
  EXPECT_DOUBLE_EQ(r.values[1], 0.99);
  EXPECT_THROW(ReturnSeries::from_prices(std::vector<double>{1.0, 0.0}, kDaily), DomainError);
}

TEST(EtaDesign, UnitScaling) {
  const ReturnSeries r{{1.01, 0.98, 1.002}, 1.0};
  const std::vector<double> vol(4, 1.0);
  const auto d = build_eta_design(r, vol);
  EXPECT_EQ(d.y, r.values);
  EXPECT_EQ(d.x, std::vector<double>(3, 1.0));
}

TEST(EtaDesign, DirectEvaluation) {
  const ReturnSeries r{{1.01}, kDaily};
  const std::vector<double> vol{0.04, 0.04};
  const auto d = build_eta_design(r, vol);
  ASSERT_EQ(d.y.size(), 1u);
  EXPECT_NEAR(d.y[0], 80.166, 5e-4);
  EXPECT_NEAR(d.x[0], 79.373, 5e-4);
  EXPECT_NEAR(d.y[0], 1.01 / (0.2 * std::sqrt(kDaily)), 1e-12);
}

TEST(EtaDesign, RejectsNonPositiveVariance) {
  const ReturnSeries r{{1.0, 1.0}, kDaily};
  EXPECT_THROW(build_eta_design(r, std::vector<double>{0.04, 0.0, 0.04}), DomainError);
}

TEST(ScalarPosterior, FlatPriorIsOls) {
  const auto p = posterior_scalar_normal(std::vector<double>{2, 2}, std::vector<double>{1, 1},
                                         0.0, 0.0);
  EXPECT_DOUBLE_EQ(p.mean, 2.0);
  EXPECT_DOUBLE_EQ(p.precision, 2.0);
}

TEST(ScalarPosterior, DirectEvaluation) {
  const auto p = posterior_scalar_normal(std::vector<double>{2, 2}, std::vector<double>{1, 1},
                                         1.0, 2.0);
  EXPECT_DOUBLE_EQ(p.precision, 4.0);
  EXPECT_DOUBLE_EQ(p.mean, 1.5);
}

TEST(ScalarPosterior, PriorDominance) {
  const auto p = posterior_scalar_normal(std::vector<double>{0}, std::vector<double>{1}, 7.0, 1e12);
  EXPECT_NEAR(p.mean, 7.0, 1e-6);
}

TEST(ScalarPosterior, SingularDesign) {
  EXPECT_THROW(posterior_scalar_normal(std::vector<double>{1, 2}, std::vector<double>{0, 0}, 0.0,
                                       1.0),
               SingularDesignError);
}

TEST(SampleEta, InfinitePrecisionReturnsMean) {
  auto rng = draw_stream();
  EXPECT_EQ(sample_eta({1.0004, std::numeric_limits<double>::infinity()}, rng), 1.0004);
}

TEST(SampleEta, StandardDeviation) {
  auto rng = draw_stream(3);
  std::vector<double> x(100'000);
  for (auto& v : x) v = sample_eta({1.0004, 1e4}, rng);
  EXPECT_NEAR(std::sqrt(stats::variance(x)), 0.01, 5e-4);
  EXPECT_NEAR(stats::mean(x), 1.0004, 1e-4);
}

TEST(SampleEta, ReproducibleForSeed) {
  auto a = draw_stream(4);
  auto b = draw_stream(4);
  EXPECT_EQ(sample_eta({1.0, 100.0}, a), sample_eta({1.0, 100.0}, b));
}

TEST(EtaTransform, Inversion) {
  EXPECT_EQ(eta_to_mu(1.0, kDaily), 0.0);
  EXPECT_NEAR(eta_to_mu(1.000396825, kDaily), 0.1, 1e-6);
  EXPECT_NEAR(eta_to_mu(1.0 + 0.1 / 252.0, kDaily), 0.1, 1e-9);
  for (double mu : {-1.0, 0.0, 0.5}) EXPECT_NEAR(eta_to_mu(mu_to_eta(mu, kDaily), kDaily), mu, 1e-12);
}

TEST(BetaDesign, ConstantPath) {
  const double theta = 0.09;
  const auto d = build_beta_design(std::vector<double>(5, theta), 1.0);
  ASSERT_EQ(d.rows(), 3u);
  for (std::size_t i = 0; i < d.rows(); ++i) {
    EXPECT_NEAR(d.y[i], std::sqrt(theta), 1e-15);
    EXPECT_NEAR(d.x1[i], 1.0 / std::sqrt(theta), 1e-15);
    EXPECT_NEAR(d.x2[i], std::sqrt(theta), 1e-15);
  }
}

TEST(BetaDesign, DirectEvaluation) {
  const auto d = build_beta_design(std::vector<double>{0.04, 0.05, 0.045}, 0.01);
  ASSERT_EQ(d.rows(), 1u);
  EXPECT_NEAR(d.y[0], 2.0125, 5e-5);
  EXPECT_NEAR(d.x1[0], 44.7214, 5e-5);
  EXPECT_NEAR(d.x2[0], 2.23607, 5e-6);
}

TEST(BetaDesign, SingleRowRegularizedByPrior) {
  const auto d = build_beta_design(std::vector<double>{0.04, 0.05, 0.045}, 0.01);
  const auto post = posterior_beta(d, {0.0, 1.0}, Mat2::identity());
  EXPECT_FALSE(post.beta_hat.has_value());
  EXPECT_TRUE(std::isfinite(post.mean[0]) && std::isfinite(post.mean[1]));
}

TEST(BetaDesign, RejectsShortOrNonPositivePaths) {
  EXPECT_THROW(build_beta_design(std::vector<double>{0.04, 0.05}, 0.01), ParameterError);
  EXPECT_THROW(build_beta_design(std::vector<double>{0.04, -0.05, 0.04}, 0.01), DomainError);
}

TEST(BetaPosterior, FlatPriorIsOls) {
  std::mt19937_64 gen(5);
  const auto d = random_design(gen, 50);
  const auto post = posterior_beta(d, {0.0, 0.0}, Mat2{});
  ASSERT_TRUE(post.beta_hat.has_value());
  const auto x = design_dense(d);
  const auto xt = oracle::transpose(x);
  const auto ols = oracle::multiply(oracle::inverse(oracle::multiply(xt, x)), oracle::multiply(xt, d.y));
  for (int i = 0; i < 2; ++i) {
    EXPECT_LE(oracle::relative_difference(post.mean[i], ols[i]), 1e-10);
    EXPECT_LE(oracle::relative_difference((*post.beta_hat)[i], ols[i]), 1e-10);
  }
}

TEST(BetaPosterior, DirectEvaluation) {
  const DesignMatrix d{{1.0, 2.0}, {1.0, 0.0}, {0.0, 1.0}};
  const auto post = posterior_beta(d, {0.0, 0.0}, Mat2::identity());
  EXPECT_EQ(post.precision, Mat2::diagonal(2.0, 2.0));
  EXPECT_DOUBLE_EQ(post.mean[0], 0.5);
  EXPECT_DOUBLE_EQ(post.mean[1], 1.0);
}

TEST(BetaPosterior, PriorDominance) {
  std::mt19937_64 gen(6);
  const auto post = posterior_beta(random_design(gen, 20), {0.3, -2.0}, 1e12 * Mat2::identity());
  EXPECT_NEAR(post.mean[0], 0.3, 1e-6);
  EXPECT_NEAR(post.mean[1], -2.0, 1e-6);
}

TEST(BetaPosterior, SingularPrecision) {
  const DesignMatrix d{{1.0}, {1.0}, {0.0}};
  EXPECT_THROW(posterior_beta(d, {0.0, 0.0}, Mat2{}), SingularDesignError);
}

TEST(SampleBeta, VanishingVarianceReturnsMean) {
  BetaPosterior post;
  post.mean = {0.25, 0.99};
  post.precision = Mat2::diagonal(3.0, 5.0);
  auto rng = draw_stream();
  const auto b = sample_beta(post, 1e-300, rng);
  EXPECT_DOUBLE_EQ(b[0], 0.25);
  EXPECT_DOUBLE_EQ(b[1], 0.99);
}

TEST(SampleBeta, CovarianceScaling) {
  BetaPosterior post;
  post.precision = Mat2::identity();
  auto rng = draw_stream(8);
  std::vector<double> b0(100'000), b1(100'000);
  for (std::size_t i = 0; i < b0.size(); ++i) {
    const auto b = sample_beta(post, 4.0, rng);
    b0[i] = b[0];
    b1[i] = b[1];
  }
  EXPECT_NEAR(std::sqrt(stats::variance(b0)), 2.0, 0.02);
  EXPECT_NEAR(std::sqrt(stats::variance(b1)), 2.0, 0.02);
}

TEST(SampleBeta, MatchesCholeskyOracle) {
  BetaPosterior post;
  post.mean = {0.1, 0.9};
  post.precision = {4.0, 1.5, 1.5, 3.0};
  const double sigma2 = 0.7;
  auto rng = draw_stream(9);
  const auto draw = sample_beta(post, sigma2, rng);

  auto replay = draw_stream(9);
  const oracle::Vector z{replay.normal(), replay.normal()};
  auto cov = oracle::inverse(to_dense(post.precision));
  for (auto& row : cov)
    for (auto& v : row) v *= sigma2;
  const auto expected = oracle::add({0.1, 0.9}, oracle::multiply(oracle::cholesky(cov), z));
  EXPECT_LE(oracle::relative_difference(draw[0], expected[0]), 1e-10);
  EXPECT_LE(oracle::relative_difference(draw[1], expected[1]), 1e-10);
}

TEST(SampleBeta, ReproducibleForSeed) {
  BetaPosterior post;
  post.precision = Mat2::identity();
  auto a = draw_stream(10);
  auto b = draw_stream(10);
  EXPECT_EQ(sample_beta(post, 1.0, a), sample_beta(post, 1.0, b));
}

TEST(KappaTheta, Inversion) {
  const auto kt = beta_to_kappa_theta({0.0005, 0.99}, 0.01);
  EXPECT_FALSE(kt.degenerate);
  EXPECT_NEAR(kt.kappa, 1.0, 1e-12);
  EXPECT_NEAR(kt.theta, 0.05, 1e-12);
}

TEST(KappaTheta, ZeroKappaIsDegenerate) {
  EXPECT_TRUE(beta_to_kappa_theta({0.001, 1.0}, 0.01).degenerate);
  EXPECT_TRUE(beta_to_kappa_theta({0.001, 1.02}, 0.01).degenerate);
  EXPECT_TRUE(beta_to_kappa_theta({-0.001, 0.99}, 0.01).degenerate);
}

TEST(KappaTheta, Roundtrip) {
  const auto kt = beta_to_kappa_theta(kappa_theta_to_beta(2.0, 0.03, kDaily), kDaily);
  EXPECT_NEAR(kt.kappa, 2.0, 1e-10);
  EXPECT_NEAR(kt.theta, 0.03, 1e-12);
}

TEST(Sigma2, NoDataReturnsPrior) {
  const auto [a, b] = sigma2_posterior({}, {0.0, 0.0}, Mat2{}, {0.0, 0.0}, Mat2{}, 149.0, 0.025, 0);
  EXPECT_EQ(a, 149.0);
  EXPECT_EQ(b, 0.025);
}

TEST(Sigma2, ExemplaryPriorScale) {
  const PriorConfig priors;
  const double prior_mean = priors.b0_sigma / (priors.a0_sigma - 1.0);
  EXPECT_NEAR(prior_mean, 1.689e-4, 1e-7);
  EXPECT_NEAR(std::sqrt(prior_mean), 0.013, 1e-3);
}

TEST(Sigma2, PerfectFit) {
  const std::vector<double> y{1.0};
  const Mat2 lambda{1.0, 0.0, 0.0, 0.0};
  const auto [a, b] = sigma2_posterior(y, {0.0, 0.0}, Mat2{}, {1.0, 0.0}, lambda, 2.0, 0.3, 1);
  EXPECT_DOUBLE_EQ(a, 2.5);
  EXPECT_DOUBLE_EQ(b, 0.3);
}

TEST(Sigma2, NegativeScaleIsClamped) {
  auto rng = draw_stream();
  const std::vector<double> y{0.1};
  const auto d = sample_sigma2(y, {0.0, 0.0}, Mat2{}, {10.0, 0.0}, Mat2::identity(), 2.0, 0.3, 1,
                               rng);
  EXPECT_TRUE(d.clamped);
  EXPECT_GT(d.value, 0.0);
}

TEST(Sigma2, DrawMatchesInverseGammaMean) {
  auto rng = draw_stream(12);
  const std::vector<double> y{1.0, 2.0};
  std::vector<double> x(200'000);
  for (auto& v : x) {
    v = sample_sigma2(y, {0.0, 0.0}, Mat2{}, {0.0, 0.0}, Mat2{}, 3.0, 1.0, 2, rng).value;
  }
  // a = 4, b = 1 + 5/2
  EXPECT_NEAR(stats::mean(x), 3.5 / 3.0, 0.01);
}

TEST(Residuals, NoiselessStepIsZero) {
  const HestonParams p{0.1, 1.0, 0.05, 0.0, 0.0};
  const auto path = noiseless_path(p, kDaily, 20, 0.03);
  const auto r = compute_residuals(ReturnSeries::from_prices(path.prices, kDaily), path.vol, p.mu,
                                   p.kappa, p.theta);
  for (double e : r.e1) EXPECT_NEAR(e, 0.0, 1e-10);
  for (double e : r.e2) EXPECT_NEAR(e, 0.0, 1e-12);
}

TEST(Residuals, DirectEvaluation) {
  const ReturnSeries r{{1.01}, kDaily};
  const auto res = compute_residuals(r, std::vector<double>{0.04, 0.04}, 0.1, 1.0, 0.05);
  const double expected = (1.01 - (1.0 + 0.1 * kDaily)) / (std::sqrt(kDaily) * 0.2);
  EXPECT_NEAR(res.e1[0], expected, 1e-14);
  EXPECT_NEAR(res.e1[0], 0.76226, 5e-5);
}

TEST(Residuals, ConstantVarianceHasZeroVarianceResidual) {
  const HestonParams p{0.1, 1.0, 0.05, 0.0, 0.0};
  const auto path = simulate_heston(p, TimeGrid(kDaily, 100), 100.0, 0.05, 3);
  const auto r = compute_residuals(ReturnSeries::from_prices(path.prices, kDaily), path.true_vol,
                                   p.mu, p.kappa, p.theta);
  for (double e : r.e2) EXPECT_EQ(e, 0.0);
}

TEST(PsiOmega, PerfectlyCorrelatedResiduals) {
  PriorConfig priors;
  priors.tau0_psi = 0.0;
  const std::vector<double> e1{0.3, -1.2, 0.8, 2.0};
  std::vector<double> e2;
  for (double e : e1) e2.push_back(-0.4 * e);
  const auto post = posterior_psi_omega(e1, e2, priors);
  EXPECT_NEAR(post.mu_psi, -0.4, 1e-14);
  EXPECT_NEAR(post.b_omega, priors.b0_omega, 1e-14);
}

TEST(PsiOmega, DirectEvaluation) {
  PriorConfig priors;
  priors.mu0_psi = 0.0;
  priors.tau0_psi = 0.0;
  const auto post =
      posterior_psi_omega(std::vector<double>{1, 1}, std::vector<double>{1, -1}, priors);
  EXPECT_DOUBLE_EQ(post.mu_psi, 0.0);
  EXPECT_DOUBLE_EQ(post.tau_psi, 2.0);
  EXPECT_DOUBLE_EQ(post.a_omega, priors.a0_omega + 1.0);
  EXPECT_DOUBLE_EQ(post.b_omega, priors.b0_omega + 1.0);
}

TEST(PsiOmega, PriorDominance) {
  PriorConfig priors;
  priors.mu0_psi = -0.45;
  priors.tau0_psi = 1e12;
  const auto post =
      posterior_psi_omega(std::vector<double>{1, 2}, std::vector<double>{3, -1}, priors);
  EXPECT_NEAR(post.mu_psi, -0.45, 1e-6);
}

TEST(PsiOmega, ZeroPriceResidualsAreSingular) {
  EXPECT_THROW(posterior_psi_omega(std::vector<double>{0, 0}, std::vector<double>{1, 2},
                                   PriorConfig{}),
               SingularDesignError);
}

TEST(Rho, Transform) {
  EXPECT_EQ(psi_omega_to_rho(0.0, 0.3), 0.0);
  EXPECT_NEAR(psi_omega_to_rho(-0.005, 7.5e-5), -0.5, 1e-14);
}

TEST(Rho, DrawsStayInsideUnitInterval) {
  auto rng = draw_stream(14);
  const PsiOmegaPosterior post{-0.5, 4.0, 1.5, 1e-6};
  for (int i = 0; i < 10'000; ++i) {
    const auto d = sample_rho(post, rng);
    ASSERT_GT(d.omega, 0.0);
    ASSERT_LT(std::abs(d.rho), 1.0);
    ASSERT_DOUBLE_EQ(d.rho, psi_omega_to_rho(d.psi, d.omega));
  }
}

TEST(Rho, DrawOrderOmegaThenPsi) {
  const PsiOmegaPosterior post{0.2, 9.0, 3.0, 2.0};
  auto rng = draw_stream(15);
  const auto d = sample_rho(post, rng);
  auto replay = draw_stream(15);
  const double omega = replay.inverse_gamma(3.0, 2.0);
  const double psi = 0.2 + std::sqrt(omega / 9.0) * replay.normal();
  EXPECT_DOUBLE_EQ(d.omega, omega);
  EXPECT_DOUBLE_EQ(d.psi, psi);
}

TEST(Oracle, BetaPosteriorMatchesDenseArithmetic) {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = random_design(gen, 3 + trial);
    const double off = 0.3 * u(gen);
    const Mat2 lambda0{u(gen), off, off, u(gen)};
    const Vec2 mu0{u(gen), -u(gen)};
    const auto post = posterior_beta(d, mu0, lambda0);

    const auto x = design_dense(d);
    const auto xt = oracle::transpose(x);
    const auto gram = oracle::multiply(xt, x);
    const auto beta_hat = oracle::multiply(oracle::inverse(gram), oracle::multiply(xt, d.y));
    const auto precision = oracle::add(gram, to_dense(lambda0));
    const auto mean = oracle::multiply(
        oracle::inverse(precision),
        oracle::add(oracle::multiply(to_dense(lambda0), {mu0[0], mu0[1]}),
                    oracle::multiply(gram, beta_hat)));
    const auto p = to_dense(post.precision);
    for (int i = 0; i < 2; ++i) {
      EXPECT_LE(oracle::relative_difference(post.mean[i], mean[i]), 1e-10);
      EXPECT_LE(oracle::relative_difference((*post.beta_hat)[i], beta_hat[i]), 1e-10);
      for (int j = 0; j < 2; ++j) EXPECT_LE(oracle::relative_difference(p[i][j], precision[i][j]), 1e-10);
    }
  }
}

TEST(Oracle, Sigma2ScaleMatchesDenseArithmetic) {
  std::mt19937_64 gen(22);
  const auto d = random_design(gen, 40);
  const Vec2 mu0{0.2, -0.5};
  const Mat2 lambda0{2.0, 0.4, 0.4, 1.0};
  const auto post = posterior_beta(d, mu0, lambda0);
  const auto [a, b] = sigma2_posterior(d.y, mu0, lambda0, post.mean, post.precision, 3.0, 0.7, 40);

  const auto [mean, precision] =
      oracle::regression_posterior(design_dense(d), d.y, {0.2, -0.5}, to_dense(lambda0));
  const double quad0 = oracle::dot({0.2, -0.5}, oracle::multiply(to_dense(lambda0), {0.2, -0.5}));
  const double quad = oracle::dot(mean, oracle::multiply(precision, mean));
  const double expected_b = 0.7 + 0.5 * (oracle::dot(d.y, d.y) + quad0 - quad);
  EXPECT_DOUBLE_EQ(a, 23.0);
  EXPECT_LE(oracle::relative_difference(b, expected_b), 1e-10);
}

TEST(Oracle, PsiOmegaMatchesDenseArithmetic) {
  std::mt19937_64 gen(23);
  std::normal_distribution<double> n01;
  std::vector<double> e1(60), e2(60);
  for (std::size_t i = 0; i < e1.size(); ++i) {
    e1[i] = n01(gen);
    e2[i] = -0.5 * e1[i] + 0.8 * n01(gen);
  }
  PriorConfig priors;
  const auto post = posterior_psi_omega(e1, e2, priors);

  oracle::Matrix e(e1.size(), oracle::Vector(2));
  for (std::size_t i = 0; i < e1.size(); ++i) e[i] = {e1[i], e2[i]};
  const auto a = oracle::multiply(oracle::transpose(e), e);
  const double mu_psi = (a[0][1] + priors.mu0_psi * priors.tau0_psi) / (a[0][0] + priors.tau0_psi);
  const double b_omega = priors.b0_omega + 0.5 * (a[1][1] - a[0][1] * a[0][1] / a[0][0]);
  EXPECT_LE(oracle::relative_difference(post.mu_psi, mu_psi), 1e-10);
  EXPECT_LE(oracle::relative_difference(post.tau_psi, a[0][0] + priors.tau0_psi), 1e-10);
  EXPECT_LE(oracle::relative_difference(post.b_omega, b_omega), 1e-10);
  EXPECT_DOUBLE_EQ(post.a_omega, priors.a0_omega + 30.0);
}

TEST(Oracle, EtaPosteriorMatchesDenseArithmetic) {
  std::mt19937_64 gen(24);
  std::normal_distribution<double> n01;
  std::vector<double> x(30), y(30);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = 1.0 + std::abs(n01(gen));
    y[i] = 1.3 * x[i] + n01(gen);
  }
  const auto post = posterior_scalar_normal(y, x, 0.9, 5.0);
  const double xx = oracle::dot(x, x);
  const double eta_hat = oracle::dot(x, y) / xx;
  EXPECT_LE(oracle::relative_difference(post.precision, xx + 5.0), 1e-10);
  EXPECT_LE(oracle::relative_difference(post.mean, (5.0 * 0.9 + xx * eta_hat) / (xx + 5.0)), 1e-10);
}

TEST(Identification, NoiselessPathRecoversDriftAndMeanReversion) {
  const HestonParams truth{0.1, 1.0, 0.05, 0.0, 0.0};
  const auto path = noiseless_path(truth, kDaily, 756, 0.03);
  const auto returns = ReturnSeries::from_prices(path.prices, kDaily);

  const auto eta = build_eta_design(returns, path.vol);
  const auto eta_post = posterior_scalar_normal(eta.y, eta.x, 0.0, 0.0);
  EXPECT_LE(oracle::relative_difference(eta_to_mu(eta_post.mean, kDaily), truth.mu), 1e-6);

  const auto beta_post = posterior_beta(build_beta_design(path.vol, kDaily), {0.0, 0.0}, Mat2{});
  const auto kt = beta_to_kappa_theta(beta_post.mean, kDaily);
  EXPECT_LE(oracle::relative_difference(kt.kappa, truth.kappa), 1e-6);
  EXPECT_LE(oracle::relative_difference(kt.theta, truth.theta), 1e-6);
}

TEST(PriorConfig, DefaultsAreValid) {
  const PriorConfig priors;
  EXPECT_NO_THROW(priors.validate());
  const auto m = priors.prior_means(kDaily);
  EXPECT_NEAR(m.mu, 0.315, 1e-9);
  EXPECT_NEAR(m.kappa, 0.012 * 252.0, 1e-9);
  EXPECT_LT(m.rho, 0.0);
}

TEST(PriorConfig, RejectsInvalidValues) {
  PriorConfig p;
  p.tau0_eta = -1.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = PriorConfig{};
  p.lambda0_beta = {1.0, 0.5, 0.4, 1.0};
  EXPECT_THROW(p.validate(), ConfigError);
  p = PriorConfig{};
  p.lambda0_beta = {1.0, 2.0, 2.0, 1.0};
  EXPECT_THROW(p.validate(), ConfigError);
  p = PriorConfig{};
  p.b0_omega = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = PriorConfig{};
  p.lambda_th = 1.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = PriorConfig{};
  p.pf_fraction = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(PriorConfig, InitialValuesOverridePriorMeans) {
  PriorConfig p;
  p.theta_init = 0.07;
  p.rho_init = -0.2;
  const auto init = p.initial_params(kDaily);
  EXPECT_EQ(init.theta, 0.07);
  EXPECT_EQ(init.rho, -0.2);
  EXPECT_EQ(init.mu, p.prior_means(kDaily).mu);
}
