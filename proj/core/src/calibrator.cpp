#include "hestoncal/calibrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hestoncal/errors.hpp"

namespace hestoncal {

namespace {

constexpr std::size_t kMaxBetaAttempts = 100;

}  // namespace

std::vector<std::pair<std::string, double>> PointEstimates::named() const {
  std::vector<std::pair<std::string, double>> out{
      {"mu", mu}, {"kappa", kappa}, {"theta", theta}, {"sigma", sigma}, {"rho", rho}};
  if (lambda) out.emplace_back("lambda", *lambda);
  if (mu_j) out.emplace_back("mu_j", *mu_j);
  if (sigma_j) out.emplace_back("sigma_j", *sigma_j);
  return out;
}

double relative_error_percent(double estimate, double truth) {
  if (truth == 0.0) throw ParameterError("relative error against a zero true value");
  return std::abs(estimate - truth) / std::abs(truth) * 100.0;
}

ChainSummary summarize(std::span<const ChainRecord> chain, std::size_t burn_in,
                       const std::optional<TruthParams>& truth) {
  if (chain.empty()) throw ParameterError("cannot summarize an empty chain");
  if (burn_in >= chain.size()) {
    throw ParameterError("burn_in (" + std::to_string(burn_in) +
                         ") must be smaller than the chain length (" +
                         std::to_string(chain.size()) + ")");
  }
  const auto kept = chain.subspan(burn_in);
  const double count = static_cast<double>(kept.size());
  const bool has_jumps = std::all_of(kept.begin(), kept.end(), [](const ChainRecord& r) {
    return r.lambda && r.mu_j && r.sigma_j;
  });

  auto mean_sd = [&](auto field) {
    double sum = 0.0;
    for (const auto& r : kept) sum += field(r);
    const double mean = sum / count;
    double ss = 0.0;
    for (const auto& r : kept) {
      const double d = field(r) - mean;
      ss += d * d;
    }
    const double sd = kept.size() > 1 ? std::sqrt(ss / (count - 1.0)) : 0.0;
    return std::pair{mean, sd};
  };

  ChainSummary s;
  std::tie(s.means.mu, s.stddevs.mu) = mean_sd([](const ChainRecord& r) { return r.mu; });
  std::tie(s.means.kappa, s.stddevs.kappa) =
      mean_sd([](const ChainRecord& r) { return r.kappa; });
  std::tie(s.means.theta, s.stddevs.theta) =
      mean_sd([](const ChainRecord& r) { return r.theta; });
  std::tie(s.means.sigma, s.stddevs.sigma) =
      mean_sd([](const ChainRecord& r) { return r.sigma; });
  std::tie(s.means.rho, s.stddevs.rho) = mean_sd([](const ChainRecord& r) { return r.rho; });
  if (has_jumps) {
    const auto [lm, ls] = mean_sd([](const ChainRecord& r) { return *r.lambda; });
    const auto [mm, ms] = mean_sd([](const ChainRecord& r) { return *r.mu_j; });
    const auto [sm, ss] = mean_sd([](const ChainRecord& r) { return *r.sigma_j; });
    s.means.lambda = lm;
    s.stddevs.lambda = ls;
    s.means.mu_j = mm;
    s.stddevs.mu_j = ms;
    s.means.sigma_j = sm;
    s.stddevs.sigma_j = ss;
  }

  if (truth) {
    std::map<std::string, double> errors;
    const auto& h = truth->heston;
    errors["mu"] = relative_error_percent(s.means.mu, h.mu);
    errors["kappa"] = relative_error_percent(s.means.kappa, h.kappa);
    errors["theta"] = relative_error_percent(s.means.theta, h.theta);
    errors["sigma"] = relative_error_percent(s.means.sigma, h.sigma);
    errors["rho"] = relative_error_percent(s.means.rho, h.rho);
    if (has_jumps && truth->jumps) {
      errors["lambda"] = relative_error_percent(*s.means.lambda, truth->jumps->lambda);
      errors["mu_j"] = relative_error_percent(*s.means.mu_j, truth->jumps->mu_j);
      errors["sigma_j"] = relative_error_percent(*s.means.sigma_j, truth->jumps->sigma_j);
    }
    s.relative_errors = std::move(errors);
  }
  return s;
}

CycleDraw run_posterior_cycle(const ReturnSeries& returns, std::span<const double> vol,
                              const PriorConfig& priors, const HestonParams& previous,
                              double sigma2_previous, CounterStream& rng) {
  const double dt = returns.dt;
  CycleDraw out;
  out.params = previous;
  out.sigma2 = sigma2_previous;
  out.means = {previous.mu, previous.kappa, previous.theta};

  try {
    const auto design = build_eta_design(returns, vol);
    const auto post = posterior_scalar_normal(design.y, design.x, priors.mu0_eta, priors.tau0_eta);
    out.means.mu = eta_to_mu(post.mean, dt);
    out.params.mu = eta_to_mu(sample_eta(post, rng), dt);
  } catch (const NumericError&) {
    out.degenerate = true;
  }

  try {
    const auto design = build_beta_design(vol, dt);
    const auto post = posterior_beta(design, priors.mu0_beta, priors.lambda0_beta);
    const auto at_mean = beta_to_kappa_theta(post.mean, dt);
    out.means.kappa = at_mean.kappa;
    out.means.theta = at_mean.theta;

    bool accepted = false;
    for (std::size_t attempt = 0; attempt < kMaxBetaAttempts && !accepted; ++attempt) {
      const auto kt = beta_to_kappa_theta(sample_beta(post, sigma2_previous, rng), dt);
      if (kt.degenerate) {
        ++out.beta_retries;
        continue;
      }
      out.params.kappa = kt.kappa;
      out.params.theta = kt.theta;
      accepted = true;
    }
    if (!accepted) out.degenerate = true;

    const auto s2 = sample_sigma2(design.y, priors.mu0_beta, priors.lambda0_beta, post.mean,
                                  post.precision, priors.a0_sigma, priors.b0_sigma,
                                  design.rows(), rng);
    out.sigma2 = s2.value;
    out.sigma2_clamped = s2.clamped;
    out.params.sigma = std::sqrt(s2.value);
  } catch (const NumericError&) {
    out.degenerate = true;
  }

  try {
    const auto res =
        compute_residuals(returns, vol, out.params.mu, out.params.kappa, out.params.theta);
    const auto post = posterior_psi_omega(res.e1, res.e2, priors);
    out.params.rho = sample_rho(post, rng).rho;
  } catch (const NumericError&) {
    out.degenerate = true;
  }
  return out;
}

std::size_t filter_cycle_count(const PriorConfig& priors) {
  const double raw = priors.pf_fraction * static_cast<double>(priors.n_samples);
  const auto count = static_cast<std::size_t>(std::ceil(raw * (1.0 - 1e-12)));
  return std::min(count, priors.n_samples);
}

CalibrationReport calibrate(std::span<const double> prices, double dt, const PriorConfig& priors,
                            bool with_jumps, std::uint64_t seed,
                            const CalibrationOptions& options) {
  if (prices.size() < 3) throw ParameterError("calibration needs at least 3 prices");
  priors.validate();
  if (options.burn_in >= priors.n_samples) {
    throw ParameterError("burn_in must be smaller than n_samples");
  }
  const ReturnSeries raw = ReturnSeries::from_prices(prices, dt);
  const std::size_t n = raw.size();
  if (options.known_vol && options.known_vol->size() != n + 1) {
    throw ParameterError("known variance path must have one point per price");
  }

  const RandomSource source(seed);
  const std::size_t filter_cycles = filter_cycle_count(priors);
  const double maturity = dt * static_cast<double>(n);

  CalibrationReport report;
  report.config_echo = priors;
  report.with_jumps = with_jumps;
  report.dt = dt;
  report.seed = seed;
  report.burn_in = options.burn_in;
  report.chain.reserve(priors.n_samples);
  auto& diag = report.diagnostics;

  HestonParams params = priors.initial_params(dt);
  double sigma2 = params.sigma * params.sigma;
  FilterOutput filtered;
  if (options.known_vol) {
    filtered.vol_estimate = *options.known_vol;
    filtered.jump_prob.assign(n, 0.0);
    filtered.jump_size.assign(n, 0.0);
  }
  ReturnSeries regression_returns = raw;
  JumpAggregate jumps;

  for (std::size_t cycle = 0; cycle <= priors.n_samples; ++cycle) {
    const auto cycle_id = static_cast<std::uint32_t>(cycle);
    const bool rerun = !options.known_vol && cycle <= filter_cycles;
    bool filter_failed = false;
    if (rerun) {
      ++diag.filter_runs;
      try {
        filtered = run_filter(raw, params, priors, with_jumps, source, cycle_id);
      } catch (const NumericError&) {
        if (cycle == 0) throw;
        filter_failed = true;
        ++diag.failed_filter_runs;
      }
    }
    if (rerun && !filter_failed) {
      diag.degenerate_weight_steps += filtered.degenerate_steps;
      if (with_jumps) {
        std::size_t clamped = 0;
        regression_returns =
            neutralize_returns(raw, filtered.jump_prob, filtered.jump_size, &clamped);
        diag.clamped_returns += clamped;
        jumps = aggregate_jump_params(filtered.jump_prob, filtered.jump_size, maturity, priors);
      }
    }

    auto rng = source.stream({cycle_id, Phase::PosteriorDraw, 0});
    const CycleDraw draw = run_posterior_cycle(regression_returns, filtered.vol_estimate, priors,
                                               params, sigma2, rng);
    params = draw.params;
    sigma2 = draw.sigma2;
    diag.beta_retries += draw.beta_retries;
    diag.last_posterior_means = draw.means;
    if (draw.sigma2_clamped) ++diag.clamped_sigma2;

    if (cycle == 0) continue;
    const bool degenerate = draw.degenerate || filter_failed;
    if (degenerate) ++diag.degenerate_cycles;
    ChainRecord rec;
    rec.cycle = cycle_id;
    rec.mu = params.mu;
    rec.kappa = params.kappa;
    rec.theta = params.theta;
    rec.sigma = params.sigma;
    rec.rho = params.rho;
    if (with_jumps) {
      rec.lambda = jumps.lambda;
      rec.mu_j = jumps.mu_j;
      rec.sigma_j = jumps.sigma_j;
    }
    rec.filter_rerun = rerun && !filter_failed;
    rec.degenerate = degenerate;
    report.chain.push_back(rec);
  }

  const auto summary = summarize(report.chain, options.burn_in, options.truth);
  report.point_estimates = summary.means;
  report.point_stddevs = summary.stddevs;
  report.relative_errors = summary.relative_errors;
  report.vol_estimate = std::move(filtered);
  return report;
}

}  // namespace hestoncal
