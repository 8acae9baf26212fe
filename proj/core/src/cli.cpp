#include "hestoncal/cli.hpp"

#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hestoncal/calibrator.hpp"
#include "hestoncal/errors.hpp"
#include "hestoncal/io.hpp"
#include "hestoncal/simulation.hpp"

namespace hestoncal {

namespace {

namespace fs = std::filesystem;

const HestonParams kExemplaryHeston{0.1, 1.0, 0.05, 0.01, -0.5};
const JumpParams kExemplaryJumps{1.0, -0.8, 0.2};
constexpr double kExemplaryMaturity = 3.0;
constexpr double kExemplaryS0 = 100.0;

struct SimulateArgs {
  HestonParams params = kExemplaryHeston;
  JumpParams jumps = kExemplaryJumps;
  std::string mode = "heston";
  double maturity = kExemplaryMaturity;
  double dt = kTradingDayDt;
  double s0 = kExemplaryS0;
  std::optional<double> v0;
  std::uint64_t seed = 0;
  std::string out = "sim";
};

struct CalibrateArgs {
  std::string prices;
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> mode;
  std::optional<std::size_t> burn_in;
  std::size_t bins = 50;
  bool trace = false;
};

struct ExperimentArgs {
  std::uint64_t seed = 1;
  std::size_t n_seeds = 3;
  std::size_t n_samples = 500;
  std::size_t n_particles = 1000;
  std::string out = "experiment";
  std::vector<double> shifts{0.0, 1.0};
  std::vector<std::size_t> cycles{10, 500};
  double shift = 1.0;
  std::vector<double> fractions{1.0, 0.05};
  std::vector<double> sigmas{0.01, 0.1};
  std::size_t bins = 50;
};

std::vector<std::uint64_t> seed_list(std::uint64_t first, std::size_t count) {
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t i = 0; i < count; ++i) seeds[i] = first + i;
  return seeds;
}

ExperimentSetup setup_from(const ExperimentArgs& a) {
  ExperimentSetup s;
  s.n_particles = a.n_particles;
  return s;
}

int run_simulate(const SimulateArgs& a, std::ostream& out) {
  const auto grid = TimeGrid::from_maturity(a.maturity, a.dt);
  const double v0 = a.v0.value_or(a.params.theta);
  SimulatedPath path = a.mode == "bates"
                           ? simulate_bates(a.params, a.jumps, grid, a.s0, v0, a.seed)
                           : simulate_heston(a.params, grid, a.s0, v0, a.seed);
  const fs::path dir(a.out);
  fs::create_directories(dir);
  write_text_file(dir / "simulation.csv", simulation_csv(path));
  std::string prices = "time,price\n";
  for (std::size_t k = 0; k < path.prices.size(); ++k) {
    prices += format_double(grid.time(k)) + ',' + format_double(path.prices[k]) + '\n';
  }
  write_text_file(dir / "prices.csv", prices);
  out << "wrote " << path.prices.size() << " prices (" << path.jump_times.size()
      << " jumps) to " << dir.string() << '\n';
  return 0;
}

int run_calibrate(const CalibrateArgs& a, std::ostream& out) {
  RunConfig cfg = a.config ? load_config(*a.config) : RunConfig{};
  if (a.mode) {
    if (*a.mode == "bates") {
      if (!cfg.jump_priors_given) {
        throw ConfigError("bates mode requires lambda_th, mu0_j and sigma0_j in the config");
      }
      cfg.mode = Mode::Bates;
    } else {
      cfg.mode = Mode::Heston;
    }
  }
  if (a.burn_in) cfg.burn_in = *a.burn_in;
  const PriceCsv prices = load_prices(a.prices);
  const double dt = cfg.dt.value_or(prices.dt);
  const std::uint64_t seed = a.seed ? *a.seed : cfg.seed.value_or(0);
  const fs::path dir = a.out ? fs::path(*a.out) : fs::path(cfg.out_dir.value_or("out"));

  CalibrationOptions options;
  options.burn_in = cfg.burn_in;
  options.truth = cfg.truth;
  const auto report =
      calibrate(prices.prices, dt, cfg.priors, cfg.mode == Mode::Bates, seed, options);
  emit_report(report, dir, {a.bins, a.trace});

  for (const auto& [name, value] : report.point_estimates.named()) {
    out << name << " = " << format_double(value);
    if (report.relative_errors) {
      const auto it = report.relative_errors->find(name);
      if (it != report.relative_errors->end()) out << "  (" << format_percent(it->second) << "%)";
    }
    out << '\n';
  }
  out << "wrote report to " << dir.string() << '\n';
  return 0;
}

int run_prior_shift(const ExperimentArgs& a, std::ostream& out) {
  const auto seeds = seed_list(a.seed, a.n_seeds);
  const auto rows = experiment_prior_shift(setup_from(a), a.shifts, a.cycles, seeds);
  std::string csv = "shift,n_samples,seed,theta_hat,theta_true,theta_prior\n";
  for (const auto& r : rows) {
    csv += format_double(r.shift) + ',' + std::to_string(r.n_samples) + ',' +
           std::to_string(r.seed) + ',' + format_double(r.theta_hat) + ',' +
           format_double(r.theta_true) + ',' + format_double(r.theta_prior) + '\n';
  }
  fs::create_directories(a.out);
  write_text_file(fs::path(a.out) / "prior_shift.csv", csv);
  out << "wrote " << rows.size() << " rows to " << a.out << "/prior_shift.csv\n";
  return 0;
}

int run_pf_budget(const ExperimentArgs& a, std::ostream& out) {
  const auto seeds = seed_list(a.seed, a.n_seeds);
  const auto rows = experiment_pf_budget(setup_from(a), a.shift, a.n_samples, a.fractions, seeds);
  std::string csv = "fraction,seed,cycle,theta,filter_rerun\n";
  for (const auto& r : rows) {
    csv += format_double(r.fraction) + ',' + std::to_string(r.seed) + ',' +
           std::to_string(r.cycle) + ',' + format_double(r.theta) + ',' +
           (r.filter_rerun ? "1" : "0") + '\n';
  }
  fs::create_directories(a.out);
  write_text_file(fs::path(a.out) / "pf_budget.csv", csv);
  out << "wrote " << rows.size() << " rows to " << a.out << "/pf_budget.csv\n";
  return 0;
}

int run_sigma_dispersion(const ExperimentArgs& a, std::ostream& out) {
  const auto seeds = seed_list(a.seed, a.n_seeds);
  const auto rows = experiment_sigma_dispersion(setup_from(a), a.sigmas, a.n_samples, seeds);
  std::string csv = "sigma,seed,kappa_mean,kappa_sd,kappa_true\n";
  for (const auto& r : rows) {
    csv += format_double(r.sigma) + ',' + std::to_string(r.seed) + ',' +
           format_double(r.kappa_mean) + ',' + format_double(r.kappa_sd) + ',' +
           format_double(r.kappa_true) + '\n';
  }
  fs::create_directories(a.out);
  write_text_file(fs::path(a.out) / "sigma_dispersion.csv", csv);
  out << "wrote " << rows.size() << " rows to " << a.out << "/sigma_dispersion.csv\n";
  return 0;
}

int run_exemplary(const ExperimentArgs& a, std::ostream& out) {
  const auto grid = TimeGrid::from_maturity(kExemplaryMaturity, kTradingDayDt);
  const auto path = simulate_bates(kExemplaryHeston, kExemplaryJumps, grid, kExemplaryS0,
                                   kExemplaryHeston.theta, a.seed);
  PriorConfig priors;
  priors.n_samples = a.n_samples;
  priors.n_particles = a.n_particles;
  CalibrationOptions options;
  options.truth = TruthParams{kExemplaryHeston, kExemplaryJumps};
  const auto report = calibrate(path.prices, grid.dt(), priors, true, a.seed, options);

  const fs::path dir(a.out);
  emit_report(report, dir, {a.bins, false});
  write_text_file(dir / "simulation.csv", simulation_csv(path));

  const std::vector<std::pair<std::string, double>> truth{
      {"mu", kExemplaryHeston.mu},       {"kappa", kExemplaryHeston.kappa},
      {"theta", kExemplaryHeston.theta}, {"sigma", kExemplaryHeston.sigma},
      {"rho", kExemplaryHeston.rho},     {"lambda", kExemplaryJumps.lambda},
      {"mu_j", kExemplaryJumps.mu_j},    {"sigma_j", kExemplaryJumps.sigma_j}};
  const auto estimates = report.point_estimates.named();
  std::string csv = "parameter,true_value,estimated_value,relative_error_percent\n";
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto& [name, true_value] = truth[i];
    const double estimate = estimates.at(i).second;
    const std::string err = format_percent(relative_error_percent(estimate, true_value));
    csv += name + ',' + format_double(true_value) + ',' + format_double(estimate) + ',' + err +
           '\n';
    out << name << ": true " << format_double(true_value) << ", estimated "
        << format_double(estimate) << ", error " << err << "%\n";
  }
  write_text_file(dir / "exemplary_table.csv", csv);
  out << "wrote " << (dir / "exemplary_table.csv").string() << '\n';
  return 0;
}

void add_experiment_common(CLI::App& cmd, ExperimentArgs& a) {
  cmd.add_option("--seed", a.seed, "First seed")->capture_default_str();
  cmd.add_option("--seeds", a.n_seeds, "Number of consecutive seeds")->capture_default_str();
  cmd.add_option("--samples", a.n_samples, "Sampling cycles n_s")->capture_default_str();
  cmd.add_option("--particles", a.n_particles, "Particles N")->capture_default_str();
  cmd.add_option("--out", a.out, "Output directory")->capture_default_str();
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian calibration of the Heston and Bates models"};
  app.name("hestoncal");
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate a Heston or Bates price path");
  simulate->add_option("--mode", sim.mode, "heston or bates")
      ->check(CLI::IsMember({"heston", "bates"}))
      ->capture_default_str();
  simulate->add_option("--mu", sim.params.mu)->capture_default_str();
  simulate->add_option("--kappa", sim.params.kappa)->capture_default_str();
  simulate->add_option("--theta", sim.params.theta)->capture_default_str();
  simulate->add_option("--sigma", sim.params.sigma)->capture_default_str();
  simulate->add_option("--rho", sim.params.rho)->capture_default_str();
  simulate->add_option("--lambda", sim.jumps.lambda)->capture_default_str();
  simulate->add_option("--mu-j", sim.jumps.mu_j)->capture_default_str();
  simulate->add_option("--sigma-j", sim.jumps.sigma_j)->capture_default_str();
  simulate->add_option("--maturity", sim.maturity, "Horizon T in years")->capture_default_str();
  simulate->add_option("--dt", sim.dt, "Time step in years")->capture_default_str();
  simulate->add_option("--s0", sim.s0, "Initial price")->capture_default_str();
  simulate->add_option("--v0", sim.v0, "Initial variance (default theta)");
  simulate->add_option("--seed", sim.seed)->capture_default_str();
  simulate->add_option("--out", sim.out, "Output directory")->capture_default_str();

  CalibrateArgs cal;
  auto* calibrate_cmd = app.add_subcommand("calibrate", "Calibrate to a price series");
  calibrate_cmd->add_option("--prices", cal.prices, "CSV with time,price or step,price")
      ->required();
  calibrate_cmd->add_option("--config", cal.config, "JSON prior and run configuration");
  calibrate_cmd->add_option("--seed", cal.seed, "Random seed (overrides config)");
  calibrate_cmd->add_option("--out", cal.out, "Output directory (default out)");
  calibrate_cmd->add_option("--mode", cal.mode, "heston or bates")
      ->check(CLI::IsMember({"heston", "bates"}));
  calibrate_cmd->add_option("--burn-in", cal.burn_in, "Records dropped before averaging");
  calibrate_cmd->add_option("--bins", cal.bins, "Histogram bins")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  calibrate_cmd->add_flag("--trace", cal.trace, "Also write the per-step filter trace");

  ExperimentArgs exp;
  auto* experiment = app.add_subcommand("experiment", "Reproduction experiments");
  experiment->require_subcommand(1);
  auto* prior_shift = experiment->add_subcommand("prior-shift", "theta estimate vs prior shift");
  add_experiment_common(*prior_shift, exp);
  prior_shift->add_option("--shifts", exp.shifts, "Relative theta prior shifts")
      ->capture_default_str();
  prior_shift->add_option("--cycles", exp.cycles, "Sampling cycle counts")
      ->capture_default_str();
  auto* pf_budget = experiment->add_subcommand("pf-budget", "theta chains vs filter budget");
  add_experiment_common(*pf_budget, exp);
  pf_budget->add_option("--shift", exp.shift, "Relative theta prior shift")
      ->capture_default_str();
  pf_budget->add_option("--fractions", exp.fractions, "pf_fraction values")
      ->capture_default_str();
  auto* sigma_disp =
      experiment->add_subcommand("sigma-dispersion", "kappa dispersion vs vol of vol");
  add_experiment_common(*sigma_disp, exp);
  sigma_disp->add_option("--sigmas", exp.sigmas, "sigma values")->capture_default_str();
  auto* exemplary = experiment->add_subcommand("exemplary", "Bates exemplary estimation");
  add_experiment_common(*exemplary, exp);
  exemplary->add_option("--bins", exp.bins, "Histogram bins")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*simulate) return run_simulate(sim, out);
    if (*calibrate_cmd) return run_calibrate(cal, out);
    if (*prior_shift) return run_prior_shift(exp, out);
    if (*pf_budget) return run_pf_budget(exp, out);
    if (*sigma_disp) return run_sigma_dispersion(exp, out);
    if (*exemplary) return run_exemplary(exp, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  err << app.help();
  return 1;
}

}  // namespace hestoncal
