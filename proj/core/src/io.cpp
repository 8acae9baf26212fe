#include "hestoncal/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "hestoncal/errors.hpp"
#include "json.hpp"

namespace hestoncal {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr double kSpacingTolerance = 1e-6;

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string row_prefix(std::size_t row) { return "row " + std::to_string(row) + ": "; }

double parse_number(const std::string& field, std::size_t row, const char* what) {
  const std::string t = trim(field);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || end != t.data() + t.size()) {
    throw IngestionError(row_prefix(row) + "cannot parse " + what + " '" + t + "'");
  }
  return value;
}

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    m = 0.5 * (m + lower);
  }
  return m;
}

// --- config helpers ---------------------------------------------------------------

double get_number(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return v.get<double>();
}

std::size_t get_count(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_number_unsigned()) {
    throw ConfigError("config key '" + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

Vec2 get_vec2(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError("config key '" + key + "' must be an array of 2 numbers");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

Mat2 get_mat2(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  const auto row_ok = [](const json& r) {
    return r.is_array() && r.size() == 2 && r[0].is_number() && r[1].is_number();
  };
  if (!v.is_array() || v.size() != 2 || !row_ok(v[0]) || !row_ok(v[1])) {
    throw ConfigError("config key '" + key + "' must be a 2x2 array of numbers");
  }
  return {v[0][0].get<double>(), v[0][1].get<double>(), v[1][0].get<double>(),
          v[1][1].get<double>()};
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown " + where + " key '" + key + "'");
  }
}

TruthParams parse_truth(const json& t) {
  if (!t.is_object()) throw ConfigError("config key 'truth' must be an object");
  reject_unknown(t, {"mu", "kappa", "theta", "sigma", "rho", "lambda", "mu_j", "sigma_j"},
                 "truth");
  TruthParams truth;
  auto& h = truth.heston;
  for (const char* key : {"mu", "kappa", "theta", "sigma", "rho"}) {
    if (!t.contains(key)) throw ConfigError(std::string("truth is missing '") + key + "'");
  }
  h.mu = get_number(t, "mu");
  h.kappa = get_number(t, "kappa");
  h.theta = get_number(t, "theta");
  h.sigma = get_number(t, "sigma");
  h.rho = get_number(t, "rho");
  const int jump_keys = static_cast<int>(t.contains("lambda")) +
                        static_cast<int>(t.contains("mu_j")) +
                        static_cast<int>(t.contains("sigma_j"));
  if (jump_keys == 3) {
    truth.jumps = JumpParams{get_number(t, "lambda"), get_number(t, "mu_j"),
                             get_number(t, "sigma_j")};
  } else if (jump_keys != 0) {
    throw ConfigError("truth jump parameters must be given together");
  }
  return truth;
}

// --- output helpers -----------------------------------------------------------------

json number_or_null(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

ordered_json estimates_json(const PointEstimates& p) {
  ordered_json out = ordered_json::object();
  for (const auto& [name, value] : p.named()) out[name] = value;
  return out;
}

ordered_json priors_json(const PriorConfig& p) {
  ordered_json out;
  out["mu0_eta"] = p.mu0_eta;
  out["tau0_eta"] = p.tau0_eta;
  out["mu0_beta"] = {p.mu0_beta[0], p.mu0_beta[1]};
  out["lambda0_beta"] = {{p.lambda0_beta.a00, p.lambda0_beta.a01},
                         {p.lambda0_beta.a10, p.lambda0_beta.a11}};
  out["a0_sigma"] = p.a0_sigma;
  out["b0_sigma"] = p.b0_sigma;
  out["mu0_psi"] = p.mu0_psi;
  out["tau0_psi"] = p.tau0_psi;
  out["a0_omega"] = p.a0_omega;
  out["b0_omega"] = p.b0_omega;
  out["lambda_th"] = p.lambda_th;
  out["mu0_j"] = p.mu0_j;
  out["sigma0_j"] = p.sigma0_j;
  out["n_samples"] = p.n_samples;
  out["n_particles"] = p.n_particles;
  out["pf_fraction"] = p.pf_fraction;
  out["mu_init"] = number_or_null(p.mu_init);
  out["kappa_init"] = number_or_null(p.kappa_init);
  out["theta_init"] = number_or_null(p.theta_init);
  out["sigma_init"] = number_or_null(p.sigma_init);
  out["rho_init"] = number_or_null(p.rho_init);
  return out;
}

double round_two_decimals(double x) { return std::round(x * 100.0) / 100.0; }

}  // namespace

// --- prices -------------------------------------------------------------------------

PriceCsv parse_prices(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IngestionError("price file is empty");
  std::string header = trim(line);
  header.erase(std::remove(header.begin(), header.end(), ' '), header.end());
  PriceCsv out;
  if (header == "step,price") {
    out.step_column = true;
  } else if (header != "time,price") {
    throw IngestionError("price file header must be 'time,price' or 'step,price', got '" +
                         header + "'");
  }

  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw IngestionError(row_prefix(row) + "expected 2 comma-separated fields");
    }
    double t = parse_number(line.substr(0, comma), row, out.step_column ? "step" : "time");
    const double price = parse_number(line.substr(comma + 1), row, "price");
    if (out.step_column) {
      if (t != std::floor(t)) throw IngestionError(row_prefix(row) + "step must be an integer");
      t *= kTradingDayDt;
    }
    if (!(price > 0.0) || !std::isfinite(price)) {
      throw IngestionError(row_prefix(row) + "price must be positive, got " + trim(line.substr(comma + 1)));
    }
    if (!out.times.empty() && !(t > out.times.back())) {
      throw IngestionError(row_prefix(row) + "time must increase strictly");
    }
    out.times.push_back(t);
    out.prices.push_back(price);
  }
  if (out.prices.size() < 3) {
    throw IngestionError("price file needs at least 3 rows, got " +
                         std::to_string(out.prices.size()));
  }

  std::vector<double> spacing(out.times.size() - 1);
  for (std::size_t k = 1; k < out.times.size(); ++k) {
    spacing[k - 1] = out.times[k] - out.times[k - 1];
  }
  out.dt = median(spacing);
  for (std::size_t k = 0; k < spacing.size(); ++k) {
    if (std::abs(spacing[k] - out.dt) > kSpacingTolerance * out.dt) {
      throw IngestionError(row_prefix(k + 2) + "spacing " + format_double(spacing[k]) +
                           " differs from the median spacing " + format_double(out.dt));
    }
  }
  return out;
}

PriceCsv load_prices(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open price file " + path.string());
  try {
    return parse_prices(in);
  } catch (const IngestionError& e) {
    throw IngestionError(path.string() + ": " + e.what());
  }
}

// --- config --------------------------------------------------------------------------

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"mode", "dt", "seed", "burn_in", "out", "truth", "mu0_eta", "sigma0_eta",
                  "tau0_eta", "mu0_beta", "lambda0_beta", "a0_sigma", "b0_sigma", "mu0_psi",
                  "sigma0_psi", "tau0_psi", "a0_omega", "b0_omega", "lambda_th", "mu0_j",
                  "sigma0_j", "n_samples", "n_particles", "pf_fraction", "mu_init",
                  "kappa_init", "theta_init", "sigma_init", "rho_init"},
                 "config");

  RunConfig cfg;
  auto& p = cfg.priors;
  if (j.contains("mode")) {
    const auto& m = j.at("mode");
    if (m == "heston") {
      cfg.mode = Mode::Heston;
    } else if (m == "bates") {
      cfg.mode = Mode::Bates;
    } else {
      throw ConfigError("mode must be 'heston' or 'bates'");
    }
  }
  if (j.contains("dt")) {
    cfg.dt = get_number(j, "dt");
    if (!(*cfg.dt > 0.0)) throw ConfigError("dt must be positive");
  }
  if (j.contains("seed")) cfg.seed = get_count(j, "seed");
  if (j.contains("burn_in")) cfg.burn_in = get_count(j, "burn_in");
  if (j.contains("out")) {
    if (!j.at("out").is_string()) throw ConfigError("config key 'out' must be a string");
    cfg.out_dir = j.at("out").get<std::string>();
  }
  if (j.contains("truth")) cfg.truth = parse_truth(j.at("truth"));

  const auto precision_from = [&](const char* sd_key, const char* tau_key, double& tau) {
    if (j.contains(sd_key) && j.contains(tau_key)) {
      throw ConfigError(std::string("give either '") + sd_key + "' or '" + tau_key + "'");
    }
    if (j.contains(sd_key)) {
      const double sd = get_number(j, sd_key);
      if (!(sd > 0.0)) throw ConfigError(std::string(sd_key) + " must be positive");
      tau = 1.0 / (sd * sd);
    }
    if (j.contains(tau_key)) tau = get_number(j, tau_key);
  };

  if (j.contains("mu0_eta")) p.mu0_eta = get_number(j, "mu0_eta");
  precision_from("sigma0_eta", "tau0_eta", p.tau0_eta);
  if (j.contains("mu0_beta")) p.mu0_beta = get_vec2(j, "mu0_beta");
  if (j.contains("lambda0_beta")) p.lambda0_beta = get_mat2(j, "lambda0_beta");
  if (j.contains("a0_sigma")) p.a0_sigma = get_number(j, "a0_sigma");
  if (j.contains("b0_sigma")) p.b0_sigma = get_number(j, "b0_sigma");
  if (j.contains("mu0_psi")) p.mu0_psi = get_number(j, "mu0_psi");
  precision_from("sigma0_psi", "tau0_psi", p.tau0_psi);
  if (j.contains("a0_omega")) p.a0_omega = get_number(j, "a0_omega");
  if (j.contains("b0_omega")) p.b0_omega = get_number(j, "b0_omega");
  if (j.contains("lambda_th")) p.lambda_th = get_number(j, "lambda_th");
  if (j.contains("mu0_j")) p.mu0_j = get_number(j, "mu0_j");
  if (j.contains("sigma0_j")) p.sigma0_j = get_number(j, "sigma0_j");
  if (j.contains("n_samples")) p.n_samples = get_count(j, "n_samples");
  if (j.contains("n_particles")) p.n_particles = get_count(j, "n_particles");
  if (j.contains("pf_fraction")) p.pf_fraction = get_number(j, "pf_fraction");
  if (j.contains("mu_init")) p.mu_init = get_number(j, "mu_init");
  if (j.contains("kappa_init")) p.kappa_init = get_number(j, "kappa_init");
  if (j.contains("theta_init")) p.theta_init = get_number(j, "theta_init");
  if (j.contains("sigma_init")) p.sigma_init = get_number(j, "sigma_init");
  if (j.contains("rho_init")) p.rho_init = get_number(j, "rho_init");

  cfg.jump_priors_given = j.contains("lambda_th") && j.contains("mu0_j") && j.contains("sigma0_j");
  if (cfg.mode == Mode::Bates) {
    for (const char* key : {"lambda_th", "mu0_j", "sigma0_j"}) {
      if (!j.contains(key)) {
        throw ConfigError(std::string("bates mode requires '") + key + "' in the config");
      }
    }
  }
  p.validate();
  if (cfg.burn_in >= p.n_samples) throw ConfigError("burn_in must be smaller than n_samples");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

// --- formatting --------------------------------------------------------------------

std::string format_double(double x) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

std::string format_percent(double x) {
  char buf[64];
  const auto [end, ec] =
      std::to_chars(buf, buf + sizeof buf, round_two_decimals(x), std::chars_format::fixed, 2);
  return std::string(buf, end);
}

Histogram make_histogram(std::span<const double> samples, std::size_t bins) {
  if (samples.empty()) throw ParameterError("histogram of an empty sample");
  if (bins == 0) throw ParameterError("histogram needs at least one bin");
  auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (lo == hi) {
    const double pad = lo != 0.0 ? 0.5 * std::abs(lo) : 0.5;
    lo -= pad;
    hi += pad;
  }
  Histogram h;
  h.edges.resize(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = lo + width * static_cast<double>(b);
  h.edges.back() = hi;
  h.counts.assign(bins, 0);
  for (const double x : samples) {
    auto b = static_cast<std::size_t>((x - lo) / width);
    if (b >= bins) b = bins - 1;
    ++h.counts[b];
  }
  return h;
}

std::string chain_csv(std::span<const ChainRecord> chain) {
  std::string out = "cycle,mu,kappa,theta,sigma,rho,lambda,mu_j,sigma_j,filter_rerun\n";
  const auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : ""; };
  for (const auto& r : chain) {
    out += std::to_string(r.cycle) + ',' + format_double(r.mu) + ',' + format_double(r.kappa) +
           ',' + format_double(r.theta) + ',' + format_double(r.sigma) + ',' +
           format_double(r.rho) + ',' + opt(r.lambda) + ',' + opt(r.mu_j) + ',' +
           opt(r.sigma_j) + ',' + (r.filter_rerun ? "1" : "0") + '\n';
  }
  return out;
}

std::string volatility_csv(const FilterOutput& filtered) {
  std::string out = "step,estimate\n";
  for (std::size_t k = 0; k < filtered.vol_estimate.size(); ++k) {
    out += std::to_string(k) + ',' + format_double(filtered.vol_estimate[k]) + '\n';
  }
  return out;
}

std::string trace_csv(const FilterOutput& filtered) {
  std::string out = "step,vol_estimate,jump_prob,jump_size\n";
  for (std::size_t k = 0; k < filtered.vol_estimate.size(); ++k) {
    const bool has_jump_entry = k >= 1 && k <= filtered.jump_prob.size();
    const double p = has_jump_entry ? filtered.jump_prob[k - 1] : 0.0;
    const double z = has_jump_entry ? filtered.jump_size[k - 1] : 0.0;
    out += std::to_string(k) + ',' + format_double(filtered.vol_estimate[k]) + ',' +
           format_double(p) + ',' + format_double(z) + '\n';
  }
  return out;
}

std::string histogram_csv(const Histogram& h) {
  std::string out = "bin_lo,bin_hi,count,density\n";
  std::size_t total = 0;
  for (const auto c : h.counts) total += c;
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    const double width = h.edges[b + 1] - h.edges[b];
    const double density = static_cast<double>(h.counts[b]) / (static_cast<double>(total) * width);
    out += format_double(h.edges[b]) + ',' + format_double(h.edges[b + 1]) + ',' +
           std::to_string(h.counts[b]) + ',' + format_double(density) + '\n';
  }
  return out;
}

std::string report_json(const CalibrationReport& report) {
  ordered_json j;
  j["mode"] = report.with_jumps ? "bates" : "heston";
  j["seed"] = report.seed;
  j["dt"] = report.dt;
  j["burn_in"] = report.burn_in;
  j["n_records"] = report.chain.size();
  j["point_estimates"] = estimates_json(report.point_estimates);
  j["posterior_sd"] = estimates_json(report.point_stddevs);
  if (report.relative_errors) {
    ordered_json errors = ordered_json::object();
    for (const auto& [name, _] : report.point_estimates.named()) {
      const auto it = report.relative_errors->find(name);
      if (it != report.relative_errors->end()) errors[name] = round_two_decimals(it->second);
    }
    j["relative_errors_percent"] = errors;
  }
  const auto& d = report.diagnostics;
  j["diagnostics"] = {{"filter_runs", d.filter_runs},
                      {"failed_filter_runs", d.failed_filter_runs},
                      {"degenerate_cycles", d.degenerate_cycles},
                      {"degenerate_weight_steps", d.degenerate_weight_steps},
                      {"clamped_returns", d.clamped_returns},
                      {"clamped_sigma2", d.clamped_sigma2},
                      {"beta_retries", d.beta_retries}};
  j["config"] = priors_json(report.config_echo);
  return j.dump(2) + '\n';
}

std::string simulation_csv(const SimulatedPath& path) {
  std::string out = "step,time,price,true_vol,jump_flag,jump_size\n";
  for (std::size_t k = 0; k < path.prices.size(); ++k) {
    const auto it = path.jump_sizes.find(k);
    const bool jumped = path.jump_times.contains(k);
    out += std::to_string(k) + ',' + format_double(path.grid.time(k)) + ',' +
           format_double(path.prices[k]) + ',' + format_double(path.true_vol[k]) + ',' +
           (jumped ? "1" : "0") + ',' +
           format_double(it != path.jump_sizes.end() ? it->second : 0.0) + '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out.flush()) throw IoError("failed writing " + path.string());
}

void emit_report(const CalibrationReport& report, const std::filesystem::path& out_dir,
                 const EmitOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());

  write_text_file(out_dir / "report.json", report_json(report));
  write_text_file(out_dir / "chain.csv", chain_csv(report.chain));
  write_text_file(out_dir / "volatility.csv", volatility_csv(report.vol_estimate));
  if (options.trace) write_text_file(out_dir / "trace.csv", trace_csv(report.vol_estimate));

  const auto kept = std::span(report.chain).subspan(report.burn_in);
  std::vector<double> samples(kept.size());
  for (const auto& [name, _] : report.point_estimates.named()) {
    for (std::size_t i = 0; i < kept.size(); ++i) {
      const auto& r = kept[i];
      if (name == "mu") samples[i] = r.mu;
      else if (name == "kappa") samples[i] = r.kappa;
      else if (name == "theta") samples[i] = r.theta;
      else if (name == "sigma") samples[i] = r.sigma;
      else if (name == "rho") samples[i] = r.rho;
      else if (name == "lambda") samples[i] = *r.lambda;
      else if (name == "mu_j") samples[i] = *r.mu_j;
      else samples[i] = *r.sigma_j;
    }
    write_text_file(out_dir / ("hist_" + name + ".csv"),
                    histogram_csv(make_histogram(samples, options.bins)));
  }
}

}  // namespace hestoncal
