#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hestoncal/calibrator.hpp"
#include "hestoncal/priors.hpp"
#include "hestoncal/simulation.hpp"

namespace hestoncal {

/// Step length assumed for an integer `step` column.
inline constexpr double kTradingDayDt = 1.0 / 252.0;

struct PriceCsv {
  std::vector<double> times;  // years
  std::vector<double> prices;
  double dt = 0.0;            // median spacing
  bool step_column = false;   // header was step,price
};

/// Reads `time,price` or `step,price`. Times must increase strictly with
/// spacing uniform to 1e-6 relative; prices must be positive; at least 3
/// rows. Errors name the offending row.
PriceCsv load_prices(const std::filesystem::path& path);
PriceCsv parse_prices(std::istream& in);

enum class Mode { Heston, Bates };

struct RunConfig {
  PriorConfig priors;
  Mode mode = Mode::Heston;
  std::optional<double> dt;
  std::optional<std::uint64_t> seed;
  std::size_t burn_in = 0;
  std::optional<std::string> out_dir;
  std::optional<TruthParams> truth;
  bool jump_priors_given = false;  // lambda_th, mu0_j and sigma0_j all set explicitly
};

/// Strict JSON schema: unknown keys are rejected, omitted priors take the
/// defaults. Bates mode requires lambda_th, mu0_j and sigma0_j.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text);

/// Shortest representation that reads back to the same double.
std::string format_double(double x);
/// Two decimals, e.g. "1.92".
std::string format_percent(double x);

struct Histogram {
  std::vector<double> edges;  // bins + 1
  std::vector<std::size_t> counts;
};

/// Equal-width bins over [min, max] of the samples.
Histogram make_histogram(std::span<const double> samples, std::size_t bins);

std::string chain_csv(std::span<const ChainRecord> chain);
std::string volatility_csv(const FilterOutput& filtered);
std::string trace_csv(const FilterOutput& filtered);
std::string histogram_csv(const Histogram& h);
std::string report_json(const CalibrationReport& report);
std::string simulation_csv(const SimulatedPath& path);

struct EmitOptions {
  std::size_t bins = 50;
  bool trace = false;
};

/// Writes report.json, chain.csv, volatility.csv, hist_<param>.csv and, on
/// request, trace.csv into `out_dir` (created if missing).
void emit_report(const CalibrationReport& report, const std::filesystem::path& out_dir,
                 const EmitOptions& options = {});

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace hestoncal
