#pragma once

#include <cstddef>

namespace hestoncal {

// Uniform grid on [0, T]: n steps of length dt.
class TimeGrid {
 public:
  /// Throws ParameterError unless dt > 0 and n_steps >= 2.
  TimeGrid(double dt, std::size_t n_steps);
  static TimeGrid from_maturity(double maturity, double dt);

  double dt() const { return dt_; }
  std::size_t n_steps() const { return n_steps_; }
  double maturity() const { return maturity_; }
  double time(std::size_t step) const { return static_cast<double>(step) * dt_; }

 private:
  double dt_;
  std::size_t n_steps_;
  double maturity_;
};

struct HestonParams {
  double mu = 0.0;     // drift, per year
  double kappa = 1.0;  // mean-reversion rate, per year
  double theta = 0.0;  // long-run variance
  double sigma = 0.0;  // vol of vol
  double rho = 0.0;    // price/variance correlation

  /// Throws ParameterError on kappa <= 0, theta <= 0, sigma < 0 or |rho| > 1.
  void validate() const;
};

struct JumpParams {
  double lambda = 0.0;   // intensity, per year
  double mu_j = 0.0;     // mean log jump size
  double sigma_j = 0.0;  // stddev of log jump size

  void validate() const;
};

}  // namespace hestoncal
