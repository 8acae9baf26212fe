#include "hestoncal/model.hpp"

#include <cmath>
#include <string>

#include "hestoncal/errors.hpp"

namespace hestoncal {

TimeGrid::TimeGrid(double dt, std::size_t n_steps)
    : dt_(dt), n_steps_(n_steps), maturity_(dt * static_cast<double>(n_steps)) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ParameterError("time step must be positive and finite");
  }
  if (n_steps < 2) {
    throw ParameterError("time grid needs at least 2 steps");
  }
}

TimeGrid TimeGrid::from_maturity(double maturity, double dt) {
  if (!(maturity > 0.0) || !(dt > 0.0)) {
    throw ParameterError("maturity and time step must be positive");
  }
  const double steps = std::round(maturity / dt);
  if (std::abs(steps * dt - maturity) > 1e-9 * maturity) {
    throw ParameterError("maturity " + std::to_string(maturity) +
                         " is not an integer multiple of dt " + std::to_string(dt));
  }
  return TimeGrid(dt, static_cast<std::size_t>(steps));
}

void HestonParams::validate() const {
  if (!(kappa > 0.0)) throw ParameterError("kappa must be positive");
  if (!(theta > 0.0)) throw ParameterError("theta must be positive");
  if (!(sigma >= 0.0)) throw ParameterError("sigma must be non-negative");
  if (!(rho >= -1.0 && rho <= 1.0)) throw ParameterError("rho must lie in [-1, 1]");
  if (!std::isfinite(mu)) throw ParameterError("mu must be finite");
}

void JumpParams::validate() const {
  if (!(lambda >= 0.0)) throw ParameterError("jump intensity must be non-negative");
  if (!(sigma_j >= 0.0)) throw ParameterError("jump size stddev must be non-negative");
  if (!std::isfinite(mu_j)) throw ParameterError("jump size mean must be finite");
}

}  // namespace hestoncal
