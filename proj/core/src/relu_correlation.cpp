#include "nlra/relu_correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nlra/errors.hpp"

namespace nlra {
namespace {

constexpr double kRhoSlack = 1e-12;

double clamp_rho(double rho) {
  if (!(std::abs(rho) <= 1.0 + kRhoSlack)) {
    throw InputError("correlation " + std::to_string(rho) + " lies outside [-1, 1]");
  }
  return std::clamp(rho, -1.0, 1.0);
}

}  // namespace

double sqrt_h_closed(double rho) {
  using std::numbers::pi;
  rho = clamp_rho(rho);
  const double value = (std::sqrt(std::max(0.0, 1.0 - rho * rho)) + (pi - std::acos(rho)) * rho) / pi;
  return std::clamp(value, 0.0, 1.0);
}

double sqrt_h_series(double rho, int terms) {
  using std::numbers::pi;
  // central_l = C(2l, l) / 4^l, built by the ratio (2l - 1) / (2l).
  double central = 1.0;
  double power = 1.0;
  double tail = 0.0;
  const double rho2 = rho * rho;
  for (int l = 1; l <= terms; ++l) {
    central *= (2.0 * l - 1.0) / (2.0 * l);
    power *= rho2;
    const double odd = 2.0 * l - 1.0;
    tail += central * power / (odd * odd);
  }
  return (1.0 + 0.5 * pi * rho + tail) / pi;
}

double h(double rho) {
  const double s = sqrt_h_closed(rho);
  return s * s;
}

double sqrt_h_derivative(double rho) {
  using std::numbers::pi;
  rho = clamp_rho(rho);
  return (pi - std::acos(rho)) / pi;
}

double hermite_coeff_relu(int k) {
  using std::numbers::pi;
  if (k < 0) {
    throw InputError("Hermite index must be non-negative");
  }
  if (k == 0) {
    return 1.0 / std::sqrt(2.0 * pi);
  }
  if (k == 1) {
    return 0.5;
  }
  if (k % 2 == 1) {
    return 0.0;
  }
  const int half = k / 2;
  double central = 1.0;
  for (int l = 1; l <= half; ++l) {
    central *= (2.0 * l - 1.0) / (2.0 * l);
  }
  const double odd = 2.0 * half - 1.0;
  return std::sqrt(central / (2.0 * pi) / (odd * odd));
}

}  // namespace nlra
