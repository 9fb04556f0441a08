#pragma once

// The ReLU correlation function sqrt_h and its Hermite description.
//
// For rho-correlated standard Gaussians g1, g2:
//   sqrt_h(rho) = 2 E[relu(g1) relu(g2)]
//              = (sqrt(1 - rho^2) + (pi - arccos rho) rho) / pi
// and h = sqrt_h^2. The closed form is the production path; the Hermite
// series is kept as an independent reference.

namespace nlra {

/// Closed form. |rho| may exceed 1 by at most 1e-12 (it is clamped);
/// anything larger throws InputError.
double sqrt_h_closed(double rho);

/// Partial Hermite series through l = terms:
///   (1/pi) (1 + (pi/2) rho + sum_{l=1}^{terms} C(2l,l) / 4^l / (2l-1)^2 rho^{2l}).
/// Converges slowly near |rho| = 1.
double sqrt_h_series(double rho, int terms);

/// sqrt_h_closed(rho)^2.
double h(double rho);

/// Derivative of sqrt_h: (pi - arccos rho) / pi.
double sqrt_h_derivative(double rho);

/// k-th normalized Hermite coefficient of ReLU.
double hermite_coeff_relu(int k);

}  // namespace nlra
