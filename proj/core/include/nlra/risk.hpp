#pragma once

// Population objective R(Y) = E_x ||sigma(x^T Y) - sigma(x^T W)||^2 with
// x ~ N(0, I_d), and its Monte Carlo estimates.

#include <cstddef>
#include <optional>
#include <string>

#include "nlra/activation.hpp"
#include "nlra/factor_pair.hpp"
#include "nlra/linalg.hpp"

namespace nlra {

enum class RiskMethod { exact_relu, monte_carlo };

std::string to_string(RiskMethod method);

struct RiskReport {
  double value = 0.0;
  RiskMethod method = RiskMethod::exact_relu;
  std::optional<std::size_t> n_samples;
  std::optional<double> std_error;
};

/// R = |W|^2/2 + |Y|^2/2 - sum_i |W_i| |Y_i| sqrt_h(rho_i). Values within
/// roundoff of zero are clipped to 0.
RiskReport risk_relu_exact(const Matrix& w, const Matrix& y);

/// Sample mean of ||sigma(x^T Y) - sigma(x^T W)||^2 over the sample stream of
/// `seed`, with the standard error of the mean. Two calls with the same seed
/// and shapes see the same x's.
RiskReport risk_mc(const Matrix& w, const Matrix& y, const Activation& act, std::size_t n_samples,
                   RngSeed seed);
RiskReport risk_mc(const Matrix& w, const FactorPair& y, const Activation& act, std::size_t n_samples,
                   RngSeed seed);

struct RiskGradient {
  Matrix grad_u;
  Matrix grad_v;
  double objective = 0.0;  ///< sampled objective at (U, V)
};

/// Gradient of the sampled objective in (U, V) with Y = U V^T, using the
/// activation's subderivative at kinks.
RiskGradient risk_mc_gradient(const Matrix& w, const Matrix& u, const Matrix& v, const Activation& act,
                              std::size_t n_samples, RngSeed seed);

/// Same, on an explicit batch of samples (one row per x).
RiskGradient risk_gradient_on_batch(const Matrix& w, const Matrix& u, const Matrix& v,
                                    const Activation& act, const Matrix& x);

}  // namespace nlra
