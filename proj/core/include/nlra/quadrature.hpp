#pragma once

#include <functional>
#include <span>
#include <vector>

namespace nlra {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Hermite rule for the standard normal density (weights sum to 1).
/// Exact for polynomials of degree <= 2n - 1. Rules are cached per order.
const QuadratureRule& gauss_hermite(int order);

/// Gauss-Legendre rule on [-1, 1]. Cached per order.
const QuadratureRule& gauss_legendre(int order);

/// Half-width of the interval used for piecewise Gaussian integrals; the
/// normal tail mass beyond it is below 1e-32.
inline constexpr double kGaussianCutoff = 12.0;

/// E_{z~N(0,1)}[f(z)]. With no cuts this is plain Gauss-Hermite; otherwise
/// [-cutoff, cutoff] is split at the cuts and each piece gets a
/// Gauss-Legendre rule of the given order against the normal density.
double gaussian_expectation(const std::function<double(double)>& f, std::span<const double> cuts,
                            int order);

}  // namespace nlra
