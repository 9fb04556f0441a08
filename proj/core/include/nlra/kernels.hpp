#pragma once

// Nonlinearity kernels K_sigma(x, y) = E_{z~N(0,I)}[sigma(x^T z) sigma(y^T z)].
//
// For ReLU this is (1/2) |x| |y| sqrt_h(rho_xy); the first-order arc-cosine
// kernel is twice that.

#include <cstddef>

#include "nlra/activation.hpp"
#include "nlra/linalg.hpp"

namespace nlra {

inline constexpr int kDefaultQuadOrder = 64;

/// Symmetric positive semi-definite m x m matrix of kernel values.
class KernelMatrix {
 public:
  /// Rejects non-square, non-finite or asymmetric input.
  explicit KernelMatrix(Matrix values, const LinalgTolerances& tol = {});

  const Matrix& values() const noexcept { return values_; }
  Index size() const noexcept { return values_.rows(); }
  double operator()(Index i, Index j) const { return values_(i, j); }

 private:
  Matrix values_;
};

/// Closed-form ReLU kernel. Returns 0 when either vector is zero.
double kernel_relu(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y);

/// E[sigma(a) sigma(b)] for centered jointly Gaussian (a, b) with the given
/// covariance. Smooth activations use tensor Gauss-Hermite of the given
/// order; activations with kinks use Gauss-Legendre pieces split at the
/// kinks. |rho| >= 1 - 1e-12 falls back to a one-dimensional integral.
double gaussian_pair_expectation(double var_a, double var_b, double cov, const Activation& act,
                                 int quad_order = kDefaultQuadOrder);

/// Kernel for an arbitrary activation by quadrature.
double kernel_general(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y,
                      const Activation& act, int quad_order = kDefaultQuadOrder);

/// K(i, j) = kernel of columns i and j of w. ReLU uses the closed form.
KernelMatrix kernel_matrix(const Matrix& w, const Activation& act, int quad_order = kDefaultQuadOrder);

/// (1/N) F^T F for an N x m matrix of activations F.
KernelMatrix kernel_from_outputs(const Matrix& outputs);

/// Empirical kernel (1/N) sum_k sigma(x_k^T W)^T sigma(x_k^T W) over the
/// sample stream of `seed`; every entry shares the same samples.
KernelMatrix estimate_kernel(const Matrix& w, std::size_t n_samples, RngSeed seed,
                             const Activation& act = Activation::relu());

}  // namespace nlra
