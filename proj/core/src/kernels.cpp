#include "nlra/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "activation_apply.hpp"
#include "nlra/errors.hpp"
#include "nlra/parallel.hpp"
#include "nlra/quadrature.hpp"
#include "nlra/relu_correlation.hpp"
#include "nlra/sampling.hpp"

namespace nlra {
namespace {

constexpr double kDegenerateRho = 1e-12;
constexpr double kCovarianceTol = 1e-10;

// Cuts in z for sigma(scale * z + shift) at each kink.
std::vector<double> kink_cuts(std::span<const double> kinks, double scale, double shift) {
  std::vector<double> cuts;
  if (scale == 0.0) {
    return cuts;
  }
  for (double bp : kinks) {
    cuts.push_back((bp - shift) / scale);
  }
  return cuts;
}

double tensor_hermite(double sa, double sb, double rho, const Activation& act, int order) {
  const QuadratureRule& gh = gauss_hermite(order);
  const double c = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  const std::size_t n = gh.nodes.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z1 = gh.nodes[i];
    const double fa = act(sa * z1);
    double inner = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      inner += gh.weights[j] * act(sb * (rho * z1 + c * gh.nodes[j]));
    }
    sum += gh.weights[i] * fa * inner;
  }
  return sum;
}

double split_legendre(double sa, double sb, double rho, const Activation& act, int order) {
  const auto kinks = act.breakpoints();
  const double c = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  auto inner = [&](double z1) {
    const double shift = sb * rho * z1;
    const auto cuts = kink_cuts(kinks, sb * c, shift);
    return gaussian_expectation([&](double z2) { return act(shift + sb * c * z2); }, cuts, order);
  };
  const auto outer_cuts = kink_cuts(kinks, sa, 0.0);
  return gaussian_expectation([&](double z1) { return act(sa * z1) * inner(z1); }, outer_cuts, order);
}

}  // namespace

KernelMatrix::KernelMatrix(Matrix values, const LinalgTolerances& tol) : values_(std::move(values)) {
  if (values_.rows() != values_.cols() || values_.rows() < 1) {
    throw InputError("kernel matrix must be square and non-empty");
  }
  require_finite(values_, "kernel matrix");
  const double scale = std::max(1.0, values_.cwiseAbs().maxCoeff());
  if ((values_ - values_.transpose()).cwiseAbs().maxCoeff() > tol.symmetry * scale) {
    throw InputError("kernel matrix is not symmetric");
  }
  values_ = 0.5 * (values_ + values_.transpose()).eval();
}

double kernel_relu(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) {
  if (x.size() != y.size()) {
    throw InputError("kernel_relu: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                     std::to_string(y.size()) + ")");
  }
  const double nx = x.norm();
  const double ny = y.norm();
  if (nx == 0.0 || ny == 0.0) {
    return 0.0;
  }
  const double rho = std::clamp(x.dot(y) / (nx * ny), -1.0, 1.0);
  return 0.5 * nx * ny * sqrt_h_closed(rho);
}

double gaussian_pair_expectation(double var_a, double var_b, double cov, const Activation& act,
                                 int quad_order) {
  if (quad_order < 2) {
    throw InputError("quadrature order must be at least 2");
  }
  const double scale = std::max({1.0, std::abs(var_a), std::abs(var_b)});
  if (var_a < -kCovarianceTol * scale || var_b < -kCovarianceTol * scale ||
      cov * cov > var_a * var_b + kCovarianceTol * scale * scale) {
    throw InputError("covariance [[" + std::to_string(var_a) + ", " + std::to_string(cov) + "], [" +
                     std::to_string(cov) + ", " + std::to_string(var_b) + "]] is not PSD");
  }
  const double sa = std::sqrt(std::max(0.0, var_a));
  const double sb = std::sqrt(std::max(0.0, var_b));
  const auto kinks = act.breakpoints();

  if (sa == 0.0 || sb == 0.0) {
    // One side is the constant sigma(0).
    const double s = std::max(sa, sb);
    const double other = gaussian_expectation([&](double z) { return act(s * z); },
                                              kink_cuts(kinks, s, 0.0), quad_order);
    return act(0.0) * other;
  }
  const double rho = std::clamp(cov / (sa * sb), -1.0, 1.0);
  if (std::abs(rho) >= 1.0 - kDegenerateRho) {
    const double sign = rho > 0.0 ? 1.0 : -1.0;
    std::vector<double> cuts = kink_cuts(kinks, sa, 0.0);
    const auto more = kink_cuts(kinks, sign * sb, 0.0);
    cuts.insert(cuts.end(), more.begin(), more.end());
    return gaussian_expectation([&](double z) { return act(sa * z) * act(sign * sb * z); }, cuts,
                                quad_order);
  }
  if (kinks.empty()) {
    return tensor_hermite(sa, sb, rho, act, quad_order);
  }
  return split_legendre(sa, sb, rho, act, quad_order);
}

double kernel_general(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y,
                      const Activation& act, int quad_order) {
  if (x.size() != y.size()) {
    throw InputError("kernel_general: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                     std::to_string(y.size()) + ")");
  }
  return gaussian_pair_expectation(x.squaredNorm(), y.squaredNorm(), x.dot(y), act, quad_order);
}

KernelMatrix kernel_matrix(const Matrix& w, const Activation& act, int quad_order) {
  require_finite(w, "weight matrix");
  const Index m = w.cols();
  if (m < 1) {
    throw InputError("kernel_matrix needs at least one column");
  }
  const Matrix gram = w.transpose() * w;
  Matrix k(m, m);
  if (act.kind() == ActivationKind::relu) {
    const Vector norms = gram.diagonal().cwiseMax(0.0).cwiseSqrt();
    for (Index j = 0; j < m; ++j) {
      k(j, j) = 0.5 * gram(j, j);
      for (Index i = j + 1; i < m; ++i) {
        double v = 0.0;
        if (norms(i) > 0.0 && norms(j) > 0.0) {
          const double rho = std::clamp(gram(i, j) / (norms(i) * norms(j)), -1.0, 1.0);
          v = 0.5 * norms(i) * norms(j) * sqrt_h_closed(rho);
        }
        k(i, j) = k(j, i) = v;
      }
    }
    return KernelMatrix(std::move(k));
  }
  if (act.kind() == ActivationKind::identity) {
    return KernelMatrix(gram);
  }
  std::vector<std::pair<Index, Index>> pairs;
  for (Index j = 0; j < m; ++j) {
    for (Index i = j; i < m; ++i) {
      pairs.emplace_back(i, j);
    }
  }
  std::vector<double> values(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    values[p] = gaussian_pair_expectation(gram(i, i), gram(j, j), gram(i, j), act, quad_order);
  });
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [i, j] = pairs[p];
    k(i, j) = k(j, i) = values[p];
  }
  return KernelMatrix(std::move(k));
}

KernelMatrix kernel_from_outputs(const Matrix& outputs) {
  if (outputs.rows() < 1) {
    throw InputError("kernel_from_outputs needs at least one sample");
  }
  Matrix k = outputs.transpose() * outputs / static_cast<double>(outputs.rows());
  return KernelMatrix(0.5 * (k + k.transpose()));
}

KernelMatrix estimate_kernel(const Matrix& w, std::size_t n_samples, RngSeed seed, const Activation& act) {
  if (n_samples < 1) {
    throw InputError("estimate_kernel needs at least one sample");
  }
  require_finite(w, "weight matrix");
  const std::size_t chunks = sample_chunk_count(n_samples);
  std::vector<Matrix> partial(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    const Matrix f = detail::apply(act, sample_chunk(n_samples, w.rows(), seed, c) * w);
    partial[c] = f.transpose() * f;
  });
  Matrix sum = Matrix::Zero(w.cols(), w.cols());
  for (const Matrix& p : partial) {
    sum += p;
  }
  sum /= static_cast<double>(n_samples);
  return KernelMatrix(0.5 * (sum + sum.transpose()));
}

}  // namespace nlra
