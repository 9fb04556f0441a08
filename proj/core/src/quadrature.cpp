#include "nlra/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "nlra/errors.hpp"

namespace nlra {
namespace {

// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix, weights are
// mu0 times the squared first component of each eigenvector.
QuadratureRule golub_welsch(int order, double mu0, double (*offdiag)(int)) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = offdiag(k);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  if (es.info() != Eigen::Success) {
    throw NumericalError("Golub-Welsch eigensolve failed at order " + std::to_string(order));
  }
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(order));
  rule.weights.resize(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    rule.nodes[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    rule.weights[static_cast<std::size_t>(i)] = mu0 * v0 * v0;
  }
  return rule;
}

double hermite_offdiag(int k) { return std::sqrt(static_cast<double>(k)); }

double legendre_offdiag(int k) {
  const double kk = static_cast<double>(k);
  return kk / std::sqrt(4.0 * kk * kk - 1.0);
}

const QuadratureRule& cached(int order, double mu0, double (*offdiag)(int),
                             std::map<int, std::unique_ptr<QuadratureRule>>& cache, std::mutex& mutex) {
  if (order < 1) {
    throw InputError("quadrature order must be positive");
  }
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) {
    slot = std::make_unique<QuadratureRule>(golub_welsch(order, mu0, offdiag));
  }
  return *slot;
}

}  // namespace

const QuadratureRule& gauss_hermite(int order) {
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  static std::mutex mutex;
  return cached(order, 1.0, hermite_offdiag, cache, mutex);
}

const QuadratureRule& gauss_legendre(int order) {
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  static std::mutex mutex;
  return cached(order, 2.0, legendre_offdiag, cache, mutex);
}

double gaussian_expectation(const std::function<double(double)>& f, std::span<const double> cuts,
                            int order) {
  if (cuts.empty()) {
    const QuadratureRule& gh = gauss_hermite(order);
    double sum = 0.0;
    for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
      sum += gh.weights[i] * f(gh.nodes[i]);
    }
    return sum;
  }
  std::vector<double> edges{-kGaussianCutoff, kGaussianCutoff};
  for (double c : cuts) {
    if (c > -kGaussianCutoff && c < kGaussianCutoff) {
      edges.push_back(c);
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  const QuadratureRule& gl = gauss_legendre(order);
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  double sum = 0.0;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double lo = edges[p];
    const double hi = edges[p + 1];
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double piece = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double z = mid + half * gl.nodes[i];
      piece += gl.weights[i] * std::exp(-0.5 * z * z) * f(z);
    }
    sum += half * piece;
  }
  return norm * sum;
}

}  // namespace nlra
