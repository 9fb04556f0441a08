#include "nlra/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "activation_apply.hpp"
#include "nlra/errors.hpp"
#include "nlra/parallel.hpp"
#include "nlra/relu_correlation.hpp"
#include "nlra/sampling.hpp"

namespace nlra {
namespace {


void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InputError(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()));
  }
}

struct Moments {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;
};

// Chan et al. pairwise merge.
Moments merge(const Moments& a, const Moments& b) {
  if (a.count == 0.0) {
    return b;
  }
  const double n = a.count + b.count;
  const double delta = b.mean - a.mean;
  return Moments{n, a.mean + delta * b.count / n, a.m2 + b.m2 + delta * delta * a.count * b.count / n};
}

template <typename Predict>
RiskReport monte_carlo(const Matrix& w, Index d, const Activation& act, std::size_t n_samples, RngSeed seed,
                       Predict predict) {
  if (n_samples < 2) {
    throw InputError("risk_mc needs at least 2 samples");
  }
  const std::size_t chunks = sample_chunk_count(n_samples);
  std::vector<Moments> parts(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    const Matrix x = sample_chunk(n_samples, d, seed, c);
    const Matrix diff = detail::apply(act, predict(x)) - detail::apply(act, x * w);
    const Vector loss = diff.rowwise().squaredNorm();
    Moments mo;
    mo.count = static_cast<double>(loss.size());
    mo.mean = loss.mean();
    mo.m2 = (loss.array() - mo.mean).square().sum();
    parts[c] = mo;
  });
  Moments total;
  for (const Moments& p : parts) {
    total = merge(total, p);
  }
  RiskReport report;
  report.method = RiskMethod::monte_carlo;
  report.value = std::max(0.0, total.mean);
  report.n_samples = n_samples;
  report.std_error = std::sqrt(total.m2 / (total.count - 1.0) / total.count);
  return report;
}

}  // namespace

std::string to_string(RiskMethod method) {
  return method == RiskMethod::exact_relu ? "exact-relu" : "monte-carlo";
}

RiskReport risk_relu_exact(const Matrix& w, const Matrix& y) {
  require_same_shape(w, y, "risk_relu_exact");
  require_finite(w, "W");
  require_finite(y, "Y");
  // Per column: 1/2 (|w| - |y|)^2 + |w||y| (1 - sqrt_h), with the angle taken
  // from unit-vector differences so that y = w gives exactly zero.
  double value = 0.0;
  for (Index i = 0; i < w.cols(); ++i) {
    const double nw = w.col(i).norm();
    const double ny = y.col(i).norm();
    value += 0.5 * (nw - ny) * (nw - ny);
    if (nw == 0.0 || ny == 0.0) {
      continue;
    }
    const Vector a = w.col(i) / nw;
    const Vector b = y.col(i) / ny;
    const double theta = 2.0 * std::atan2((a - b).norm(), (a + b).norm());
    const double half = std::sin(0.5 * theta);
    const double gap = 2.0 * half * half + (theta * std::cos(theta) - std::sin(theta)) / std::numbers::pi;
    value += nw * ny * std::max(0.0, gap);
  }
  RiskReport report;
  report.method = RiskMethod::exact_relu;
  report.value = value;
  return report;
}

RiskReport risk_mc(const Matrix& w, const Matrix& y, const Activation& act, std::size_t n_samples,
                   RngSeed seed) {
  require_same_shape(w, y, "risk_mc");
  return monte_carlo(w, w.rows(), act, n_samples, seed, [&](const Matrix& x) { return Matrix(x * y); });
}

RiskReport risk_mc(const Matrix& w, const FactorPair& y, const Activation& act, std::size_t n_samples,
                   RngSeed seed) {
  if (y.u.rows() != w.rows() || y.v.rows() != w.cols() || y.u.cols() != y.v.cols()) {
    throw InputError("risk_mc: factor shapes do not match W");
  }
  return monte_carlo(w, w.rows(), act, n_samples, seed,
                     [&](const Matrix& x) { return Matrix((x * y.u) * y.v.transpose()); });
}

RiskGradient risk_gradient_on_batch(const Matrix& w, const Matrix& u, const Matrix& v, const Activation& act,
                                    const Matrix& x) {
  if (u.rows() != w.rows() || v.rows() != w.cols() || u.cols() != v.cols() || x.cols() != w.rows()) {
    throw InputError("risk gradient: shape mismatch between W, U, V and samples");
  }
  const double n = static_cast<double>(x.rows());
  const Matrix xu = x * u;
  const Matrix pre = xu * v.transpose();
  const Matrix resid = detail::apply(act, pre) - detail::apply(act, x * w);
  const Matrix g = (2.0 / n) * resid.cwiseProduct(detail::apply_derivative(act, pre));
  RiskGradient out;
  out.objective = resid.squaredNorm() / n;
  out.grad_u = x.transpose() * (g * v);
  out.grad_v = g.transpose() * xu;
  return out;
}

RiskGradient risk_mc_gradient(const Matrix& w, const Matrix& u, const Matrix& v, const Activation& act,
                              std::size_t n_samples, RngSeed seed) {
  if (n_samples < 1) {
    throw InputError("risk_mc_gradient needs at least one sample");
  }
  const std::size_t chunks = sample_chunk_count(n_samples);
  std::vector<RiskGradient> parts(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    parts[c] = risk_gradient_on_batch(w, u, v, act, sample_chunk(n_samples, w.rows(), seed, c));
  });
  RiskGradient out{Matrix::Zero(u.rows(), u.cols()), Matrix::Zero(v.rows(), v.cols()), 0.0};
  const double total = static_cast<double>(n_samples);
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t rows = std::min(kSampleChunkRows, n_samples - c * kSampleChunkRows);
    const double weight = static_cast<double>(rows) / total;
    out.grad_u += weight * parts[c].grad_u;
    out.grad_v += weight * parts[c].grad_v;
    out.objective += weight * parts[c].objective;
  }
  return out;
}

}  // namespace nlra
