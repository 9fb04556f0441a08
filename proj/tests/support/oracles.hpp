#pragma once

// Reference computations for tests. Written against first principles
// (arc-cosine angle form, plain Monte Carlo with its own RNG, Simpson
// quadrature) rather than the library's code paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>

#include <Eigen/Dense>

namespace nlra::testing {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline double relu(double z) { return z > 0.0 ? z : 0.0; }

inline Mat random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937 gen(static_cast<std::uint32_t>(seed * 2654435761u + 17));
  std::normal_distribution<double> n(0.0, 1.0);
  Mat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      m(i, j) = n(gen);
    }
  }
  return m;
}

inline Mat unit_columns(Mat m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    m.col(j).normalize();
  }
  return m;
}

// E[relu(x.z) relu(y.z)] via the angle form (1/2pi)|x||y|(sin t + (pi - t) cos t).
inline double arccos_kernel_half(const Vec& x, const Vec& y) {
  const double a = x.norm();
  const double b = y.norm();
  if (a == 0.0 || b == 0.0) {
    return 0.0;
  }
  const double c = std::clamp(x.dot(y) / (a * b), -1.0, 1.0);
  const double t = std::acos(c);
  return a * b * (std::sin(t) + (std::numbers::pi - t) * c) / (2.0 * std::numbers::pi);
}

inline double exact_risk(const Mat& w, const Mat& y) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < w.cols(); ++i) {
    r += arccos_kernel_half(w.col(i), w.col(i)) + arccos_kernel_half(y.col(i), y.col(i)) -
         2.0 * arccos_kernel_half(w.col(i), y.col(i));
  }
  return r;
}

// d/dY of the exact risk. Per column: Y_i - (|W_i|/pi)(sqrt(1-rho^2) yhat + (pi - acos rho) what).
inline Mat exact_risk_gradient(const Mat& w, const Mat& y) {
  Mat g = y;
  for (Eigen::Index i = 0; i < w.cols(); ++i) {
    const double a = w.col(i).norm();
    const double b = y.col(i).norm();
    if (a == 0.0) {
      continue;
    }
    const Vec wh = w.col(i) / a;
    if (b == 0.0) {
      // One-sided derivative is direction dependent; push along W_i.
      g.col(i) -= a / std::numbers::pi * wh;
      continue;
    }
    const Vec yh = y.col(i) / b;
    const double rho = std::clamp(wh.dot(yh), -1.0, 1.0);
    g.col(i) -= a / std::numbers::pi * (std::sqrt(1.0 - rho * rho) * yh + (std::numbers::pi - std::acos(rho)) * wh);
  }
  return g;
}

// Gradient descent with backtracking on the exact risk over Y = U V^T.
inline double refine_rank_r(const Mat& w, Mat u, Mat v, int iters) {
  double step = 0.1;
  double f = exact_risk(w, u * v.transpose());
  for (int t = 0; t < iters; ++t) {
    const Mat g = exact_risk_gradient(w, u * v.transpose());
    const Mat gu = g * v;
    const Mat gv = g.transpose() * u;
    const double gn = gu.squaredNorm() + gv.squaredNorm();
    if (gn < 1e-24) {
      break;
    }
    step *= 2.0;
    while (step > 1e-14) {
      const Mat nu = u - step * gu;
      const Mat nv = v - step * gv;
      const double nf = exact_risk(w, nu * nv.transpose());
      if (nf <= f - 1e-4 * step * gn) {
        u = nu;
        v = nv;
        f = nf;
        break;
      }
      step *= 0.5;
    }
    if (step <= 1e-14) {
      break;
    }
  }
  return f;
}

inline double best_of_restarts(const Mat& w, Eigen::Index r, int restarts, std::uint64_t seed, int iters = 400) {
  double best = exact_risk(w, Mat::Zero(w.rows(), w.cols()));
  const double scale = std::sqrt(w.norm() / std::sqrt(static_cast<double>(r * w.cols())));
  for (int k = 0; k < restarts; ++k) {
    const Mat u = scale * random_matrix(w.rows(), r, seed * 1000 + 2 * static_cast<std::uint64_t>(k));
    const Mat v = scale * random_matrix(w.cols(), r, seed * 1000 + 2 * static_cast<std::uint64_t>(k) + 1);
    best = std::min(best, refine_rank_r(w, u, v, iters));
  }
  return best;
}

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

inline McEstimate mc_relu_kernel(const Vec& x, const Vec& y, int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed ^ 0xA5A5A5A5ULL);
  std::normal_distribution<double> nd(0.0, 1.0);
  Vec z(x.size());
  double s = 0.0;
  double s2 = 0.0;
  for (int k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      z(i) = nd(gen);
    }
    const double v = relu(x.dot(z)) * relu(y.dot(z));
    s += v;
    s2 += v * v;
  }
  const double mean = s / n;
  const double var = (s2 / n - mean * mean) * n / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

// Composite Simpson for E_{z~N(0,1)}[f(z)] on [-12, 12].
inline double simpson_gaussian(const std::function<double(double)>& f, int intervals = 200000) {
  const double lo = -12.0;
  const double hi = 12.0;
  const double hstep = (hi - lo) / intervals;
  auto g = [&](double z) { return f(z) * std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); };
  double s = g(lo) + g(hi);
  for (int i = 1; i < intervals; ++i) {
    s += (i % 2 ? 4.0 : 2.0) * g(lo + i * hstep);
  }
  return s * hstep / 3.0;
}

}  // namespace nlra::testing
