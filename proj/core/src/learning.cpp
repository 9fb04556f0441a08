#include "nlra/learning.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nlra/approximators.hpp"
#include "nlra/errors.hpp"
#include "nlra/parallel.hpp"
#include "nlra/risk.hpp"
#include "nlra/sampling.hpp"

namespace nlra {
namespace {

constexpr int kMaxHalvings = 40;
constexpr double kGapTol = 1e-12;

double column_loss(const Matrix& x, const Eigen::Ref<const Vector>& y, const Vector& w) {
  return 0.5 * ((x * w).cwiseMax(0.0) - y).squaredNorm() / static_cast<double>(x.rows());
}

}  // namespace

SampleOracle::SampleOracle(Matrix ground_truth, RngSeed seed) : w_(std::move(ground_truth)), seed_(seed) {
  require_finite(w_, "ground truth W");
  if (w_.size() == 0) {
    throw InputError("ground truth W must be non-empty");
  }
}

SampleBatch SampleOracle::draw(std::size_t n, std::uint64_t stream) const {
  if (n < 1) {
    throw InputError("oracle needs n >= 1");
  }
  SampleBatch b;
  b.x = gaussian_samples(n, d(), derive_seed(seed_, {stream}));
  b.y = (b.x * w_).cwiseMax(0.0);
  return b;
}

Vector recover_relu_column(const Matrix& x, const Eigen::Ref<const Vector>& y, double radius, int iters,
                           std::vector<Vector>* path) {
  if (x.rows() == 0) {
    throw InputError("recover_relu_column needs at least one sample");
  }
  if (y.size() != x.rows()) {
    throw InputError("recover_relu_column: " + std::to_string(x.rows()) + " inputs but " +
                     std::to_string(y.size()) + " targets");
  }
  if (!(radius > 0.0) || iters < 1) {
    throw InputError("recover_relu_column needs radius > 0 and iters >= 1");
  }
  const double n = static_cast<double>(x.rows());
  const Index d = x.cols();
  Vector w = Vector::Zero(d);
  double loss = column_loss(x, y, w);
  for (int t = 0; t < iters; ++t) {
    const Vector pre = x * w;
    // Samples on the kink count as active so the first step from 0 moves.
    std::vector<Index> active;
    for (Index k = 0; k < x.rows(); ++k) {
      if (pre(k) >= 0.0) {
        active.push_back(k);
      }
    }
    Vector grad = Vector::Zero(d);
    Matrix gram = Matrix::Zero(d, d);
    if (!active.empty()) {
      const Matrix xa = x(active, Eigen::all);
      const Vector ra = pre(active).cwiseMax(0.0) - y(active);
      grad = xa.transpose() * ra / n;
      gram = xa.transpose() * xa / n;
    }
    if (grad.norm() == 0.0) {
      if (path) {
        path->push_back(w);
      }
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    const double lsum = es.eigenvalues()(0) + es.eigenvalues()(d - 1);
    double step = lsum > 0.0 ? 2.0 / lsum : 1.0;
    for (int k = 0; k <= kMaxHalvings; ++k, step *= 0.5) {
      Vector cand = w - step * grad;
      const double cn = cand.norm();
      if (cn > radius) {
        cand *= radius / cn;
      }
      const double cl = column_loss(x, y, cand);
      if (cl <= loss) {
        w = std::move(cand);
        loss = cl;
        break;
      }
    }
    if (path) {
      path->push_back(w);
    }
  }
  return w;
}

Matrix recover_w(const Matrix& x, const Matrix& y, double radius, int iters) {
  if (y.rows() != x.rows()) {
    throw InputError("recover_w: sample count mismatch between inputs and outputs");
  }
  Matrix w(x.cols(), y.cols());
  parallel_for(static_cast<std::size_t>(y.cols()), [&](std::size_t i) {
    w.col(static_cast<Index>(i)) = recover_relu_column(x, y.col(static_cast<Index>(i)), radius, iters);
  });
  return w;
}

double estimate_radius(const Matrix& y) {
  if (y.rows() == 0) {
    throw InputError("estimate_radius needs samples");
  }
  const double max_mean_sq = (y.colwise().squaredNorm() / static_cast<double>(y.rows())).maxCoeff();
  const double r = 1.5 * std::sqrt(2.0 * max_mean_sq);
  return r > 0.0 ? r : 1.0;
}

LearnResult shallow_learn(const SampleOracle& oracle, const LearnOptions& opts) {
  if (opts.n_w < 1 || opts.n_k < 1) {
    throw InputError("shallow_learn needs n_w, n_k >= 1");
  }
  if (opts.rank < 1 || opts.rank > std::min(oracle.d(), oracle.m())) {
    throw InputError("shallow_learn: rank " + std::to_string(opts.rank) + " out of range [1, " +
                     std::to_string(std::min(oracle.d(), oracle.m())) + "]");
  }
  const Matrix& w = oracle.ground_truth();
  const SampleBatch bw = oracle.draw(opts.n_w, 0);
  const double radius = opts.radius > 0.0 ? opts.radius : estimate_radius(bw.y);
  LearnResult out;
  out.w_hat = recover_w(bw.x, bw.y, radius, opts.iters);

  const KernelMatrix k_hat = opts.kernel_mode == KernelMode::estimated
                                 ? kernel_from_outputs(oracle.draw(opts.n_k, 1).y)
                                 : kernel_matrix(out.w_hat, Activation::relu());
  const NkpResult learned = nkp_with_kernel(out.w_hat, k_hat, opts.rank);
  out.y_hat = learned.y;

  const Activation relu = Activation::relu();
  const KernelMatrix k_true = kernel_matrix(w, relu);
  const NkpResult oracle_fit = nkp_with_kernel(w, k_true, opts.rank);

  LearnReport& rep = out.report;
  rep.w_error = (out.w_hat - w).norm();
  rep.k_error = (k_hat.values() - k_true.values()).norm();
  rep.learned_risk = risk_relu_exact(w, out.y_hat).value;
  rep.oracle_risk = risk_relu_exact(w, oracle_fit.y).value;
  rep.suboptimality = rep.learned_risk - rep.oracle_risk;
  rep.warnings = learned.warnings;
  return out;
}

DavisKahan davis_kahan_check(const KernelMatrix& k_true, const KernelMatrix& k_est, Index r) {
  const Index m = k_true.size();
  if (k_est.size() != m) {
    throw InputError("davis_kahan_check: kernel sizes differ");
  }
  if (r < 1 || r >= m) {
    throw InputError("davis_kahan_check: r must lie in [1, m)");
  }
  const EigenPairs a = sym_eig_all(k_true.values());
  const EigenPairs b = sym_eig_all(k_est.values());
  DavisKahan out;
  out.gap = a.values(r - 1) - a.values(r);
  if (out.gap <= kGapTol) {
    throw DegenerateGapError("eigen-gap lambda_r - lambda_{r+1} = " + std::to_string(out.gap) +
                             " vanishes; the top-r subspace is not defined");
  }
  const Matrix va = a.vectors.leftCols(r);
  const Matrix vb = b.vectors.leftCols(r);
  out.lhs = (va * va.transpose() - vb * vb.transpose()).norm();
  out.rhs = 2.0 * std::numbers::sqrt2 * (k_true.values() - k_est.values()).norm() / out.gap;
  return out;
}

}  // namespace nlra
