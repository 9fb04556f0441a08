#pragma once

// Learning a low-rank ReLU layer from samples (x, relu(x^T W)): recover W
// column by column with projected gradient descent, estimate the kernel from
// a fresh sample set, then apply NKP with the estimated kernel.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "nlra/kernels.hpp"
#include "nlra/linalg.hpp"

namespace nlra {

struct SampleBatch {
  Matrix x;  ///< n x d inputs
  Matrix y;  ///< n x m outputs relu(x^T W)
};

/// Emits i.i.d. pairs for a hidden ground-truth W. Distinct streams give
/// independent sample sets.
class SampleOracle {
 public:
  SampleOracle(Matrix ground_truth, RngSeed seed);

  Index d() const noexcept { return w_.rows(); }
  Index m() const noexcept { return w_.cols(); }
  SampleBatch draw(std::size_t n, std::uint64_t stream) const;

  /// Only for scoring the learner afterwards.
  const Matrix& ground_truth() const noexcept { return w_; }

 private:
  Matrix w_;
  RngSeed seed_;
};

/// Projected gradient descent from 0 on (1/2n) sum (relu(x_k^T w) - y_k)^2,
/// projecting onto the ball of radius `radius` after each step. When `path`
/// is given, the iterate after every iteration is appended to it.
Vector recover_relu_column(const Matrix& x, const Eigen::Ref<const Vector>& y, double radius, int iters,
                           std::vector<Vector>* path = nullptr);

/// Column-wise recovery on shared inputs; y is n x m.
Matrix recover_w(const Matrix& x, const Matrix& y, double radius, int iters);

/// 1.5 times the largest column norm implied by E[relu(x^T w)^2] = |w|^2 / 2.
double estimate_radius(const Matrix& y);

enum class KernelMode { estimated, plugin };

struct LearnReport {
  double w_error = 0.0;         ///< |W_hat - W|_F
  double k_error = 0.0;         ///< |K_hat - K|_F
  double learned_risk = 0.0;    ///< exact risk of Y_hat
  double oracle_risk = 0.0;     ///< exact risk of NKP on the true W
  double suboptimality = 0.0;   ///< learned_risk - oracle_risk
  std::vector<std::string> warnings;
};

struct LearnResult {
  Matrix y_hat;
  Matrix w_hat;
  LearnReport report;
};

struct LearnOptions {
  Index rank = 1;
  std::size_t n_w = 10'000;
  std::size_t n_k = 10'000;
  double radius = 0.0;  ///< 0 means estimate_radius on the recovery samples
  int iters = 60;
  KernelMode kernel_mode = KernelMode::estimated;
};

LearnResult shallow_learn(const SampleOracle& oracle, const LearnOptions& opts);

struct DavisKahan {
  double lhs = 0.0;  ///< |V V^T - V_hat V_hat^T|_F
  double rhs = 0.0;  ///< 2 sqrt(2) |K - K_hat|_F / (lambda_r - lambda_{r+1})
  double gap = 0.0;
};

/// Throws DegenerateGapError when lambda_r - lambda_{r+1} <= 1e-12.
DavisKahan davis_kahan_check(const KernelMatrix& k_true, const KernelMatrix& k_est, Index r);

}  // namespace nlra
