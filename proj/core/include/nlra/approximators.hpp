#pragma once

// Rank-r approximations of a weight matrix W (d x m): spectral factors,
// kernel PCA (NKP) and the ReLU SVD mask search. LFAI lives in lfai.hpp.

#include <cstdint>
#include <string>
#include <vector>

#include "nlra/activation.hpp"
#include "nlra/factor_pair.hpp"
#include "nlra/kernels.hpp"
#include "nlra/linalg.hpp"

namespace nlra {

/// U_r Sigma_r^{1/2} and V_r Sigma_r^{1/2} from the SVD of w.
FactorPair spectral_init(const Matrix& w, Index r);

struct NkpResult {
  Matrix y;                       ///< W V_K V_K^T
  Matrix basis;                   ///< V_K, m x r
  Vector eigenvalues;             ///< all kernel eigenvalues, descending
  std::vector<std::string> warnings;
};

/// Kernel PCA low-rank approximation. Throws UnsupportedActivationError when
/// c1 <= 0.
NkpResult nkp(const Matrix& w, Index r, const Activation& act);

/// Y = W V V^T with V the top-r eigenvectors of a supplied kernel. Used by
/// the learning pipeline with an estimated kernel.
NkpResult nkp_with_kernel(const Matrix& w, const KernelMatrix& k, Index r);

/// r distinct singular directions, kept sorted ascending.
class LambdaMask {
 public:
  LambdaMask(std::vector<Index> selected, Index d);
  static LambdaMask top(Index r, Index d);

  const std::vector<Index>& selected() const noexcept { return selected_; }
  Index size() const noexcept { return static_cast<Index>(selected_.size()); }

  friend bool operator==(const LambdaMask&, const LambdaMask&) = default;

 private:
  std::vector<Index> selected_;
};

inline constexpr std::uint64_t kDefaultSubsetCap = 10'000'000;

struct ReluSvdResult {
  Matrix y;
  LambdaMask mask;
  Vector rho;   ///< per-column correlation with the masked projection
  Vector beta;  ///< per-column norm of y, |W_i| sqrt_h(rho_i)
  double score = 0.0;
};

/// Enumerates every r-subset of the d singular directions (lexicographic
/// order, first maximum wins) and returns the best rescaled projection.
/// Throws BudgetError when C(d, r) exceeds subset_cap.
ReluSvdResult relu_svd(const Matrix& w, Index r, std::uint64_t subset_cap = kDefaultSubsetCap);

/// sum_i |W_i|^2 h(rho_i) for the given mask.
double relu_svd_score(const Matrix& w, const LambdaMask& mask);

/// The rescaled projection for a fixed mask.
ReluSvdResult relu_svd_for_mask(const Matrix& w, const LambdaMask& mask);

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

}  // namespace nlra
