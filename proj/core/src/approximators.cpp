#include "nlra/approximators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "nlra/errors.hpp"
#include "nlra/parallel.hpp"
#include "nlra/relu_correlation.hpp"

namespace nlra {
namespace {

constexpr double kEigenGapTol = 1e-12;

void check_rank(Index r, Index hi, const char* what) {
  if (r < 1 || r > hi) {
    throw InputError(std::string(what) + ": rank r=" + std::to_string(r) + " out of range [1, " +
                     std::to_string(hi) + "]");
  }
}

// Full d x d left basis and the coordinates A = U^T W.
struct LeftBasis {
  Matrix u;
  Matrix coords;
};

LeftBasis left_basis(const Matrix& w) {
  require_finite(w, "W");
  LeftBasis out;
  if (std::min(w.rows(), w.cols()) <= 64) {
    Eigen::JacobiSVD<Matrix> dec(w, Eigen::ComputeFullU);
    if (dec.info() != Eigen::Success) {
      throw NumericalError("SVD failed to converge for the weight matrix");
    }
    out.u = dec.matrixU();
  } else {
    Eigen::BDCSVD<Matrix> dec(w, Eigen::ComputeFullU);
    if (dec.info() != Eigen::Success) {
      throw NumericalError("SVD failed to converge for the weight matrix");
    }
    out.u = dec.matrixU();
  }
  out.coords = out.u.transpose() * w;
  return out;
}

double masked_score(const Matrix& sq, const Vector& norms2, const std::vector<Index>& mask) {
  double score = 0.0;
  for (Index i = 0; i < sq.cols(); ++i) {
    if (norms2(i) <= 0.0) {
      continue;
    }
    double proj = 0.0;
    for (Index k : mask) {
      proj += sq(k, i);
    }
    const double rho = std::min(1.0, std::sqrt(proj / norms2(i)));
    score += norms2(i) * h(rho);
  }
  return score;
}

std::vector<Index> unrank_combination(std::uint64_t rank, Index d, Index r) {
  std::vector<Index> out(static_cast<std::size_t>(r));
  Index x = 0;
  for (Index i = 0; i < r; ++i) {
    while (true) {
      const std::uint64_t count = binomial(static_cast<std::uint64_t>(d - 1 - x), static_cast<std::uint64_t>(r - 1 - i));
      if (rank < count) {
        break;
      }
      rank -= count;
      ++x;
    }
    out[static_cast<std::size_t>(i)] = x++;
  }
  return out;
}

bool next_combination(std::vector<Index>& c, Index d) {
  const Index r = static_cast<Index>(c.size());
  Index i = r - 1;
  while (i >= 0 && c[static_cast<std::size_t>(i)] == d - r + i) {
    --i;
  }
  if (i < 0) {
    return false;
  }
  ++c[static_cast<std::size_t>(i)];
  for (Index j = i + 1; j < r; ++j) {
    c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  }
  return true;
}

ReluSvdResult build(const Matrix& w, const LeftBasis& basis, const LambdaMask& mask) {
  const Index d = w.rows();
  const Index m = w.cols();
  ReluSvdResult out{Matrix::Zero(d, m), mask, Vector::Zero(m), Vector::Zero(m), 0.0};
  const auto& sel = mask.selected();
  for (Index i = 0; i < m; ++i) {
    const double nw = w.col(i).norm();
    if (nw == 0.0) {
      continue;
    }
    Vector proj = Vector::Zero(d);
    for (Index k : sel) {
      proj += basis.coords(k, i) * basis.u.col(k);
    }
    const double pn = proj.norm();
    const double rho = std::min(1.0, pn / nw);
    const double beta = nw * sqrt_h_closed(rho);
    // Zero projection: any direction in the span is equally good; use the
    // first selected one (largest singular value).
    const Vector dir = pn > 0.0 ? Vector(proj / pn) : Vector(basis.u.col(sel.front()));
    // A column the mask captures to rounding is reproduced exactly.
    const bool captured = (w.col(i) - proj).norm() <= 64.0 * std::numeric_limits<double>::epsilon() * nw;
    out.y.col(i) = captured ? Vector(w.col(i)) : Vector(beta * dir);
    out.rho(i) = pn > 0.0 ? rho : 0.0;
    out.beta(i) = beta;
    out.score += nw * nw * h(out.rho(i));
  }
  return out;
}

}  // namespace

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) {
    return 0;
  }
  k = std::min(k, n - k);
  std::uint64_t acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // acc * (n - k + i) / i is an integer; cancel the gcd first so the
    // product only overflows when the result does.
    const std::uint64_t g = std::gcd(acc, i);
    const std::uint64_t factor = (n - k + i) / (i / g);
    acc /= g;
    if (acc > std::numeric_limits<std::uint64_t>::max() / factor) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    acc *= factor;
  }
  return acc;
}

FactorPair spectral_init(const Matrix& w, Index r) {
  check_rank(r, std::min(w.rows(), w.cols()), "spectral_init");
  const SvdResult dec = svd(w);
  const Vector root = dec.singular_values.head(r).cwiseSqrt();
  return FactorPair{dec.u.leftCols(r) * root.asDiagonal(), dec.vt.topRows(r).transpose() * root.asDiagonal()};
}

NkpResult nkp_with_kernel(const Matrix& w, const KernelMatrix& k, Index r) {
  if (k.size() != w.cols()) {
    throw InputError("kernel size " + std::to_string(k.size()) + " does not match " +
                     std::to_string(w.cols()) + " columns");
  }
  check_rank(r, w.cols(), "nkp");
  const EigenPairs eig = sym_eig_all(k.values());
  NkpResult out;
  out.eigenvalues = eig.values;
  out.basis = eig.vectors.leftCols(r);
  out.y = w * out.basis * out.basis.transpose();
  if (r < w.cols()) {
    const double gap = eig.values(r - 1) - eig.values(r);
    if (gap <= kEigenGapTol * std::max(1.0, std::abs(eig.values(0)))) {
      out.warnings.push_back("eigen-gap lambda_r - lambda_{r+1} = " + std::to_string(gap) +
                             " is below tolerance; the rank-" + std::to_string(r) +
                             " subspace is not unique");
    }
  }
  return out;
}

NkpResult nkp(const Matrix& w, Index r, const Activation& act) {
  if (!act.easily_invertible()) {
    throw UnsupportedActivationError("activation '" + act.name() + "' has c1 = " + std::to_string(act.c1()) +
                                     " <= 0 and cannot be used with NKP");
  }
  check_rank(r, w.cols(), "nkp");
  return nkp_with_kernel(w, kernel_matrix(w, act), r);
}

LambdaMask::LambdaMask(std::vector<Index> selected, Index d) : selected_(std::move(selected)) {
  std::sort(selected_.begin(), selected_.end());
  if (selected_.empty()) {
    throw InputError("mask must select at least one direction");
  }
  if (std::adjacent_find(selected_.begin(), selected_.end()) != selected_.end()) {
    throw InputError("mask indices must be distinct");
  }
  if (selected_.front() < 0 || selected_.back() >= d) {
    throw InputError("mask index out of range [0, " + std::to_string(d) + ")");
  }
}

LambdaMask LambdaMask::top(Index r, Index d) {
  check_rank(r, d, "mask");
  std::vector<Index> idx(static_cast<std::size_t>(r));
  for (Index i = 0; i < r; ++i) {
    idx[static_cast<std::size_t>(i)] = i;
  }
  return LambdaMask(std::move(idx), d);
}

double relu_svd_score(const Matrix& w, const LambdaMask& mask) {
  const LeftBasis basis = left_basis(w);
  if (mask.selected().back() >= w.rows()) {
    throw InputError("mask does not fit the row dimension of W");
  }
  return masked_score(basis.coords.cwiseAbs2(), w.colwise().squaredNorm().transpose(), mask.selected());
}

ReluSvdResult relu_svd_for_mask(const Matrix& w, const LambdaMask& mask) {
  if (mask.selected().back() >= w.rows()) {
    throw InputError("mask does not fit the row dimension of W");
  }
  return build(w, left_basis(w), mask);
}

ReluSvdResult relu_svd(const Matrix& w, Index r, std::uint64_t subset_cap) {
  const Index d = w.rows();
  check_rank(r, d, "relu_svd");
  const std::uint64_t total = binomial(static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(r));
  if (total > subset_cap) {
    throw BudgetError("relu_svd would enumerate C(" + std::to_string(d) + ", " + std::to_string(r) +
                          ") = " + std::to_string(total) + " subsets, above the cap of " +
                          std::to_string(subset_cap),
                      total);
  }
  const LeftBasis basis = left_basis(w);
  const Matrix sq = basis.coords.cwiseAbs2();
  const Vector norms2 = w.colwise().squaredNorm().transpose();

  const std::uint64_t blocks = std::min<std::uint64_t>(total, 4 * thread_count());
  struct Best {
    double score = -1.0;
    std::vector<Index> mask;
  };
  std::vector<Best> best(static_cast<std::size_t>(blocks));
  parallel_for(static_cast<std::size_t>(blocks), [&](std::size_t b) {
    const std::uint64_t begin = total / blocks * b + std::min<std::uint64_t>(b, total % blocks);
    const std::uint64_t count = total / blocks + (b < total % blocks ? 1 : 0);
    std::vector<Index> comb = unrank_combination(begin, d, r);
    Best local;
    for (std::uint64_t k = 0; k < count; ++k) {
      const double s = masked_score(sq, norms2, comb);
      if (s > local.score) {
        local.score = s;
        local.mask = comb;
      }
      if (k + 1 < count) {
        next_combination(comb, d);
      }
    }
    best[b] = std::move(local);
  });
  Best winner;
  for (const Best& b : best) {
    if (b.score > winner.score) {
      winner = b;
    }
  }
  return build(w, basis, LambdaMask(winner.mask, d));
}

}  // namespace nlra
