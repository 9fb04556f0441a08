#include "nlra/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "nlra/errors.hpp"
#include "nlra/sampling.hpp"

namespace nlra {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::string shape_of(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_symmetric(const Matrix& k, double tol) {
  if (k.rows() != k.cols()) {
    throw InputError("expected a square matrix, got " + shape_of(k));
  }
  const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
  const double asym = (k - k.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol * scale) {
    throw InputError("matrix is not symmetric (max |K - K^T| = " + std::to_string(asym) + ")");
  }
}

}  // namespace

RngSeed derive_seed(RngSeed base, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t state = splitmix64(base.value);
  for (std::uint64_t key : keys) {
    state = splitmix64(state ^ splitmix64(key + 0x632BE59BD9B4E019ULL));
  }
  return RngSeed{state};
}

Matrix make_matrix(Index rows, Index cols, std::span<const double> row_major) {
  if (rows < 1 || cols < 1) {
    throw InputError("matrix dimensions must be positive");
  }
  if (static_cast<Index>(row_major.size()) != rows * cols) {
    throw InputError("expected " + std::to_string(rows * cols) + " entries, got " +
                     std::to_string(row_major.size()));
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const double v = row_major[static_cast<std::size_t>(i * cols + j)];
      if (!std::isfinite(v)) {
        throw InputError("non-finite entry at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
      m(i, j) = v;
    }
  }
  return m;
}

void require_finite(const Matrix& m, std::string_view what) {
  if (!m.allFinite()) {
    throw InputError(std::string(what) + " has non-finite entries");
  }
}

SvdResult svd(const Matrix& m) {
  require_finite(m, "svd input");
  const Index k = std::min(m.rows(), m.cols());
  SvdResult out;
  auto collect = [&](const auto& dec) {
    if (dec.info() != Eigen::Success) {
      throw NumericalError("SVD failed to converge for a " + shape_of(m) + " matrix");
    }
    out.u = dec.matrixU().leftCols(k);
    out.singular_values = dec.singularValues().head(k);
    out.vt = dec.matrixV().leftCols(k).transpose();
  };
  if (k <= 64) {
    Eigen::JacobiSVD<Matrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    collect(dec);
  } else {
    Eigen::BDCSVD<Matrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    collect(dec);
  }
  return out;
}

EigenPairs sym_eig_all(const Matrix& k, const LinalgTolerances& tol) {
  require_finite(k, "eigensolver input");
  require_symmetric(k, tol.symmetry);
  // Only the lower triangle is read; average first so both halves count.
  const Matrix sym = 0.5 * (k + k.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) {
    throw NumericalError("symmetric eigensolver failed for a " + shape_of(k) + " matrix");
  }
  EigenPairs out;
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  return out;
}

EigenPairs sym_eig_top_r(const Matrix& k, Index r, const LinalgTolerances& tol) {
  if (r < 1 || r > k.rows()) {
    throw InputError("rank r=" + std::to_string(r) + " out of range [1, " + std::to_string(k.rows()) + "]");
  }
  EigenPairs all = sym_eig_all(k, tol);
  return EigenPairs{all.values.head(r), all.vectors.leftCols(r)};
}

Matrix truncated_svd(const Matrix& w, Index r) {
  const Index k = std::min(w.rows(), w.cols());
  if (r < 1 || r > k) {
    throw InputError("rank r=" + std::to_string(r) + " out of range [1, " + std::to_string(k) + "]");
  }
  const SvdResult dec = svd(w);
  return dec.u.leftCols(r) * dec.singular_values.head(r).asDiagonal() * dec.vt.topRows(r);
}

Matrix sample_gaussian_matrix(Index rows, Index cols, RngSeed seed) {
  if (rows < 1 || cols < 1) {
    throw InputError("sample_gaussian_matrix needs positive dimensions");
  }
  std::mt19937_64 gen(seed.value);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      m(i, j) = normal(gen);
    }
  }
  return m;
}

Index numerical_rank(const Matrix& m, double rel_tol) {
  const Vector s = svd(m).singular_values;
  if (s.size() == 0 || s(0) == 0.0) {
    return 0;
  }
  return static_cast<Index>((s.array() > rel_tol * s(0)).count());
}

std::size_t sample_chunk_count(std::size_t n) { return (n + kSampleChunkRows - 1) / kSampleChunkRows; }

Matrix sample_chunk(std::size_t n, Index d, RngSeed seed, std::size_t index) {
  const std::size_t begin = index * kSampleChunkRows;
  if (begin >= n) {
    throw InputError("sample chunk index out of range");
  }
  const std::size_t rows = std::min(kSampleChunkRows, n - begin);
  return sample_gaussian_matrix(static_cast<Index>(rows), d, derive_seed(seed, {index}));
}

Matrix gaussian_samples(std::size_t n, Index d, RngSeed seed) {
  Matrix all(static_cast<Index>(n), d);
  for (std::size_t c = 0; c < sample_chunk_count(n); ++c) {
    const Matrix chunk = sample_chunk(n, d, seed, c);
    all.middleRows(static_cast<Index>(c * kSampleChunkRows), chunk.rows()) = chunk;
  }
  return all;
}

}  // namespace nlra
