#pragma once

// Dense linear algebra primitives and the RNG contract shared by every module.

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string_view>

#include <Eigen/Dense>

namespace nlra {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Seed for every random stream in the library. Equal seeds give
/// bit-identical streams on one platform.
struct RngSeed {
  std::uint64_t value = 0;

  friend bool operator==(RngSeed, RngSeed) = default;
};

/// Derives an independent child seed from `base` and a key path with a
/// splitmix64 mix. Used to fan one user seed out to chunks, cells and epochs.
RngSeed derive_seed(RngSeed base, std::initializer_list<std::uint64_t> keys);

struct LinalgTolerances {
  double symmetry = 1e-10;
};

/// Builds a rows x cols matrix from row-major data, rejecting non-finite
/// entries and a length mismatch.
Matrix make_matrix(Index rows, Index cols, std::span<const double> row_major);

/// Throws InputError naming `what` if `m` has a NaN or Inf entry.
void require_finite(const Matrix& m, std::string_view what);

struct SvdResult {
  Matrix u;                ///< rows x k, orthonormal columns
  Vector singular_values;  ///< k entries, non-increasing
  Matrix vt;               ///< k x cols, orthonormal rows
};

/// Thin SVD with k = min(rows, cols).
SvdResult svd(const Matrix& m);

struct EigenPairs {
  Vector values;   ///< descending
  Matrix vectors;  ///< one eigenvector per column
};

/// Top-r eigenpairs of a symmetric matrix.
EigenPairs sym_eig_top_r(const Matrix& k, Index r, const LinalgTolerances& tol = {});

/// All eigenpairs of a symmetric matrix, sorted descending.
EigenPairs sym_eig_all(const Matrix& k, const LinalgTolerances& tol = {});

/// Frobenius-optimal rank-r approximation (Eckart-Young).
Matrix truncated_svd(const Matrix& w, Index r);

/// I.i.d. N(0, 1) entries, filled in row-major order from one
/// mt19937_64 stream seeded with `seed`.
Matrix sample_gaussian_matrix(Index rows, Index cols, RngSeed seed);

/// Number of singular values above rel_tol * sigma_1.
Index numerical_rank(const Matrix& m, double rel_tol = 1e-8);

}  // namespace nlra
