#pragma once

#include "nlra/linalg.hpp"

namespace nlra {

/// Rank-r factorization Y = U V^T with U d x r and V m x r.
struct FactorPair {
  Matrix u;
  Matrix v;

  Matrix product() const { return u * v.transpose(); }
  Index rank_bound() const { return u.cols(); }
};

}  // namespace nlra
