#include "nlra/gap_analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "nlra/errors.hpp"
#include "nlra/parallel.hpp"
#include "nlra/relu_correlation.hpp"

namespace nlra {

Vector rho_svd(const Matrix& w, Index r) {
  const Index d = w.rows();
  if (r < 1 || r > d) {
    throw InputError("rho_svd: rank r=" + std::to_string(r) + " out of range [1, " + std::to_string(d) + "]");
  }
  const SvdResult dec = svd(w);
  const Index k = std::min(r, dec.singular_values.size());
  // Coordinates of W_i on the top-k left singular vectors.
  const Matrix proj = dec.u.leftCols(k).transpose() * w;
  Vector rho = Vector::Zero(w.cols());
  for (Index i = 0; i < w.cols(); ++i) {
    const double nw = w.col(i).norm();
    if (nw > 0.0) {
      rho(i) = std::clamp(proj.col(i).norm() / nw, 0.0, 1.0);
    }
  }
  return rho;
}

double gap_lower_bound(const Matrix& w, Index r) {
  const Vector rho = rho_svd(w, r);
  double sum = 0.0;
  for (Index i = 0; i < w.cols(); ++i) {
    const double diff = sqrt_h_closed(rho(i)) - rho(i);
    sum += w.col(i).squaredNorm() * diff * diff;
  }
  return sum / (2.0 * static_cast<double>(w.rows()));
}

Matrix sample_spherical_w(Index d, Index m, RngSeed seed) {
  Matrix w = sample_gaussian_matrix(d, m, seed);
  for (Index i = 0; i < m; ++i) {
    const double n = w.col(i).norm();
    if (n > 0.0) {
      w.col(i) /= n;
    }
  }
  return w;
}

std::vector<SweepRow> spherical_sweep(const SweepConfig& config,
                                      const std::function<void(const std::string&)>& notice) {
  if (config.trials < 1) {
    throw InputError("sweep needs at least one trial");
  }
  if (!(config.dim_fraction > 0.0) || !(config.width_coeff > 0.0)) {
    throw InputError("dim fraction and width coefficient must be positive");
  }
  struct Cell {
    SweepRow row;
    RngSeed seed;
  };
  std::vector<Cell> cells;
  for (Index n : config.dims) {
    const Index d = static_cast<Index>(std::llround(config.dim_fraction * static_cast<double>(n)));
    const Index m = static_cast<Index>(
        std::llround(config.width_coeff * std::pow(static_cast<double>(n), config.width_exponent)));
    for (double scale : config.rank_scales) {
      const Index r = std::max<Index>(1, static_cast<Index>(std::llround(scale * static_cast<double>(d))));
      if (n < 1 || d < 2 || m < d || r > d) {
        if (notice) {
          notice("skipping n=" + std::to_string(n) + " scale=" + std::to_string(scale) + ": d=" +
                 std::to_string(d) + " m=" + std::to_string(m) + " r=" + std::to_string(r) +
                 " is infeasible");
        }
        continue;
      }
      for (int t = 0; t < config.trials; ++t) {
        SweepRow row;
        row.n = n;
        row.d = d;
        row.m = m;
        row.r = r;
        row.trial = t;
        row.rank_scale = scale;
        cells.push_back({row, derive_seed(config.seed, {static_cast<std::uint64_t>(n), std::bit_cast<std::uint64_t>(scale),
                                                         static_cast<std::uint64_t>(t)})});
      }
    }
  }
  parallel_for(cells.size(), [&](std::size_t c) {
    SweepRow& row = cells[c].row;
    const Matrix w = sample_spherical_w(row.d, row.m, cells[c].seed);
    const Vector rho = rho_svd(w, row.r);
    row.mean_rho = rho.mean();
    row.max_rho = rho.maxCoeff();
    row.gap_bound = gap_lower_bound(w, row.r);
  });
  std::vector<SweepRow> rows;
  rows.reserve(cells.size());
  for (const Cell& c : cells) {
    rows.push_back(c.row);
  }
  return rows;
}

}  // namespace nlra
