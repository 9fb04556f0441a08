#pragma once

// How much the sqrt_h rescaling of the top-r SVD projection gains over plain
// truncated SVD, and sweeps over spherical weights.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nlra/linalg.hpp"

namespace nlra {

/// rho_i = |Sigma Lambda_top V_i| / |Sigma V_i| for the top-r singular
/// directions; zero columns get 0. Values are clamped to [0, 1].
Vector rho_svd(const Matrix& w, Index r);

/// (1/2d) sum_i |W_i|^2 (sqrt_h(rho_i) - rho_i)^2.
double gap_lower_bound(const Matrix& w, Index r);

/// Columns are i.i.d. Gaussian vectors normalized to unit length.
Matrix sample_spherical_w(Index d, Index m, RngSeed seed);

struct SweepRow {
  Index n = 0;
  Index d = 0;
  Index m = 0;
  Index r = 0;
  int trial = 0;
  double mean_rho = 0.0;
  double max_rho = 0.0;
  double gap_bound = 0.0;
  double rank_scale = 0.0;
};

struct SweepConfig {
  std::vector<Index> dims;
  std::vector<double> rank_scales;
  double width_exponent = 1.5;
  double width_coeff = 1.0;
  double dim_fraction = 0.2;
  int trials = 1;
  RngSeed seed{0};
};

/// One row per (n, scale, trial) with d = round(dim_fraction n),
/// m = round(width_coeff n^width_exponent), r = max(1, round(scale d)).
/// The weight matrix of a trial depends on (seed, n, trial) only, so all
/// scales of one trial see the same W. Infeasible cells are skipped and
/// reported through `notice`.
std::vector<SweepRow> spherical_sweep(const SweepConfig& config,
                                      const std::function<void(const std::string&)>& notice = {});

}  // namespace nlra
