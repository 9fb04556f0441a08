#pragma once

// Layerwise function approximation: Adam on the sampled objective over the
// factors (U, V), optionally warm started from spectral_init.

#include <cstddef>
#include <vector>

#include "nlra/activation.hpp"
#include "nlra/factor_pair.hpp"
#include "nlra/linalg.hpp"
#include "nlra/risk.hpp"

namespace nlra {

struct LfaiOptions {
  double step_size = 5e-3;
  std::size_t batch_size = 512;
  int max_epochs = 6;
  int steps_per_epoch = 128;
  double rel_tol = 1e-8;
  bool warm_start = true;
  RngSeed seed{0};
  /// Samples for the per-epoch risk estimate when the activation is not ReLU.
  std::size_t eval_samples = 100'000;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct LfaiResult {
  FactorPair factors;            ///< best iterate seen
  std::vector<double> eval_trace;  ///< entry 0 is the initial iterate, then one per epoch
  int best_epoch = 0;
  int epochs_run = 0;
  double best_risk = 0.0;
  RiskMethod eval_method = RiskMethod::exact_relu;
};

/// Throws InputError on invalid options and DivergenceError when the
/// evaluation risk stays above 10x its initial value for two epochs.
LfaiResult lfai(const Matrix& w, Index r, const Activation& act, const LfaiOptions& opts);

/// Truncated normal draws (resampled beyond two standard deviations).
Matrix truncated_normal(Index rows, Index cols, double stddev, RngSeed seed);

}  // namespace nlra
