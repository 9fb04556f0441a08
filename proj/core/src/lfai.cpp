#include "nlra/lfai.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "nlra/approximators.hpp"
#include "nlra/errors.hpp"

namespace nlra {
namespace {

constexpr double kDivergenceFactor = 10.0;

struct Adam {
  Matrix m;
  Matrix v;

  explicit Adam(const Matrix& like) : m(Matrix::Zero(like.rows(), like.cols())), v(m) {}

  void step(Matrix& param, const Matrix& grad, const LfaiOptions& o, int t) {
    m = o.beta1 * m + (1.0 - o.beta1) * grad;
    v = o.beta2 * v + (1.0 - o.beta2) * grad.cwiseAbs2();
    const double c1 = 1.0 - std::pow(o.beta1, t);
    const double c2 = 1.0 - std::pow(o.beta2, t);
    param.array() -= o.step_size * (m.array() / c1) / ((v.array() / c2).sqrt() + o.epsilon);
  }
};

void validate(const LfaiOptions& o) {
  if (!(o.step_size > 0.0) || o.batch_size < 1 || o.max_epochs < 1 || o.steps_per_epoch < 1 ||
      o.rel_tol < 0.0 || o.eval_samples < 2) {
    throw InputError("invalid LFAI options");
  }
}

}  // namespace

Matrix truncated_normal(Index rows, Index cols, double stddev, RngSeed seed) {
  std::mt19937_64 gen(seed.value);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      double z = normal(gen);
      while (std::abs(z) > 2.0) {
        z = normal(gen);
      }
      out(i, j) = stddev * z;
    }
  }
  return out;
}

LfaiResult lfai(const Matrix& w, Index r, const Activation& act, const LfaiOptions& opts) {
  validate(opts);
  require_finite(w, "W");
  const Index d = w.rows();
  const Index m = w.cols();
  if (r < 1 || r > std::min(d, m)) {
    throw InputError("lfai: rank r=" + std::to_string(r) + " out of range");
  }

  FactorPair cur;
  if (opts.warm_start) {
    cur = spectral_init(w, r);
  } else {
    cur.u = truncated_normal(d, r, 1.0 / std::sqrt(static_cast<double>(d)), derive_seed(opts.seed, {1}));
    cur.v = truncated_normal(m, r, 1.0 / std::sqrt(static_cast<double>(r)), derive_seed(opts.seed, {2}));
  }

  const bool exact = act.kind() == ActivationKind::relu;
  const RngSeed eval_seed = derive_seed(opts.seed, {3});
  auto evaluate = [&](const FactorPair& f) {
    return exact ? risk_relu_exact(w, f.product()).value
                 : risk_mc(w, f, act, opts.eval_samples, eval_seed).value;
  };
  const double zero_risk =
      exact ? 0.5 * w.squaredNorm() : risk_mc(w, Matrix(Matrix::Zero(d, m)), act, opts.eval_samples, eval_seed).value;

  LfaiResult result;
  result.eval_method = exact ? RiskMethod::exact_relu : RiskMethod::monte_carlo;
  const double initial = evaluate(cur);
  result.eval_trace.push_back(initial);
  result.factors = cur;
  result.best_risk = initial;
  const double blowup = kDivergenceFactor * std::max(initial, 1e-6 * zero_risk);

  Adam adam_u(cur.u);
  Adam adam_v(cur.v);
  int t = 0;
  int above = 0;
  double prev = initial;
  for (int epoch = 1; epoch <= opts.max_epochs; ++epoch) {
    if (prev == 0.0) {
      break;
    }
    for (int s = 0; s < opts.steps_per_epoch; ++s) {
      const Matrix x = sample_gaussian_matrix(static_cast<Index>(opts.batch_size), d,
                                              derive_seed(opts.seed, {4, static_cast<std::uint64_t>(epoch),
                                                                      static_cast<std::uint64_t>(s)}));
      const RiskGradient g = risk_gradient_on_batch(w, cur.u, cur.v, act, x);
      ++t;
      adam_u.step(cur.u, g.grad_u, opts, t);
      adam_v.step(cur.v, g.grad_v, opts, t);
    }
    const double value = evaluate(cur);
    result.eval_trace.push_back(value);
    result.epochs_run = epoch;
    if (!std::isfinite(value) || value > blowup) {
      if (++above >= 2 || !std::isfinite(value)) {
        throw DivergenceError("LFAI diverged: evaluation risk " + std::to_string(value) + " exceeds " +
                                  std::to_string(blowup) + " for two consecutive epochs",
                              result.eval_trace);
      }
    } else {
      above = 0;
    }
    if (value < result.best_risk) {
      result.best_risk = value;
      result.best_epoch = epoch;
      result.factors = cur;
    }
    if (std::abs(prev - value) <= opts.rel_tol * std::max(prev, std::numeric_limits<double>::min())) {
      break;
    }
    prev = value;
  }
  return result;
}

}  // namespace nlra
