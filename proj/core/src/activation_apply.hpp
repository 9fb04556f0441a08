#pragma once

#include "nlra/activation.hpp"
#include "nlra/linalg.hpp"

namespace nlra::detail {

inline Matrix apply(const Activation& act, const Matrix& z) {
  if (act.kind() == ActivationKind::relu) {
    return z.cwiseMax(0.0);
  }
  if (act.kind() == ActivationKind::identity) {
    return z;
  }
  return z.unaryExpr([&](double v) { return act(v); });
}

inline Matrix apply_derivative(const Activation& act, const Matrix& z) {
  if (act.kind() == ActivationKind::relu) {
    return (z.array() > 0.0).cast<double>().matrix();
  }
  return z.unaryExpr([&](double v) { return act.derivative(v); });
}

}  // namespace nlra::detail
