#include "nlra/activation.hpp"

#include <charconv>
#include <cmath>
#include <string>
#include <utility>

#include "nlra/errors.hpp"
#include "nlra/quadrature.hpp"

namespace nlra {
namespace {

std::string format_param(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double parse_param(std::string_view text, std::string_view spec) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw InputError("bad activation parameter in '" + std::string(spec) + "'");
  }
  return value;
}

}  // namespace

Activation::Activation(ActivationKind kind, std::string name, double param, double c1,
                       std::vector<double> breakpoints)
    : kind_(kind), name_(std::move(name)), param_(param), c1_(c1), breakpoints_(std::move(breakpoints)) {}

Activation Activation::relu() { return Activation(ActivationKind::relu, "relu", 0.0, 0.5, {0.0}); }

Activation Activation::identity() { return Activation(ActivationKind::identity, "identity", 0.0, 1.0, {}); }

Activation Activation::leaky_relu(double slope) {
  if (!(slope >= 0.0 && slope < 1.0)) {
    throw InputError("leaky ReLU slope must lie in [0, 1)");
  }
  return Activation(ActivationKind::leaky_relu, "leaky:" + format_param(slope), slope, 0.5 * (1.0 + slope),
                    {0.0});
}

Activation Activation::swish(double beta) {
  if (!std::isfinite(beta)) {
    throw InputError("swish beta must be finite");
  }
  // z^2 (s(bz) + s(-bz)) = z^2 and the two halves are mirror images, so c1 = 1/2 for every beta.
  return Activation(ActivationKind::swish, "swish:" + format_param(beta), beta, 0.5, {});
}

Activation Activation::custom(std::string name, std::function<double(double)> eval,
                              std::function<double(double)> deriv, std::vector<double> breakpoints) {
  if (!eval || !deriv) {
    throw InputError("custom activation needs both an evaluator and a derivative");
  }
  const double c1 = gaussian_expectation([&](double z) { return z * eval(z); }, breakpoints, 64);
  Activation act(ActivationKind::custom, std::move(name), 0.0, c1, std::move(breakpoints));
  act.eval_ = std::move(eval);
  act.deriv_ = std::move(deriv);
  return act;
}

Activation Activation::parse(std::string_view spec) {
  if (spec == "relu") {
    return relu();
  }
  if (spec == "identity") {
    return identity();
  }
  if (spec.starts_with("leaky:")) {
    return leaky_relu(parse_param(spec.substr(6), spec));
  }
  if (spec.starts_with("swish:")) {
    return swish(parse_param(spec.substr(6), spec));
  }
  throw InputError("unknown activation '" + std::string(spec) + "' (expected relu, identity, leaky:A, swish:B)");
}

double Activation::operator()(double z) const {
  switch (kind_) {
    case ActivationKind::relu:
      return z > 0.0 ? z : 0.0;
    case ActivationKind::identity:
      return z;
    case ActivationKind::leaky_relu:
      return z > 0.0 ? z : param_ * z;
    case ActivationKind::swish:
      return z * sigmoid(param_ * z);
    case ActivationKind::custom:
      return eval_(z);
  }
  return 0.0;
}

double Activation::derivative(double z) const {
  switch (kind_) {
    case ActivationKind::relu:
      return z > 0.0 ? 1.0 : 0.0;
    case ActivationKind::identity:
      return 1.0;
    case ActivationKind::leaky_relu:
      return z > 0.0 ? 1.0 : param_;
    case ActivationKind::swish: {
      const double s = sigmoid(param_ * z);
      return s + param_ * z * s * (1.0 - s);
    }
    case ActivationKind::custom:
      return deriv_(z);
  }
  return 0.0;
}

}  // namespace nlra
