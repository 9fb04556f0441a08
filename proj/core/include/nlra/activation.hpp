#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nlra {

enum class ActivationKind { relu, identity, leaky_relu, swish, custom };

/// An elementwise activation together with the first Hermite coefficient
/// c1 = E_{z~N(0,1)}[z * sigma(z)].
///
/// Piecewise-smooth activations list their kinks in breakpoints(); the
/// quadrature in kernel_general splits its integration ranges there.
/// Derivatives at a kink take the left branch, so ReLU'(0) = 0.
class Activation {
 public:
  static Activation relu();
  static Activation identity();
  /// max(z, slope * z) for slope in [0, 1).
  static Activation leaky_relu(double slope);
  /// z * sigmoid(beta * z).
  static Activation swish(double beta);
  /// User-supplied activation; c1 is obtained by quadrature.
  static Activation custom(std::string name, std::function<double(double)> eval,
                           std::function<double(double)> deriv,
                           std::vector<double> breakpoints = {});

  /// Parses "relu", "identity", "leaky:A" or "swish:B".
  static Activation parse(std::string_view spec);

  double operator()(double z) const;
  double derivative(double z) const;

  ActivationKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  double parameter() const noexcept { return param_; }
  double c1() const noexcept { return c1_; }
  bool easily_invertible() const noexcept { return c1_ > 0.0; }
  std::span<const double> breakpoints() const noexcept { return breakpoints_; }

 private:
  Activation(ActivationKind kind, std::string name, double param, double c1,
             std::vector<double> breakpoints);

  ActivationKind kind_;
  std::string name_;
  double param_ = 0.0;
  double c1_ = 0.0;
  std::vector<double> breakpoints_;
  std::function<double(double)> eval_;
  std::function<double(double)> deriv_;
};

}  // namespace nlra
