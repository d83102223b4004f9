#pragma once

#include <vector>

namespace dixmier {

// A positive nonincreasing function G of the Laplacian eigenvalue.
class SymbolFunction {
 public:
  enum class Kind { PowerResolvent, InversePower, Table };

  // (1 + lambda)^{-order/2}; order = n gives T = (1+Delta)^{-n/2}.
  static SymbolFunction power_resolvent(double order);
  // lambda^{-p}; only for spectra bounded away from zero.
  static SymbolFunction inverse_power(double p);
  // Log-log interpolation between nodes, then a lambda^{-tail_order} tail.
  static SymbolFunction table(std::vector<double> lambdas, std::vector<double> values, double tail_order);

  Kind kind() const { return kind_; }
  double order() const { return order_; }

  double operator()(double lambda) const;
  // G(lambda)^s evaluated without forming G first.
  double pow(double lambda, double s) const;
  // G(lambda) ~ lambda^{-decay} as lambda -> infinity.
  double decay() const;
  // Smallest s for which sum over Z^n of G(lambda_m)^s converges (exclusive).
  double threshold(int n) const { return n / (2.0 * decay()); }
  // Same symbol raised to the power q: G^q.
  SymbolFunction power(double q) const;

 private:
  Kind kind_ = Kind::PowerResolvent;
  double order_ = 1.0;
  double scale_ = 1.0;  // table only: values raised to this exponent
  std::vector<double> log_l_, log_v_;
};

}  // namespace dixmier
