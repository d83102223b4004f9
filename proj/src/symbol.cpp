#include "dixmier/symbol.hpp"

#include <algorithm>
#include <cmath>

#include "dixmier/error.hpp"

namespace dixmier {

SymbolFunction SymbolFunction::power_resolvent(double order) {
  if (!(order > 0)) throw Error(ErrorCode::Validation, "resolvent order must be positive");
  SymbolFunction g;
  g.kind_ = Kind::PowerResolvent;
  g.order_ = order;
  return g;
}

SymbolFunction SymbolFunction::inverse_power(double p) {
  if (!(p > 0)) throw Error(ErrorCode::Validation, "inverse power must be positive");
  SymbolFunction g;
  g.kind_ = Kind::InversePower;
  g.order_ = p;
  return g;
}

SymbolFunction SymbolFunction::table(std::vector<double> lambdas, std::vector<double> values,
                                     double tail_order) {
  if (lambdas.size() < 2 || lambdas.size() != values.size())
    throw Error(ErrorCode::Validation, "symbol table needs at least two matching nodes");
  if (!(tail_order > 0)) throw Error(ErrorCode::Validation, "tail order must be positive");
  SymbolFunction g;
  g.kind_ = Kind::Table;
  g.order_ = tail_order;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0) || !(values[i] > 0))
      throw Error(ErrorCode::Validation, "symbol table nodes must be positive");
    if (i > 0 && (lambdas[i] <= lambdas[i - 1] || values[i] > values[i - 1]))
      throw Error(ErrorCode::Validation, "symbol table must be increasing in lambda, nonincreasing in value");
    g.log_l_.push_back(std::log(lambdas[i]));
    g.log_v_.push_back(std::log(values[i]));
  }
  return g;
}

double SymbolFunction::pow(double lambda, double s) const {
  switch (kind_) {
    case Kind::PowerResolvent:
      return std::pow(1.0 + lambda, -0.5 * order_ * s);
    case Kind::InversePower:
      if (!(lambda > 0)) throw Error(ErrorCode::Validation, "inverse power symbol evaluated at zero");
      return std::pow(lambda, -order_ * s);
    case Kind::Table: {
      double lv;
      if (lambda <= std::exp(log_l_.front())) {
        lv = log_v_.front();
      } else {
        const double ll = std::log(lambda);
        if (ll >= log_l_.back()) {
          lv = log_v_.back() - order_ * (ll - log_l_.back());
        } else {
          auto it = std::upper_bound(log_l_.begin(), log_l_.end(), ll);
          const std::size_t i = static_cast<std::size_t>(it - log_l_.begin());
          const double t = (ll - log_l_[i - 1]) / (log_l_[i] - log_l_[i - 1]);
          lv = log_v_[i - 1] + t * (log_v_[i] - log_v_[i - 1]);
        }
      }
      return std::exp(s * scale_ * lv);
    }
  }
  return 0.0;
}

double SymbolFunction::operator()(double lambda) const { return pow(lambda, 1.0); }

double SymbolFunction::decay() const {
  switch (kind_) {
    case Kind::PowerResolvent: return 0.5 * order_;
    case Kind::InversePower: return order_;
    case Kind::Table: return order_ * scale_;
  }
  return 0.0;
}

SymbolFunction SymbolFunction::power(double q) const {
  if (!(q > 0)) throw Error(ErrorCode::Validation, "symbol power must be positive");
  SymbolFunction g = *this;
  if (kind_ == Kind::Table) g.scale_ *= q;
  else g.order_ *= q;
  return g;
}

}  // namespace dixmier
