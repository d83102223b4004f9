#include "dixmier/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>

namespace dixmier {

PanelRule gk15_panel(double a, double b) {
  using K = boost::math::quadrature::gauss_kronrod<double, 15>;
  using G = boost::math::quadrature::gauss<double, 7>;
  const auto& xk = K::abscissa();
  const auto& wk = K::weights();
  const auto& wg = G::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  PanelRule r;
  // Kronrod abscissae alternate Gauss (odd position) and Kronrod-only nodes; index 0 is the centre.
  for (std::size_t i = 0; i < xk.size(); ++i) {
    const bool gauss = (i % 2 == 0);
    const double g = gauss ? wg[i / 2] : 0.0;
    if (i == 0) {
      r.x.push_back(c);
      r.wk.push_back(h * wk[0]);
      r.wg.push_back(h * g);
      continue;
    }
    for (double sgn : {-1.0, 1.0}) {
      r.x.push_back(c + sgn * h * xk[i]);
      r.wk.push_back(h * wk[i]);
      r.wg.push_back(h * g);
    }
  }
  return r;
}

QuadResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                     unsigned max_depth) {
  QuadResult r;
  // Boost compares an unscaled error estimate with a scaled tolerance, which never
  // terminates on short intervals; integrate over [0, 1] instead.
  const double w = b - a;
  r.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&](double u) { return w * f(a + w * u); }, 0.0, 1.0, max_depth, rel_tol, &r.error);
  r.error = std::abs(r.error) * std::max(1.0, std::abs(r.value));
  return r;
}

QuadResult integrate_endpoint_singular(const std::function<double(double)>& f, double a, double b,
                                       double rel_tol) {
  thread_local boost::math::quadrature::tanh_sinh<double> ts(15);
  QuadResult r;
  double l1 = 0.0;
  r.value = ts.integrate(f, a, b, rel_tol, &r.error, &l1);
  return r;
}

QuadResult integrate_to_infinity(const std::function<double(double)>& f, double a, double rel_tol) {
  thread_local boost::math::quadrature::exp_sinh<double> es(12);
  QuadResult r;
  double l1 = 0.0;
  r.value = es.integrate([&](double u) { return f(a + u); }, 0.0, std::numeric_limits<double>::infinity(),
                         rel_tol, &r.error, &l1);
  return r;
}

double maximise(const std::function<double(double)>& f, double a, double b, double& arg) {
  auto res = boost::math::tools::brent_find_minima([&](double x) { return -f(x); }, a, b, 52);
  arg = res.first;
  return -res.second;
}

}  // namespace dixmier
