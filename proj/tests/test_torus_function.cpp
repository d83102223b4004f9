#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <catch_amalgamated.hpp>
#include <cmath>

#include "dixmier/error.hpp"
#include "dixmier/quadrature.hpp"
#include "dixmier/torus_function.hpp"
#include "oracles.hpp"

using namespace dixmier;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// 2 int_0^{1/2} t^{-a} cos(2 pi m t) dt from the half-line transform minus a shifted tail.
double power_coeff_oracle(double a, int m) {
  if (m == 0) return oracle::power_mean(a);
  const double w = 2 * oracle::pi * m;
  const double full = boost::math::tgamma(1 - a) * std::pow(w, a - 1) * std::sin(oracle::pi * a / 2);
  boost::math::quadrature::ooura_fourier_cos<double> oc;
  const double tail = oc.integrate([a](double u) { return std::pow(u + 0.5, -a); }, w).first;
  return 2 * (full - (m % 2 ? -1.0 : 1.0) * tail);
}

// Dyadic Gauss-Kronrod for the log-power kernel with the closed-form primitive below 2^{-61}.
double logpower_coeff_oracle(double eps, int m) {
  const double w = 2 * oracle::pi * m;
  auto f = [&](double t) { return std::cos(w * t) / (t * std::pow(-std::log(t), 1 + eps)); };
  double s = std::pow(61 * std::log(2.0), -eps) / eps;
  for (int j = 1; j <= 60; ++j) {
    const double a = std::ldexp(1.0, -j - 1), b = std::ldexp(1.0, -j);
    s += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 8, 1e-13);
  }
  return 2 * s;
}

}  // namespace

TEST_CASE("gk15 panel weights", "[fourier]") {
  const auto r = gk15_panel(0.0, 2.0);
  double sk = 0, sg = 0, m4 = 0;
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    sk += r.wk[i];
    sg += r.wg[i];
    m4 += r.wg[i] * std::pow(r.x[i] - 1, 12);
  }
  CHECK(r.x.size() == 15);
  CHECK_THAT(sk, WithinAbs(2.0, 1e-14));
  CHECK_THAT(sg, WithinAbs(2.0, 1e-14));
  CHECK_THAT(m4, WithinAbs(2.0 / 13, 1e-14));  // Gauss-7 is exact to degree 13
}

TEST_CASE("trig poly coefficients and norms", "[fourier]") {
  const auto f = TorusFunction::trig_poly(1, {{{1, 0, 0}, 0.5}, {{-1, 0, 0}, 0.5}});
  const auto t = fourier_coefficients(f, 4);
  CHECK(t({1, 0, 0}) == cplx(0.5));
  CHECK(t({-1, 0, 0}) == cplx(0.5));
  CHECK(t({0, 0, 0}) == cplx(0.0));
  CHECK(t({3, 0, 0}) == cplx(0.0));
  CHECK(f.real_valued());
  CHECK(f.band() == 1);
  CHECK_THAT(f.value(0.25), WithinAbs(0.0, 1e-15));
  CHECK_THAT(f.lp_norm(2), WithinAbs(std::sqrt(0.5), 1e-15));
  CHECK_THAT(f.lp_norm(4), WithinAbs(std::pow(3.0 / 8.0, 0.25), 1e-14));
  CHECK_THAT(f.lp_norm(INFINITY), WithinAbs(1.0, 1e-12));
  const auto sn = TorusFunction::trig_poly(1, {{{1, 0, 0}, cplx(0, -0.5)}, {{-1, 0, 0}, cplx(0, 0.5)}});
  CHECK(sn.real_valued());
  CHECK_THAT(sn.value(0.25), WithinAbs(1.0, 1e-15));
  const auto cx = TorusFunction::trig_poly(1, {{{1, 0, 0}, 1.0}});
  CHECK_FALSE(cx.real_valued());
  CHECK_THROWS_AS(fourier_coefficients(f, 2)({3, 0, 0}), Error);

  const auto g = TorusFunction::trig_poly(2, {{{0, 0, 0}, 1.0}, {{1, 1, 0}, 0.25}, {{-1, -1, 0}, 0.25}});
  CHECK_THAT(g.lp_norm(INFINITY), WithinAbs(1.5, 1e-12));
  CHECK_THAT(g.lp_norm(2), WithinAbs(std::sqrt(1.125), 1e-15));
}

TEST_CASE("singular means", "[fourier]") {
  CHECK_THAT(TorusFunction::log_power(0.5).mean(), WithinRel(4.0 / std::sqrt(std::log(2.0)), 1e-15));
  CHECK_THAT(TorusFunction::log_power(0.5).mean(), WithinAbs(4.8045, 1e-4));
  CHECK_THAT(TorusFunction::power_singularity(0.5).mean(), WithinRel(2 * std::sqrt(2.0), 1e-15));
  CHECK_THAT(TorusFunction::power_singularity(0.6).mean(), WithinAbs(3.7893, 1e-4));
  CHECK(std::isinf(TorusFunction::power_singularity(0.6).lp_norm(2)));
  CHECK(std::isfinite(TorusFunction::power_singularity(0.6).lp_norm(1.6)));
}

TEST_CASE("power singularity coefficients", "[fourier]") {
  for (double a : {0.4, 0.6}) {
    const auto tab = fourier_coefficients(TorusFunction::power_singularity(a), 512);
    CHECK(tab.max_error() < 1e-9);
    CHECK(tab.real_coefficients());
    for (int m : {0, 1, 2, 7, 100, 511, 512}) {
      const double o = power_coeff_oracle(a, m);
      CHECK_THAT(tab({m, 0, 0}).real(), WithinAbs(o, 1e-9));
      CHECK(tab({-m, 0, 0}) == tab({m, 0, 0}));
    }
  }
}

TEST_CASE("log power coefficients", "[fourier]") {
  const auto tab = fourier_coefficients(TorusFunction::log_power(0.5), 256);
  CHECK_THAT(tab({0, 0, 0}).real(), WithinRel(oracle::logpower_mean(0.5), 1e-12));
  for (int m : {1, 3, 50, 256}) CHECK_THAT(tab({m, 0, 0}).real(), WithinAbs(logpower_coeff_oracle(0.5, m), 1e-9));
}

TEST_CASE("grid sampled coefficients", "[fourier]") {
  const int R = 64;
  std::vector<double> s(R);
  for (int j = 0; j < R; ++j) s[static_cast<std::size_t>(j)] = 1.0 + std::cos(2 * oracle::pi * 3 * j / R);
  const auto f = TorusFunction::grid_sampled(1, R, s);
  const auto tab = fourier_coefficients(f, 16);
  CHECK_THAT(tab({0, 0, 0}).real(), WithinAbs(1.0, 1e-14));
  CHECK_THAT(tab({3, 0, 0}).real(), WithinAbs(0.5, 1e-14));
  CHECK_THAT(std::abs(tab({5, 0, 0})), WithinAbs(0.0, 1e-14));
  CHECK(tab.max_error() < 1e-13);
  CHECK_THROWS_AS(fourier_coefficients(f, 17), Error);

  std::vector<double> s2(R * R);
  for (int i = 0; i < R; ++i)
    for (int j = 0; j < R; ++j) s2[static_cast<std::size_t>(i * R + j)] = std::cos(2 * oracle::pi * (i + 2 * j) / R);
  const auto t2 = fourier_coefficients(TorusFunction::grid_sampled(2, R, s2), 8);
  CHECK_THAT(t2({1, 2, 0}).real(), WithinAbs(0.5, 1e-13));
  CHECK_THAT(t2({-1, -2, 0}).real(), WithinAbs(0.5, 1e-13));
  CHECK_THAT(std::abs(t2({1, -2, 0})), WithinAbs(0.0, 1e-13));
}
