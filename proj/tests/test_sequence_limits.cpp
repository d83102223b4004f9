#include <catch_amalgamated.hpp>
#include <cmath>

#include "dixmier/error.hpp"
#include "dixmier/random.hpp"
#include "dixmier/sequence_limits.hpp"
#include "dixmier/spectral_lattice.hpp"
#include "oracles.hpp"

using namespace dixmier;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
BoundedSequence constant(double c, std::size_t K) { return {std::vector<double>(K, c), Provenance::ExactFormula}; }
std::vector<double> harmonic_mu(std::size_t K) {
  std::vector<double> mu(K);
  for (std::size_t i = 0; i < K; ++i) mu[i] = 1.0 / static_cast<double>(i + 1);
  return mu;
}
}  // namespace

TEST_CASE("shift", "[seq]") {
  BoundedSequence a{{1, 2, 3, 4}};
  CHECK(shift(a, 1).values == std::vector<double>{2, 3, 4});
  CHECK(shift(constant(2.5, 10), 7).values == std::vector<double>(3, 2.5));
  CHECK_THROWS_AS(shift(a, 4), Error);
  CHECK_THROWS_AS(shift(a, 0), Error);

  const auto g = gamma_sequence(harmonic_mu(100000));
  BoundedSequence gs{g.gamma};
  const auto sh = shift(gs, 5);
  double worst = 0;
  for (std::size_t k = 50000; k < sh.size(); ++k) worst = std::max(worst, std::abs(sh.values[k] - gs.values[k]));
  // gamma_{k+5} - gamma_k = O(1/(k log k)).
  CHECK(worst < 5.0 / (50000 * std::log(50000.0)));
}

TEST_CASE("dilate", "[seq]") {
  BoundedSequence a{{1, 2, 3}};
  CHECK(dilate(a, 2).values == std::vector<double>{1, 1, 2, 2, 3, 3});
  CHECK(dilate(constant(-1, 5), 3).values == std::vector<double>(15, -1));
  BoundedSequence alt;
  for (int k = 1; k <= 1000; ++k) alt.values.push_back(k % 2);
  const auto d = cesaro_means(dilate(alt, 2));
  CHECK_THAT(d.values.back(), WithinAbs(0.5, 1e-12));
}

TEST_CASE("averaging chain", "[seq]") {
  const auto c = averaging_chain(constant(3.0, 5000));
  for (double v : c.values) CHECK_THAT(v, WithinAbs(3.0, 1e-14));
  CHECK(c.size() == static_cast<std::size_t>(std::floor(std::log(5001.0))));

  BoundedSequence ind;
  for (int j = 1; j <= 100; ++j) ind.values.push_back(j >= 2 ? 1.0 : 0.0);
  CHECK_THAT(averaging_chain(ind).values[0], WithinAbs(1.0 - std::log(2.0), 1e-15));

  BoundedSequence d;
  for (int j = 1; j <= 1000000; ++j) d.values.push_back(std::log(static_cast<double>(j)) / j);
  const auto b = averaging_chain(d);
  CHECK(b.values.back() < 1e-3);
  CHECK(b.values.back() < b.values[b.size() / 2]);

  for (double s : averaging_weight_sums(1000000)) CHECK(std::abs(s - 1.0) <= 1e-15);
}

TEST_CASE("gamma sequence", "[seq]") {
  const std::size_t K = 1000000;
  const auto g = gamma_sequence(harmonic_mu(K));
  CHECK_THAT(g.gamma.back(), WithinAbs(oracle::harmonic(K) / std::log(1.0 + K), 1e-12));
  CHECK_THAT(g.gamma.back(), WithinAbs(1.04177, 2e-5));

  std::vector<double> geo(60);
  for (std::size_t i = 0; i < geo.size(); ++i) geo[i] = std::ldexp(1.0, -static_cast<int>(i) - 1);
  CHECK(gamma_sequence(geo).gamma.back() < 0.25);
  CHECK(riesz_seminorm(geo) < 0.3);

  CHECK_THROWS_AS(gamma_sequence(std::vector<double>{1.0, 2.0}), Error);
  CHECK_THROWS_AS(gamma_sequence(std::vector<double>{}), Error);
}

TEST_CASE("torus eigenvalues: gamma and quotients approach 1/pi", "[seq]") {
  const auto G = SymbolFunction::power_resolvent(1);
  std::vector<double> mu;
  for (const auto& m : enumerate_modes(1, 10000)) mu.push_back(G(m.lap_eigenvalue));
  const auto g = gamma_sequence(mu);
  const auto br = limit_bracket(std::span<const double>(g.gamma));
  // Raw gamma converges at speed 1/log k from above.
  CHECK(br.lower > 1.0 / oracle::pi);
  CHECK(br.upper < 1.0 / oracle::pi + 0.12);
  const auto qb = quotient_bracket(mu, mu.size() / 128, mu.size() / 4);
  CHECK(qb.contains(1.0 / oracle::pi, 2e-3));
}

TEST_CASE("limit bracket", "[seq]") {
  BoundedSequence alt;
  for (int k = 0; k < 100; ++k) alt.values.push_back(k % 2);
  auto b = limit_bracket(alt);
  CHECK(b.lower == 0.0);
  CHECK(b.upper == 1.0);
  CHECK(b.k_start == 51);
  CHECK(b.k_end == 100);
  BoundedSequence conv;
  double prev = 1e9;
  for (int K : {100, 1000, 10000}) {
    conv.values.clear();
    for (int k = 1; k <= K; ++k) conv.values.push_back(2.0 + std::sin(k) / k);
    const double w = limit_bracket(conv).width();
    CHECK(w < prev);
    prev = w;
  }
  CHECK_THROWS_AS(limit_bracket(alt, 0.0), Error);
}

TEST_CASE("weak norms", "[seq]") {
  const auto mu = harmonic_mu(1000);
  CHECK_THAT(norm_one_inf(mu), WithinRel(1.0 / std::log(2.0), 1e-15));
  CHECK(riesz_seminorm(std::vector<double>{1.0, 0.5, 0.25, 0.125}) > 0);
  CHECK_THROWS_AS(z1_norm(std::span<const TraceSample>{}), Error);

  // Torus T: Z1 estimate near 1/pi and below e * Z1 for the Riesz estimate.
  const auto G = SymbolFunction::power_resolvent(1);
  std::vector<TraceSample> curve;
  for (int j = 1; j <= 10; ++j) {
    const double s = 1.0 + std::ldexp(1.0, -j);
    curve.push_back({s, zeta_sum(G, s, 1, 4096).estimate()});
  }
  const double z1 = z1_norm(curve);
  CHECK_THAT(z1, WithinRel(1.0 / oracle::pi, 0.02));
  std::vector<double> tmu;
  for (const auto& m : enumerate_modes(1, 10000)) tmu.push_back(G(m.lap_eigenvalue));
  CHECK(riesz_seminorm(tmu) <= std::exp(1.0) * z1);
}

TEST_CASE("triangle-type bound on merged spectra", "[seq]") {
  SeededGenerator rng(20240611);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(400), b(400);
    const double pa = rng.uniform(0.8, 1.5), pb = rng.uniform(0.8, 1.5);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = rng.uniform(0.5, 2.0) * std::pow(i + 1.0, -pa);
      b[i] = rng.uniform(0.5, 2.0) * std::pow(i + 1.0, -pb);
    }
    std::sort(a.rbegin(), a.rend());
    std::sort(b.rbegin(), b.rend());
    std::vector<double> merged(a);
    merged.insert(merged.end(), b.begin(), b.end());
    std::sort(merged.rbegin(), merged.rend());
    CHECK(norm_one_inf(merged) <= norm_one_inf(a) + norm_one_inf(b) + 1e-12);
  }
}

TEST_CASE("surrogate functional reproduces limits", "[seq]") {
  BoundedSequence a;
  for (int k = 1; k <= 200000; ++k) a.values.push_back(0.7 + 1.0 / std::sqrt(k));
  CHECK_THAT(surrogate_functional(a), WithinAbs(0.7, 0.05));
}

TEST_CASE("limit preservation battery", "[seq]") {
  const auto r = limit_preservation_battery(7, 50, 100000);
  CHECK(r.sequences == 50);
  CHECK(r.checks == 50 * 7);
  CHECK(r.failures == 0);
  CHECK(r.worst <= 1.0);
}
