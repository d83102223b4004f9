#include "dixmier/spectral_lattice.hpp"

#include <algorithm>
#include <boost/math/special_functions/binomial.hpp>
#include <cmath>
#include <map>

#include "dixmier/error.hpp"
#include "dixmier/parallel.hpp"
#include "dixmier/quadrature.hpp"

namespace dixmier {

namespace {

void check_dimension(int n) {
  if (n < 1 || n > 3)
    throw Error(ErrorCode::UnsupportedDimension, "dimension " + std::to_string(n) + " not in {1,2,3}");
}

// (|m|^2, multiplicity) over the cube |m|_inf <= N, ascending.
std::vector<std::pair<std::int64_t, std::int64_t>> shell_counts(int n, int N) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  if (n == 1) {
    for (std::int64_t a = 0; a <= N; ++a) out.emplace_back(a * a, a == 0 ? 1 : 2);
    return out;
  }
  const std::int64_t qmax = static_cast<std::int64_t>(n) * N * N;
  std::vector<std::int64_t> hist(static_cast<std::size_t>(qmax) + 1, 0);
  if (n == 2) {
    for (int a = -N; a <= N; ++a)
      for (int b = -N; b <= N; ++b) ++hist[static_cast<std::size_t>(a * a + b * b)];
  } else {
    for (int a = -N; a <= N; ++a)
      for (int b = -N; b <= N; ++b)
        for (int c = -N; c <= N; ++c) ++hist[static_cast<std::size_t>(a * a + b * b + c * c)];
  }
  for (std::size_t q = 0; q < hist.size(); ++q)
    if (hist[q]) out.emplace_back(static_cast<std::int64_t>(q), hist[q]);
  return out;
}

double sphere_area(int n) { return n == 1 ? 2.0 : (n == 2 ? kTwoPi : 2.0 * kTwoPi); }

// Area of {u in S^2 : u1 > b, u2 > b}.
double pair_cap(double b) {
  const double zm2 = 1.0 - 2.0 * b * b;
  if (zm2 <= 0) return 0.0;
  const double zm = std::sqrt(zm2);
  auto f = [b](double z) {
    const double c = std::min(1.0, b / std::sqrt(std::max(1e-300, 1.0 - z * z)));
    return std::max(0.0, 0.5 * M_PI - 2.0 * std::asin(c));
  };
  return 2.0 * integrate_endpoint_singular(f, 0.0, zm, 1e-13).value;
}

// Measure of unit directions leaving the cube of half-side 1/rho (rho >= 1).
double outside_area(int n, double rho) {
  if (n == 1) return 2.0;
  const double b = 1.0 / rho;
  if (n == 2) return b <= M_SQRT1_2 ? kTwoPi : 8.0 * std::acos(b);
  if (rho >= std::sqrt(3.0)) return 2.0 * kTwoPi;
  return 6.0 * kTwoPi * (1.0 - b) - 12.0 * pair_cap(b);
}

// Radial profile h(r) = G(4 pi^2 r^2)^s.
struct Radial {
  const SymbolFunction& G;
  double s;
  double operator()(double r) const { return G.pow(kFourPiSq * r * r, s); }
};

// Integral over [R, inf) of u^q h(u).
double moment_tail(const Radial& h, int q, double R) {
  if (h.G.kind() == SymbolFunction::Kind::PowerResolvent) {
    const double e = 0.5 * h.G.order() * h.s;
    const double c = kFourPiSq;
    const double R1 = std::max(R, 1.0 / M_PI);  // c R1^2 >= 4
    double head = 0.0;
    if (R1 > R) head = integrate([&](double u) { return std::pow(u, q) * h(u); }, R, R1, 1e-14).value;
    double sum = 0.0;
    double coef = 1.0;  // binom(-e, j)
    for (int j = 0; j < 400; ++j) {
      if (j > 0) coef *= (-e - (j - 1)) / j;
      const double p = 2.0 * (e + j) - q - 1.0;
      const double term = coef * std::pow(c, -e - j) * std::pow(R1, -p) / p;
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return head + sum;
  }
  return integrate_to_infinity([&](double u) { return std::pow(u, q) * h(u); }, R, 1e-13).value;
}

// Integral over the exterior of the cube of half-side a of h(max(|x| + delta, 0)).
double exterior_integral(const Radial& h, int n, double a, double delta) {
  auto hs = [&](double r) { return h(std::max(r + delta, 0.0)); };
  double near = 0.0;
  if (n >= 2) {
    auto integrand = [&](double r) { return std::pow(r, n - 1) * outside_area(n, r / a) * hs(r); };
    const double split = a * std::sqrt(2.0);
    near = integrate_endpoint_singular(integrand, a, split, 1e-13).value;
    if (n == 3) near += integrate_endpoint_singular(integrand, split, a * std::sqrt(3.0), 1e-13).value;
  }
  // Far region: full sphere, u = r + delta, (u - delta)^{n-1} expanded.
  const double R = a * std::sqrt(static_cast<double>(n));
  double far = 0.0;
  const double lo = R + delta;
  if (lo < 0) throw Error(ErrorCode::Validation, "cell shift exceeds cube radius");
  for (int q = 0; q <= n - 1; ++q) {
    const double b = boost::math::binomial_coefficient<double>(static_cast<unsigned>(n - 1),
                                                               static_cast<unsigned>(q));
    far += b * std::pow(-delta, n - 1 - q) * moment_tail(h, q, lo);
  }
  return near + sphere_area(n) * far;
}

}  // namespace

std::vector<SpectralMode> enumerate_modes(int n, int N) {
  check_dimension(n);
  if (N < 0) throw Error(ErrorCode::Validation, "cutoff must be nonnegative");
  std::vector<SpectralMode> modes;
  const int side = 2 * N + 1;
  std::size_t count = 1;
  for (int i = 0; i < n; ++i) count *= static_cast<std::size_t>(side);
  modes.reserve(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    SpectralMode m;
    std::size_t rest = idx;
    for (int i = n - 1; i >= 0; --i) {
      m.index[static_cast<std::size_t>(i)] = static_cast<int>(rest % side) - N;
      rest /= side;
    }
    for (int i = 0; i < n; ++i) {
      const std::int64_t v = m.index[static_cast<std::size_t>(i)];
      m.norm_sq += v * v;
    }
    m.lap_eigenvalue = kFourPiSq * static_cast<double>(m.norm_sq);
    modes.push_back(m);
  }
  std::sort(modes.begin(), modes.end(), [](const SpectralMode& x, const SpectralMode& y) {
    if (x.norm_sq != y.norm_sq) return x.norm_sq < y.norm_sq;
    return x.index < y.index;
  });
  for (std::size_t r = 0; r < modes.size(); ++r) modes[r].rank = r;
  return modes;
}

ZetaValue zeta_sum(const SymbolFunction& G, double s, int n, int N) {
  check_dimension(n);
  if (N < 0) throw Error(ErrorCode::Validation, "cutoff must be nonnegative");
  if (G.kind() == SymbolFunction::Kind::InversePower)
    throw Error(ErrorCode::Validation, "inverse power symbol is singular at the zero mode");
  if (!(s > G.threshold(n)))
    throw Error(ErrorCode::DivergentSum,
                "zeta sum diverges for s <= " + std::to_string(G.threshold(n)));
  const auto shells = shell_counts(n, N);
  std::vector<double> terms(shells.size());
  parallel_for(shells.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i)
      terms[i] = static_cast<double>(shells[i].second) *
                 G.pow(kFourPiSq * static_cast<double>(shells[i].first), s);
  }, 256);
  ZetaValue z;
  z.s = s;
  z.n = n;
  z.cutoff = N;
  z.partial_sum = pairwise_sum(terms);
  const Radial h{G, s};
  const double a = N + 0.5;
  const double shift = 0.5 * std::sqrt(static_cast<double>(n));
  z.tail_estimate = exterior_integral(h, n, a, 0.0);
  z.tail_lower = exterior_integral(h, n, a, shift);
  z.tail_bound = exterior_integral(h, n, a, -shift);
  return z;
}

double ranked_sum(const SymbolFunction& G, double s, const std::vector<SpectralMode>& modes) {
  std::vector<double> w(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) w[i] = G.pow(modes[i].lap_eigenvalue, s);
  return pairwise_sum(w);
}

int default_residue_cutoff(int n) {
  check_dimension(n);
  return n == 1 ? (1 << 14) : (n == 2 ? 256 : 48);
}

ResidueEstimate richardson_ratio2(const std::vector<double>& samples, int order) {
  if (samples.size() < static_cast<std::size_t>(order) + 2)
    throw Error(ErrorCode::Validation, "grid too short for the extrapolation order");
  const std::size_t m = samples.size();
  std::vector<std::vector<double>> R(m, std::vector<double>(static_cast<std::size_t>(order) + 1, 0.0));
  for (std::size_t j = 0; j < m; ++j) {
    R[j][0] = samples[j];
    for (int k = 1; k <= order && static_cast<std::size_t>(k) <= j; ++k) {
      const double p = std::ldexp(1.0, k);
      R[j][static_cast<std::size_t>(k)] =
          (p * R[j][static_cast<std::size_t>(k - 1)] - R[j - 1][static_cast<std::size_t>(k - 1)]) / (p - 1.0);
    }
  }
  const auto ko = static_cast<std::size_t>(order);
  ResidueEstimate r;
  r.samples = samples;
  r.value = R[m - 1][ko];
  r.error = std::abs(R[m - 1][ko] - R[m - 2][ko]);
  // Contraction check on the last three increments of the top column.
  if (m >= ko + 3) {
    const double d1 = std::abs(R[m - 2][ko] - R[m - 3][ko]);
    const double d2 = r.error;
    const double scale = std::max(1e-14 * std::abs(r.value), 1e-300);
    if (d2 > d1 && d2 > scale) {
      r.converged = false;
      r.diagnostic = "extrapolation table not contracting";
    }
  }
  return r;
}

ResidueEstimate residue_at_one(const SymbolFunction& G, int n, const ResidueOptions& opts) {
  check_dimension(n);
  if (opts.j_min < 1 || opts.j_max <= opts.j_min)
    throw Error(ErrorCode::Validation, "invalid residue grid");
  if (G.threshold(n) > 1.0 + 1e-12)
    throw Error(ErrorCode::DivergentSum, "no simple pole at s = 1 for this symbol");
  const int N = opts.cutoff >= 0 ? opts.cutoff : default_residue_cutoff(n);
  std::vector<double> s_grid, samples;
  for (int j = opts.j_min; j <= opts.j_max; ++j) {
    const double h = std::ldexp(1.0, -j);
    const double s = 1.0 + h;
    s_grid.push_back(s);
    samples.push_back(h * zeta_sum(G, s, n, N).estimate());
  }
  ResidueEstimate r = richardson_ratio2(samples, opts.order);
  r.s_grid = s_grid;
  return r;
}

}  // namespace dixmier
