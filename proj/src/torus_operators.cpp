#include "dixmier/torus_operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dixmier/error.hpp"
#include "dixmier/linalg.hpp"
#include "dixmier/parallel.hpp"
#include "dixmier/quadrature.hpp"
#include "dixmier/random.hpp"

namespace dixmier {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kAssemblyCap = 8192;

Index diff(const SpectralMode& a, const SpectralMode& b) {
  return {a.index[0] - b.index[0], a.index[1] - b.index[1], a.index[2] - b.index[2]};
}
}  // namespace

const char* to_string(CompressionKind k) { return k == CompressionKind::Plain ? "plain" : "symmetrized"; }

const char* to_string(DixmierRoute r) {
  switch (r) {
    case DixmierRoute::Auto: return "auto";
    case DixmierRoute::SingularValues: return "singular-values";
    case DixmierRoute::HermitianSplit: return "hermitian-split";
  }
  return "?";
}

bool CompressedOperator::hermitian(double tol) const {
  const std::size_t d = dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j)
      if (std::abs(entry(i, j) - std::conj(entry(j, i))) > tol) return false;
  return true;
}

cplx CompressedOperator::trace() const {
  std::vector<double> r(dim()), im(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    r[i] = entry(i, i).real();
    im[i] = entry(i, i).imag();
  }
  return {pairwise_sum(r), pairwise_sum(im)};
}

double CompressedOperator::frobenius() const { return real ? re.norm() : cx.norm(); }

CompressedOperator compress(const FourierTable& table, const SymbolFunction& G, double s, int N,
                            CompressionKind kind) {
  if (!(s > 0)) throw Error(ErrorCode::Validation, "compression power must be positive");
  const int n = table.dim();
  if (n > 2) throw Error(ErrorCode::UnsupportedDimension, "dense compressions support n <= 2");
  if (table.band() < 2 * N)
    throw Error(ErrorCode::BandTooSmall, "Fourier band " + std::to_string(table.band()) + " below 2N = " +
                                             std::to_string(2 * N));
  CompressedOperator c;
  c.kind = kind;
  c.s = s;
  c.n = n;
  c.N = N;
  c.modes = enumerate_modes(n, N);
  const std::size_t d = c.modes.size();
  if (d > kAssemblyCap)
    throw Error(ErrorCode::DimensionCap, "block dimension " + std::to_string(d) + " above assembly cap; use the residue route");
  c.weights.resize(d);
  std::vector<double> half(d);
  for (std::size_t k = 0; k < d; ++k) {
    c.weights[k] = G.pow(c.modes[k].lap_eigenvalue, s);
    half[k] = G.pow(c.modes[k].lap_eigenvalue, 0.5 * s);
  }
  c.real = table.real_coefficients();
  if (c.real) c.re.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  else c.cx.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  // Column blocks so each worker writes contiguous column-major storage.
  parallel_for(d, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k)
      for (std::size_t j = 0; j < d; ++j) {
        const cplx h = table(diff(c.modes[j], c.modes[k]));
        const cplx v = kind == CompressionKind::Plain ? h * c.weights[k] : half[j] * h * half[k];
        const auto jj = static_cast<Eigen::Index>(j), kk = static_cast<Eigen::Index>(k);
        if (c.real) c.re(jj, kk) = v.real();
        else c.cx(jj, kk) = v;
      }
  }, 16);
  return c;
}

CompressedOperator compress(const TorusFunction& f, const SymbolFunction& G, double s, int N,
                            CompressionKind kind) {
  return compress(fourier_coefficients(f, 2 * N), G, s, N, kind);
}

HsFormulaResult hs_norm_formula(const TorusFunction& f, const SymbolFunction& G, double s) {
  HsFormulaResult r;
  const int n = f.dim();
  double gsum = kInf;
  if (2 * s > G.threshold(n)) gsum = zeta_sum(G, 2 * s, n, n == 1 ? 4096 : 256).estimate();
  const double groot = std::sqrt(gsum);
  if (!f.singular()) {
    r.l2_norm = f.lp_norm(2);
    r.value = r.l2_norm * groot;
    r.finite = std::isfinite(r.value);
    if (!r.finite) r.diagnostic = "G^{2s} not summable";
    return r;
  }
  // Dyadic shells [2^{-j-1}, 2^{-j}] toward the singularity.
  const int max_depth = 48;
  std::vector<double> shell(static_cast<std::size_t>(max_depth) + 1, 0.0);
  parallel_for(static_cast<std::size_t>(max_depth), [&](std::size_t b, std::size_t e) {
    for (std::size_t j = b + 1; j <= e; ++j) {
      const double lo = std::ldexp(1.0, -static_cast<int>(j) - 1), hi = std::ldexp(1.0, -static_cast<int>(j));
      shell[j] = integrate([&](double t) { const double v = f.value(t); return v * v; }, lo, hi, 1e-11, 6).value;
    }
  });
  double acc = 0;
  for (int j = 1; j <= max_depth; ++j) {
    acc += shell[static_cast<std::size_t>(j)];
    if (j % 8 == 0) {
      r.depths.push_back(j);
      r.refinements.push_back(std::sqrt(2 * acc) * groot);
    }
  }
  const double ratio = shell[max_depth] / shell[max_depth - 1];
  if (!(ratio < 1.0 - 1e-12)) {
    r.finite = false;
    r.l2_norm = kInf;
    r.value = kInf;
    r.diagnostic = "not L2: dyadic contributions do not decay (ratio " + std::to_string(ratio) + ")";
    return r;
  }
  const double tail = shell[max_depth] * ratio / (1 - ratio);
  r.l2_norm = std::sqrt(2 * (acc + tail));
  r.value = r.l2_norm * groot;
  r.finite = std::isfinite(r.value);
  return r;
}

double hs_norm_matrix(const CompressedOperator& c) { return c.frobenius(); }

TraceIdentity trace_identity_check(const CompressedOperator& c, const FourierTable& table, const SymbolFunction& G) {
  TraceIdentity t;
  const cplx lhs = c.trace();
  const cplx h0 = table({0, 0, 0});
  const double z = ranked_sum(G, c.s, c.modes);
  const cplx rhs = h0 * z;
  t.lhs = lhs.real();
  t.rhs = rhs.real();
  const double den = std::abs(rhs) > 0 ? std::abs(rhs) : 1.0;
  t.defect = std::abs(lhs - rhs) / den;
  return t;
}

TraceIdentity trace_identity_check(const TorusFunction& f, const SymbolFunction& G, double s, int N,
                                   CompressionKind kind) {
  if (!(s > 1)) throw Error(ErrorCode::Validation, "trace identity needs s > 1");
  const FourierTable tab = fourier_coefficients(f, 2 * N);
  return trace_identity_check(compress(tab, G, s, N, kind), tab, G);
}

std::size_t default_dimension_cap(int n) { return n == 1 ? 4097 : 4225; }

namespace {
void check_cap(const CompressedOperator& c, std::size_t cap) {
  if (cap == 0) cap = default_dimension_cap(c.n);
  if (c.dim() > cap)
    throw Error(ErrorCode::DimensionCap, "dimension " + std::to_string(c.dim()) + " exceeds cap " +
                                             std::to_string(cap) + "; use the residue route for larger cutoffs");
}
}  // namespace

SingularSpectrum singular_spectrum(const CompressedOperator& c, std::size_t cap) {
  check_cap(c, cap);
  SingularSpectrum sp;
  if (c.hermitian()) {
    sp.values = c.real ? hermitian_eigenvalues(c.re) : hermitian_eigenvalues(c.cx);
    for (double& v : sp.values) v = std::abs(v);
    std::sort(sp.values.rbegin(), sp.values.rend());
  } else {
    sp.values = c.real ? singular_values(c.re) : singular_values(c.cx);
  }
  std::vector<double> sq(sp.values.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = sp.values[i] * sp.values[i];
  const double f2 = c.frobenius() * c.frobenius();
  sp.frobenius_defect = f2 > 0 ? std::abs(pairwise_sum(sq) - f2) / f2 : 0.0;
  if (sp.frobenius_defect > 1e-10)
    throw Error(ErrorCode::ToleranceNotMet, "singular spectrum fails the Frobenius check", sp.frobenius_defect);
  return sp;
}

std::vector<double> hermitian_part_eigenvalues(const CompressedOperator& c, std::size_t cap) {
  check_cap(c, cap);
  if (c.real) {
    Eigen::MatrixXd h = 0.5 * (c.re + c.re.transpose());
    return hermitian_eigenvalues(std::move(h));
  }
  Eigen::MatrixXcd h = 0.5 * (c.cx + c.cx.adjoint());
  return hermitian_eigenvalues(std::move(h));
}

double schatten_norm(const CompressedOperator& c, double p) {
  const auto sp = singular_spectrum(c);
  return schatten_from_values(sp.values, p);
}

bool nonnegative(const TorusFunction& f) {
  if (f.singular()) return true;
  if (const auto* g = std::get_if<GridSampled>(&f.variant()))
    return std::all_of(g->samples.begin(), g->samples.end(), [](double v) { return v >= 0; });
  if (!f.real_valued()) return false;
  const int b = std::max(f.band(), 0);
  const int Gx = std::max(64, 16 * (b + 1));
  const int Gy = f.dim() == 1 ? 1 : std::max(32, 8 * (b + 1));
  double best = kInf, bx = 0, by = 0;
  for (int i = 0; i < Gx; ++i)
    for (int j = 0; j < Gy; ++j) {
      const double x = double(i) / Gx, y = double(j) / Gy;
      const double v = f.value({x, y, 0}).real();
      if (v < best) best = v, bx = x, by = y;
    }
  double arg;
  best = std::min(best, -maximise([&](double x) { return -f.value({x, by, 0}).real(); }, bx - 1.0 / Gx, bx + 1.0 / Gx, arg));
  return best >= -1e-12;
}

DixmierBracket dixmier_bracket(const CompressedOperator& c, DixmierRoute route, bool nonnegative_symbol) {
  if (route == DixmierRoute::Auto) {
    if (c.kind == CompressionKind::Symmetrized && c.hermitian()) route = DixmierRoute::HermitianSplit;
    else route = nonnegative_symbol ? DixmierRoute::SingularValues : DixmierRoute::HermitianSplit;
  }
  DixmierBracket out;
  out.route = route;
  out.dim = c.dim();
  const std::size_t d = c.dim();
  const std::size_t k_lo = std::max<std::size_t>(2, d / 128);
  const std::size_t k_hi = std::max<std::size_t>(k_lo, d / 4);
  if (d < 4) throw Error(ErrorCode::Infeasible, "block too small for a spectral window");
  if (route == DixmierRoute::SingularValues) {
    const auto sp = singular_spectrum(c);
    out.bracket = quotient_bracket(sp.values, k_lo, k_hi);
    const auto g = gamma_sequence(sp.values);
    out.gamma_trailing = limit_bracket(std::span<const double>(g.gamma));
    out.sup_gamma = *std::max_element(g.gamma.begin(), g.gamma.end());
    return out;
  }
  const auto ev = c.hermitian() ? (c.real ? hermitian_eigenvalues(c.re) : hermitian_eigenvalues(c.cx))
                                : hermitian_part_eigenvalues(c);
  return dixmier_bracket_from_eigenvalues(ev);
}

DixmierBracket dixmier_bracket_from_eigenvalues(std::span<const double> ev) {
  DixmierBracket out;
  out.route = DixmierRoute::HermitianSplit;
  const std::size_t d = ev.size();
  out.dim = d;
  if (d < 4) throw Error(ErrorCode::Infeasible, "block too small for a spectral window");
  const std::size_t k_lo = std::max<std::size_t>(2, d / 128);
  const std::size_t k_hi = std::max<std::size_t>(k_lo, d / 4);
  std::vector<double> pos(d, 0.0), neg(d, 0.0);
  std::size_t np = 0, nn = 0;
  for (auto it = ev.rbegin(); it != ev.rend(); ++it)
    if (*it > 0) pos[np++] = *it;
  for (double v : ev)
    if (v < 0) neg[nn++] = -v;
  const auto qp = log_increment_quotients(pos), qn = log_increment_quotients(neg);
  out.bracket.k_start = k_lo;
  out.bracket.k_end = k_hi;
  out.bracket.lower = kInf;
  out.bracket.upper = -kInf;
  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    const double v = qp[k - 1] - qn[k - 1];
    out.bracket.lower = std::min(out.bracket.lower, v);
    out.bracket.upper = std::max(out.bracket.upper, v);
  }
  const auto gp = gamma_sequence(pos), gn = gamma_sequence(neg);
  std::vector<double> gd(d);
  for (std::size_t k = 0; k < d; ++k) gd[k] = gp.gamma[k] - gn.gamma[k];
  out.gamma_trailing = limit_bracket(std::span<const double>(gd));
  out.sup_gamma = std::max(*std::max_element(gp.gamma.begin(), gp.gamma.end()),
                           *std::max_element(gn.gamma.begin(), gn.gamma.end()));
  return out;
}

DixmierBracket dixmier_bracket(const TorusFunction& f, const SymbolFunction& G, CompressionKind kind, int N,
                               DixmierRoute route) {
  return dixmier_bracket(compress(f, G, 1.0, N, kind), route, nonnegative(f));
}

ResidueRoute residue_route(const TorusFunction& f, const SymbolFunction& G, CompressionKind, const ResidueOptions& opts) {
  ResidueRoute r;
  const FourierTable t0 = fourier_coefficients(f, 0);
  r.mean = t0({0, 0, 0}).real();
  r.mean_error = t0.error({0, 0, 0});
  const auto res = residue_at_one(G, f.dim(), opts);
  r.residue = res.value;
  r.residue_error = res.error;
  r.value = r.mean * res.value;
  r.error = std::abs(r.mean) * res.error + r.mean_error * std::abs(res.value);
  return r;
}

// ---------------------------------------------------------------------------
// Seeded matrix batteries.

namespace {

Eigen::MatrixXcd random_complex(SeededGenerator& g, int d) {
  Eigen::MatrixXcd x(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) x(i, j) = cplx(g.normal(), g.normal());
  return x;
}

Eigen::MatrixXcd random_positive(SeededGenerator& g, int d) {
  Eigen::MatrixXcd x = random_complex(g, d);
  Eigen::MatrixXcd a = x * x.adjoint() / double(d);
  a += 1e-2 * Eigen::MatrixXcd::Identity(d, d);
  return 0.5 * (a + a.adjoint());
}

Eigen::MatrixXcd random_hermitian(SeededGenerator& g, int d) {
  Eigen::MatrixXcd x = random_complex(g, d);
  return 0.5 * (x + x.adjoint());
}

double schatten(const Eigen::MatrixXcd& m, double p) {
  const auto s = singular_values(m);
  return schatten_from_values(s, p);
}

}  // namespace

BatteryReport battery_symmetric_products(std::uint64_t seed, int instances, int max_dim, double slack) {
  BatteryReport r{"symmetric-products", instances, 0, 0, 0.0};
  SeededGenerator g(seed);
  for (int t = 0; t < instances; ++t) {
    const int d = g.integer(2, max_dim);
    const auto A = random_positive(g, d), B = random_positive(g, d);
    const auto ra = psd_power(A, 0.5), rb = psd_power(B, 0.5);
    const auto s1 = singular_values(Eigen::MatrixXcd(ra * B * ra));
    const auto s2 = singular_values(Eigen::MatrixXcd(rb * A * rb));
    for (std::size_t i = 0; i < s1.size(); ++i) {
      const double dev = std::abs(s1[i] - s2[i]);
      ++r.checks;
      r.worst = std::max(r.worst, dev);
      if (dev > slack * std::max(1.0, s1[0])) ++r.violations;
    }
  }
  return r;
}

BatteryReport battery_three_lines(std::uint64_t seed, int instances, int max_dim, double slack) {
  BatteryReport r{"three-lines", instances, 0, 0, -kInf};
  SeededGenerator g(seed);
  for (int t = 0; t < instances; ++t) {
    const int d = g.integer(2, max_dim);
    const auto B = random_positive(g, d);
    const auto A = random_hermitian(g, d);
    const auto bh = psd_power(B, 0.5);
    const Eigen::MatrixXcd mid = bh * A * bh;
    for (double theta : {0.25, 0.5, 0.75}) {
      const Eigen::MatrixXcd skew = psd_power(B, 0.5 * (1 - theta)) * A * psd_power(B, 0.5 * (1 + theta));
      for (double p : {1.0, 2.0, 4.0}) {
        const double lhs = schatten(mid, p), rhs = schatten(skew, p);
        ++r.checks;
        r.worst = std::max(r.worst, lhs - rhs);
        if (lhs - rhs > slack * std::max(1.0, rhs)) ++r.violations;
      }
    }
  }
  return r;
}

BatteryReport battery_interpolation(std::uint64_t seed, int instances, int max_dim, double slack) {
  BatteryReport r{"interpolation", instances, 0, 0, -kInf};
  SeededGenerator g(seed);
  for (int t = 0; t < instances; ++t) {
    const int n = (max_dim >= 9 && g.uniform() < 0.25) ? 2 : 1;
    const int N = n == 1 ? g.integer(1, std::max(1, (max_dim - 1) / 2)) : 1;
    const int b = g.integer(1, 3);
    std::map<Index, cplx> coeffs;
    for (int m1 = -b; m1 <= b; ++m1)
      for (int m2 = (n == 1 ? 0 : -b); m2 <= (n == 1 ? 0 : b); ++m2)
        if (g.uniform() < 0.7) coeffs[{m1, m2, 0}] = cplx(g.normal(), g.normal());
    coeffs[{0, 0, 0}] += cplx(g.normal(), 0);
    const auto f = TorusFunction::trig_poly(n, coeffs);
    const FourierTable tab = fourier_coefficients(f, 2 * N);
    const auto modes = enumerate_modes(n, N);
    const auto d = static_cast<Eigen::Index>(modes.size());
    std::vector<double> w(modes.size());
    for (auto& x : w) x = std::exp(g.uniform(-3.0, 1.0));
    Eigen::MatrixXcd C(d, d);
    for (Eigen::Index k = 0; k < d; ++k)
      for (Eigen::Index j = 0; j < d; ++j)
        C(j, k) = tab(diff(modes[static_cast<std::size_t>(j)], modes[static_cast<std::size_t>(k)])) * w[static_cast<std::size_t>(k)];
    const auto sv = singular_values(C);
    auto check = [&](double lhs, double rhs) {
      ++r.checks;
      r.worst = std::max(r.worst, lhs - rhs);
      if (lhs - rhs > slack * std::max(1.0, rhs)) ++r.violations;
    };
    for (double p : {2.0, 4.0, kInf})
      check(schatten_from_values(sv, p), f.lp_norm(p) * schatten_from_values(w, p));
    const double f2 = f.lp_norm(2);
    for (double p : {1.25, 1.5, 1.75, 2.0}) check(schatten_from_values(sv, p), f2 * schatten_from_values(w, p));
  }
  return r;
}

}  // namespace dixmier
