#include "dixmier/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "dixmier/error.hpp"
#include "dixmier/parallel.hpp"
#include "dixmier/quadrature.hpp"
#include "dixmier/spectral_lattice.hpp"
#include "dixmier/torus_operators.hpp"

namespace dixmier {

namespace {

double sqrt_logpower(double eps, double t) { return 1.0 / std::sqrt(t * std::pow(-std::log(t), 1.0 + eps)); }

double lambda_k(long k) {
  const double x = static_cast<double>(k);
  return 1.0 / std::sqrt(1.0 + kFourPiSq * x * x);
}

void check_shell(int n) {
  if (n < 1 || n > 40) throw Error(ErrorCode::Validation, "shell index must lie in [1, 40]");
}

// Composite GK15 with at least 16 panels and 8 panels per oscillation cycle; error = sum |K - G|.
ShellOverlap adaptive_overlap(double eps, int n, long k) {
  const ShellVector h = shell_vector(n);
  const double freq = kTwoPi * static_cast<double>(std::labs(k));
  const double cycles = static_cast<double>(std::labs(k)) * (h.hi - h.lo);
  const long pieces = std::max(16L, static_cast<long>(std::ceil(8 * cycles)));
  const double width = (h.hi - h.lo) / static_cast<double>(pieces);
  double sum = 0, err = 0, scale = 0;
  for (long p = 0; p < pieces; ++p) {
    const double a = h.lo + static_cast<double>(p) * width, b = p + 1 == pieces ? h.hi : a + width;
    const PanelRule r = gk15_panel(a, b);
    double vk = 0, vg = 0;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      const double g = sqrt_logpower(eps, r.x[i]);
      const double v = g * std::cos(freq * r.x[i]);
      vk += r.wk[i] * v;
      vg += r.wg[i] * v;
      scale += r.wk[i] * g;
    }
    sum += vk;
    err += std::abs(vk - vg);
  }
  const double c = 2.0 * h.amplitude;
  ShellOverlap out{cplx(c * sum, 0.0), c * err};
  if (out.error > 1e-10 * c * scale)
    throw Error(ErrorCode::ToleranceNotMet, "shell overlap quadrature did not reach 1e-10", out.error);
  return out;
}

}  // namespace

ShellVector shell_vector(int n) {
  check_shell(n);
  ShellVector h;
  h.n = n;
  h.lo = std::ldexp(1.0, -n - 1);
  h.hi = std::ldexp(1.0, -n);
  h.amplitude = std::sqrt(std::ldexp(1.0, n));
  return h;
}

ShellOverlap shell_overlap(double eps, int n, long k) {
  if (!(eps > 0)) throw Error(ErrorCode::Validation, "eps must be positive");
  if (n < 3) throw Error(ErrorCode::Validation, "shell overlaps need n >= 3");
  check_shell(n);
  return adaptive_overlap(eps, n, k);
}

long default_shell_cutoff(int n) { return 1L << std::max(n - 3, 0); }

double cosine_bound_constant(double eps) { return 0.25 * std::pow(std::log(2.0), -1.0 - eps); }

DiagonalElement diagonal_element(double eps, int n, long K) {
  if (!(eps > 0)) throw Error(ErrorCode::Validation, "eps must be positive");
  check_shell(n);
  if (K < 0 || K > (1L << 18)) throw Error(ErrorCode::Validation, "K must lie in [0, 2^18]");
  const ShellVector h = shell_vector(n);
  // At least 8K nodes, and at least two panels per oscillation cycle of the top mode.
  const double cycles = static_cast<double>(K) * (h.hi - h.lo);
  const long panels = std::max({4L, (8 * K + 14) / 15, static_cast<long>(std::ceil(2 * cycles))});
  const double pw = (h.hi - h.lo) / static_cast<double>(panels);
  std::vector<double> x, ak, ag;
  x.reserve(static_cast<std::size_t>(panels) * 15);
  for (long p = 0; p < panels; ++p) {
    const double a = h.lo + static_cast<double>(p) * pw, b = p + 1 == panels ? h.hi : a + pw;
    const PanelRule r = gk15_panel(a, b);
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      const double g = sqrt_logpower(eps, r.x[i]);
      x.push_back(r.x[i]);
      ak.push_back(r.wk[i] * g);
      ag.push_back(r.wg[i] * g);
    }
  }
  const auto nk = static_cast<std::size_t>(K) + 1;
  std::vector<double> ok(nk, 0.0), og(nk, 0.0);
  constexpr std::size_t grain = 64;
  parallel_for(nk, [&](std::size_t b, std::size_t e) {
    // Rotation recurrence, reseeded every `grain` modes.
    for (std::size_t kb = b; kb < e; kb += grain) {
      const std::size_t ke = std::min(e, kb + grain);
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double th = kTwoPi * x[i];
        std::complex<double> z = std::polar(1.0, th * static_cast<double>(kb));
        const std::complex<double> step = std::polar(1.0, th);
        for (std::size_t k = kb; k < ke; ++k) {
          ok[k] += ak[i] * z.real();
          og[k] += ag[i] * z.real();
          z *= step;
        }
      }
    }
  }, grain);
  DiagonalElement d;
  d.n = n;
  d.K = K;
  d.overlaps.resize(nk);
  std::vector<double> terms(nk), errs(nk);
  const double c = 2.0 * h.amplitude;
  for (std::size_t k = 0; k < nk; ++k) {
    const double o = c * ok[k], oe = c * std::abs(ok[k] - og[k]) + 1e-15 * c * std::abs(ok[0]);
    d.overlaps[k] = o;
    const double mult = k == 0 ? 1.0 : 2.0;
    const double lk = lambda_k(static_cast<long>(k));
    terms[k] = mult * lk * o * o;
    errs[k] = mult * lk * (2 * std::abs(o) * oe + oe * oe);
  }
  d.value = pairwise_sum(terms);
  d.error = pairwise_sum(errs);
  // Control subset against adaptive quadrature.
  std::vector<long> control{0, K / 2, K};
  control.erase(std::unique(control.begin(), control.end()), control.end());
  const double scale = std::abs(d.overlaps[0]);
  for (long k : control) {
    const double ref = adaptive_overlap(eps, n, k).value.real();
    d.control_defect = std::max(d.control_defect, std::abs(ref - d.overlaps[static_cast<std::size_t>(k)]) / scale);
  }
  if (d.control_defect > 1e-9)
    throw Error(ErrorCode::Resolution, "shell sampling disagrees with adaptive quadrature", d.control_defect);
  return d;
}

DivergenceReport hs_divergence_report(double eps, int n_max) {
  if (!(eps > 0)) throw Error(ErrorCode::Validation, "eps must be positive");
  if (n_max < 2 || n_max > 16) throw Error(ErrorCode::Validation, "n_max must lie in [2, 16]");
  DivergenceReport r;
  r.eps = eps;
  r.n_max = n_max;
  r.c0 = cosine_bound_constant(eps);
  r.c0_measured = INFINITY;
  r.c1 = INFINITY;
  double S = 0;
  for (int n = 1; n <= n_max; ++n) {
    const long K = default_shell_cutoff(n);
    const auto de = diagonal_element(eps, n, K);
    std::vector<double> lk(static_cast<std::size_t>(K) + 1);
    for (long k = 0; k <= K; ++k) lk[static_cast<std::size_t>(k)] = (k == 0 ? 1.0 : 2.0) * lambda_k(k);
    const double lsum = pairwise_sum(lk);
    S += de.value * de.value;
    r.n.push_back(n);
    r.d.push_back(de.value);
    r.d_error.push_back(de.error);
    r.partial.push_back(S);
    r.lambda_sums.push_back(lsum);
    const double nn = n;
    if (de.value + de.error < r.c0 * std::pow(nn, -1.0 - eps) * lsum) r.chain_holds = false;
    r.c0_measured = std::min(r.c0_measured, de.value * std::pow(nn, 1.0 + eps) / lsum);
    if (n >= std::min(5, n_max)) r.c1 = std::min(r.c1, de.value * std::pow(nn, eps));
  }
  const int half = n_max / 2;
  r.growth = r.partial[static_cast<std::size_t>(n_max - 1)] - r.partial[static_cast<std::size_t>(half - 1)];
  double hsum = 0;
  for (int n = half + 1; n <= n_max; ++n) hsum += std::pow(static_cast<double>(n), -2 * eps);
  r.required = 0.8 * r.c1 * r.c1 * hsum;

  // Least squares of S_N on log N for N >= 5, and of log d_n^2 on log n over the upper half.
  auto fit = [](const std::vector<double>& xs, const std::vector<double>& ys, double& slope, double& icpt,
                double& r2) {
    const double m = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
      syy += ys[i] * ys[i];
    }
    const double vx = sxx - sx * sx / m, vy = syy - sy * sy / m, cxy = sxy - sx * sy / m;
    slope = cxy / vx;
    icpt = (sy - slope * sx) / m;
    r2 = vy > 0 ? cxy * cxy / (vx * vy) : 1.0;
  };
  std::vector<double> lx, sy, ly, dy;
  for (int n = std::min(5, n_max - 1); n <= n_max; ++n) {
    lx.push_back(std::log(static_cast<double>(n)));
    sy.push_back(r.partial[static_cast<std::size_t>(n - 1)]);
  }
  fit(lx, sy, r.fit_slope, r.fit_intercept, r.fit_r2);
  for (int n = std::max(half, 1); n <= n_max; ++n) {
    ly.push_back(std::log(static_cast<double>(n)));
    dy.push_back(2 * std::log(r.d[static_cast<std::size_t>(n - 1)]));
  }
  double slope, icpt, r2;
  fit(ly, dy, slope, icpt, r2);
  r.decay_exponent = -slope;
  r.convergent = r.decay_exponent > 1.5;
  if (n_max < 8) r.warning = "insufficient range: n_max < 8 cannot separate log growth from convergence";
  r.divergence_consistent = r.warning.empty() && eps <= 0.5 && r.growth >= r.required && r.decay_exponent <= 1.25;
  return r;
}

ContrastResidue contrast_residue(double eps) {
  if (!(eps > 0)) throw Error(ErrorCode::Validation, "eps must be positive");
  const auto rr = residue_route(TorusFunction::log_power(eps), SymbolFunction::power_resolvent(1),
                                CompressionKind::Symmetrized);
  return {rr.value, rr.error, rr.mean, rr.residue};
}

}  // namespace dixmier
