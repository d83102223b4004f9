#include "dixmier/torus_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dixmier/error.hpp"
#include "dixmier/parallel.hpp"
#include "dixmier/quadrature.hpp"

namespace dixmier {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_dim(int n, int max_n = 2) {
  if (n < 1 || n > max_n)
    throw Error(ErrorCode::UnsupportedDimension, "torus functions support n in {1,...," + std::to_string(max_n) + "}");
}

// Wraps t into [-1/2, 1/2).
double wrap(double t) { return t - std::floor(t + 0.5); }

cplx trig_value(const TrigPoly& p, int n, const std::array<double, 3>& x) {
  cplx s = 0;
  for (const auto& [m, c] : p.coeffs) {
    double ph = 0;
    for (int i = 0; i < n; ++i) ph += m[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    ph = kTwoPi * (ph - std::floor(ph));
    s += c * cplx(std::cos(ph), std::sin(ph));
  }
  return s;
}

// Even singular kernels on (0, 1/2] with closed-form primitives from 0.
struct Kernel {
  bool power;
  double p;  // a or eps
  double f(double t) const {
    return power ? std::pow(t, -p) : 1.0 / (t * std::pow(-std::log(t), 1.0 + p));
  }
  double primitive(double t) const {
    return power ? std::pow(t, 1.0 - p) / (1.0 - p) : std::pow(-std::log(t), -p) / p;
  }
};

FourierTable singular_fourier(const Kernel& K, int band, double tol) {
  const int B = std::max(band, 1);
  const double tc = 1.0 / (8.0 * B);
  const double h = 1.0 / (4.0 * B);

  // Body panels: [tc, 2tc] then uniform width h up to 1/2.
  std::vector<std::pair<double, double>> panels{{tc, 2 * tc}};
  for (int i = 1; i < 2 * B; ++i) panels.emplace_back(i * h, std::min(0.5, (i + 1) * h));
  std::vector<double> t, wk, wg;
  for (const auto& [a, b] : panels) {
    const PanelRule r = gk15_panel(a, b);
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      const double fx = K.f(r.x[i]);
      t.push_back(r.x[i]);
      wk.push_back(r.wk[i] * fx);
      wg.push_back(r.wg[i] * fx);
    }
  }
  const std::size_t per = 15;
  std::vector<cplx> step(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) step[i] = cplx(std::cos(kTwoPi * t[i]), std::sin(kTwoPi * t[i]));

  // Head [0, tc] in the log variable t = tc e^{-u}: F(tc) - int f t 2 sin^2(pi m t) du.
  std::vector<double> ht, hk, hg;
  for (int u0 = 0; u0 < 40; ++u0) {
    const PanelRule r = gk15_panel(u0, u0 + 1.0);
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      const double tt = tc * std::exp(-r.x[i]);
      const double ft = K.f(tt) * tt;
      ht.push_back(tt);
      hk.push_back(r.wk[i] * ft);
      hg.push_back(r.wg[i] * ft);
    }
  }
  const double head0 = K.primitive(tc);

  const std::size_t M = static_cast<std::size_t>(band) + 1;
  std::vector<double> val(M), err(M);
  constexpr std::size_t chunk = 64;
  parallel_for(M, [&](std::size_t mb, std::size_t me) {
    for (std::size_t c0 = mb; c0 < me; c0 += chunk) {
      const std::size_t len = std::min(chunk, me - c0);
      double sum[chunk] = {}, esum[chunk] = {};
      for (std::size_t p = 0; p * per < t.size(); ++p) {
        double ak[chunk] = {}, ag[chunk] = {};
        for (std::size_t q = p * per; q < (p + 1) * per; ++q) {
          const double ph = static_cast<double>(c0) * t[q];
          const double fr = kTwoPi * (ph - std::floor(ph));
          cplx z(std::cos(fr), std::sin(fr));
          for (std::size_t i = 0; i < len; ++i) {
            ak[i] += wk[q] * z.real();
            ag[i] += wg[q] * z.real();
            z *= step[q];
          }
        }
        for (std::size_t i = 0; i < len; ++i) {
          sum[i] += ak[i];
          esum[i] += std::abs(ak[i] - ag[i]);
        }
      }
      for (std::size_t i = 0; i < len; ++i) {
        const double m = static_cast<double>(c0 + i);
        double hsum = 0, herr = 0;
        if (m > 0) {
          for (std::size_t p = 0; p * per < ht.size(); ++p) {
            double ak = 0, ag = 0;
            for (std::size_t q = p * per; q < (p + 1) * per; ++q) {
              const double sn = std::sin(M_PI * m * ht[q]);
              ak += hk[q] * 2 * sn * sn;
              ag += hg[q] * 2 * sn * sn;
            }
            hsum += ak;
            herr += std::abs(ak - ag);
          }
        }
        val[c0 + i] = 2.0 * (head0 - hsum + sum[i]);
        err[c0 + i] = 2.0 * (herr + esum[i]);
      }
    }
  }, chunk);

  FourierTable tab(1, band);
  for (int m = 0; m <= band; ++m) {
    const auto um = static_cast<std::size_t>(m);
    tab.set({m, 0, 0}, val[um], err[um]);
    tab.set({-m, 0, 0}, val[um], err[um]);
  }
  tab.finalize();
  if (tab.max_error() > tol)
    throw Error(ErrorCode::ToleranceNotMet, "Fourier quadrature bound above tolerance", tab.max_error());
  return tab;
}

FourierTable grid_fourier(const GridSampled& g, int n, int band) {
  const int R = g.resolution;
  if (4 * band > R)
    throw Error(ErrorCode::Resolution, "grid resolution " + std::to_string(R) + " too coarse for band " +
                                           std::to_string(band) + " (need resolution >= 4 band)");
  const int H = R / 2;
  // Separable DFT over all |m| <= R/2 - so the aliasing proxy sees the top of the spectrum.
  auto twiddle = [R](long long k) {
    const long long r = ((k % R) + R) % R;
    const double ph = kTwoPi * static_cast<double>(r) / R;
    return cplx(std::cos(ph), -std::sin(ph));
  };
  const int W = 2 * H + 1;
  std::vector<cplx> full;
  if (n == 1) {
    full.assign(static_cast<std::size_t>(W), 0);
    parallel_for(static_cast<std::size_t>(W), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        const long long m = static_cast<long long>(i) - H;
        cplx s = 0;
        for (int j = 0; j < R; ++j) s += g.samples[static_cast<std::size_t>(j)] * twiddle(m * j);
        full[i] = s / static_cast<double>(R);
      }
    });
  } else {
    std::vector<cplx> rows(static_cast<std::size_t>(R) * W);  // [x1][m2]
    parallel_for(static_cast<std::size_t>(R), [&](std::size_t b, std::size_t e) {
      for (std::size_t j1 = b; j1 < e; ++j1)
        for (int i2 = 0; i2 < W; ++i2) {
          cplx s = 0;
          for (int j2 = 0; j2 < R; ++j2)
            s += g.samples[j1 * static_cast<std::size_t>(R) + static_cast<std::size_t>(j2)] *
                 twiddle(static_cast<long long>(i2 - H) * j2);
          rows[j1 * static_cast<std::size_t>(W) + static_cast<std::size_t>(i2)] = s;
        }
    });
    full.assign(static_cast<std::size_t>(W) * W, 0);
    parallel_for(static_cast<std::size_t>(W), [&](std::size_t b, std::size_t e) {
      for (std::size_t i1 = b; i1 < e; ++i1)
        for (int i2 = 0; i2 < W; ++i2) {
          cplx s = 0;
          for (int j1 = 0; j1 < R; ++j1)
            s += rows[static_cast<std::size_t>(j1) * W + static_cast<std::size_t>(i2)] *
                 twiddle((static_cast<long long>(i1) - H) * j1);
          full[i1 * static_cast<std::size_t>(W) + static_cast<std::size_t>(i2)] = s / static_cast<double>(R) / static_cast<double>(R);
        }
    });
  }
  auto at = [&](int m1, int m2) {
    return n == 1 ? full[static_cast<std::size_t>(m1 + H)]
                  : full[static_cast<std::size_t>(m1 + H) * W + static_cast<std::size_t>(m2 + H)];
  };
  // Aliasing proxy: largest coefficient in the outer half of the resolvable band.
  double alias = 0;
  for (int m1 = -H; m1 <= H; ++m1)
    for (int m2 = (n == 1 ? 0 : -H); m2 <= (n == 1 ? 0 : H); ++m2)
      if (std::max(std::abs(m1), std::abs(m2)) > R / 4) alias = std::max(alias, std::abs(at(m1, m2)));
  FourierTable tab(n, band);
  for (int m1 = -band; m1 <= band; ++m1)
    for (int m2 = (n == 1 ? 0 : -band); m2 <= (n == 1 ? 0 : band); ++m2) tab.set({m1, m2, 0}, at(m1, m2), alias);
  tab.finalize();
  return tab;
}

}  // namespace

TorusFunction TorusFunction::trig_poly(int n, std::map<Index, cplx> coeffs) {
  check_dim(n);
  for (const auto& [m, c] : coeffs) {
    for (int i = n; i < 3; ++i)
      if (m[static_cast<std::size_t>(i)] != 0) throw Error(ErrorCode::Validation, "index exceeds dimension");
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw Error(ErrorCode::Validation, "coefficients must be finite");
  }
  return TorusFunction(n, TrigPoly{std::move(coeffs)});
}

TorusFunction TorusFunction::constant(int n, double c) { return trig_poly(n, {{Index{0, 0, 0}, cplx(c, 0)}}); }

TorusFunction TorusFunction::power_singularity(double a) {
  if (!(a > 0 && a < 1)) throw Error(ErrorCode::Validation, "power singularity exponent must lie in (0, 1)");
  return TorusFunction(1, PowerSingularity{a});
}

TorusFunction TorusFunction::log_power(double eps) {
  if (!(eps > 0)) throw Error(ErrorCode::Validation, "log-power exponent must be positive");
  return TorusFunction(1, LogPower{eps});
}

TorusFunction TorusFunction::grid_sampled(int n, int resolution, std::vector<double> samples) {
  check_dim(n);
  std::size_t need = 1;
  for (int i = 0; i < n; ++i) need *= static_cast<std::size_t>(std::max(resolution, 0));
  if (resolution < 4 || samples.size() != need)
    throw Error(ErrorCode::Validation, "grid samples must have resolution^n entries, resolution >= 4");
  for (double v : samples)
    if (!std::isfinite(v)) throw Error(ErrorCode::Validation, "grid samples must be finite");
  return TorusFunction(n, GridSampled{resolution, std::move(samples)});
}

bool TorusFunction::singular() const {
  return std::holds_alternative<PowerSingularity>(v_) || std::holds_alternative<LogPower>(v_);
}

bool TorusFunction::real_valued() const {
  if (const auto* p = std::get_if<TrigPoly>(&v_)) {
    for (const auto& [m, c] : p->coeffs) {
      const Index neg{-m[0], -m[1], -m[2]};
      auto it = p->coeffs.find(neg);
      const cplx other = it == p->coeffs.end() ? cplx(0) : it->second;
      if (std::abs(other - std::conj(c)) > 1e-15 * (1 + std::abs(c))) return false;
    }
  }
  return true;
}

int TorusFunction::band() const {
  const auto* p = std::get_if<TrigPoly>(&v_);
  if (!p) return -1;
  int b = 0;
  for (const auto& [m, c] : p->coeffs)
    if (c != cplx(0)) b = std::max({b, std::abs(m[0]), std::abs(m[1]), std::abs(m[2])});
  return b;
}

cplx TorusFunction::value(const std::array<double, 3>& x) const {
  return std::visit(
      [&](const auto& v) -> cplx {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TrigPoly>) {
          return trig_value(v, n_, x);
        } else if constexpr (std::is_same_v<T, PowerSingularity>) {
          return std::pow(std::abs(wrap(x[0])), -v.a);
        } else if constexpr (std::is_same_v<T, LogPower>) {
          const double t = std::abs(wrap(x[0]));
          return 1.0 / (t * std::pow(-std::log(t), 1.0 + v.eps));
        } else {
          // Periodic (bi)linear interpolation of the samples.
          const int R = v.resolution;
          auto idx = [R](double y, int& i0, double& fr) {
            const double p = (y - std::floor(y)) * R;
            i0 = static_cast<int>(std::floor(p)) % R;
            fr = p - std::floor(p);
          };
          int i0, j0;
          double fx, fy = 0;
          idx(x[0], i0, fx);
          if (n_ == 1) {
            const double a = v.samples[static_cast<std::size_t>(i0)];
            const double b = v.samples[static_cast<std::size_t>((i0 + 1) % R)];
            return a + fx * (b - a);
          }
          idx(x[1], j0, fy);
          auto s = [&](int i, int j) {
            return v.samples[static_cast<std::size_t>(i % R) * static_cast<std::size_t>(R) + static_cast<std::size_t>(j % R)];
          };
          return (1 - fx) * ((1 - fy) * s(i0, j0) + fy * s(i0, j0 + 1)) +
                 fx * ((1 - fy) * s(i0 + 1, j0) + fy * s(i0 + 1, j0 + 1));
        }
      },
      v_);
}

double TorusFunction::mean() const {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TrigPoly>) {
          auto it = v.coeffs.find(Index{0, 0, 0});
          return it == v.coeffs.end() ? 0.0 : it->second.real();
        } else if constexpr (std::is_same_v<T, PowerSingularity>) {
          return 2.0 * std::pow(0.5, 1.0 - v.a) / (1.0 - v.a);
        } else if constexpr (std::is_same_v<T, LogPower>) {
          return (2.0 / v.eps) * std::pow(std::log(2.0), -v.eps);
        } else {
          double s = 0;
          for (double x : v.samples) s += x;
          return s / static_cast<double>(v.samples.size());
        }
      },
      v_);
}

double TorusFunction::lp_norm(double p) const {
  if (!(p >= 1)) throw Error(ErrorCode::Validation, "L^p norm needs p >= 1");
  if (const auto* ps = std::get_if<PowerSingularity>(&v_)) {
    if (std::isinf(p) || ps->a * p >= 1) return kInf;
    return std::pow(2.0 * std::pow(0.5, 1.0 - ps->a * p) / (1.0 - ps->a * p), 1.0 / p);
  }
  if (std::holds_alternative<LogPower>(v_)) return p == 1.0 ? mean() : kInf;
  if (const auto* g = std::get_if<GridSampled>(&v_)) {
    double s = 0, mx = 0;
    for (double x : g->samples) {
      mx = std::max(mx, std::abs(x));
      if (!std::isinf(p)) s += std::pow(std::abs(x), p);
    }
    return std::isinf(p) ? mx : std::pow(s / static_cast<double>(g->samples.size()), 1.0 / p);
  }
  const auto& tp = std::get<TrigPoly>(v_);
  if (p == 2.0) {
    double s = 0;
    for (const auto& [m, c] : tp.coeffs) s += std::norm(c);
    return std::sqrt(s);
  }
  const int b = band();
  if (std::isinf(p)) {
    const int G = std::max(64, 16 * (b + 1));
    const int G2 = n_ == 1 ? 1 : std::max(32, 8 * (b + 1));
    double best = -1, bx = 0, by = 0;
    for (int i = 0; i < G; ++i)
      for (int j = 0; j < G2; ++j) {
        const double x = static_cast<double>(i) / G, y = static_cast<double>(j) / G2;
        const double v = std::abs(value({x, y, 0}));
        if (v > best) best = v, bx = x, by = y;
      }
    // Coordinate-wise Brent refinement around the best grid node.
    double hx = 1.0 / G, hy = 1.0 / G2;
    for (int round = 0; round < (n_ == 1 ? 1 : 4); ++round) {
      double arg;
      const double vx = maximise([&](double x) { return std::abs(value({x, by, 0})); }, bx - hx, bx + hx, arg);
      if (vx > best) best = vx, bx = arg;
      if (n_ == 2) {
        const double vy = maximise([&](double y) { return std::abs(value({bx, y, 0})); }, by - hy, by + hy, arg);
        if (vy > best) best = vy, by = arg;
      }
      hx *= 0.5;
      hy *= 0.5;
    }
    return best;
  }
  // Periodic trapezoid; exact for even integer p once G > p * band.
  const int G = std::max(256, static_cast<int>(std::ceil(p)) * 4 * (b + 1));
  const int G2 = n_ == 1 ? 1 : G;
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(G) * static_cast<std::size_t>(G2));
  for (int i = 0; i < G; ++i)
    for (int j = 0; j < G2; ++j)
      terms.push_back(std::pow(std::abs(value({static_cast<double>(i) / G, static_cast<double>(j) / G2, 0})), p));
  return std::pow(pairwise_sum(terms) / static_cast<double>(terms.size()), 1.0 / p);
}

FourierTable::FourierTable(int n, int band) : n_(n), band_(band) {
  std::size_t side = static_cast<std::size_t>(2 * band + 1), total = 1;
  for (int i = 0; i < n; ++i) total *= side;
  coeff_.assign(total, 0);
  err_.assign(total, 0);
}

bool FourierTable::in_band(const Index& m) const {
  for (int i = 0; i < 3; ++i) {
    const int v = m[static_cast<std::size_t>(i)];
    if (i >= n_ ? v != 0 : std::abs(v) > band_) return false;
  }
  return true;
}

std::size_t FourierTable::offset(const Index& m) const {
  if (!in_band(m)) throw Error(ErrorCode::BandTooSmall, "index outside the Fourier table band");
  const std::size_t side = static_cast<std::size_t>(2 * band_ + 1);
  std::size_t o = 0;
  for (int i = 0; i < n_; ++i) o = o * side + static_cast<std::size_t>(m[static_cast<std::size_t>(i)] + band_);
  return o;
}

void FourierTable::set(const Index& m, cplx c, double err) {
  const std::size_t o = offset(m);
  coeff_[o] = c;
  err_[o] = err;
}

void FourierTable::finalize() {
  real_ = std::all_of(coeff_.begin(), coeff_.end(), [](const cplx& c) { return c.imag() == 0.0; });
}

double FourierTable::max_error() const { return err_.empty() ? 0.0 : *std::max_element(err_.begin(), err_.end()); }

FourierTable fourier_coefficients(const TorusFunction& f, int band, const FourierOptions& opts) {
  if (band < 0) throw Error(ErrorCode::Validation, "band must be nonnegative");
  const auto& v = f.variant();
  if (const auto* p = std::get_if<TrigPoly>(&v)) {
    FourierTable tab(f.dim(), band);
    for (const auto& [m, c] : p->coeffs)
      if (tab.in_band(m)) tab.set(m, c, 0.0);
    tab.finalize();
    return tab;
  }
  if (const auto* ps = std::get_if<PowerSingularity>(&v)) return singular_fourier({true, ps->a}, band, opts.tolerance);
  if (const auto* lp = std::get_if<LogPower>(&v)) return singular_fourier({false, lp->eps}, band, opts.tolerance);
  return grid_fourier(std::get<GridSampled>(v), f.dim(), band);
}

}  // namespace dixmier
