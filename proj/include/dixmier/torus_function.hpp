#pragma once

#include <array>
#include <complex>
#include <map>
#include <variant>
#include <vector>

namespace dixmier {

using Index = std::array<int, 3>;
using cplx = std::complex<double>;

struct TrigPoly {
  std::map<Index, cplx> coeffs;  // f(x) = sum c_m e^{2 pi i m.x}
};
// Even periodisation of |t|^{-a} on [-1/2, 1/2], 0 < a < 1.
struct PowerSingularity {
  double a = 0.5;
};
// f(t) = 1 / (|t| |log|t||^{1+eps}) on [-1/2, 1/2].
struct LogPower {
  double eps = 0.5;
};
// Real samples on the uniform grid j / resolution, row-major in n dimensions.
struct GridSampled {
  int resolution = 0;
  std::vector<double> samples;
};

class TorusFunction {
 public:
  using Variant = std::variant<TrigPoly, PowerSingularity, LogPower, GridSampled>;

  static TorusFunction trig_poly(int n, std::map<Index, cplx> coeffs);
  static TorusFunction constant(int n, double c);
  static TorusFunction power_singularity(double a);
  static TorusFunction log_power(double eps);
  static TorusFunction grid_sampled(int n, int resolution, std::vector<double> samples);

  int dim() const { return n_; }
  const Variant& variant() const { return v_; }
  // Coefficients known in closed form (no quadrature error).
  bool exact() const { return std::holds_alternative<TrigPoly>(v_); }
  bool singular() const;
  bool real_valued() const;
  // Largest |m|_inf with a nonzero coefficient; -1 for non-trigonometric variants.
  int band() const;

  cplx value(const std::array<double, 3>& x) const;
  double value(double t) const { return value(std::array<double, 3>{t, 0.0, 0.0}).real(); }
  // Integral over the unit torus.
  double mean() const;
  // Lebesgue L^p norm; p = infinity allowed; returns +inf when f is not in L^p.
  double lp_norm(double p) const;

 private:
  TorusFunction(int n, Variant v) : n_(n), v_(std::move(v)) {}
  int n_;
  Variant v_;
};

class FourierTable {
 public:
  FourierTable() = default;
  FourierTable(int n, int band);

  int dim() const { return n_; }
  int band() const { return band_; }
  bool real_coefficients() const { return real_; }
  double max_error() const;

  cplx operator()(const Index& m) const { return coeff_[offset(m)]; }
  double error(const Index& m) const { return err_[offset(m)]; }
  bool in_band(const Index& m) const;

  void set(const Index& m, cplx c, double err);
  void finalize();

 private:
  std::size_t offset(const Index& m) const;
  int n_ = 1;
  int band_ = 0;
  bool real_ = true;
  std::vector<cplx> coeff_;
  std::vector<double> err_;
};

struct FourierOptions {
  double tolerance = 1e-9;  // absolute, per coefficient
};

// Coefficients h(m) = int f(x) e^{-2 pi i m.x} dx for |m|_inf <= band.
FourierTable fourier_coefficients(const TorusFunction& f, int band, const FourierOptions& opts = {});

}  // namespace dixmier
