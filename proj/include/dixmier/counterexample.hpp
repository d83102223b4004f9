#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "dixmier/torus_function.hpp"

namespace dixmier {

// h_n = 2^{n/2} times the indicator of 2^{-n-1} <= |t| <= 2^{-n}.
struct ShellVector {
  int n = 1;
  double lo = 0.0, hi = 0.0;
  double amplitude = 0.0;
  double norm_sq() const { return std::ldexp(2.0 * (hi - lo), n); }  // amplitude^2 = 2^n exactly
};
ShellVector shell_vector(int n);

struct ShellOverlap {
  cplx value;
  double error = 0.0;
};
// Integral of h_n sqrt(f) e^{2 pi i k t} for f = LogPower(eps); real by evenness. Needs n >= 3.
ShellOverlap shell_overlap(double eps, int n, long k);

struct DiagonalElement {
  int n = 0;
  long K = 0;
  double value = 0.0;   // sum over |k| <= K of lambda_k |o_k|^2
  double error = 0.0;
  double control_defect = 0.0;  // worst relative gap against adaptive quadrature
  std::vector<double> overlaps;  // o_k, k = 0..K
};
// <T h_n, h_n> for T = M_sqrt(f) (1+Delta)^{-1/2} M_sqrt(f), truncated to |k| <= K (K <= 2^18).
DiagonalElement diagonal_element(double eps, int n, long K);

// K_n = 2^{max(n-3, 0)}: the range where cos(2 pi k t) >= 1/2 on the shell.
long default_shell_cutoff(int n);
// c_0 = 1 / (4 (ln 2)^{1+eps}) from the cosine bound.
double cosine_bound_constant(double eps);

struct DivergenceReport {
  double eps = 0.0;
  int n_max = 0;
  std::vector<int> n;
  std::vector<double> d;        // d_n at K_n
  std::vector<double> d_error;
  std::vector<double> partial;  // S_N = sum_{n <= N} d_n^2
  std::vector<double> lambda_sums;  // sum over |k| <= K_n of lambda_k
  double c0 = 0.0;
  double c0_measured = 0.0;  // min of d_n n^{1+eps} / lambda_sum
  bool chain_holds = true;   // d_n >= c0 n^{-1-eps} lambda_sum for every n
  double c1 = 0.0;           // min over n in [5, n_max] of d_n n^eps
  double growth = 0.0;       // S_{n_max} - S_{n_max/2}
  double required = 0.0;     // 0.8 c1^2 sum_{n_max/2 < n <= n_max} n^{-2 eps}
  double fit_slope = 0.0, fit_intercept = 0.0, fit_r2 = 0.0;  // S_N against log N
  double decay_exponent = 0.0;  // log-log slope of d_n^2 over the upper half
  bool divergence_consistent = false;
  bool convergent = false;
  std::string warning;
};
// eps <= 1/2 is the divergent regime; n_max <= 16.
DivergenceReport hs_divergence_report(double eps, int n_max = 16);

struct ContrastResidue {
  double value = 0.0;
  double error = 0.0;
  double mean = 0.0;     // h^(0)
  double residue = 0.0;  // c
};
// Symmetrized residue route for LogPower(eps): h^(0) c.
ContrastResidue contrast_residue(double eps);

}  // namespace dixmier
