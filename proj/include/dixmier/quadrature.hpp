#pragma once

#include <functional>
#include <vector>

namespace dixmier {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

// One Gauss-Kronrod 7/15 panel mapped to [a, b]: nodes with both weight sets.
struct PanelRule {
  std::vector<double> x;
  std::vector<double> wk;  // Kronrod weights
  std::vector<double> wg;  // Gauss weights, zero on Kronrod-only nodes
};
PanelRule gk15_panel(double a, double b);

// Adaptive Gauss-Kronrod on a finite interval.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-12, unsigned max_depth = 30);
// Double-exponential rule; tolerates integrable endpoint singularities.
QuadResult integrate_endpoint_singular(const std::function<double(double)>& f, double a, double b,
                                       double rel_tol = 1e-12);
// Integral over [a, inf).
QuadResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                 double rel_tol = 1e-12);

// Local maximiser of f on [a, b] (Brent).
double maximise(const std::function<double(double)>& f, double a, double b, double& arg);

}  // namespace dixmier
