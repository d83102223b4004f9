#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dixmier/symbol.hpp"

namespace dixmier {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kFourPiSq = kTwoPi * kTwoPi;

struct SpectralMode {
  std::array<int, 3> index{0, 0, 0};  // entries beyond the dimension are zero
  std::int64_t norm_sq = 0;
  double lap_eigenvalue = 0.0;  // 4 pi^2 |m|^2
  std::size_t rank = 0;
};

// All m in Z^n with |m|_inf <= N, sorted by |m|^2 then lexicographically.
std::vector<SpectralMode> enumerate_modes(int n, int N);

struct ZetaValue {
  double s = 0.0;
  int n = 1;
  int cutoff = 0;
  double partial_sum = 0.0;
  double tail_lower = 0.0;  // rigorous lower bound on the omitted modes
  double tail_bound = 0.0;  // rigorous upper bound on the omitted modes
  double tail_estimate = 0.0;  // cell-midpoint integral
  double lower() const { return partial_sum + tail_lower; }
  double upper() const { return partial_sum + tail_bound; }
  double estimate() const { return partial_sum + tail_estimate; }
};

// Sum over |m|_inf <= N of G(4 pi^2 |m|^2)^s with integral-comparison tail brackets.
ZetaValue zeta_sum(const SymbolFunction& G, double s, int n, int N);

// Sum of G(lambda)^s over the given modes, pairwise in rank order.
double ranked_sum(const SymbolFunction& G, double s, const std::vector<SpectralMode>& modes);

struct ResidueOptions {
  int j_min = 3;
  int j_max = 12;
  int order = 2;
  int cutoff = -1;  // -1: dimension default
};

struct ResidueEstimate {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  std::string diagnostic;
  std::vector<double> s_grid;
  std::vector<double> samples;  // (s-1) * zeta(s)
};

int default_residue_cutoff(int n);

// Richardson-extrapolated limit of (s-1) zeta(s) as s -> 1+ on s_j = 1 + 2^{-j}.
ResidueEstimate residue_at_one(const SymbolFunction& G, int n, const ResidueOptions& opts = {});

// Richardson table on a geometric grid with ratio 2, h_j = 2^{-j} increasing j.
ResidueEstimate richardson_ratio2(const std::vector<double>& samples, int order);

}  // namespace dixmier
