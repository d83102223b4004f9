#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dixmier {

enum class Provenance { ExactFormula, Computed };

// Finite prefix a_1..a_K of a bounded sequence; values[0] is a_1.
struct BoundedSequence {
  std::vector<double> values;
  Provenance provenance = Provenance::Computed;
  std::size_t size() const { return values.size(); }
};

struct LimitBracket {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t k_start = 0;  // 1-based, inclusive
  std::size_t k_end = 0;
  bool contains(double x, double tol = 0.0) const { return lower - tol <= x && x <= upper + tol; }
  double width() const { return upper - lower; }
};

// gamma_k = (mu_1 + ... + mu_k) / log(1 + k), k = 1..K.
struct GammaSequence {
  std::vector<double> gamma;
  std::vector<double> partial;  // S_k
};

BoundedSequence shift(const BoundedSequence& a, std::size_t j);
BoundedSequence dilate(const BoundedSequence& a, std::size_t j);
// b_k = sum_j w_{k,j} a_j, w_{k,j} = |[k-1,k] ∩ [log j, log(j+1))|; length floor(log(K+1)).
BoundedSequence averaging_chain(const BoundedSequence& a);
// Compensated per-row sums of the averaging weights for a prefix of length K.
std::vector<double> averaging_weight_sums(std::size_t K);
// Mean of the first k entries for each k.
BoundedSequence cesaro_means(const BoundedSequence& a);
// Cesaro mean of the averaging-chain image over its trailing window.
double surrogate_functional(const BoundedSequence& a, double window_fraction = 0.5);

GammaSequence gamma_sequence(std::span<const double> mu);
// Min and max over the trailing window_fraction of the entries.
LimitBracket limit_bracket(std::span<const double> a, double window_fraction = 0.5);
inline LimitBracket limit_bracket(const BoundedSequence& a, double window_fraction = 0.5) {
  return limit_bracket(std::span<const double>(a.values), window_fraction);
}

// q_k = (S_k - S_{k/2}) / (log(1+k) - log(1+k/2)), k >= 2; index 0 holds k = 1 (unused, NaN).
std::vector<double> log_increment_quotients(std::span<const double> mu);
// Min and max of q_k over k in [k_lo, k_hi].
LimitBracket quotient_bracket(std::span<const double> mu, std::size_t k_lo, std::size_t k_hi);

double norm_one_inf(std::span<const double> mu);
double riesz_seminorm(std::span<const double> mu, double window_fraction = 0.5);

struct TraceSample {
  double s = 0.0;
  double trace = 0.0;  // Tr |T|^s
};
// Largest (s-1) Tr(|T|^s)^{1/s} over the half of the grid closest to s = 1.
double z1_norm(std::span<const TraceSample> curve);

// Seeded convergent sequences a_k = L + A (-1)^k k^{-p} + B sin(k) k^{-q}; checks that the
// trailing brackets of a, T_j a, D_j a and the averaging chain contain L up to the
// deviation envelope |A| k^{-p} + |B| k^{-q} at the first index the window sees.
struct LimitBatteryReport {
  int sequences = 0;
  int checks = 0;
  int failures = 0;
  double worst = 0.0;  // largest distance from L to a bracket, in envelope units
};
LimitBatteryReport limit_preservation_battery(std::uint64_t seed, int sequences, std::size_t length);

}  // namespace dixmier
