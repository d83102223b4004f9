#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dixmier/sequence_limits.hpp"
#include "dixmier/spectral_lattice.hpp"
#include "dixmier/symbol.hpp"
#include "dixmier/torus_function.hpp"

namespace dixmier {

enum class CompressionKind { Plain, Symmetrized };
const char* to_string(CompressionKind k);

// Fourier-basis block over |m|_inf <= N of
//   plain:       h(j-k) G(lambda_k)^s            (M_f G^s)
//   symmetrized: G(lambda_j)^{s/2} h(j-k) G(lambda_k)^{s/2}
struct CompressedOperator {
  CompressionKind kind = CompressionKind::Plain;
  double s = 1.0;
  int n = 1;
  int N = 0;
  std::vector<SpectralMode> modes;
  std::vector<double> weights;  // G(lambda_k)^s in rank order
  bool real = true;             // which storage is populated
  Eigen::MatrixXd re;
  Eigen::MatrixXcd cx;

  std::size_t dim() const { return modes.size(); }
  cplx entry(std::size_t i, std::size_t j) const { return real ? cplx(re(i, j)) : cx(i, j); }
  bool hermitian(double tol = 0.0) const;
  // Diagonal summed pairwise in rank order.
  cplx trace() const;
  double frobenius() const;
};

CompressedOperator compress(const FourierTable& table, const SymbolFunction& G, double s, int N,
                            CompressionKind kind);
CompressedOperator compress(const TorusFunction& f, const SymbolFunction& G, double s, int N,
                            CompressionKind kind);

struct HsFormulaResult {
  double value = 0.0;  // ||f||_2 (sum G^{2s})^{1/2}; +inf when f is not in L^2
  double l2_norm = 0.0;
  bool finite = true;
  std::string diagnostic;
  std::vector<int> depths;           // dyadic refinement depths (singular f only)
  std::vector<double> refinements;   // formula value at each depth
};
HsFormulaResult hs_norm_formula(const TorusFunction& f, const SymbolFunction& G, double s = 1.0);
double hs_norm_matrix(const CompressedOperator& c);

struct TraceIdentity {
  double lhs = 0.0;
  double rhs = 0.0;
  double defect = 0.0;  // relative
};
TraceIdentity trace_identity_check(const CompressedOperator& c, const FourierTable& table, const SymbolFunction& G);
TraceIdentity trace_identity_check(const TorusFunction& f, const SymbolFunction& G, double s, int N,
                                   CompressionKind kind = CompressionKind::Plain);

struct SingularSpectrum {
  std::vector<double> values;  // nonincreasing
  double frobenius_defect = 0.0;
};
std::size_t default_dimension_cap(int n);
SingularSpectrum singular_spectrum(const CompressedOperator& c, std::size_t cap = 0);
// Eigenvalues of the hermitian part (C + C*)/2, nondecreasing.
std::vector<double> hermitian_part_eigenvalues(const CompressedOperator& c, std::size_t cap = 0);
double schatten_norm(const CompressedOperator& c, double p);

enum class DixmierRoute { Auto, SingularValues, HermitianSplit };
const char* to_string(DixmierRoute r);

struct DixmierBracket {
  DixmierRoute route = DixmierRoute::SingularValues;
  LimitBracket bracket;           // log-increment quotients over the spectral window
  LimitBracket gamma_trailing;    // raw gamma over its trailing half (diagnostic)
  double sup_gamma = 0.0;         // norm_one_inf of the positive part
  std::size_t dim = 0;
};
// Window defaults to k in [d/128, d/4] with d the block dimension.
DixmierBracket dixmier_bracket(const CompressedOperator& c, DixmierRoute route = DixmierRoute::Auto,
                               bool nonnegative_symbol = false);
// Hermitian-split bracket from a precomputed nondecreasing spectrum.
DixmierBracket dixmier_bracket_from_eigenvalues(std::span<const double> ev);
DixmierBracket dixmier_bracket(const TorusFunction& f, const SymbolFunction& G, CompressionKind kind, int N,
                               DixmierRoute route = DixmierRoute::Auto);

struct ResidueRoute {
  double value = 0.0;
  double error = 0.0;
  double mean = 0.0;        // h(0) by quadrature
  double mean_error = 0.0;
  double residue = 0.0;
  double residue_error = 0.0;
};
// h(0) times the residue of the lattice zeta function; both kinds share the trace.
ResidueRoute residue_route(const TorusFunction& f, const SymbolFunction& G, CompressionKind kind,
                           const ResidueOptions& opts = {});

bool nonnegative(const TorusFunction& f);

// Seeded matrix inequality batteries.
struct BatteryReport {
  std::string name;
  int instances = 0;
  int checks = 0;
  int violations = 0;
  double worst = 0.0;  // largest observed lhs - rhs (or |difference|)
};
BatteryReport battery_symmetric_products(std::uint64_t seed, int instances, int max_dim, double slack);
BatteryReport battery_three_lines(std::uint64_t seed, int instances, int max_dim, double slack);
BatteryReport battery_interpolation(std::uint64_t seed, int instances, int max_dim, double slack);

}  // namespace dixmier
