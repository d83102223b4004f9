#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dixmier/sequence_limits.hpp"
#include "dixmier/spectral_lattice.hpp"
#include "dixmier/symbol.hpp"
#include "dixmier/torus_function.hpp"

namespace dixmier {

// Diagonal model: eigenvectors h_m with densities |U h_m|^2 over a probability space F.
//  Constant: F = T^n with Lebesgue measure, every density equal to 1.
//  Atoms:    F = {1, 2, ...}, density of h_m is the unit point mass at m.
class DiagonalModel {
 public:
  enum class Density { Constant, Atoms };

  static DiagonalModel torus(int n, SymbolFunction G, int cutoff = -1);
  // lambda_m = m for m = 1, 2, ...; sums run to `cap` and add a midpoint-integral tail.
  static DiagonalModel sequence(SymbolFunction G, std::size_t cap = std::size_t{1} << 20);
  // Finitely many atoms with the given nondecreasing eigenvalues; no tail.
  static DiagonalModel atoms(std::vector<double> eigenvalues, SymbolFunction G);

  std::string label;
  Density density = Density::Constant;
  SymbolFunction G;
  int dim = 1;                   // torus only
  int cutoff = -1;               // torus lattice cutoff, -1 = dimension default
  std::size_t cap = 0;           // atoms: number of explicitly summed atoms
  bool identity_rule = false;    // atoms: lambda_m = m beyond any table
  std::vector<double> table;     // atoms: explicit eigenvalues

  double eigenvalue(std::size_t m) const;  // atoms, 1-based
  bool has_tail() const { return density == Density::Atoms && identity_rule; }
};

DiagonalModel parse_model(std::string_view json_text);
std::string model_to_json(const DiagonalModel& model);

// Measurable subset of F.
struct ModelSet {
  enum class Kind { Whole, Empty, Intervals, Atoms, AtomsFrom };
  Kind kind = Kind::Whole;
  std::vector<std::pair<double, double>> intervals;  // [a, b) in the first torus coordinate
  std::vector<std::size_t> atoms;                    // sorted, 1-based
  std::size_t from = 1;                              // AtomsFrom: {m >= from}

  static ModelSet whole() { return {}; }
  static ModelSet empty();
  static ModelSet interval(double a, double b);
  static ModelSet union_of(std::vector<std::pair<double, double>> pieces);
  static ModelSet atom_list(std::vector<std::size_t> atoms);
  static ModelSet atoms_from(std::size_t m);
  double lebesgue() const;  // torus sets
};

// Real function on the atoms: explicit prefix, then a periodic continuation (zero if empty).
struct AtomFunction {
  std::vector<double> prefix;
  std::vector<double> period;
  double operator()(std::size_t m) const;
  double tail_mean(double p) const;  // mean of |f|^p over one period
  static AtomFunction periodic(std::vector<double> pattern) { return {{}, std::move(pattern)}; }
  static AtomFunction finite(std::vector<double> values) { return {std::move(values), {}}; }
  static AtomFunction indicator(const ModelSet& set, std::size_t cap);
};

using ModelFunction = std::variant<ModelSet, TorusFunction, AtomFunction>;

// F_D(G^s) at a torus point (ignored) or an atom.
double density_F_D(const DiagonalModel& model, double s, std::size_t atom = 1);

struct MeasureEstimate {
  double s = 0.0;
  double value = 0.0;
  double error = 0.0;
};
// mu_s(J) = integral over J of F_D(G^s).
MeasureEstimate mu_s(const DiagonalModel& model, const ModelSet& J, double s);
// Signed integral of h d mu_s.
MeasureEstimate integrate_mu_s(const DiagonalModel& model, const ModelFunction& h, double s);

// s_j = 1 + 2^{-j}, j = 0..10.
std::vector<double> default_s_grid();

struct WeakNormValue {
  double p = 1.0;
  double value = 0.0;
  double argsup_s = 0.0;
  bool finite = true;
  std::string diagnostic;
  std::vector<double> s_grid;
  std::vector<double> samples;  // (s-1)^{1/p} ||f||_{p, mu_s}
};
// p = +inf is accepted.
WeakNormValue weak_norm(const DiagonalModel& model, const ModelFunction& f, double p,
                        const std::vector<double>& s_grid = default_s_grid());
// sup over the grid of (s-1) mu_s(F).
double weak_constant(const DiagonalModel& model, const std::vector<double>& s_grid = default_s_grid());

struct DominationResult {
  bool pass = true;
  std::optional<std::size_t> witness_atom;
  std::optional<double> witness_point;
  double witness_value = 0.0;  // l at the witness
};
// Checks |U h_m|^2 <= l up to tol; atoms are scanned to the model cap.
DominationResult domination_check(const DiagonalModel& model, const ModelFunction& l, double tol = 1e-12);

// gamma_K of G(lambda_m) over the modes of rank N..N+K-1.
double tail_seminorm(const DiagonalModel& model, std::size_t N, std::size_t K);

// Residue route: limit of (s-1) mu_s(J) as s -> 1+.
ResidueEstimate nu_residue(const DiagonalModel& model, const ModelSet& J, const ResidueOptions& opts = {});

struct Partition {
  enum class Kind { Singletons, Dyadic, Trivial };
  Kind kind = Kind::Singletons;
  ModelSet piece(std::size_t j) const;  // F_j, j >= 1
  ModelSet tail(std::size_t N) const;   // union of F_j over j >= N
};

struct AdditivityReport {
  std::vector<std::size_t> N;
  std::vector<double> piece_values;  // nu(F_N)
  std::vector<double> tail_values;   // nu(union_{j>=N} F_j)
  bool failure = false;              // tails stay bounded below
  std::string summary;
};
AdditivityReport additivity_probe(const DiagonalModel& model, const Partition& partition,
                                  const std::vector<std::size_t>& N_values);

struct WeakLimitReport {
  std::vector<double> k_grid;
  std::vector<std::vector<double>> values;  // per test function, per k
  std::vector<LimitBracket> brackets;       // trailing half of the grid
  std::vector<double> limits;               // extrapolated in 1/k
  std::vector<double> limit_errors;
};
// integral of h V_k d mu with V_k = F_D(G^{1+1/k}) / k; k_grid must be 2^j, j consecutive.
WeakLimitReport weak_limit_probe(const DiagonalModel& model, const std::vector<ModelFunction>& h,
                                 const std::vector<double>& k_grid);

}  // namespace dixmier
