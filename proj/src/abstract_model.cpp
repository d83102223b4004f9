#include "dixmier/abstract_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <nlohmann/json.hpp>

#include "dixmier/error.hpp"
#include "dixmier/parallel.hpp"

namespace dixmier {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_torus(const DiagonalModel& m) { return m.density == DiagonalModel::Density::Constant; }

int torus_cutoff(const DiagonalModel& m) { return m.cutoff > 0 ? m.cutoff : default_residue_cutoff(m.dim); }

// Integral of G(x)^s over [c, inf) in closed form.
double symbol_tail(const SymbolFunction& G, double s, double c) {
  switch (G.kind()) {
    case SymbolFunction::Kind::PowerResolvent: {
      const double sigma = 0.5 * G.order() * s;
      if (sigma <= 1) return kInf;
      return std::pow(1.0 + c, 1.0 - sigma) / (sigma - 1.0);
    }
    case SymbolFunction::Kind::InversePower: {
      const double sigma = G.order() * s;
      if (sigma <= 1) return kInf;
      return std::pow(c, 1.0 - sigma) / (sigma - 1.0);
    }
    case SymbolFunction::Kind::Table: {
      const double sigma = G.order() * s;
      if (sigma <= 1) return kInf;
      // Valid once c lies beyond the last node, where the table is an exact power law.
      return G.pow(c, s) * c / (sigma - 1.0);
    }
  }
  return kInf;
}

struct TorusZeta {
  double value, error;
};

TorusZeta torus_zeta(const DiagonalModel& m, double s) {
  if (!(s > m.G.threshold(m.dim)))
    throw Error(ErrorCode::DivergentSum, "F_D(G^s) diverges on the torus for s = " + std::to_string(s));
  const ZetaValue z = zeta_sum(m.G, s, m.dim, torus_cutoff(m));
  return {z.estimate(), 0.5 * (z.upper() - z.lower())};
}

enum class Transform { Signed, AbsPower };

double apply(Transform t, double p, double v) { return t == Transform::Signed ? v : std::pow(std::abs(v), p); }

double period_mean(const AtomFunction& f, Transform t, double p) {
  if (f.period.empty()) return 0.0;
  std::vector<double> v(f.period.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = apply(t, p, f.period[i]);
  return pairwise_sum(v) / static_cast<double>(v.size());
}

// Sum over atoms of phi(w(m)) G(lambda_m)^s, explicit to the cap plus a midpoint tail.
MeasureEstimate atom_sum(const DiagonalModel& m, const AtomFunction& w, double s, Transform t, double p) {
  MeasureEstimate out;
  out.s = s;
  const std::size_t cap = m.cap;
  std::vector<double> terms(cap, 0.0);
  parallel_for(cap, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const double wi = apply(t, p, w(i + 1));
      if (wi != 0.0) terms[i] = wi * m.G.pow(m.eigenvalue(i + 1), s);
    }
  }, 4096);
  out.value = pairwise_sum(terms);
  if (!m.has_tail()) return out;
  if (w.prefix.size() > cap) throw Error(ErrorCode::Validation, "atom function prefix exceeds the model cap");
  if (w.period.empty()) return out;
  const double c = static_cast<double>(cap);
  // Midpoint integral per residue class m = cap+1+r (mod q), which keeps the rule second order.
  const std::size_t q = w.period.size();
  double mid = 0, err = 0;
  for (std::size_t r = 0; r < q; ++r) {
    const std::size_t m0 = cap + 1 + r;
    const double wr = apply(t, p, w(m0));
    if (wr == 0.0) continue;
    const double x0 = static_cast<double>(m0);
    const double tail = symbol_tail(m.G, s, x0 - 0.5 * static_cast<double>(q)) / static_cast<double>(q);
    if (!std::isfinite(tail))
      throw Error(ErrorCode::DivergentSum, "atom sum diverges for s = " + std::to_string(s), out.value);
    mid += wr * tail;
    // Decreasing terms: the class sum lies between (1/q) times the integrals from x0 and from x0 - q.
    const double lo = symbol_tail(m.G, s, x0) / static_cast<double>(q);
    const double hi = symbol_tail(m.G, s, x0 - static_cast<double>(q)) / static_cast<double>(q);
    err += std::abs(wr) * std::max(hi - tail, tail - lo);
  }
  out.value += mid;
  out.error = err;
  return out;
}

AtomFunction as_atom_function(const DiagonalModel& m, const ModelFunction& f) {
  if (const auto* a = std::get_if<AtomFunction>(&f)) return *a;
  if (const auto* set = std::get_if<ModelSet>(&f)) return AtomFunction::indicator(*set, m.cap);
  throw Error(ErrorCode::Validation, "torus function used on an atom model");
}

// Lebesgue integral of phi(h) over the torus.
double torus_lebesgue(const ModelFunction& f, Transform t, double p) {
  if (const auto* set = std::get_if<ModelSet>(&f)) return set->lebesgue();
  if (const auto* tf = std::get_if<TorusFunction>(&f)) {
    if (t == Transform::Signed) return tf->mean();
    return std::pow(tf->lp_norm(p), p);
  }
  throw Error(ErrorCode::Validation, "atom function used on a torus model");
}

void check_s(double s) {
  if (!(s > 1)) throw Error(ErrorCode::Validation, "mu_s needs s > 1");
}

}  // namespace

// ---------------------------------------------------------------------------

DiagonalModel DiagonalModel::torus(int n, SymbolFunction G, int cutoff) {
  if (n < 1 || n > 3) throw Error(ErrorCode::UnsupportedDimension, "torus dimension must be 1, 2 or 3");
  DiagonalModel m;
  m.label = "torus-" + std::to_string(n);
  m.density = Density::Constant;
  m.G = std::move(G);
  m.dim = n;
  m.cutoff = cutoff;
  return m;
}

DiagonalModel DiagonalModel::sequence(SymbolFunction G, std::size_t cap) {
  if (cap < 1) throw Error(ErrorCode::Validation, "sequence model needs a positive cap");
  DiagonalModel m;
  m.label = "sequence";
  m.density = Density::Atoms;
  m.G = std::move(G);
  m.cap = cap;
  m.identity_rule = true;
  return m;
}

DiagonalModel DiagonalModel::atoms(std::vector<double> eigenvalues, SymbolFunction G) {
  if (eigenvalues.empty()) throw Error(ErrorCode::Validation, "atom model needs eigenvalues");
  for (std::size_t i = 1; i < eigenvalues.size(); ++i)
    if (std::abs(eigenvalues[i]) < std::abs(eigenvalues[i - 1]))
      throw Error(ErrorCode::Validation, "eigenvalues must be sorted by modulus");
  DiagonalModel m;
  m.label = "atoms";
  m.density = Density::Atoms;
  m.G = std::move(G);
  m.cap = eigenvalues.size();
  m.table = std::move(eigenvalues);
  return m;
}

double DiagonalModel::eigenvalue(std::size_t m) const {
  if (m == 0) throw Error(ErrorCode::Validation, "atoms are 1-based");
  if (m <= table.size()) return table[m - 1];
  if (identity_rule) return static_cast<double>(m);
  throw Error(ErrorCode::Validation, "atom beyond the eigenvalue table");
}

namespace {
DiagonalModel model_from(const nlohmann::json& j) {
  const auto sym = j.at("symbol");
  const std::string kind = sym.at("kind").get<std::string>();
  const double order = sym.at("order").get<double>();
  SymbolFunction G;
  if (kind == "power_resolvent") G = SymbolFunction::power_resolvent(order);
  else if (kind == "inverse_power") G = SymbolFunction::inverse_power(order);
  else throw Error(ErrorCode::Validation, "unknown symbol kind '" + kind + "'");
  const std::string density = j.at("density").get<std::string>();
  DiagonalModel m;
  if (density == "constant") {
    if (j.value("eigenvalue_rule", std::string("torus-laplacian")) != "torus-laplacian")
      throw Error(ErrorCode::Validation, "constant density requires the torus-laplacian rule");
    m = DiagonalModel::torus(j.value("dim", 1), G, j.value("cutoff", -1));
  } else if (density == "atoms") {
    if (j.contains("eigenvalues")) {
      m = DiagonalModel::atoms(j.at("eigenvalues").get<std::vector<double>>(), G);
    } else {
      if (j.value("eigenvalue_rule", std::string("identity")) != "identity")
        throw Error(ErrorCode::Validation, "atom density requires eigenvalues or the identity rule");
      m = DiagonalModel::sequence(G, j.value("cap", std::size_t{1} << 20));
    }
  } else {
    throw Error(ErrorCode::Validation, "density must be 'constant' or 'atoms'");
  }
  m.label = j.value("label", m.label);
  return m;
}
}  // namespace

DiagonalModel parse_model(std::string_view json_text) {
  try {
    return model_from(nlohmann::json::parse(json_text));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Validation, std::string("model json: ") + e.what());
  }
}

std::string model_to_json(const DiagonalModel& m) {
  nlohmann::json j;
  j["label"] = m.label;
  j["symbol"] = {{"kind", m.G.kind() == SymbolFunction::Kind::InversePower ? "inverse_power" : "power_resolvent"},
                 {"order", m.G.order()}};
  if (m.G.kind() == SymbolFunction::Kind::Table) throw Error(ErrorCode::Validation, "table symbols are not serialisable");
  if (is_torus(m)) {
    j["density"] = "constant";
    j["eigenvalue_rule"] = "torus-laplacian";
    j["dim"] = m.dim;
    j["cutoff"] = m.cutoff;
  } else {
    j["density"] = "atoms";
    if (m.identity_rule) {
      j["eigenvalue_rule"] = "identity";
      j["cap"] = m.cap;
    } else {
      j["eigenvalues"] = m.table;
    }
  }
  return j.dump();
}

// ---------------------------------------------------------------------------

ModelSet ModelSet::empty() {
  ModelSet s;
  s.kind = Kind::Empty;
  return s;
}

ModelSet ModelSet::interval(double a, double b) { return union_of({{a, b}}); }

ModelSet ModelSet::union_of(std::vector<std::pair<double, double>> pieces) {
  for (auto& [a, b] : pieces)
    if (!(0 <= a && a <= b && b <= 1)) throw Error(ErrorCode::Validation, "intervals must lie in [0, 1]");
  std::sort(pieces.begin(), pieces.end());
  ModelSet s;
  s.kind = Kind::Intervals;
  for (const auto& pc : pieces) {
    if (!s.intervals.empty() && pc.first <= s.intervals.back().second)
      s.intervals.back().second = std::max(s.intervals.back().second, pc.second);
    else
      s.intervals.push_back(pc);
  }
  return s;
}

ModelSet ModelSet::atom_list(std::vector<std::size_t> atoms) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  if (!atoms.empty() && atoms.front() == 0) throw Error(ErrorCode::Validation, "atoms are 1-based");
  ModelSet s;
  s.kind = Kind::Atoms;
  s.atoms = std::move(atoms);
  return s;
}

ModelSet ModelSet::atoms_from(std::size_t m) {
  if (m == 0) throw Error(ErrorCode::Validation, "atoms are 1-based");
  ModelSet s;
  s.kind = Kind::AtomsFrom;
  s.from = m;
  return s;
}

double ModelSet::lebesgue() const {
  switch (kind) {
    case Kind::Whole: return 1.0;
    case Kind::Empty: return 0.0;
    case Kind::Intervals: {
      double t = 0;
      for (const auto& [a, b] : intervals) t += b - a;
      return t;
    }
    default: throw Error(ErrorCode::Validation, "atom set used on a torus model");
  }
}

double AtomFunction::operator()(std::size_t m) const {
  if (m <= prefix.size()) return prefix[m - 1];
  if (period.empty()) return 0.0;
  return period[(m - prefix.size() - 1) % period.size()];
}

double AtomFunction::tail_mean(double p) const { return period_mean(*this, Transform::AbsPower, p); }

AtomFunction AtomFunction::indicator(const ModelSet& set, std::size_t cap) {
  switch (set.kind) {
    case ModelSet::Kind::Whole: return periodic({1.0});
    case ModelSet::Kind::Empty: return finite({});
    case ModelSet::Kind::Atoms: {
      std::vector<double> v(set.atoms.empty() ? 0 : set.atoms.back(), 0.0);
      for (std::size_t a : set.atoms) v[a - 1] = 1.0;
      return finite(std::move(v));
    }
    case ModelSet::Kind::AtomsFrom: {
      if (set.from > cap) throw Error(ErrorCode::Validation, "tail set starts beyond the model cap");
      return {std::vector<double>(set.from - 1, 0.0), {1.0}};
    }
    case ModelSet::Kind::Intervals: break;
  }
  throw Error(ErrorCode::Validation, "interval set used on an atom model");
}

// ---------------------------------------------------------------------------

double density_F_D(const DiagonalModel& model, double s, std::size_t atom) {
  if (is_torus(model)) return torus_zeta(model, s).value;
  return model.G.pow(model.eigenvalue(atom), s);
}

MeasureEstimate integrate_mu_s(const DiagonalModel& model, const ModelFunction& h, double s) {
  check_s(s);
  if (is_torus(model)) {
    const auto z = torus_zeta(model, s);
    const double w = torus_lebesgue(h, Transform::Signed, 1.0);
    return {s, z.value * w, z.error * std::abs(w)};
  }
  return atom_sum(model, as_atom_function(model, h), s, Transform::Signed, 1.0);
}

MeasureEstimate mu_s(const DiagonalModel& model, const ModelSet& J, double s) {
  if (!is_torus(model) && J.kind == ModelSet::Kind::Atoms) {
    // Sparse path: only the listed atoms.
    check_s(s);
    std::vector<double> t(J.atoms.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = model.G.pow(model.eigenvalue(J.atoms[i]), s);
    return {s, pairwise_sum(t), 0.0};
  }
  return integrate_mu_s(model, J, s);
}

std::vector<double> default_s_grid() {
  std::vector<double> g;
  for (int j = 0; j <= 10; ++j) g.push_back(1.0 + std::ldexp(1.0, -j));
  return g;
}

WeakNormValue weak_norm(const DiagonalModel& model, const ModelFunction& f, double p,
                        const std::vector<double>& s_grid) {
  if (!(p >= 1)) throw Error(ErrorCode::Validation, "weak norm needs p >= 1");
  if (s_grid.empty()) throw Error(ErrorCode::Validation, "empty s-grid");
  WeakNormValue out;
  out.p = p;
  out.s_grid = s_grid;
  const bool pinf = std::isinf(p);
  for (double s : s_grid) {
    check_s(s);
    double v;
    if (pinf) {
      if (is_torus(model)) {
        v = std::holds_alternative<ModelSet>(f) ? (std::get<ModelSet>(f).lebesgue() > 0 ? 1.0 : 0.0)
                                                 : std::get<TorusFunction>(f).lp_norm(kInf);
      } else {
        const AtomFunction a = as_atom_function(model, f);
        v = 0;
        for (std::size_t m = 1; m <= std::min(model.cap, std::max<std::size_t>(a.prefix.size(), 1)); ++m)
          v = std::max(v, std::abs(a(m)));
        for (double x : a.period) v = std::max(v, std::abs(x));
      }
    } else if (is_torus(model)) {
      const double leb = torus_lebesgue(f, Transform::AbsPower, p);
      v = std::pow((s - 1) * torus_zeta(model, s).value * leb, 1.0 / p);
    } else {
      const auto sum = atom_sum(model, as_atom_function(model, f), s, Transform::AbsPower, p);
      v = std::pow((s - 1) * sum.value, 1.0 / p);
    }
    out.samples.push_back(v);
    if (!std::isfinite(v)) {
      out.finite = false;
      out.diagnostic = "f is not in L^p(mu_s) at s = " + std::to_string(s);
    }
  }
  const auto it = std::max_element(out.samples.begin(), out.samples.end());
  out.value = out.finite ? *it : kInf;
  out.argsup_s = s_grid[static_cast<std::size_t>(it - out.samples.begin())];
  return out;
}

double weak_constant(const DiagonalModel& model, const std::vector<double>& s_grid) {
  double c = 0;
  for (double s : s_grid) c = std::max(c, (s - 1) * mu_s(model, ModelSet::whole(), s).value);
  return c;
}

DominationResult domination_check(const DiagonalModel& model, const ModelFunction& l, double tol) {
  DominationResult r;
  if (is_torus(model)) {
    // Every density is 1, so l >= 1 everywhere is required.
    if (const auto* set = std::get_if<ModelSet>(&l)) {
      if (set->kind == ModelSet::Kind::Whole) return r;
      // First point of [0,1) not covered by the intervals.
      double x = 0;
      for (const auto& [a, b] : set->intervals) {
        if (a > x + tol) break;
        x = std::max(x, b);
      }
      if (x >= 1 - tol) return r;
      r.pass = false;
      r.witness_atom = 1;
      r.witness_point = x;
      r.witness_value = 0.0;
      return r;
    }
    const auto& f = std::get<TorusFunction>(l);
    if (f.dim() != 1 && f.dim() != model.dim) throw Error(ErrorCode::Validation, "dimension mismatch");
    const int grid = 4096;
    double best = kInf, arg = 0;
    for (int i = 0; i < grid; ++i) {
      const double x = (i + 0.5) / grid, v = f.value(x);
      if (v < best) {
        best = v;
        arg = x;
      }
    }
    if (best < 1 - tol) {
      r.pass = false;
      r.witness_atom = 1;
      r.witness_point = arg;
      r.witness_value = best;
    }
    return r;
  }
  const AtomFunction a = as_atom_function(model, l);
  const std::size_t scan = std::min(model.cap, a.prefix.size() + std::max<std::size_t>(a.period.size(), 1));
  for (std::size_t m = 1; m <= scan; ++m) {
    if (a(m) < 1 - tol) {
      r.pass = false;
      r.witness_atom = m;
      r.witness_value = a(m);
      return r;
    }
  }
  return r;
}

double tail_seminorm(const DiagonalModel& model, std::size_t N, std::size_t K) {
  if (N < 1 || K < 1) throw Error(ErrorCode::Validation, "tail seminorm needs N, K >= 1");
  std::vector<double> mu(K);
  if (is_torus(model)) {
    const double need = static_cast<double>(N + K);
    // Square cutoff whose inscribed ball already holds the first N+K ranks.
    int c;
    if (model.dim == 1) c = static_cast<int>(need / 2) + 1;
    else if (model.dim == 2) c = static_cast<int>(std::sqrt(need / 3.0)) + 2;
    else c = static_cast<int>(std::cbrt(need / 4.0)) + 2;
    const auto modes = enumerate_modes(model.dim, c);
    for (std::size_t i = 0; i < K; ++i) mu[i] = model.G(modes[N - 1 + i].lap_eigenvalue);
  } else {
    if (!model.identity_rule && N + K - 1 > model.table.size())
      throw Error(ErrorCode::Validation, "window runs past the eigenvalue table");
    for (std::size_t i = 0; i < K; ++i) mu[i] = model.G(model.eigenvalue(N + i));
  }
  return gamma_sequence(mu).gamma.back();
}

ResidueEstimate nu_residue(const DiagonalModel& model, const ModelSet& J, const ResidueOptions& opts) {
  std::vector<double> s_grid, samples;
  for (int j = opts.j_min; j <= opts.j_max; ++j) s_grid.push_back(1.0 + std::ldexp(1.0, -j));
  samples.resize(s_grid.size());
  for (std::size_t i = 0; i < s_grid.size(); ++i) samples[i] = (s_grid[i] - 1) * mu_s(model, J, s_grid[i]).value;
  ResidueEstimate r = richardson_ratio2(samples, opts.order);
  r.s_grid = s_grid;
  r.samples = samples;
  return r;
}

ModelSet Partition::piece(std::size_t j) const {
  if (j < 1) throw Error(ErrorCode::Validation, "partition pieces are 1-based");
  switch (kind) {
    case Kind::Singletons: return ModelSet::atom_list({j});
    case Kind::Dyadic: return ModelSet::interval(std::ldexp(1.0, -static_cast<int>(j)), std::ldexp(1.0, 1 - static_cast<int>(j)));
    case Kind::Trivial: return j == 1 ? ModelSet::whole() : ModelSet::empty();
  }
  return ModelSet::empty();
}

ModelSet Partition::tail(std::size_t N) const {
  if (N < 1) throw Error(ErrorCode::Validation, "partition pieces are 1-based");
  switch (kind) {
    case Kind::Singletons: return ModelSet::atoms_from(N);
    case Kind::Dyadic: return N == 1 ? ModelSet::whole() : ModelSet::interval(0.0, std::ldexp(1.0, 1 - static_cast<int>(N)));
    case Kind::Trivial: return N == 1 ? ModelSet::whole() : ModelSet::empty();
  }
  return ModelSet::empty();
}

AdditivityReport additivity_probe(const DiagonalModel& model, const Partition& partition,
                                  const std::vector<std::size_t>& N_values) {
  if (N_values.empty()) throw Error(ErrorCode::Validation, "additivity probe needs N values");
  AdditivityReport r;
  r.N = N_values;
  for (std::size_t N : N_values) {
    r.piece_values.push_back(nu_residue(model, partition.piece(N)).value);
    r.tail_values.push_back(nu_residue(model, partition.tail(N)).value);
  }
  const auto lo = std::min_element(N_values.begin(), N_values.end()) - N_values.begin();
  const auto hi = std::max_element(N_values.begin(), N_values.end()) - N_values.begin();
  const double first = r.tail_values[static_cast<std::size_t>(lo)], last = r.tail_values[static_cast<std::size_t>(hi)];
  r.failure = first > 1e-6 && last >= 0.5 * first;
  char buf[200];
  std::snprintf(buf, sizeof buf, "%s: tail nu from %.6g (N=%zu) to %.6g (N=%zu)",
                r.failure ? "additivity fails" : "tails decrease", first, N_values[static_cast<std::size_t>(lo)],
                last, N_values[static_cast<std::size_t>(hi)]);
  r.summary = buf;
  return r;
}

WeakLimitReport weak_limit_probe(const DiagonalModel& model, const std::vector<ModelFunction>& h,
                                 const std::vector<double>& k_grid) {
  if (k_grid.size() < 3) throw Error(ErrorCode::Validation, "k-grid needs at least three points");
  for (std::size_t i = 1; i < k_grid.size(); ++i)
    if (k_grid[i] != 2 * k_grid[i - 1]) throw Error(ErrorCode::Validation, "k-grid must double at each step");
  WeakLimitReport r;
  r.k_grid = k_grid;
  for (const auto& fn : h) {
    std::vector<double> v;
    for (double k : k_grid) v.push_back(integrate_mu_s(model, fn, 1.0 + 1.0 / k).value / k);
    const auto ex = richardson_ratio2(v, 2);
    r.brackets.push_back(limit_bracket(std::span<const double>(v)));
    r.limits.push_back(ex.value);
    r.limit_errors.push_back(ex.error);
    r.values.push_back(std::move(v));
  }
  return r;
}

}  // namespace dixmier
