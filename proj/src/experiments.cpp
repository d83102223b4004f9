#include "dixmier/experiments.hpp"

#include <algorithm>
#include <boost/math/special_functions/digamma.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "dixmier/abstract_model.hpp"
#include "dixmier/counterexample.hpp"
#include "dixmier/error.hpp"
#include "dixmier/linalg.hpp"
#include "dixmier/random.hpp"
#include "dixmier/sequence_limits.hpp"
#include "dixmier/spectral_lattice.hpp"
#include "dixmier/torus_operators.hpp"

namespace dixmier {

using nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

const std::set<std::string> kTopLevel{"experiment", "dimension", "function", "functions", "symbol",
                                      "cutoffs",    "band",      "s_grid",   "k_grid",    "tolerances",
                                      "seed",       "parameters", "output"};
// Sections merged key by key; every key must already exist in the defaults.
const std::set<std::string> kMerged{"cutoffs", "tolerances", "parameters"};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string label(const char* name, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s=%g", name, x);
  return buf;
}

std::vector<double> dyadic_s_grid(int j_lo, int j_hi) {
  std::vector<double> s;
  for (int j = j_lo; j <= j_hi; ++j) s.push_back(1.0 + std::ldexp(1.0, -j));
  return s;
}

json one_plus_cos() {
  return {{"kind", "trig_poly"},
          {"coefficients",
           {{{"index", {0}}, {"re", 1.0}, {"im", 0.0}},
            {{"index", {1}}, {"re", 0.5}, {"im", 0.0}},
            {{"index", {-1}}, {"re", 0.5}, {"im", 0.0}}}}};
}

void require_feasible_matrix(int n, long long N, const char* what) {
  const std::size_t cap = default_dimension_cap(n);
  if (N < 1) throw Error(ErrorCode::Validation, std::string(what) + " cutoff must be positive");
  const double dim = std::pow(2.0 * static_cast<double>(N) + 1.0, n);
  if (dim > static_cast<double>(cap)) {
    long long best = 0;
    while (std::pow(2.0 * static_cast<double>(best + 1) + 1.0, n) <= static_cast<double>(cap)) ++best;
    throw Error(ErrorCode::Infeasible, std::string(what) + " cutoff N=" + std::to_string(N) + " gives dense dimension " +
                                           num(dim) + " > cap " + std::to_string(cap) + " for n=" + std::to_string(n) +
                                           "; use N <= " + std::to_string(best) + " or the residue route");
  }
}

std::vector<long long> as_list(const json& v) {
  if (v.is_array()) return v.get<std::vector<long long>>();
  return {v.get<long long>()};
}

void check_feasible(const std::string& id, const json& d) {
  const int n = d.at("dimension").get<int>();
  if (n < 1 || n > 3) throw Error(ErrorCode::Validation, "dimension must be 1, 2 or 3");
  const json& c = d.at("cutoffs");
  const json& p = d.at("parameters");
  if (id == "l-infinity-identity") {
    for (const char* k : {"trace", "hs", "bracket"})
      for (long long N : as_list(c.at(k))) require_feasible_matrix(n, N, k);
    const long long Nz = c.at("zeta").get<long long>();
    if (std::pow(2.0 * static_cast<double>(Nz) + 1.0, n) > 1e9)
      throw Error(ErrorCode::Infeasible, "zeta cutoff " + std::to_string(Nz) + " sums more than 1e9 modes; lower it");
  } else if (id == "l2-sharpness" || id == "l1-residue" || id == "l1-plus-eps") {
    for (long long N : as_list(c.at("bracket"))) require_feasible_matrix(n, N, "bracket");
  } else if (id == "l1-counterexample") {
    const int nm = p.at("n_max").get<int>();
    if (nm > 16)
      throw Error(ErrorCode::Infeasible, "n_max=" + std::to_string(nm) + " needs mode cutoffs beyond 2^13; use n_max <= 16");
  } else if (id == "non-normal-witness" || id == "limits-battery") {
    for (long long k : as_list(d.at("k_grid")))
      if (k < 1 || k > 100000000)
        throw Error(ErrorCode::Infeasible, "k=" + std::to_string(k) + " outside [1, 1e8]; use a smaller k-grid");
    if (id == "limits-battery" && p.at("length").get<long long>() > 10000000)
      throw Error(ErrorCode::Infeasible, "sequence length above 1e7; lower parameters.length");
  } else if (id == "matrix-battery") {
    if (p.at("max_dim").get<int>() > 64)
      throw Error(ErrorCode::Infeasible, "max_dim above 64 is outside the dense battery budget; use <= 64");
  }
}

TorusFunction random_trig(SeededGenerator& g, int n, int b) {
  std::map<Index, cplx> c;
  for (int m1 = -b; m1 <= b; ++m1)
    for (int m2 = (n == 1 ? 0 : -b); m2 <= (n == 1 ? 0 : b); ++m2) {
      const Index m{m1, m2, 0}, neg{-m1, -m2, 0};
      if (c.count(neg)) continue;
      const cplx v = (m == neg) ? cplx(g.normal(), 0) : cplx(g.normal(), g.normal());
      c[m] = v;
      if (!(m == neg)) c[neg] = std::conj(v);
    }
  return TorusFunction::trig_poly(n, c);
}

std::string function_label(const json& spec) {
  const std::string k = spec.at("kind").get<std::string>();
  if (k == "log_power") return label("log_power:eps", spec.at("eps").get<double>());
  if (k == "power_singularity") return label("power_singularity:a", spec.at("a").get<double>());
  if (k == "constant") return label("constant:c", spec.at("value").get<double>());
  return k;
}

// Closed-form means of the singular families.
double closed_form_mean(const json& spec) {
  const std::string k = spec.at("kind").get<std::string>();
  if (k == "log_power") {
    const double e = spec.at("eps").get<double>();
    return 2.0 / e * std::pow(std::log(2.0), -e);
  }
  if (k == "power_singularity") {
    const double a = spec.at("a").get<double>();
    return 2.0 * std::pow(0.5, 1.0 - a) / (1.0 - a);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

// Harmonic-type gamma: (psi(N+K) - psi(N)) / log(1+K).
double digamma_gamma(double N, double K) {
  return (boost::math::digamma(N + K) - boost::math::digamma(N)) / std::log1p(K);
}

class Builder {
 public:
  explicit Builder(ResultRecord& r) : r_(r) {}
  void row(const std::string& route, long long N, double value, double err = 0.0) {
    r_.rows.push_back({r_.experiment, route, N, value, err, value - err, value + err});
  }
  void bracket(const std::string& route, long long N, double lower, double upper) {
    r_.rows.push_back({r_.experiment, route, N, 0.5 * (lower + upper), 0.5 * (upper - lower), lower, upper});
  }
  void bounded(const std::string& route, long long N, double value, double lower, double upper) {
    r_.rows.push_back({r_.experiment, route, N, value, 0.0, lower, upper});
  }
  void check(const std::string& name, bool pass, const std::string& detail) {
    r_.predicates.push_back({name, pass, detail});
  }

 private:
  ResultRecord& r_;
};

// ---------------------------------------------------------------------------

void run_l_infinity(const json& d, Builder& b) {
  const int n = d.at("dimension").get<int>();
  const SymbolFunction G = parse_symbol(d.at("symbol"));
  const json& c = d.at("cutoffs");
  const json& tol = d.at("tolerances");
  const json& p = d.at("parameters");
  const bool canonical = n == 1 && G.kind() == SymbolFunction::Kind::PowerResolvent && G.order() == 1.0;

  const int Nz = c.at("zeta").get<int>();
  const auto z = zeta_sum(G, 2.0, n, Nz);
  b.bracket("zeta_sum:s=2", Nz, z.lower(), z.upper());
  if (canonical) {
    const double o = 0.5 / std::tanh(0.5);
    const bool ok = z.lower() <= o && o <= z.upper() && z.upper() - z.lower() <= tol.at("zeta_width").get<double>();
    b.check("zeta_closed_form", ok, "coth(1/2)/2 = " + num(o) + " in [" + num(z.lower()) + ", " + num(z.upper()) + "]");
  }

  for (int nn : {1, 2}) {
    const auto r = residue_at_one(SymbolFunction::power_resolvent(nn), nn);
    const double o = nn == 1 ? 1.0 / kPi : 0.25 / kPi;
    b.row("residue_at_one:n=" + std::to_string(nn), 0, r.value, r.error);
    const double t = nn == 1 ? tol.at("residue_n1_abs").get<double>() : tol.at("residue_n2_rel").get<double>() * o;
    b.check("residue_n" + std::to_string(nn), r.converged && std::abs(r.value - o) <= t,
            "value " + num(r.value) + " vs " + num(o));
  }

  SeededGenerator g(d.at("seed").get<std::uint64_t>());
  const int count = p.at("trig_count").get<int>();
  const int band = d.at("band").get<int>();
  std::vector<TorusFunction> polys;
  for (int i = 0; i < count; ++i) polys.push_back(random_trig(g, n, band));
  const double tr_tol = tol.at("trace_defect").get<double>();
  for (double s : d.at("s_grid").get<std::vector<double>>())
    for (long long N : as_list(c.at("trace"))) {
      double worst = 0;
      for (const auto& f : polys) worst = std::max(worst, trace_identity_check(f, G, s, static_cast<int>(N)).defect);
      const std::string route = label("trace_identity_defect:s", s);
      b.row(route, N, worst);
      b.check(route + ":N=" + std::to_string(N), worst <= tr_tol, "max relative defect " + num(worst));
    }

  const int hs_count = p.at("hs_count").get<int>();
  const double hs_tol = tol.at("hs_defect").get<double>();
  for (long long N : as_list(c.at("hs"))) {
    double worst = 0;
    for (int i = 0; i < hs_count; ++i) {
      const auto& f = polys[static_cast<std::size_t>(i) % polys.size()];
      const auto m = compress(f, G, 1.0, static_cast<int>(N), CompressionKind::Plain);
      const double hs = hs_norm_matrix(m), hs2 = hs * hs, f2 = f.lp_norm(2);
      const double inner = ranked_sum(G, 2.0, enumerate_modes(n, static_cast<int>(N) - f.band()));
      const double full = ranked_sum(G, 2.0, enumerate_modes(n, static_cast<int>(N)));
      const double lo = f2 * f2 * inner, hi = f2 * f2 * full;
      worst = std::max(worst, std::max({0.0, lo - hs2, hs2 - hi}) / hs2);
      if (i == 0) {
        b.bounded("hs_matrix", N, hs, std::sqrt(lo), std::sqrt(hi));
        b.row("hs_formula", N, hs_norm_formula(f, G).value);
      }
    }
    b.row("hs_defect_after_edge_bound", N, worst);
    b.check("hs_vs_frobenius:N=" + std::to_string(N), worst <= hs_tol, "relative defect " + num(worst));
  }

  const TorusFunction f = parse_function(d.at("function"), n);
  const auto rr = residue_route(f, G, CompressionKind::Plain);
  b.row("residue_route", 0, rr.value, rr.error);
  const int Nb = c.at("bracket").get<int>();
  const auto db = dixmier_bracket(f, G, CompressionKind::Plain, Nb);
  b.bracket("gamma_bracket", Nb, db.bracket.lower, db.bracket.upper);
  const double rel = tol.at("bracket_rel").get<double>();
  b.check("residue_in_gamma_bracket", db.bracket.contains(rr.value, rel * std::abs(rr.value)),
          "residue " + num(rr.value) + " vs [" + num(db.bracket.lower) + ", " + num(db.bracket.upper) + "]");
}

void run_l2_sharpness(const json& d, Builder& b) {
  const SymbolFunction G = parse_symbol(d.at("symbol"));
  const json& tol = d.at("tolerances");
  const auto cut = as_list(d.at("cutoffs").at("bracket"));
  const double stable = tol.at("stable_ratio").get<double>();
  const double growth = tol.at("growth_ratio").get<double>();
  const double band = tol.at("bracket_rel").get<double>();
  for (double a : d.at("parameters").at("a_grid").get<std::vector<double>>()) {
    const TorusFunction f = TorusFunction::power_singularity(a);
    const std::string tag = label("a", a);
    const auto hs = hs_norm_formula(f, G);
    for (std::size_t i = 0; i < hs.refinements.size(); ++i) b.row("hs_formula:" + tag, hs.depths[i], hs.refinements[i]);
    double min_ratio = INFINITY, last_ratio = NAN;
    for (std::size_t i = 1; i < hs.refinements.size(); ++i) {
      last_ratio = hs.refinements[i] / hs.refinements[i - 1];
      min_ratio = std::min(min_ratio, last_ratio);
    }
    const auto rr = residue_route(f, G, CompressionKind::Symmetrized);
    b.row("residue_route:" + tag, 0, rr.value, rr.error);
    if (a < 0.5) {
      b.check("hs_stabilizes:" + tag, hs.finite && last_ratio <= stable, "last refinement ratio " + num(last_ratio));
      for (long long N : cut) {
        const auto db = dixmier_bracket(f, G, CompressionKind::Symmetrized, static_cast<int>(N));
        b.bracket("sym_bracket:" + tag, N, db.bracket.lower, db.bracket.upper);
        const bool ok = db.bracket.lower >= (1 - band) * rr.value && db.bracket.upper <= (1 + band) * rr.value;
        b.check("sym_bracket_near_mean:" + tag + ":N=" + std::to_string(N), ok,
                "[" + num(db.bracket.lower / rr.value) + ", " + num(db.bracket.upper / rr.value) + "] x h(0)/pi");
      }
    } else {
      b.check("hs_diverges:" + tag, !hs.finite && min_ratio >= growth, "smallest refinement ratio " + num(min_ratio));
      double prev = -INFINITY;
      bool grows = true;
      for (long long N : cut) {
        const auto db = dixmier_bracket(f, G, CompressionKind::Plain, static_cast<int>(N));
        b.row("plain_sup_gamma:" + tag, N, db.sup_gamma);
        grows = grows && db.sup_gamma > prev;
        prev = db.sup_gamma;
      }
      b.check("sup_gamma_grows:" + tag, grows, "plain compression sup gamma increases with N");
    }
  }
}

void run_l1_residue(const json& d, Builder& b) {
  const SymbolFunction G = parse_symbol(d.at("symbol"));
  const int n = d.at("dimension").get<int>();
  const double rel = d.at("tolerances").at("residue_rel").get<double>();
  for (const json& spec : d.at("functions")) {
    const TorusFunction f = parse_function(spec, n);
    const std::string tag = function_label(spec);
    const auto rr = residue_route(f, G, CompressionKind::Symmetrized);
    b.row("residue_route:" + tag, 0, rr.value, rr.error);
    b.row("mean_quadrature:" + tag, 0, rr.mean, rr.mean_error);
    b.row("residue_constant:" + tag, 0, rr.residue, rr.residue_error);
    const double cf = closed_form_mean(spec);
    if (std::isfinite(cf) && n == 1) {
      const double o = cf / kPi;
      b.row("closed_form:" + tag, 0, o);
      b.check("residue_identification:" + tag, std::abs(rr.value - o) <= rel * o,
              num(rr.value) + " vs " + num(o));
    }
    for (long long N : as_list(d.at("cutoffs").at("bracket"))) {
      const auto db = dixmier_bracket(f, G, CompressionKind::Symmetrized, static_cast<int>(N));
      b.bracket("sym_bracket:" + tag, N, db.bracket.lower, db.bracket.upper);
    }
  }
}

void run_l1_counterexample(const json& d, Builder& b) {
  const double eps = d.at("parameters").at("eps").get<double>();
  const int n_max = d.at("parameters").at("n_max").get<int>();
  const auto r = hs_divergence_report(eps, n_max);
  for (std::size_t i = 0; i < r.n.size(); ++i) {
    b.row("d_n", r.n[i], r.d[i], r.d_error[i]);
    b.row("partial_sum", r.n[i], r.partial[i]);
  }
  b.row("c0", 0, r.c0);
  b.row("c0_measured", 0, r.c0_measured);
  b.row("c1", 0, r.c1);
  b.bounded("growth", n_max, r.growth, r.required, r.growth);
  b.row("fit_slope", 0, r.fit_slope);
  b.row("decay_exponent", 0, r.decay_exponent);
  b.check("c1_positive", r.c1 > 0 && r.chain_holds, "c1 = " + num(r.c1));
  b.check("growth_vs_required", r.growth >= r.required, num(r.growth) + " >= " + num(r.required));
  b.check("divergence_consistent", r.divergence_consistent, r.warning.empty() ? "ok" : r.warning);
  const auto cr = contrast_residue(eps);
  const double o = 2.0 / eps * std::pow(std::log(2.0), -eps) / kPi;
  b.row("contrast_residue", 0, cr.value, cr.error);
  b.check("contrast_closed_form", std::abs(cr.value - o) <= d.at("tolerances").at("contrast_abs").get<double>(),
          num(cr.value) + " vs " + num(o));
}

void run_l1_plus_eps(const json& d, Builder& b) {
  const SymbolFunction G = parse_symbol(d.at("symbol"));
  const int n = d.at("dimension").get<int>();
  const json& tol = d.at("tolerances");
  const double eps = d.at("parameters").at("eps").get<double>();
  const TorusFunction f = parse_function(d.at("function"), n);
  const auto rr = residue_route(f, G, CompressionKind::Symmetrized);
  b.row("residue_route", 0, rr.value, rr.error);
  const double fp = f.lp_norm(1.0 + eps);
  b.row(label("lp_norm:p", 1.0 + eps), 0, fp);
  const double slack = tol.at("z1_slack").get<double>();
  const double hw = tol.at("half_width_rel").get<double>();
  for (long long N : as_list(d.at("cutoffs").at("bracket"))) {
    const auto c = compress(f, G, 1.0, static_cast<int>(N), CompressionKind::Symmetrized);
    const auto ev = hermitian_part_eigenvalues(c);
    const auto db = dixmier_bracket_from_eigenvalues(ev);
    const std::string nt = ":N=" + std::to_string(N);
    b.bracket("sym_bracket", N, db.bracket.lower, db.bracket.upper);
    b.check("bracket_contains_mean" + nt, db.bracket.contains(rr.value),
            num(rr.value) + " in [" + num(db.bracket.lower) + ", " + num(db.bracket.upper) + "]");
    const double half = 0.5 * db.bracket.width();
    b.check("bracket_half_width" + nt, half <= hw * rr.value, "half-width / value = " + num(half / rr.value));
    std::vector<double> sv(ev.size());
    for (std::size_t i = 0; i < ev.size(); ++i) sv[i] = std::abs(ev[i]);
    std::sort(sv.rbegin(), sv.rend());
    std::vector<TraceSample> op_curve, g_curve;
    bool per_s = true;
    double worst = -INFINITY;
    for (double s : d.at("s_grid").get<std::vector<double>>()) {
      const double lhs = schatten_from_values(sv, s), gs = schatten_from_values(c.weights, s);
      b.bounded(label("schatten:s", s), N, lhs, 0.0, fp * gs);
      worst = std::max(worst, lhs / (fp * gs) - 1.0);
      per_s = per_s && lhs <= fp * gs * (1.0 + slack);
      op_curve.push_back({s, std::pow(lhs, s)});
      g_curve.push_back({s, std::pow(gs, s)});
    }
    const double z_op = z1_norm(op_curve), z_g = z1_norm(g_curve);
    b.bounded("z1_operator", N, z_op, 0.0, fp * z_g);
    b.row("z1_symbol", N, z_g);
    b.check("schatten_bound_per_s" + nt, per_s, "largest relative excess " + num(worst));
    b.check("z1_bound" + nt, z_op <= fp * z_g * (1.0 + slack), num(z_op) + " <= " + num(fp * z_g));
  }
}

void run_non_normal(const json& d, Builder& b) {
  const auto model = DiagonalModel::sequence(SymbolFunction::inverse_power(1));
  const double tol = d.at("tolerances").at("tail_abs").get<double>();
  const auto tails = as_list(d.at("cutoffs").at("tail"));
  for (long long K : as_list(d.at("k_grid")))
    for (long long N : tails) {
      const double v = tail_seminorm(model, static_cast<std::size_t>(N), static_cast<std::size_t>(K));
      const double o = digamma_gamma(static_cast<double>(N), static_cast<double>(K));
      b.bounded("tail_seminorm:K=" + std::to_string(K), N, v, o, o);
      b.check("tail_seminorm:N=" + std::to_string(N) + ":K=" + std::to_string(K), std::abs(v - o) <= tol,
              num(v) + " vs harmonic " + num(o));
    }
  std::vector<std::size_t> Ns;
  for (long long N : tails) Ns.push_back(static_cast<std::size_t>(N));
  const auto rep = additivity_probe(model, {Partition::Kind::Singletons}, Ns);
  for (std::size_t i = 0; i < rep.N.size(); ++i) {
    b.row("nu_piece", static_cast<long long>(rep.N[i]), rep.piece_values[i]);
    b.row("nu_tail", static_cast<long long>(rep.N[i]), rep.tail_values[i]);
  }
  b.check("additivity_failure", rep.failure, rep.summary);
  const auto atoms = d.at("parameters").at("domination_atoms").get<std::size_t>();
  const auto dom = domination_check(model, AtomFunction::finite(std::vector<double>(atoms, 1.0)));
  b.row("domination_witness", dom.witness_atom ? static_cast<long long>(*dom.witness_atom) : -1, dom.witness_value);
  b.check("domination_fails_with_witness", !dom.pass && dom.witness_atom.has_value(),
          dom.witness_atom ? "atom " + std::to_string(*dom.witness_atom) : "no witness");
  const auto torus = DiagonalModel::torus(1, SymbolFunction::power_resolvent(1));
  b.check("torus_dominated", domination_check(torus, ModelSet::whole()).pass, "constant densities on the torus");
}

void run_limits(const json& d, Builder& b) {
  const json& p = d.at("parameters");
  const json& tol = d.at("tolerances");
  const auto wK = p.at("weight_K").get<std::size_t>();
  double worst = 0;
  for (double s : averaging_weight_sums(wK)) worst = std::max(worst, std::abs(s - 1.0));
  b.row("weight_sum_defect", static_cast<long long>(wK), worst);
  b.check("weight_sums", worst <= tol.at("weight_sum").get<double>(), "max |sum - 1| = " + num(worst));

  const auto lb = limit_preservation_battery(d.at("seed").get<std::uint64_t>(), p.at("sequences").get<int>(),
                                             p.at("length").get<std::size_t>());
  b.row("battery_checks", lb.sequences, lb.checks);
  b.row("battery_failures", lb.sequences, lb.failures);
  b.row("battery_worst_envelope_ratio", lb.sequences, lb.worst);
  b.check("limit_preservation", lb.failures == 0,
          std::to_string(lb.failures) + " of " + std::to_string(lb.checks) + " brackets miss the limit");

  for (long long k : as_list(d.at("k_grid"))) {
    std::vector<double> mu(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < mu.size(); ++i) mu[i] = 1.0 / static_cast<double>(i + 1);
    const double v = gamma_sequence(mu).gamma.back();
    const double o = digamma_gamma(1.0, static_cast<double>(k));
    b.bounded("gamma_harmonic", k, v, o, o);
    b.check("gamma_harmonic:k=" + std::to_string(k), std::abs(v - o) <= tol.at("gamma_abs").get<double>(),
            num(v) + " vs " + num(o));
  }
}

void run_matrix(const json& d, Builder& b) {
  const json& p = d.at("parameters");
  const auto seed = d.at("seed").get<std::uint64_t>();
  const int inst = p.at("instances").get<int>(), dim = p.at("max_dim").get<int>();
  const double slack = d.at("tolerances").at("slack").get<double>();
  for (const auto& r : {battery_symmetric_products(seed, inst, dim, slack), battery_three_lines(seed + 1, inst, dim, slack),
                        battery_interpolation(seed + 2, inst, dim, slack)}) {
    b.row(r.name + ":violations", r.instances, r.violations);
    b.row(r.name + ":worst", r.instances, r.worst);
    b.check(r.name, r.violations == 0,
            std::to_string(r.checks) + " checks, " + std::to_string(r.violations) + " violations, worst " + num(r.worst));
  }
}

double json_number(const json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    throw Error(ErrorCode::Validation, "bad number string " + s);
  }
  return v.get<double>();
}

json number_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

}  // namespace

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids{"l-infinity-identity", "l2-sharpness",       "l1-residue",
                                            "l1-counterexample",   "l1-plus-eps",        "non-normal-witness",
                                            "limits-battery",      "matrix-battery"};
  return ids;
}

json default_config(const std::string& id) {
  json d{{"experiment", id},
         {"dimension", 1},
         {"symbol", {{"kind", "power_resolvent"}, {"order", 1}}},
         {"seed", 20240601},
         {"band", 4},
         {"s_grid", json::array()},
         {"k_grid", json::array()},
         {"cutoffs", json::object()},
         {"tolerances", json::object()},
         {"parameters", json::object()},
         {"output", json::object()}};
  if (id == "l-infinity-identity") {
    d["function"] = one_plus_cos();
    d["s_grid"] = {1.25, 1.5};
    d["cutoffs"] = {{"zeta", 100000}, {"trace", {256, 512}}, {"hs", {512, 1024}}, {"bracket", 1000}};
    d["tolerances"] = {{"zeta_width", 1e-8},   {"residue_n1_abs", 1e-3}, {"residue_n2_rel", 1e-2},
                       {"trace_defect", 1e-12}, {"hs_defect", 1e-6},      {"bracket_rel", 0.02}};
    d["parameters"] = {{"trig_count", 20}, {"hs_count", 5}};
  } else if (id == "l2-sharpness") {
    d["cutoffs"] = {{"bracket", {1024, 2048}}};
    d["tolerances"] = {{"stable_ratio", 1.02}, {"growth_ratio", 1.10}, {"bracket_rel", 0.15}};
    d["parameters"] = {{"a_grid", {0.40, 0.45, 0.55, 0.60}}};
  } else if (id == "l1-residue") {
    d["functions"] = {{{"kind", "log_power"}, {"eps", 0.5}}, {{"kind", "power_singularity"}, {"a", 0.6}}};
    d["cutoffs"] = {{"bracket", {512}}};
    d["tolerances"] = {{"residue_rel", 0.02}};
  } else if (id == "l1-counterexample") {
    d["parameters"] = {{"eps", 0.5}, {"n_max", 16}};
    d["tolerances"] = {{"contrast_abs", 1e-6}};
  } else if (id == "l1-plus-eps") {
    d["function"] = {{"kind", "power_singularity"}, {"a", 0.6}};
    d["parameters"] = {{"eps", 0.6}};
    d["cutoffs"] = {{"bracket", {2048}}};
    d["s_grid"] = dyadic_s_grid(1, 10);
    d["tolerances"] = {{"half_width_rel", 0.2}, {"z1_slack", 1e-6}};
  } else if (id == "non-normal-witness") {
    d["cutoffs"] = {{"tail", {1, 10, 100}}};
    d["k_grid"] = {1000000};
    d["tolerances"] = {{"tail_abs", 1e-3}};
    d["parameters"] = {{"domination_atoms", 100}};
  } else if (id == "limits-battery") {
    d["k_grid"] = {1000000};
    d["parameters"] = {{"sequences", 50}, {"length", 100000}, {"weight_K", 1000000}};
    d["tolerances"] = {{"weight_sum", 1e-15}, {"gamma_abs", 1e-6}};
  } else if (id == "matrix-battery") {
    d["parameters"] = {{"instances", 200}, {"max_dim", 16}};
    d["tolerances"] = {{"slack", 1e-10}};
  } else {
    throw Error(ErrorCode::Validation, "unknown experiment id '" + id + "'");
  }
  return d;
}

ExperimentConfig ExperimentConfig::make(const std::string& id, const json& user) {
  ExperimentConfig c;
  c.id = id;
  c.doc = default_config(id);
  if (!user.is_object()) throw Error(ErrorCode::Validation, "config must be a JSON object");
  try {
    for (const auto& [k, v] : user.items()) {
      if (!kTopLevel.count(k)) throw Error(ErrorCode::Validation, "unknown config key '" + k + "'");
      if (k == "experiment") {
        if (v.get<std::string>() != id)
          throw Error(ErrorCode::Validation, "config is for '" + v.get<std::string>() + "', not '" + id + "'");
      } else if (kMerged.count(k)) {
        if (!v.is_object()) throw Error(ErrorCode::Validation, "'" + k + "' must be an object");
        for (const auto& [kk, vv] : v.items()) {
          if (!c.doc[k].contains(kk))
            throw Error(ErrorCode::Validation, "unknown key '" + kk + "' in '" + k + "' for " + id);
          c.doc[k][kk] = vv;
        }
      } else {
        c.doc[k] = v;
      }
    }
    const int n = c.doc.at("dimension").get<int>();
    parse_symbol(c.doc.at("symbol"));
    if (c.doc.contains("function")) parse_function(c.doc.at("function"), n);
    if (c.doc.contains("functions"))
      for (const auto& f : c.doc.at("functions")) parse_function(f, n);
    for (double s : c.doc.at("s_grid").get<std::vector<double>>())
      if (!(s > 1.0)) throw Error(ErrorCode::Validation, "s-grid entries must exceed 1");
    check_feasible(id, c.doc);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Validation, std::string("malformed config: ") + e.what());
  }
  c.hash = fnv1a(c.doc.dump());
  return c;
}

std::string ExperimentConfig::hash_hex() const {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

TorusFunction parse_function(const json& spec, int n) {
  try {
    const std::string k = spec.at("kind").get<std::string>();
    if (k == "constant") return TorusFunction::constant(n, spec.at("value").get<double>());
    if (k == "power_singularity" || k == "log_power") {
      if (n != 1) throw Error(ErrorCode::UnsupportedDimension, k + " is defined on the circle only");
      return k == "log_power" ? TorusFunction::log_power(spec.at("eps").get<double>())
                              : TorusFunction::power_singularity(spec.at("a").get<double>());
    }
    if (k == "trig_poly") {
      std::map<Index, cplx> c;
      for (const auto& t : spec.at("coefficients")) {
        const auto idx = t.at("index").get<std::vector<int>>();
        if (idx.size() != static_cast<std::size_t>(n))
          throw Error(ErrorCode::Validation, "coefficient index length must equal the dimension");
        Index m{0, 0, 0};
        std::copy(idx.begin(), idx.end(), m.begin());
        c[m] += cplx(t.value("re", 0.0), t.value("im", 0.0));
      }
      return TorusFunction::trig_poly(n, c);
    }
    throw Error(ErrorCode::Validation, "unknown function kind '" + k + "'");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Validation, std::string("malformed function: ") + e.what());
  }
}

SymbolFunction parse_symbol(const json& spec) {
  try {
    const std::string k = spec.at("kind").get<std::string>();
    const double o = spec.at("order").get<double>();
    if (k == "power_resolvent") return SymbolFunction::power_resolvent(o);
    if (k == "inverse_power") return SymbolFunction::inverse_power(o);
    throw Error(ErrorCode::Validation, "unknown symbol kind '" + k + "'");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Validation, std::string("malformed symbol: ") + e.what());
  }
}

bool ResultRecord::passed() const {
  return std::all_of(predicates.begin(), predicates.end(), [](const Predicate& p) { return p.pass; });
}

ResultRecord run_experiment(const ExperimentConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  ResultRecord r;
  r.experiment = config.id;
  r.config = config.doc;
  r.config_hash = config.hash_hex();
  Builder b(r);
  const json& d = config.doc;
  try {
    if (config.id == "l-infinity-identity") run_l_infinity(d, b);
    else if (config.id == "l2-sharpness") run_l2_sharpness(d, b);
    else if (config.id == "l1-residue") run_l1_residue(d, b);
    else if (config.id == "l1-counterexample") run_l1_counterexample(d, b);
    else if (config.id == "l1-plus-eps") run_l1_plus_eps(d, b);
    else if (config.id == "non-normal-witness") run_non_normal(d, b);
    else if (config.id == "limits-battery") run_limits(d, b);
    else if (config.id == "matrix-battery") run_matrix(d, b);
    else throw Error(ErrorCode::Validation, "unknown experiment id '" + config.id + "'");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Validation, std::string("malformed config: ") + e.what());
  }
  r.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::string to_csv(const ResultRecord& r) {
  std::string out = "experiment,route,N_or_k,value,err,lower,upper\n";
  for (const auto& row : r.rows) {
    out += row.experiment + ',' + row.route + ',' + std::to_string(row.N_or_k) + ',' + num(row.value) + ',' +
           num(row.err) + ',' + num(row.lower) + ',' + num(row.upper) + '\n';
  }
  return out;
}

json to_json(const ResultRecord& r) {
  json rows = json::array(), preds = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"experiment", row.experiment},
                    {"route", row.route},
                    {"N_or_k", row.N_or_k},
                    {"value", number_json(row.value)},
                    {"err", number_json(row.err)},
                    {"lower", number_json(row.lower)},
                    {"upper", number_json(row.upper)}});
  for (const auto& p : r.predicates) preds.push_back({{"name", p.name}, {"pass", p.pass}, {"detail", p.detail}});
  return {{"experiment", r.experiment}, {"config", r.config},          {"config_hash", r.config_hash},
          {"rows", rows},               {"predicates", preds},         {"wall_clock", r.wall_clock},
          {"passed", r.passed()}};
}

ResultRecord record_from_json(const json& j) {
  try {
    ResultRecord r;
    r.experiment = j.at("experiment").get<std::string>();
    r.config = j.at("config");
    r.config_hash = j.at("config_hash").get<std::string>();
    r.wall_clock = j.at("wall_clock").get<double>();
    for (const auto& x : j.at("rows"))
      r.rows.push_back({x.at("experiment").get<std::string>(), x.at("route").get<std::string>(),
                        x.at("N_or_k").get<long long>(), json_number(x.at("value")), json_number(x.at("err")),
                        json_number(x.at("lower")), json_number(x.at("upper"))});
    for (const auto& x : j.at("predicates"))
      r.predicates.push_back({x.at("name").get<std::string>(), x.at("pass").get<bool>(), x.at("detail").get<std::string>()});
    if (fnv1a(r.config.dump()) != std::stoull(r.config_hash, nullptr, 16))
      throw Error(ErrorCode::Validation, "config hash does not match the stored config");
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Validation, std::string("malformed result record: ") + e.what());
  }
}

}  // namespace dixmier
