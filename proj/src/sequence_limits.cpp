#include "dixmier/sequence_limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dixmier/error.hpp"
#include "dixmier/random.hpp"

namespace dixmier {

namespace {

struct Neumaier {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) comp += (sum - t) + x;
    else comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

void check_nonempty(const BoundedSequence& a) {
  if (a.values.empty()) throw Error(ErrorCode::Validation, "sequence must be nonempty");
  for (double v : a.values)
    if (!std::isfinite(v)) throw Error(ErrorCode::Validation, "sequence entries must be finite");
}

// Row k of the averaging weights: (j, w) pairs, j 1-based.
template <class F>
void for_each_weight(std::size_t k, F&& f) {
  const double lo = static_cast<double>(k) - 1.0, hi = static_cast<double>(k);
  auto j = static_cast<std::size_t>(std::floor(std::exp(lo)));
  if (j < 1) j = 1;
  while (j > 1 && std::log(static_cast<double>(j)) > lo) --j;
  for (;; ++j) {
    const double a = std::log(static_cast<double>(j));
    if (a >= hi) break;
    const double b = std::log(static_cast<double>(j + 1));
    const double w = std::min(hi, b) - std::max(lo, a);
    if (w > 0) f(j, w);
  }
}

std::size_t chain_length(std::size_t K) {
  auto m = static_cast<std::size_t>(std::floor(std::log(static_cast<double>(K) + 1.0)));
  while (m > 0 && std::exp(static_cast<double>(m)) > static_cast<double>(K) + 1.0) --m;
  return m;
}

}  // namespace

BoundedSequence shift(const BoundedSequence& a, std::size_t j) {
  check_nonempty(a);
  if (j < 1) throw Error(ErrorCode::Validation, "shift must be positive");
  if (j >= a.size()) throw Error(ErrorCode::EmptyResult, "shift leaves no entries");
  return {std::vector<double>(a.values.begin() + static_cast<std::ptrdiff_t>(j), a.values.end()), a.provenance};
}

BoundedSequence dilate(const BoundedSequence& a, std::size_t j) {
  check_nonempty(a);
  if (j < 1) throw Error(ErrorCode::Validation, "dilation must be positive");
  BoundedSequence out{{}, a.provenance};
  out.values.reserve(a.size() * j);
  for (double v : a.values)
    for (std::size_t r = 0; r < j; ++r) out.values.push_back(v);
  return out;
}

BoundedSequence averaging_chain(const BoundedSequence& a) {
  check_nonempty(a);
  const std::size_t m = chain_length(a.size());
  if (m == 0) throw Error(ErrorCode::EmptyResult, "prefix too short for the averaging chain");
  BoundedSequence out{std::vector<double>(m), a.provenance};
  for (std::size_t k = 1; k <= m; ++k) {
    Neumaier acc;
    for_each_weight(k, [&](std::size_t j, double w) { acc.add(w * a.values[j - 1]); });
    out.values[k - 1] = acc.value();
  }
  return out;
}

std::vector<double> averaging_weight_sums(std::size_t K) {
  const std::size_t m = chain_length(K);
  std::vector<double> sums(m);
  for (std::size_t k = 1; k <= m; ++k) {
    Neumaier acc;
    for_each_weight(k, [&](std::size_t, double w) { acc.add(w); });
    sums[k - 1] = acc.value();
  }
  return sums;
}

BoundedSequence cesaro_means(const BoundedSequence& a) {
  check_nonempty(a);
  BoundedSequence out{std::vector<double>(a.size()), a.provenance};
  Neumaier acc;
  for (std::size_t k = 0; k < a.size(); ++k) {
    acc.add(a.values[k]);
    out.values[k] = acc.value() / static_cast<double>(k + 1);
  }
  return out;
}

double surrogate_functional(const BoundedSequence& a, double window_fraction) {
  const BoundedSequence b = averaging_chain(a);
  const LimitBracket br = limit_bracket(b, window_fraction);
  Neumaier acc;
  for (std::size_t k = br.k_start; k <= br.k_end; ++k) acc.add(b.values[k - 1]);
  return acc.value() / static_cast<double>(br.k_end - br.k_start + 1);
}

GammaSequence gamma_sequence(std::span<const double> mu) {
  if (mu.empty()) throw Error(ErrorCode::Validation, "singular value list is empty");
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!(mu[i] >= 0) || !std::isfinite(mu[i]))
      throw Error(ErrorCode::Validation, "singular values must be finite and nonnegative");
    if (i > 0 && mu[i] > mu[i - 1]) throw Error(ErrorCode::Validation, "singular values must be nonincreasing");
  }
  GammaSequence g;
  g.gamma.resize(mu.size());
  g.partial.resize(mu.size());
  long double acc = 0.0L;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    acc += mu[k];
    g.partial[k] = static_cast<double>(acc);
    g.gamma[k] = static_cast<double>(acc / std::log1p(static_cast<long double>(k + 1)));
  }
  return g;
}

LimitBracket limit_bracket(std::span<const double> a, double window_fraction) {
  if (a.empty()) throw Error(ErrorCode::Validation, "sequence must be nonempty");
  if (!(window_fraction > 0.0 && window_fraction <= 1.0))
    throw Error(ErrorCode::Validation, "window fraction must lie in (0, 1]");
  const std::size_t K = a.size();
  auto len = static_cast<std::size_t>(std::ceil(window_fraction * static_cast<double>(K)));
  len = std::clamp<std::size_t>(len, 1, K);
  LimitBracket b;
  b.k_start = K - len + 1;
  b.k_end = K;
  auto [lo, hi] = std::minmax_element(a.begin() + static_cast<std::ptrdiff_t>(K - len), a.end());
  b.lower = *lo;
  b.upper = *hi;
  return b;
}

std::vector<double> log_increment_quotients(std::span<const double> mu) {
  const GammaSequence g = gamma_sequence(mu);
  std::vector<double> q(mu.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 2; k <= mu.size(); ++k) {
    const std::size_t h = k / 2;
    const double num = g.partial[k - 1] - g.partial[h - 1];
    const double den = std::log1p(static_cast<double>(k)) - std::log1p(static_cast<double>(h));
    q[k - 1] = num / den;
  }
  return q;
}

LimitBracket quotient_bracket(std::span<const double> mu, std::size_t k_lo, std::size_t k_hi) {
  if (k_lo < 2 || k_hi < k_lo || k_hi > mu.size())
    throw Error(ErrorCode::Validation, "quotient window outside the spectrum");
  const auto q = log_increment_quotients(mu);
  LimitBracket b;
  b.k_start = k_lo;
  b.k_end = k_hi;
  b.lower = b.upper = q[k_lo - 1];
  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    b.lower = std::min(b.lower, q[k - 1]);
    b.upper = std::max(b.upper, q[k - 1]);
  }
  return b;
}

double norm_one_inf(std::span<const double> mu) {
  const auto g = gamma_sequence(mu);
  return *std::max_element(g.gamma.begin(), g.gamma.end());
}

double riesz_seminorm(std::span<const double> mu, double window_fraction) {
  const auto g = gamma_sequence(mu);
  return limit_bracket(std::span<const double>(g.gamma), window_fraction).upper;
}

double z1_norm(std::span<const TraceSample> curve) {
  if (curve.empty()) throw Error(ErrorCode::Validation, "trace curve grid is empty");
  std::vector<TraceSample> c(curve.begin(), curve.end());
  for (const auto& t : c)
    if (!(t.s > 1.0) || !std::isfinite(t.trace) || t.trace < 0)
      throw Error(ErrorCode::Validation, "trace curve needs s > 1 and finite nonnegative traces");
  std::sort(c.begin(), c.end(), [](const TraceSample& x, const TraceSample& y) { return x.s < y.s; });
  const std::size_t len = (c.size() + 1) / 2;
  double best = 0.0;
  for (std::size_t i = 0; i < len; ++i)
    best = std::max(best, (c[i].s - 1.0) * std::pow(c[i].trace, 1.0 / c[i].s));
  return best;
}

LimitBatteryReport limit_preservation_battery(std::uint64_t seed, int sequences, std::size_t length) {
  if (sequences < 1 || length < 64) throw Error(ErrorCode::Validation, "battery needs sequences >= 1, length >= 64");
  SeededGenerator g(seed);
  LimitBatteryReport rep;
  rep.sequences = sequences;
  for (int t = 0; t < sequences; ++t) {
    const double L = g.uniform(-2, 2), A = g.uniform(-1, 1), B = g.uniform(-1, 1);
    const double p = g.uniform(0.5, 1.5), q = g.uniform(0.5, 1.5);
    auto env = [&](double k) { return std::abs(A) * std::pow(k, -p) + std::abs(B) * std::pow(k, -q); };
    BoundedSequence a;
    a.values.resize(length);
    for (std::size_t i = 0; i < length; ++i) {
      const double k = static_cast<double>(i + 1);
      a.values[i] = L + A * ((i + 1) % 2 == 0 ? 1.0 : -1.0) * std::pow(k, -p) + B * std::sin(k) * std::pow(k, -q);
    }
    auto check = [&](const BoundedSequence& img, double first_index) {
      const LimitBracket b = limit_bracket(img);
      const double tol = env(std::max(1.0, first_index));
      const double miss = std::max({0.0, b.lower - L, L - b.upper});
      ++rep.checks;
      if (miss > tol) ++rep.failures;
      rep.worst = std::max(rep.worst, miss / tol);
    };
    const double ks = static_cast<double>(limit_bracket(a).k_start);
    check(a, ks);
    for (std::size_t j : {1, 5, 17}) {
      const auto img = shift(a, j);
      check(img, static_cast<double>(limit_bracket(img).k_start + j));
    }
    for (std::size_t j : {2, 3}) {
      const auto img = dilate(a, j);
      check(img, std::ceil(static_cast<double>(limit_bracket(img).k_start) / static_cast<double>(j)));
    }
    const auto chain = averaging_chain(a);
    check(chain, std::floor(std::exp(static_cast<double>(limit_bracket(chain).k_start) - 1.0)));
  }
  return rep;
}

}  // namespace dixmier
