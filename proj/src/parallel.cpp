#include "dixmier/parallel.hpp"

#include <dlfcn.h>

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "dixmier/error.hpp"

namespace dixmier {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnsupportedDimension: return "unsupported-dimension";
    case ErrorCode::DivergentSum: return "divergent-sum";
    case ErrorCode::EmptyResult: return "empty-result";
    case ErrorCode::Validation: return "validation";
    case ErrorCode::ToleranceNotMet: return "tolerance-not-met";
    case ErrorCode::BandTooSmall: return "band-too-small";
    case ErrorCode::DimensionCap: return "dimension-cap";
    case ErrorCode::Resolution: return "resolution";
    case ErrorCode::Infeasible: return "infeasible";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

namespace {
std::atomic<int> g_threads{1};
}

void set_threads(int n) {
  if (n < 1) throw Error(ErrorCode::Validation, "thread count must be positive");
  g_threads.store(n);
}

int threads() { return g_threads.load(); }

void pin_blas_threads() {
  static std::once_flag once;
  std::call_once(once, [] {
    using setter = void (*)(int);
    if (auto fn = reinterpret_cast<setter>(dlsym(RTLD_DEFAULT, "openblas_set_num_threads"))) fn(1);
  });
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t grain) {
  if (n == 0) return;
  grain = std::max<std::size_t>(grain, 1);
  const std::size_t blocks = (n + grain - 1) / grain;
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads()), blocks);
  if (workers <= 1) {
    body(0, n);
    return;
  }
  const std::size_t per = (blocks + workers - 1) / workers;
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = std::min(n, w * per * grain);
    const std::size_t e = std::min(n, (w + 1) * per * grain);
    if (b >= e) continue;
    pool.emplace_back([&, w, b, e] {
      try {
        body(b, e);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 16) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

}  // namespace dixmier
