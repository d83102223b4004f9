#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dixmier {

// std::mt19937_64 with hand-written transforms, so draws are identical on every
// standard library (the std distributions are implementation-defined).
class SeededGenerator {
 public:
  explicit SeededGenerator(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double normal() {  // Box-Muller, one draw per call
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace dixmier
