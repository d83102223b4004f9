#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace dixmier {

// Worker count used by parallel_for. Results never depend on it.
void set_threads(int n);
int threads();

// Pins the BLAS/LAPACK backend to one thread so decompositions are reproducible.
void pin_blas_threads();

// Runs body(begin, end) over contiguous static blocks of [0, n).
// Block boundaries are multiples of `grain`.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t grain = 1);

// Pairwise summation; the tree depends only on the length.
double pairwise_sum(std::span<const double> values);

}  // namespace dixmier
