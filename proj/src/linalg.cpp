#include "dixmier/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "dixmier/error.hpp"
#include "dixmier/parallel.hpp"

namespace dixmier {

namespace {
void check(lapack_int info, const char* what) {
  if (info != 0) throw Error(ErrorCode::ToleranceNotMet, std::string(what) + " failed, info = " + std::to_string(info));
}
}  // namespace

std::vector<double> singular_values(Eigen::MatrixXd a) {
  pin_blas_threads();
  const auto m = static_cast<lapack_int>(a.rows()), n = static_cast<lapack_int>(a.cols());
  std::vector<double> s(static_cast<std::size_t>(std::min(m, n)));
  if (s.empty()) return s;
  check(LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', m, n, a.data(), m, s.data(), nullptr, 1, nullptr, 1), "dgesdd");
  return s;
}

std::vector<double> singular_values(Eigen::MatrixXcd a) {
  pin_blas_threads();
  const auto m = static_cast<lapack_int>(a.rows()), n = static_cast<lapack_int>(a.cols());
  std::vector<double> s(static_cast<std::size_t>(std::min(m, n)));
  if (s.empty()) return s;
  check(LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, reinterpret_cast<lapack_complex_double*>(a.data()), m, s.data(),
                       nullptr, 1, nullptr, 1),
        "zgesdd");
  return s;
}

std::vector<double> hermitian_eigenvalues(Eigen::MatrixXd a) {
  pin_blas_threads();
  const auto n = static_cast<lapack_int>(a.rows());
  std::vector<double> w(static_cast<std::size_t>(n));
  if (n == 0) return w;
  check(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data()), "dsyevd");
  return w;
}

std::vector<double> hermitian_eigenvalues(Eigen::MatrixXcd a) {
  pin_blas_threads();
  const auto n = static_cast<lapack_int>(a.rows());
  std::vector<double> w(static_cast<std::size_t>(n));
  if (n == 0) return w;
  check(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, reinterpret_cast<lapack_complex_double*>(a.data()), n, w.data()),
        "zheevd");
  return w;
}

double schatten_from_values(std::span<const double> mu, double p) {
  if (!(p >= 1)) throw Error(ErrorCode::Validation, "Schatten exponent must be >= 1");
  if (mu.empty()) return 0.0;
  if (std::isinf(p)) return *std::max_element(mu.begin(), mu.end());
  // Scale by the largest value to avoid overflow for large p.
  const double top = *std::max_element(mu.begin(), mu.end());
  if (top == 0) return 0.0;
  std::vector<double> t(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) t[i] = std::pow(mu[i] / top, p);
  return top * std::pow(pairwise_sum(t), 1.0 / p);
}

Eigen::MatrixXcd psd_power(const Eigen::MatrixXcd& a, double q) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  Eigen::VectorXd d = es.eigenvalues().cwiseMax(0.0);
  for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = d[i] > 0 ? std::pow(d[i], q) : 0.0;
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace dixmier
