#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace dixmier {

// Singular values, nonincreasing (divide-and-conquer SVD, values only).
std::vector<double> singular_values(Eigen::MatrixXd a);
std::vector<double> singular_values(Eigen::MatrixXcd a);
// Eigenvalues of a symmetric / hermitian matrix, nondecreasing.
std::vector<double> hermitian_eigenvalues(Eigen::MatrixXd a);
std::vector<double> hermitian_eigenvalues(Eigen::MatrixXcd a);

// (sum mu_i^p)^{1/p}; p = infinity gives the largest entry.
double schatten_from_values(std::span<const double> mu, double p);

// Real power of a hermitian positive semidefinite matrix.
Eigen::MatrixXcd psd_power(const Eigen::MatrixXcd& a, double q);

}  // namespace dixmier
