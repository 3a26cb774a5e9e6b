#ifndef LAPRMT_COVARIANCE_HPP
#define LAPRMT_COVARIANCE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "laprmt/linalg.hpp"

namespace laprmt {

// Covariance of the rescaled Laplacian diagonal D = (L_11, ..., L_nn)/sqrt(n-1)
// for unit-variance off-diagonal entries:
//
//   Sigma_ij = 1 if i == j, 1/(n-1) otherwise.
//
// Sigma = r*I + (2 - r)*J/n with r = (n-2)/(n-1) and J the all-ones matrix,
// so every function of Sigma acts as phi(r) on the complement of the ones
// vector and as phi(2) along it. All operations are matrix-free and O(n);
// n >= 3 throughout since r vanishes at n = 2.

struct SigmaEigenvalues {
  double repeated;  ///< (n-2)/(n-1), multiplicity n-1
  double top;       ///< 2, eigenvector (1, ..., 1)/sqrt(n)
};

SigmaEigenvalues sigma_eigenvalues(std::size_t n);

/// Sigma v evaluated directly from the entrywise definition.
std::vector<double> apply_sigma(std::span<const double> v);
std::vector<double> apply_sigma_half(std::span<const double> v);
std::vector<double> apply_sigma_inv_half(std::span<const double> v);

/// D_i = (sqrt(2) - sqrt(r)) Z / sqrt(n) + sqrt(r) Dtilde_i with
/// Z = sum_j Dtilde_j / sqrt(n); the explicit representation of the diagonal in
/// terms of its whitened counterpart.
std::vector<double> reconstruct_from_whitened(std::span<const double> d_tilde);

/// (L_11, ..., L_nn) / sqrt(n-1).
std::vector<double> rescaled_diagonal(const SymmetricMatrix& l);
std::vector<double> rescaled_diagonal(std::span<const double> diag);

/// Sigma^{1/2} (or Sigma) materialized; intended for small-n checks only.
std::vector<double> sigma_dense(std::size_t n);
std::vector<double> sigma_half_dense(std::size_t n);

}  // namespace laprmt

#endif  // LAPRMT_COVARIANCE_HPP
