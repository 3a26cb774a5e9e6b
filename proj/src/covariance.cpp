#include "laprmt/covariance.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace laprmt {

namespace {

void require_order(std::size_t n) {
  if (n < 3) {
    throw std::invalid_argument("covariance: order must be >= 3, got " +
                                std::to_string(n));
  }
}

double repeated_eigenvalue(std::size_t n) {
  return static_cast<double>(n - 2) / static_cast<double>(n - 1);
}

// out = a*v + (b - a) * mean(v) * 1, i.e. (a I + (b - a) J/n) v.
std::vector<double> rank_one_apply(std::span<const double> v, double a, double b) {
  require_order(v.size());
  const double mean = compensated_sum(v) / static_cast<double>(v.size());
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = a * v[i] + (b - a) * mean;
  return out;
}

}  // namespace

SigmaEigenvalues sigma_eigenvalues(std::size_t n) {
  require_order(n);
  return {repeated_eigenvalue(n), 2.0};
}

std::vector<double> apply_sigma(std::span<const double> v) {
  const std::size_t n = v.size();
  require_order(n);
  const double total = compensated_sum(v);
  const double off = 1.0 / static_cast<double>(n - 1);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = v[i] + off * (total - v[i]);
  return out;
}

std::vector<double> apply_sigma_half(std::span<const double> v) {
  const double r = repeated_eigenvalue(v.size());
  return rank_one_apply(v, std::sqrt(r), std::numbers::sqrt2);
}

std::vector<double> apply_sigma_inv_half(std::span<const double> v) {
  require_order(v.size());
  const double r = repeated_eigenvalue(v.size());
  return rank_one_apply(v, 1.0 / std::sqrt(r), 1.0 / std::numbers::sqrt2);
}

std::vector<double> reconstruct_from_whitened(std::span<const double> d_tilde) {
  const std::size_t n = d_tilde.size();
  require_order(n);
  const double root_n = std::sqrt(static_cast<double>(n));
  const double root_r = std::sqrt(repeated_eigenvalue(n));
  const double z = compensated_sum(d_tilde) / root_n;
  const double common = (std::numbers::sqrt2 - root_r) * z / root_n;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = common + root_r * d_tilde[i];
  return out;
}

std::vector<double> rescaled_diagonal(std::span<const double> diag) {
  require_order(diag.size());
  const double scale = 1.0 / std::sqrt(static_cast<double>(diag.size() - 1));
  std::vector<double> out(diag.begin(), diag.end());
  for (double& x : out) x *= scale;
  return out;
}

std::vector<double> rescaled_diagonal(const SymmetricMatrix& l) {
  return rescaled_diagonal(l.diagonal());
}

std::vector<double> sigma_dense(std::size_t n) {
  require_order(n);
  std::vector<double> m(n * n, 1.0 / static_cast<double>(n - 1));
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1.0;
  return m;
}

std::vector<double> sigma_half_dense(std::size_t n) {
  require_order(n);
  const double root_r = std::sqrt(repeated_eigenvalue(n));
  const double off = (std::numbers::sqrt2 - root_r) / static_cast<double>(n);
  std::vector<double> m(n * n, off);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = root_r + off;
  return m;
}

}  // namespace laprmt
