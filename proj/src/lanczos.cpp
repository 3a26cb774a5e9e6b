#include <algorithm>
#include <cmath>
#include <cstdint>

#include "laprmt/linalg.hpp"

namespace laprmt {

namespace {

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

// Fixed start vector so the fast path is a pure function of the matrix.
std::vector<double> start_vector(std::size_t n) {
  std::vector<double> v(n);
  std::uint64_t state = 0x2545F4914F6CDD1DULL;
  for (auto& x : v) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    x = static_cast<double>(z >> 11) * 0x1.0p-53 - 0.5;
  }
  return v;
}

void remove_mean(std::span<double> v) {
  const double mean = compensated_sum(v) / static_cast<double>(v.size());
  for (double& x : v) x -= mean;
}

}  // namespace

LanczosResult lanczos_lambda_max(const SymmetricMatrix& a,
                                 const LanczosOptions& options) {
  if (!a.all_finite()) {
    throw std::invalid_argument("lambda_max: matrix has non-finite entries");
  }
  const std::size_t n = a.order();
  LanczosResult result;
  if (n == 1) {
    result.value = a(0, 0);
    result.converged = true;
    return result;
  }

  const auto sums = a.row_sums();
  const double row_sum = sums.front();
  const double tol = 1e-10 * static_cast<double>(n) * std::max(a.max_abs(), 1e-300);
  const bool deflate = std::all_of(sums.begin(), sums.end(), [&](double s) {
    return std::abs(s - row_sum) <= tol;
  });
  result.deflated = deflate;

  const std::size_t dimension = deflate ? n - 1 : n;
  const std::size_t max_steps = std::min(options.max_iterations, dimension);

  std::vector<std::vector<double>> basis;
  std::vector<double> alpha;
  std::vector<double> beta;

  std::vector<double> q = start_vector(n);
  if (deflate) remove_mean(q);
  double norm = std::sqrt(dot(q, q));
  for (double& x : q) x /= norm;

  std::vector<double> w(n);
  double previous = 0.0;
  double theta = 0.0;
  for (std::size_t step = 0; step < max_steps; ++step) {
    a.multiply(q, w);
    const double a_j = dot(q, w);
    alpha.push_back(a_j);
    axpy(-a_j, q, w);
    if (!beta.empty()) axpy(-beta.back(), basis.back(), w);
    basis.push_back(q);

    // Full reorthogonalization, twice is enough.
    for (int pass = 0; pass < 2; ++pass) {
      if (deflate) remove_mean(w);
      for (const auto& b : basis) axpy(-dot(b, w), b, w);
    }

    theta = tridiagonal_eigenvalues(alpha, beta).back();
    result.iterations = step + 1;
    const double b_j = std::sqrt(dot(w, w));
    const bool exhausted = b_j <= 1e-14 * std::max(std::abs(theta), 1.0) ||
                           step + 1 == dimension;
    if (exhausted ||
        (step > 0 && std::abs(theta - previous) < options.rel_tol * std::abs(theta))) {
      result.converged = true;
      break;
    }
    previous = theta;
    beta.push_back(b_j);
    for (std::size_t i = 0; i < n; ++i) q[i] = w[i] / b_j;
  }

  result.value = deflate ? std::max(row_sum, theta) : theta;
  return result;
}

double lambda_max(const SymmetricMatrix& a) {
  const auto fast = lanczos_lambda_max(a);
  if (fast.converged) return fast.value;
  return lambda_max_dense(a);
}

}  // namespace laprmt
