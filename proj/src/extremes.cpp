#include "laprmt/extremes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace laprmt {

namespace {

void require_statistic_order(std::size_t n) {
  if (n < 3) {
    throw std::invalid_argument("statistics need n >= 3, got " + std::to_string(n));
  }
}

void require_bound_args(std::size_t n, double eps, double sigma) {
  if (n < 2) throw std::invalid_argument("bounds need n >= 2");
  if (!(eps > 0)) throw std::invalid_argument("bounds need eps > 0");
  if (!(sigma > 0)) throw std::invalid_argument("bounds need sigma > 0");
}

double centering_factor(std::size_t n) {
  return std::sqrt(static_cast<double>(n - 2) / static_cast<double>(n - 1));
}

double max_diagonal(const SymmetricMatrix& l) {
  const auto d = l.diagonal();
  return *std::max_element(d.begin(), d.end());
}

}  // namespace

GumbelConstants gumbel_constants(std::size_t n) {
  require_statistic_order(n);
  const double log_n = std::log(static_cast<double>(n));
  const double a = std::sqrt(2.0 * log_n);
  const double b =
      a - (std::log(log_n) + std::log(4.0 * std::numbers::pi)) / (2.0 * a);
  return {n, a, b, a / std::numbers::sqrt2, std::numbers::sqrt2 * b};
}

double stat_max_diag_value(std::size_t n, double max_diag) {
  const auto c = gumbel_constants(n);
  const double root = std::sqrt(static_cast<double>(n - 1));
  return c.a_n * (max_diag / root - centering_factor(n) * c.b_n);
}

double stat_max_diag(const SymmetricMatrix& l) {
  return stat_max_diag_value(l.order(), max_diagonal(l));
}

double stat_max_eig_value(std::size_t n, double lambda_max) {
  const auto c = gumbel_constants(n);
  const double root = std::sqrt(static_cast<double>(n - 1));
  return c.a_n_prime * (lambda_max / root - c.b_n_prime * centering_factor(n));
}

double stat_max_eig(const SymmetricMatrix& l) {
  require_statistic_order(l.order());
  return stat_max_eig_value(l.order(), lambda_max(l));
}

double gumbel_cdf(double x) { return std::exp(-std::exp(-x)); }

double gumbel_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("gumbel_quantile: p must lie in (0, 1)");
  }
  return -std::log(-std::log(p));
}

double gumbel_k_cdf(double x, double k) {
  if (!(k >= 1.0)) throw std::invalid_argument("gumbel_k_cdf: k must be >= 1");
  return std::exp(-k * std::exp(-x));
}

double bound_upper(std::size_t n, double eps, double sigma) {
  return bound_block(n, 1, eps, sigma).upper;
}

double bound_lower(std::size_t n, double eps, double sigma) {
  return bound_block(n, 1, eps, sigma).lower;
}

Bounds bounds(std::size_t n, double eps, double sigma) {
  return bound_block(n, 1, eps, sigma);
}

Bounds bound_block(std::size_t n, std::size_t k, double eps, double sigma) {
  require_bound_args(n, eps, sigma);
  if (k == 0) throw std::invalid_argument("bounds need k >= 1");
  const double n_log_n = static_cast<double>(n) * std::log(static_cast<double>(n));
  const double width = 2.0 / static_cast<double>(k) + eps;
  Bounds out;
  out.upper = sigma * std::sqrt(width * n_log_n);
  out.lower = sigma * (2.0 * std::numbers::sqrt2 - std::sqrt(width)) * std::sqrt(n_log_n);
  if (width >= 8.0) out.status = BoundStatus::negative_lower;
  return out;
}

BoundReport evaluate_bounds(std::size_t n, double lambda_max, double max_diag,
                            double scale, const ComparisonOptions& options) {
  if (!(options.K > 0)) throw std::invalid_argument("comparison needs K > 0");
  BoundReport report;
  report.lambda_max = lambda_max;
  report.max_diag = max_diag;
  report.epsilon = options.eps;
  report.K = options.K;
  report.minmax_ok =
      max_diag <= lambda_max + options.minmax_slack * std::max(scale, 1.0);
  if (n >= 2) {
    const auto b = bound_block(n, options.blocks, options.eps, options.sigma);
    report.upper_ok = lambda_max <= b.upper;
    report.lower_ok = lambda_max >= b.lower;
    const double root = std::sqrt(static_cast<double>(n - 1));
    report.comparison_ok = lambda_max <= options.K * (1.0 + 1.0 / root) * max_diag;
    report.hypothesis_ok =
        options.sigma * std::sqrt(static_cast<double>(n - 1) *
                                  std::log(static_cast<double>(n))) <=
        options.c * max_diag;
  }
  return report;
}

BoundReport check_comparison(const SymmetricMatrix& l,
                             const ComparisonOptions& options) {
  return evaluate_bounds(l.order(), lambda_max(l), max_diagonal(l), l.max_abs(),
                         options);
}

}  // namespace laprmt
