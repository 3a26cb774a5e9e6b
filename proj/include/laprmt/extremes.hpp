#ifndef LAPRMT_EXTREMES_HPP
#define LAPRMT_EXTREMES_HPP

#include <cstddef>

#include "laprmt/linalg.hpp"

namespace laprmt {

// All logarithms are natural logarithms.

/// Rescaling constants for the Gumbel laws of order n (n >= 3):
///   a_n  = sqrt(2 log n)
///   b_n  = sqrt(2 log n) - (log log n + log 4 pi) / (2 sqrt(2 log n))
///   a'_n = a_n / sqrt(2),  b'_n = sqrt(2) b_n.
struct GumbelConstants {
  std::size_t n = 0;
  double a_n = 0.0;
  double b_n = 0.0;
  double a_n_prime = 0.0;
  double b_n_prime = 0.0;
};

GumbelConstants gumbel_constants(std::size_t n);

/// M_n = a_n (max_diag / sqrt(n-1) - sqrt((n-2)/(n-1)) b_n).
double stat_max_diag_value(std::size_t n, double max_diag);
double stat_max_diag(const SymmetricMatrix& l);

/// R_n = a'_n (lambda_max / sqrt(n-1) - b'_n sqrt((n-2)/(n-1))).
double stat_max_eig_value(std::size_t n, double lambda_max);
double stat_max_eig(const SymmetricMatrix& l);

/// G(x) = exp(-exp(-x)).
double gumbel_cdf(double x);
/// Inverse of G; throws std::invalid_argument unless 0 < p < 1.
double gumbel_quantile(double p);
/// G_k(x) = exp(-k exp(-x)), the law of the maximum of k independent
/// Gumbel variables.
double gumbel_k_cdf(double x, double k);

enum class BoundStatus { ok, negative_lower };

struct Bounds {
  double upper = 0.0;
  double lower = 0.0;
  /// negative_lower when eps >= 6 (resp. 2/k + eps >= 8): the lower bound is
  /// returned but is negative or zero.
  BoundStatus status = BoundStatus::ok;
};

/// sigma sqrt((2 + eps) n log n); requires n >= 2, eps > 0, sigma > 0.
double bound_upper(std::size_t n, double eps, double sigma = 1.0);
/// sigma (2 sqrt 2 - sqrt(2 + eps)) sqrt(n log n).
double bound_lower(std::size_t n, double eps, double sigma = 1.0);
Bounds bounds(std::size_t n, double eps, double sigma = 1.0);

/// k-block versions: sigma sqrt((2/k + eps) n log n) and
/// sigma (2 sqrt 2 - sqrt(2/k + eps)) sqrt(n log n).
Bounds bound_block(std::size_t n, std::size_t k, double eps, double sigma = 1.0);

struct ComparisonOptions {
  double K = 1.4142135623730951;  // sqrt(2), the Gaussian-case constant
  double c = 1.0;
  double eps = 1.0;
  double sigma = 1.0;
  std::size_t blocks = 1;
  /// Slack used for the deterministic max-diag <= lambda_max check.
  double minmax_slack = 1e-9;
};

struct BoundReport {
  double lambda_max = 0.0;
  double max_diag = 0.0;
  bool upper_ok = false;
  bool lower_ok = false;
  /// lambda_max <= K (1 + 1/sqrt(n-1)) max_diag
  bool comparison_ok = false;
  /// max_diag <= lambda_max (with slack scaled by max|L|)
  bool minmax_ok = false;
  /// sigma sqrt((n-1) log n) <= c max_diag
  bool hypothesis_ok = false;
  double epsilon = 0.0;
  double K = 0.0;
};

/// Evaluates every inequality from precomputed lambda_max and max_diag.
/// `scale` is max|L_ij|, used for the min-max slack.
BoundReport evaluate_bounds(std::size_t n, double lambda_max, double max_diag,
                            double scale, const ComparisonOptions& options);

/// Computes lambda_max and max_i L_ii of `l` and evaluates every inequality.
BoundReport check_comparison(const SymmetricMatrix& l,
                             const ComparisonOptions& options = {});

}  // namespace laprmt

#endif  // LAPRMT_EXTREMES_HPP
