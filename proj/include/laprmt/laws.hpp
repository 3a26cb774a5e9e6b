#ifndef LAPRMT_LAWS_HPP
#define LAPRMT_LAWS_HPP

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "laprmt/linalg.hpp"

namespace laprmt {

using RealFunction = std::function<double(double)>;

/// Sorted sample; the empirical CDF jumps by 1/n at each point.
class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::vector<double> samples);

  std::span<const double> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  /// (1/n) sum x^p.
  double raw_moment(int p) const;
  double mean() const { return raw_moment(1); }
  double variance() const;

 private:
  std::vector<double> samples_;
};

/// Eigenvalues divided by `scale` (> 0).
EmpiricalDistribution esd_of(const Spectrum& spectrum, double scale);

/// Exact Kolmogorov-Smirnov distance
///   D = max_i max(|i/n - F(x_(i))|, |(i-1)/n - F(x_(i))|).
double ks_statistic(const EmpiricalDistribution& emp, const RealFunction& cdf);

/// Sum over `bins` equal bins of [lo, hi) of |empirical bin mass - integral
/// of `pdf` over the bin|. Samples outside [lo, hi) contribute no mass.
double histogram_l1(const EmpiricalDistribution& emp, const RealFunction& pdf,
                    std::size_t bins, double lo, double hi);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> density;  ///< count / (n * width), per bin

  double width() const { return (hi - lo) / static_cast<double>(density.size()); }
  double center(std::size_t b) const {
    return lo + (static_cast<double>(b) + 0.5) * width();
  }
};

/// Density histogram over [lo, hi]; the last bin is closed on the right.
Histogram density_histogram(std::span<const double> sorted_samples,
                            std::size_t bins, double lo, double hi);

/// Adaptive Simpson on [a, b] with absolute tolerance `tol`.
double integrate(const RealFunction& f, double a, double b, double tol = 1e-12);

/// Semicircle density of half-width `radius`:
/// 2/(pi radius^2) sqrt(radius^2 - x^2) on [-radius, radius].
double semicircle_pdf(double x, double radius);
double gaussian_pdf(double x, double std_dev);

/// Weight, semicircle half-width and Gaussian standard deviation of the
/// normalized two-component mixture.
struct MixtureParams {
  double alpha = 0.7071067811865476;
  double radius = 1.4142135623730951;
  double std_dev = 1.4142135623730951;

  /// alpha = sqrt(2)/2, semicircle on [-sqrt(2) sigma, sqrt(2) sigma] and
  /// Gaussian of variance 2 sigma^2.
  static MixtureParams reference(double sigma = 1.0);
  /// Throws std::invalid_argument unless alpha in [0,1], radius, std_dev > 0.
  void validate() const;
};

/// alpha * semicircle(radius) + (1 - alpha) * N(0, std_dev^2). Normalized to
/// integrate to one.
double mixture_pdf(double x, const MixtureParams& params);

struct MixtureFit {
  MixtureParams params;
  /// L2 distance between the fitted density and the histogram.
  double residual = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

/// Least-squares fit of mixture_pdf to a 100-bin density histogram of `esd`.
/// Requires at least 1000 samples. On non-convergence the best iterate is
/// returned with converged = false.
MixtureFit fit_mixture(const EmpiricalDistribution& esd, std::size_t bins = 100);

/// A pair partition of {0, ..., 2k-1} as k pairs (a, b) with a < b, listed in
/// increasing order of a.
using PairPartition = std::vector<std::pair<int, int>>;

/// All (2k-1)!! pair partitions, generated by pairing the smallest unpaired
/// element with each later unpaired element in turn.
std::vector<PairPartition> pair_partitions(int k);

/// Blocks {a<b}, {c<d} cross iff a < c < b < d or c < a < d < b.
bool blocks_cross(std::pair<int, int> x, std::pair<int, int> y);

/// Number of blocks forming a connected component of size one in the
/// crossing graph, i.e. blocks that cross no other block.
int height(const PairPartition& partition);

/// Even moment m_{2k} = sum over pair partitions of 2^{height} of the free
/// convolution of the semicircle and the standard Gaussian. 0 <= k <= 6.
double gamma_m_moment(int k);

}  // namespace laprmt

#endif  // LAPRMT_LAWS_HPP
