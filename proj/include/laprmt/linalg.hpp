#ifndef LAPRMT_LINALG_HPP
#define LAPRMT_LINALG_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace laprmt {

/// Raised when the QL iteration fails to deflate an eigenvalue within the
/// sweep budget. `index()` is the position of the offending eigenvalue in the
/// tridiagonal form.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(std::size_t index, const std::string& what)
      : std::runtime_error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Dense real symmetric matrix stored as the packed lower triangle, row by
/// row: entry (i, j) with j <= i lives at i*(i+1)/2 + j.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(std::size_t n);
  SymmetricMatrix(std::size_t n, std::vector<double> packed);

  static SymmetricMatrix identity(std::size_t n);
  /// Builds from a full row-major n*n array; only the lower triangle is read.
  static SymmetricMatrix from_dense(std::size_t n, std::span<const double> rows);

  std::size_t order() const noexcept { return n_; }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return i >= j ? data_[offset(i) + j] : data_[offset(j) + i];
  }
  double& at(std::size_t i, std::size_t j) noexcept {
    return i >= j ? data_[offset(i) + j] : data_[offset(j) + i];
  }

  /// Row i of the packed storage: entries (i, 0) .. (i, i).
  std::span<const double> packed_row(std::size_t i) const noexcept {
    return {data_.data() + offset(i), i + 1};
  }
  std::span<double> packed_row(std::size_t i) noexcept {
    return {data_.data() + offset(i), i + 1};
  }
  std::span<const double> packed() const noexcept { return data_; }

  double max_abs() const noexcept;
  bool all_finite() const noexcept;
  std::vector<double> diagonal() const;
  /// Row sums computed with compensated summation.
  std::vector<double> row_sums() const;
  /// y = A x.
  void multiply(std::span<const double> x, std::span<double> y) const;
  SymmetricMatrix scaled(double factor) const;

  static constexpr std::size_t offset(std::size_t i) noexcept {
    return i * (i + 1) / 2;
  }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

/// Column-major dense matrix used for eigenvector output.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data[j * rows + i];
  }
  double& operator()(std::size_t i, std::size_t j) noexcept {
    return data[j * rows + i];
  }
};

/// Eigenvalues in ascending order; column k of `eigenvectors` pairs with
/// eigenvalue k. Repeated eigenvalues carry no canonical basis.
struct Spectrum {
  std::vector<double> eigenvalues;
  std::optional<DenseMatrix> eigenvectors;
};

Spectrum eigensolve(const SymmetricMatrix& a, bool want_vectors = false);

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// sub-diagonal `offdiag` (length n-1), ascending.
std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag,
                                            std::span<const double> offdiag);

/// Largest eigenvalue via the dense path.
double lambda_max_dense(const SymmetricMatrix& a);

struct LanczosOptions {
  double rel_tol = 1e-12;
  std::size_t max_iterations = 10000;
};

struct LanczosResult {
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  bool deflated = false;
};

/// Lanczos estimate of the largest eigenvalue. When every row sum of `a`
/// equals a common value mu (within rounding), the all-ones direction is an
/// eigenvector and is deflated; the result is then max(mu, top Ritz value of
/// the complement). Does not fall back; see lambda_max.
LanczosResult lanczos_lambda_max(const SymmetricMatrix& a,
                                 const LanczosOptions& options = {});

/// Largest eigenvalue. Uses the deflated Lanczos path and falls back to the
/// dense solver if it does not converge.
double lambda_max(const SymmetricMatrix& a);

/// Sum of the diagonal with compensated summation.
double trace(const SymmetricMatrix& a);

/// Running Neumaier-compensated sum.
class CompensatedAccumulator {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if ((sum_ < 0 ? -sum_ : sum_) >= (v < 0 ? -v : v)) {
      carry_ += (sum_ - t) + v;
    } else {
      carry_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

double compensated_sum(std::span<const double> values);

}  // namespace laprmt

#endif  // LAPRMT_LINALG_HPP
