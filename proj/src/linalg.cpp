#include "laprmt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace laprmt {

SymmetricMatrix::SymmetricMatrix(std::size_t n) : n_(n), data_(offset(n), 0.0) {
  if (n == 0) {
    throw std::invalid_argument("SymmetricMatrix: order must be >= 1");
  }
}

SymmetricMatrix::SymmetricMatrix(std::size_t n, std::vector<double> packed)
    : n_(n), data_(std::move(packed)) {
  if (n == 0) {
    throw std::invalid_argument("SymmetricMatrix: order must be >= 1");
  }
  if (data_.size() != offset(n)) {
    throw std::invalid_argument("SymmetricMatrix: packed length must be n(n+1)/2");
  }
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t n) {
  SymmetricMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

SymmetricMatrix SymmetricMatrix::from_dense(std::size_t n,
                                            std::span<const double> rows) {
  if (rows.size() != n * n) {
    throw std::invalid_argument("from_dense: expected n*n entries");
  }
  SymmetricMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) m.at(i, j) = rows[i * n + j];
  }
  return m;
}

double SymmetricMatrix::max_abs() const noexcept {
  double best = 0.0;
  for (double v : data_) best = std::max(best, std::abs(v));
  return best;
}

bool SymmetricMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

std::vector<double> SymmetricMatrix::diagonal() const {
  std::vector<double> d(n_);
  for (std::size_t i = 0; i < n_; ++i) d[i] = data_[offset(i) + i];
  return d;
}

std::vector<double> SymmetricMatrix::row_sums() const {
  std::vector<double> row(n_);
  std::vector<double> sums(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) row[j] = (*this)(i, j);
    sums[i] = compensated_sum(row);
  }
  return sums;
}

void SymmetricMatrix::multiply(std::span<const double> x,
                               std::span<double> y) const {
  if (x.size() != n_ || y.size() != n_) {
    throw std::invalid_argument("multiply: vector length mismatch");
  }
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const double* row = data_.data() + offset(i);
    const double xi = x[i];
    double acc = 0.0;
    for (std::size_t j = 0; j < i; ++j) {
      acc += row[j] * x[j];
      y[j] += row[j] * xi;
    }
    y[i] += acc + row[i] * xi;
  }
}

SymmetricMatrix SymmetricMatrix::scaled(double factor) const {
  std::vector<double> data(data_);
  for (double& v : data) v *= factor;
  return SymmetricMatrix(n_, std::move(data));
}

double compensated_sum(std::span<const double> values) {
  CompensatedAccumulator acc;
  for (double v : values) acc.add(v);
  return acc.value();
}

double trace(const SymmetricMatrix& a) {
  const auto d = a.diagonal();
  return compensated_sum(d);
}

namespace {

// Householder reduction to tridiagonal form (EISPACK tred2 lineage).
// `v` is column-major n*n holding the full matrix on entry. On exit `d`, `e`
// hold the tridiagonal diagonal and sub-diagonal (e[0] = 0, e[i] couples i-1
// and i); if `accumulate`, `v` holds the orthogonal transformation.
void householder_tridiagonalize(std::size_t n, std::vector<double>& v,
                                std::vector<double>& d, std::vector<double>& e,
                                bool accumulate) {
  auto V = [&](std::size_t r, std::size_t c) -> double& { return v[c * n + r]; };

  for (std::size_t j = 0; j < n; ++j) d[j] = V(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = V(i - 1, j);
        V(i, j) = 0.0;
        V(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        V(j, i) = f;
        g = e[j] + V(j, j) * f;
        double* col = &V(0, j);
        for (std::size_t k = j + 1; k < i; ++k) {
          g += col[k] * d[k];
          e[k] += col[k] * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        double* col = &V(0, j);
        for (std::size_t k = j; k < i; ++k) col[k] -= (f * e[k] + g * d[k]);
        d[j] = V(i - 1, j);
        V(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  if (!accumulate) {
    for (std::size_t i = 0; i < n; ++i) d[i] = V(i, i);
    e[0] = 0.0;
    return;
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    V(n - 1, i) = V(i, i);
    V(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = V(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += V(k, i + 1) * V(k, j);
        for (std::size_t k = 0; k <= i; ++k) V(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) V(k, i + 1) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = V(n - 1, j);
    V(n - 1, j) = 0.0;
  }
  V(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit-shift QL on a symmetric tridiagonal matrix (EISPACK tql2 lineage).
// `e[i]` couples i-1 and i on entry. Rotations are applied to the columns of
// `v` when non-null. Total sweep budget is 50n.
void implicit_ql(std::size_t n, std::vector<double>& d, std::vector<double>& e,
                 std::vector<double>* v) {
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  const double eps = std::numeric_limits<double>::epsilon();
  const std::size_t budget = 50 * n;
  std::size_t sweeps = 0;
  double f = 0.0;
  double tst1 = 0.0;

  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n - 1) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      do {
        if (++sweeps > budget) {
          throw SolverFailure(l, "implicit QL did not converge for eigenvalue " +
                                     std::to_string(l));
        }
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0;
        double c2 = c;
        double c3 = c;
        const double el1 = e[l + 1];
        double s = 0.0;
        double s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          if (v != nullptr) {
            double* left = v->data() + ii * n;
            double* right = v->data() + (ii + 1) * n;
            for (std::size_t k = 0; k < n; ++k) {
              h = right[k];
              right[k] = s * left[k] + c * h;
              left[k] = c * left[k] - s * h;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

}  // namespace

std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag,
                                            std::span<const double> offdiag) {
  const std::size_t n = diag.size();
  if (n == 0) return diag;
  if (offdiag.size() + 1 != n) {
    throw std::invalid_argument("tridiagonal_eigenvalues: offdiag must have n-1 entries");
  }
  std::vector<double> e(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) e[i] = offdiag[i - 1];
  implicit_ql(n, diag, e, nullptr);
  std::sort(diag.begin(), diag.end());
  return diag;
}

Spectrum eigensolve(const SymmetricMatrix& a, bool want_vectors) {
  if (!a.all_finite()) {
    throw std::invalid_argument("eigensolve: matrix has non-finite entries");
  }
  const std::size_t n = a.order();
  std::vector<double> v(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) v[j * n + i] = a(i, j);
  }
  std::vector<double> d(n, 0.0);
  std::vector<double> e(n, 0.0);
  if (n == 1) {
    d[0] = a(0, 0);
    v[0] = 1.0;
  } else {
    householder_tridiagonalize(n, v, d, e, want_vectors);
    implicit_ql(n, d, e, want_vectors ? &v : nullptr);
  }

  Spectrum out;
  if (!want_vectors) {
    std::sort(d.begin(), d.end());
    out.eigenvalues = std::move(d);
    return out;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return d[x] < d[y]; });
  DenseMatrix vectors{n, n, std::vector<double>(n * n)};
  out.eigenvalues.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = d[order[k]];
    std::copy_n(v.begin() + static_cast<std::ptrdiff_t>(order[k] * n), n,
                vectors.data.begin() + static_cast<std::ptrdiff_t>(k * n));
  }
  out.eigenvectors = std::move(vectors);
  return out;
}

double lambda_max_dense(const SymmetricMatrix& a) {
  return eigensolve(a, false).eigenvalues.back();
}

}  // namespace laprmt
