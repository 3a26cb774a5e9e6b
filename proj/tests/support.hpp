#ifndef LAPRMT_TESTS_SUPPORT_HPP
#define LAPRMT_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "laprmt/linalg.hpp"
#include "oracles.hpp"

namespace support {

inline oracle::Dense to_dense(const laprmt::SymmetricMatrix& m) {
  const std::size_t n = m.order();
  oracle::Dense d{n, std::vector<long double>(n * n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d(i, j) = m(i, j);
  return d;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    worst = std::max(worst, std::fabs(a[i] - b[i]));
  }
  return worst;
}

}  // namespace support

#endif  // LAPRMT_TESTS_SUPPORT_HPP
