#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "laprmt/covariance.hpp"
#include "laprmt/models.hpp"
#include "laprmt/random.hpp"

namespace {

// Sigma v straight from the entrywise definition, O(n^2).
std::vector<double> sigma_times(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    long double acc = 0.0L;
    for (std::size_t j = 0; j < n; ++j) {
      acc += (i == j ? 1.0L : 1.0L / static_cast<long double>(n - 1)) * v[j];
    }
    out[i] = static_cast<double>(acc);
  }
  return out;
}

std::vector<double> random_vector(std::size_t n, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  std::vector<double> v(n);
  for (auto& x : v) x = normal(gen);
  return v;
}

double rel_err(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::fabs(a[i] - b[i]));
    den = std::max(den, std::fabs(b[i]));
  }
  return num / std::max(den, 1e-300);
}

}  // namespace

TEST_SUITE("covariance") {

TEST_CASE("eigenvalues") {
  auto e3 = laprmt::sigma_eigenvalues(3);
  CHECK(e3.repeated == 0.5);
  CHECK(e3.top == 2.0);
  auto e10 = laprmt::sigma_eigenvalues(10);
  CHECK(e10.repeated == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
  CHECK(laprmt::sigma_eigenvalues(1000000).repeated == doctest::Approx(1.0).epsilon(1e-5));
  CHECK_THROWS_AS(laprmt::sigma_eigenvalues(2), std::invalid_argument);
}

TEST_CASE("apply_sigma matches the entrywise definition") {
  std::mt19937_64 gen(1);
  for (std::size_t n : {3u, 7u, 200u}) {
    const auto v = random_vector(n, gen);
    CHECK(rel_err(laprmt::apply_sigma(v), sigma_times(v)) <= 1e-14);
  }
}

TEST_CASE("square root eigen-action") {
  for (std::size_t n : {3u, 10u, 1000u}) {
    const std::vector<double> ones(n, 1.0);
    for (double x : laprmt::apply_sigma_half(ones)) CHECK(x == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    for (double x : laprmt::apply_sigma_inv_half(ones)) CHECK(x == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    std::vector<double> v(n, 0.0);
    v[0] = 1.0;
    v[1] = -1.0;
    const double s = std::sqrt((n - 2.0) / (n - 1.0));
    const auto out = laprmt::apply_sigma_half(v);
    CHECK(out[0] == doctest::Approx(s).epsilon(1e-14));
    CHECK(out[1] == doctest::Approx(-s).epsilon(1e-14));
    for (std::size_t i = 2; i < n; ++i) CHECK(std::fabs(out[i]) <= 1e-15);
  }
}

TEST_CASE("n = 3 matrix form of the square root") {
  const auto h = laprmt::sigma_half_dense(3);
  REQUIRE(h.size() == 9);
  CHECK(h[0] == doctest::Approx(0.94281).epsilon(1e-5));
  CHECK(h[1] == doctest::Approx(0.23570).epsilon(1e-4));
  // Squaring reproduces Sigma entrywise.
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < 3; ++k) acc += h[i * 3 + k] * h[k * 3 + j];
      CHECK(acc == doctest::Approx(i == j ? 1.0 : 0.5).epsilon(1e-14));
    }
}

TEST_CASE("square root squared is Sigma for explicit matrices") {
  for (std::size_t n : {3u, 10u}) {
    const auto h = laprmt::sigma_half_dense(n);
    const auto s = laprmt::sigma_dense(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) acc += h[i * n + k] * h[k * n + j];
        CHECK(std::fabs(acc - s[i * n + j]) <= 1e-12);
        CHECK(s[i * n + j] == doctest::Approx(i == j ? 1.0 : 1.0 / (n - 1.0)).epsilon(1e-15));
      }
  }
}

TEST_CASE("composition identities on random vectors") {
  std::mt19937_64 gen(2);
  for (std::size_t n : {3u, 10u, 100u, 1000u, 5000u}) {
    for (int t = 0; t < 20; ++t) {
      const auto v = random_vector(n, gen);
      const auto half = laprmt::apply_sigma_half(v);
      CHECK(rel_err(laprmt::apply_sigma_half(half), sigma_times(v)) <= 1e-12);
      CHECK(rel_err(laprmt::apply_sigma_inv_half(half), v) <= 1e-12);
      CHECK(rel_err(laprmt::apply_sigma_half(laprmt::apply_sigma_inv_half(v)), v) <= 1e-12);
    }
  }
}

TEST_CASE("reconstruction route") {
  CHECK(laprmt::reconstruct_from_whitened(std::vector<double>(5, 0.0)) == std::vector<double>(5, 0.0));
  for (double x : laprmt::reconstruct_from_whitened(std::vector<double>(7, 1.0))) {
    CHECK(x == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  }
  std::mt19937_64 gen(3);
  for (int t = 0; t < 100; ++t) {
    const auto v = random_vector(50, gen);
    CHECK(rel_err(laprmt::reconstruct_from_whitened(v), laprmt::apply_sigma_half(v)) <= 1e-12);
  }
}

TEST_CASE("order below 3 is rejected") {
  CHECK_THROWS_AS(laprmt::apply_sigma_half(std::vector<double>{1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(laprmt::apply_sigma_inv_half(std::vector<double>{1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(laprmt::reconstruct_from_whitened(std::vector<double>{1}), std::invalid_argument);
}

TEST_CASE("whitened Laplacian diagonals are uncorrelated standard Gaussians") {
  const std::size_t n = 10;
  const std::size_t reps = 20000;
  std::vector<std::vector<double>> w(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    const auto d = laprmt::sample_laplacian_diagonal(n, laprmt::EntryDistribution::gaussian,
                                                     laprmt::substream_seed(99, r));
    w[r] = laprmt::apply_sigma_inv_half(laprmt::rescaled_diagonal(d));
  }
  std::vector<double> mean(n, 0.0);
  for (const auto& x : w)
    for (std::size_t i = 0; i < n; ++i) mean[i] += x[i] / reps;
  for (double m : mean) CHECK(std::fabs(m) <= 0.03);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double c = 0.0;
      for (const auto& x : w) c += (x[i] - mean[i]) * (x[j] - mean[j]);
      c /= (reps - 1);
      worst = std::max(worst, std::fabs(c - (i == j ? 1.0 : 0.0)));
    }
  CHECK(worst <= 0.05);

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> col(reps);
    for (std::size_t r = 0; r < reps; ++r) col[r] = w[r][i];
    std::sort(col.begin(), col.end());
    double d = 0.0;
    for (std::size_t k = 0; k < reps; ++k) {
      const double f = 0.5 * std::erfc(-col[k] / std::sqrt(2.0));
      d = std::max({d, std::fabs((k + 1.0) / reps - f), std::fabs(double(k) / reps - f)});
    }
    CHECK(d <= 0.02);
  }
}

TEST_CASE("rescaled diagonal") {
  const auto l = laprmt::sample_laplacian(5, laprmt::EntryDistribution::gaussian, 4);
  const auto d = laprmt::rescaled_diagonal(l);
  for (std::size_t i = 0; i < 5; ++i) CHECK(d[i] == doctest::Approx(l(i, i) / 2.0).epsilon(1e-15));
}

}  // TEST_SUITE
