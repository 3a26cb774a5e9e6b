#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "laprmt/extremes.hpp"
#include "laprmt/laws.hpp"
#include "oracles.hpp"

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;

// Normalization of the mixture: the semicircle part is integrated after the
// substitution x = R sin(t), which removes the edge singularity.
long double mixture_mass_oracle(const laprmt::MixtureParams& p) {
  const long double r = p.radius;
  const long double semi = oracle::gauss_legendre(
      [&](long double t) {
        const long double c = std::cos(t);
        return (2.0L / (kPi * r * r)) * r * c * r * c;
      },
      -kPi / 2, kPi / 2, 200);
  const long double s = p.std_dev;
  const long double gauss = oracle::gauss_legendre(
      [&](long double x) { return std::exp(-x * x / (2 * s * s)) / (s * std::sqrt(2 * kPi)); },
      -40 * s, 40 * s, 4000);
  return p.alpha * semi + (1 - p.alpha) * gauss;
}

double sample_semicircle(std::mt19937_64& gen, double radius) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    const double x = u(gen);
    const double y = (u(gen) + 1.0) * 0.5;
    if (y <= std::sqrt(1.0 - x * x)) return radius * x;
  }
}

std::vector<double> sample_mixture(const laprmt::MixtureParams& p, std::size_t count,
                                   std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::bernoulli_distribution pick(p.alpha);
  std::normal_distribution<double> normal(0.0, p.std_dev);
  std::vector<double> out(count);
  for (auto& x : out) x = pick(gen) ? sample_semicircle(gen, p.radius) : normal(gen);
  return out;
}

std::uint64_t double_factorial(int m) {
  std::uint64_t r = 1;
  for (int i = m; i > 1; i -= 2) r *= static_cast<std::uint64_t>(i);
  return r;
}

}  // namespace

TEST_SUITE("laws") {

TEST_CASE("semicircle density") {
  CHECK(laprmt::semicircle_pdf(0.0, 2.0) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-15));
  CHECK(laprmt::semicircle_pdf(2.0, 2.0) == 0.0);
  CHECK(laprmt::semicircle_pdf(-2.0, 2.0) == 0.0);
  CHECK(laprmt::semicircle_pdf(2.5, 2.0) == 0.0);
  CHECK(laprmt::semicircle_pdf(-7.0, 2.0) == 0.0);
  CHECK_THROWS_AS(laprmt::semicircle_pdf(0.0, 0.0), std::invalid_argument);
  for (double r : {0.5, 2.0, 3.3}) {
    const double mass = laprmt::integrate([r](double x) { return laprmt::semicircle_pdf(x, r); }, -r, r);
    CHECK(std::fabs(mass - 1.0) <= 1e-10);
  }
}

TEST_CASE("adaptive quadrature matches Gauss-Legendre") {
  const double got = laprmt::integrate([](double x) { return std::exp(x) * std::sin(3 * x); }, 0.0, 2.0);
  const long double expected = oracle::gauss_legendre(
      [](long double x) { return std::exp(x) * std::sin(3 * x); }, 0.0L, 2.0L, 100);
  CHECK(std::fabs(got - static_cast<double>(expected)) <= 1e-11);
}

TEST_CASE("mixture degenerate weights") {
  laprmt::MixtureParams semi{1.0, 1.7, 0.9};
  laprmt::MixtureParams gauss{0.0, 1.7, 0.9};
  for (double x = -3.0; x <= 3.0; x += 0.37) {
    CHECK(laprmt::mixture_pdf(x, semi) == doctest::Approx(laprmt::semicircle_pdf(x, 1.7)).epsilon(1e-15));
    CHECK(laprmt::mixture_pdf(x, gauss) == doctest::Approx(laprmt::gaussian_pdf(x, 0.9)).epsilon(1e-15));
  }
}

TEST_CASE("mixture reference parameters and value at zero") {
  const auto p = laprmt::MixtureParams::reference();
  CHECK(p.alpha == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));
  CHECK(p.radius == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(p.std_dev == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  const auto p2 = laprmt::MixtureParams::reference(2.0);
  CHECK(p2.radius == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-15));

  const long double a = p.alpha;
  const long double expected =
      a * 2.0L / (kPi * std::sqrt(2.0L)) + (1 - a) / (std::sqrt(2.0L) * std::sqrt(2 * kPi));
  CHECK(laprmt::mixture_pdf(0.0, p) == doctest::Approx(static_cast<double>(expected)).epsilon(1e-14));
  CHECK(std::fabs(mixture_mass_oracle(p) - 1.0L) <= 1e-12L);
}

TEST_CASE("mixture integrates to one") {
  for (const auto& p : {laprmt::MixtureParams{0.3, 1.0, 0.5}, laprmt::MixtureParams{0.9, 4.0, 2.0},
                        laprmt::MixtureParams::reference(1.5)}) {
    CHECK(std::fabs(mixture_mass_oracle(p) - 1.0L) <= 1e-10L);
    const double mass = laprmt::integrate([&](double x) { return laprmt::mixture_pdf(x, p); },
                                          -40 * std::max(p.radius, p.std_dev),
                                          40 * std::max(p.radius, p.std_dev));
    CHECK(std::fabs(mass - 1.0) <= 1e-10);
  }
  CHECK_THROWS_AS(laprmt::mixture_pdf(0.0, {1.5, 1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(laprmt::mixture_pdf(0.0, {0.5, -1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(laprmt::mixture_pdf(0.0, {0.5, 1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("empirical distribution") {
  const laprmt::EmpiricalDistribution e({3.0, 1.0, 2.0});
  CHECK(std::is_sorted(e.samples().begin(), e.samples().end()));
  CHECK(e.size() == 3);
  CHECK(e.mean() == 2.0);
  CHECK(e.raw_moment(2) == doctest::Approx(14.0 / 3.0));
  CHECK(e.variance() == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(laprmt::EmpiricalDistribution({}), std::invalid_argument);
}

TEST_CASE("esd scaling") {
  laprmt::Spectrum s;
  s.eigenvalues = {1.0, 1.0, 1.0};
  const auto e1 = laprmt::esd_of(s, 1.0);
  for (double x : e1.samples()) CHECK(x == 1.0);
  s.eigenvalues = {-2.0, 4.0, 6.0};
  const auto e2 = laprmt::esd_of(s, 2.0);
  CHECK(std::vector<double>(e2.samples().begin(), e2.samples().end()) ==
        std::vector<double>{-1.0, 2.0, 3.0});
  CHECK_THROWS_AS(laprmt::esd_of(s, 0.0), std::invalid_argument);
}

TEST_CASE("KS statistic") {
  const laprmt::EmpiricalDistribution one({0.0});
  CHECK(laprmt::ks_statistic(one, laprmt::gumbel_cdf) ==
        doctest::Approx(std::max(1 - std::exp(-1.0), std::exp(-1.0))).epsilon(1e-15));
  CHECK(laprmt::ks_statistic(one, laprmt::gumbel_cdf) == doctest::Approx(0.63212).epsilon(1e-5));

  std::vector<double> grid(100);
  for (std::size_t i = 0; i < 100; ++i) grid[i] = laprmt::gumbel_quantile((i + 0.5) / 100.0);
  CHECK(laprmt::ks_statistic(laprmt::EmpiricalDistribution(grid), laprmt::gumbel_cdf) ==
        doctest::Approx(0.005).epsilon(1e-10));

  std::mt19937_64 gen(6);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 20; ++t) {
    std::vector<double> x(50);
    for (auto& v : x) v = normal(gen) * 2.0;
    const laprmt::EmpiricalDistribution e(x);
    const double d = laprmt::ks_statistic(e, laprmt::gumbel_cdf);
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
    // The supremum over a fine grid approaches D from below.
    double grid_sup = 0.0;
    for (double z = -10.0; z <= 10.0; z += 1e-3) {
      const auto count = std::upper_bound(e.samples().begin(), e.samples().end(), z) - e.samples().begin();
      grid_sup = std::max(grid_sup, std::fabs(count / 50.0 - laprmt::gumbel_cdf(z)));
    }
    CHECK(grid_sup <= d + 1e-12);
    CHECK(grid_sup >= d - 2e-3);
  }
}

TEST_CASE("histogram distance") {
  std::vector<double> grid(10000);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double p = (i + 0.5) / grid.size();
    // Quantiles of N(0,1) by bisection on erfc.
    double lo = -10, hi = 10;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      (0.5 * std::erfc(-mid / std::sqrt(2.0)) < p ? lo : hi) = mid;
    }
    grid[i] = 0.5 * (lo + hi);
  }
  const laprmt::EmpiricalDistribution e(grid);
  const auto pdf = [](double x) { return laprmt::gaussian_pdf(x, 1.0); };
  CHECK(laprmt::histogram_l1(e, pdf, 50, -5, 5) < 0.01);
  const laprmt::EmpiricalDistribution far(std::vector<double>(100, 50.0));
  CHECK(laprmt::histogram_l1(far, [](double x) { return laprmt::semicircle_pdf(x, 1.0); }, 20, -2, 60) ==
        doctest::Approx(2.0).epsilon(1e-6));
  CHECK_THROWS_AS(laprmt::histogram_l1(e, pdf, 0, -5, 5), std::invalid_argument);
  CHECK_THROWS_AS(laprmt::histogram_l1(e, pdf, 50, 5, -5), std::invalid_argument);
}

TEST_CASE("density histogram integrates to the in-range fraction") {
  const std::vector<double> x = {-1.0, -0.5, 0.0, 0.1, 0.2, 0.9, 3.0};
  const auto h = laprmt::density_histogram(x, 10, -1.0, 1.0);
  double mass = 0.0;
  for (double d : h.density) mass += d * h.width();
  CHECK(mass == doctest::Approx(6.0 / 7.0));
  CHECK(h.center(0) == doctest::Approx(-0.9));
}

TEST_CASE("pair partitions") {
  for (int k = 0; k <= 6; ++k) {
    CHECK(laprmt::pair_partitions(k).size() == double_factorial(2 * k - 1));
  }
  CHECK(laprmt::blocks_cross({1, 3}, {2, 4}));
  CHECK(laprmt::blocks_cross({2, 4}, {1, 3}));
  CHECK_FALSE(laprmt::blocks_cross({1, 4}, {2, 3}));
  CHECK_FALSE(laprmt::blocks_cross({1, 2}, {3, 4}));
  CHECK(laprmt::height({{1, 2}, {3, 4}}) == 2);
  CHECK(laprmt::height({{1, 4}, {2, 3}}) == 2);
  CHECK(laprmt::height({{1, 3}, {2, 4}}) == 0);
  CHECK(laprmt::height({{1, 3}, {2, 4}, {5, 6}}) == 1);
}

TEST_CASE("moments of the limiting law") {
  CHECK(laprmt::gamma_m_moment(0) == 1.0);
  CHECK(laprmt::gamma_m_moment(1) == 2.0);
  CHECK(laprmt::gamma_m_moment(2) == 9.0);
  // Free cumulants of the limit: kappa2 = 2, kappa4 = 1.
  const double k2 = 2.0, k4 = 1.0;
  CHECK(laprmt::gamma_m_moment(2) == k4 + 2 * k2 * k2);
  for (int k = 0; k <= 6; ++k) {
    const double m = laprmt::gamma_m_moment(k);
    CHECK(m == static_cast<double>(oracle::brute_force_moment(k)));
    CHECK(m == std::floor(m));
    CHECK(m >= static_cast<double>(double_factorial(2 * k - 1)));
  }
  CHECK(laprmt::gamma_m_moment(3) == 56.0);
  CHECK_THROWS_AS(laprmt::gamma_m_moment(7), std::invalid_argument);
  CHECK_THROWS_AS(laprmt::gamma_m_moment(-1), std::invalid_argument);
}

TEST_CASE("mixture fit recovers known parameters") {
  const laprmt::MixtureParams truth{0.6, 1.5, 1.0};
  const laprmt::EmpiricalDistribution e(sample_mixture(truth, 400000, 21));
  const auto fit = laprmt::fit_mixture(e);
  CHECK(fit.params.alpha == doctest::Approx(truth.alpha).epsilon(0.05));
  CHECK(fit.params.radius == doctest::Approx(truth.radius).epsilon(0.05));
  CHECK(fit.params.std_dev == doctest::Approx(truth.std_dev).epsilon(0.05));
  CHECK(fit.residual >= 0.0);
}

TEST_CASE("mixture fit on a pure Gaussian sample") {
  const laprmt::MixtureParams truth{0.0, 1.0, 1.3};
  const laprmt::EmpiricalDistribution e(sample_mixture(truth, 200000, 22));
  const auto fit = laprmt::fit_mixture(e);
  CHECK(fit.params.alpha <= 0.1);
  CHECK(fit.params.std_dev == doctest::Approx(1.3).epsilon(0.05));
  CHECK_THROWS_AS(laprmt::fit_mixture(laprmt::EmpiricalDistribution(std::vector<double>(999, 0.0))),
                  std::invalid_argument);
}

}  // TEST_SUITE
