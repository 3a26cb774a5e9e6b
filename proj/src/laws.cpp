#include "laprmt/laws.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace laprmt {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : samples_(std::move(samples)) {
  if (samples_.empty()) {
    throw std::invalid_argument("EmpiricalDistribution: empty sample");
  }
  std::sort(samples_.begin(), samples_.end());
}

double EmpiricalDistribution::raw_moment(int p) const {
  CompensatedAccumulator acc;
  for (double x : samples_) acc.add(std::pow(x, p));
  return acc.value() / static_cast<double>(samples_.size());
}

double EmpiricalDistribution::variance() const {
  const double m = mean();
  CompensatedAccumulator acc;
  for (double x : samples_) acc.add((x - m) * (x - m));
  return acc.value() / static_cast<double>(samples_.size());
}

EmpiricalDistribution esd_of(const Spectrum& spectrum, double scale) {
  if (!(scale > 0)) throw std::invalid_argument("esd_of: scale must be > 0");
  std::vector<double> values(spectrum.eigenvalues);
  for (double& v : values) v /= scale;
  return EmpiricalDistribution(std::move(values));
}

double ks_statistic(const EmpiricalDistribution& emp, const RealFunction& cdf) {
  const auto xs = emp.samples();
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    d = std::max({d, std::abs(above), std::abs(below)});
  }
  return d;
}

Histogram density_histogram(std::span<const double> sorted_samples,
                            std::size_t bins, double lo, double hi) {
  if (bins == 0) throw std::invalid_argument("histogram: bins must be >= 1");
  if (!(hi > lo)) throw std::invalid_argument("histogram: empty range");
  Histogram h{lo, hi, std::vector<double>(bins, 0.0)};
  const double width = h.width();
  for (double x : sorted_samples) {
    if (x < lo || x > hi) continue;
    auto b = static_cast<std::size_t>((x - lo) / width);
    if (b >= bins) b = bins - 1;
    h.density[b] += 1.0;
  }
  const double norm = 1.0 / (static_cast<double>(sorted_samples.size()) * width);
  for (double& v : h.density) v *= norm;
  return h;
}

namespace {

struct SimpsonPanel {
  double a, m, b, fa, fm, fb, whole;
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const RealFunction& f, const SimpsonPanel& p, double tol, int depth) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(p.a, p.m, p.fa, flm, p.fm);
  const double right = simpson(p.m, p.b, p.fm, frm, p.fb);
  const double delta = left + right - p.whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive(f, {p.a, lm, p.m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1) +
         adaptive(f, {p.m, rm, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const RealFunction& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  // Depth 50 bounds the work near integrable edge singularities such as the
  // semicircle's; the panels there are already far below double resolution.
  return adaptive(f, {a, m, b, fa, fm, fb, simpson(a, b, fa, fm, fb)}, tol, 50);
}

double histogram_l1(const EmpiricalDistribution& emp, const RealFunction& pdf,
                    std::size_t bins, double lo, double hi) {
  if (bins < 10) throw std::invalid_argument("histogram_l1: bins must be >= 10");
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("histogram_l1: invalid range");
  }
  const auto h = density_histogram(emp.samples(), bins, lo, hi);
  const double width = h.width();
  double total = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    const double a = lo + static_cast<double>(b) * width;
    const double reference = integrate(pdf, a, a + width, 1e-12);
    total += std::abs(h.density[b] * width - reference);
  }
  return total;
}

double semicircle_pdf(double x, double radius) {
  if (!(radius > 0)) throw std::invalid_argument("semicircle_pdf: radius must be > 0");
  if (std::abs(x) >= radius) return 0.0;
  return 2.0 / (std::numbers::pi * radius * radius) *
         std::sqrt((radius - x) * (radius + x));
}

double gaussian_pdf(double x, double std_dev) {
  const double z = x / std_dev;
  return std::exp(-0.5 * z * z) / (std_dev * std::sqrt(2.0 * std::numbers::pi));
}

MixtureParams MixtureParams::reference(double sigma) {
  return {std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 * sigma,
          std::numbers::sqrt2 * sigma};
}

void MixtureParams::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("mixture: alpha must lie in [0, 1]");
  }
  if (!(radius > 0)) throw std::invalid_argument("mixture: radius must be > 0");
  if (!(std_dev > 0)) throw std::invalid_argument("mixture: std_dev must be > 0");
}

double mixture_pdf(double x, const MixtureParams& params) {
  params.validate();
  return params.alpha * semicircle_pdf(x, params.radius) +
         (1.0 - params.alpha) * gaussian_pdf(x, params.std_dev);
}

std::vector<PairPartition> pair_partitions(int k) {
  if (k < 0) throw std::invalid_argument("pair_partitions: k must be >= 0");
  std::vector<PairPartition> out;
  PairPartition current;
  std::vector<bool> used(static_cast<std::size_t>(2 * k), false);

  auto recurse = [&](auto&& self) -> void {
    int first = -1;
    for (int i = 0; i < 2 * k; ++i) {
      if (!used[static_cast<std::size_t>(i)]) {
        first = i;
        break;
      }
    }
    if (first < 0) {
      out.push_back(current);
      return;
    }
    used[static_cast<std::size_t>(first)] = true;
    for (int j = first + 1; j < 2 * k; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      used[static_cast<std::size_t>(j)] = true;
      current.emplace_back(first, j);
      self(self);
      current.pop_back();
      used[static_cast<std::size_t>(j)] = false;
    }
    used[static_cast<std::size_t>(first)] = false;
  };
  recurse(recurse);
  return out;
}

bool blocks_cross(std::pair<int, int> x, std::pair<int, int> y) {
  const auto [a, b] = x;
  const auto [c, d] = y;
  return (a < c && c < b && b < d) || (c < a && a < d && d < b);
}

int height(const PairPartition& partition) {
  int isolated = 0;
  for (std::size_t i = 0; i < partition.size(); ++i) {
    bool crosses = false;
    for (std::size_t j = 0; j < partition.size() && !crosses; ++j) {
      crosses = i != j && blocks_cross(partition[i], partition[j]);
    }
    if (!crosses) ++isolated;
  }
  return isolated;
}

double gamma_m_moment(int k) {
  if (k < 0 || k > 6) {
    throw std::invalid_argument("gamma_m_moment: k must lie in [0, 6], got " +
                                std::to_string(k));
  }
  std::uint64_t total = 0;
  for (const auto& partition : pair_partitions(k)) {
    total += std::uint64_t{1} << height(partition);
  }
  return static_cast<double>(total);
}

}  // namespace laprmt
