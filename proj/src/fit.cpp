#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "laprmt/laws.hpp"

namespace laprmt {

namespace {

struct FitProblem {
  Histogram histogram;
};

MixtureParams decode(const gsl_vector* x) {
  MixtureParams p;
  p.alpha = std::clamp(gsl_vector_get(x, 0), 0.0, 1.0);
  p.radius = std::exp(gsl_vector_get(x, 1));
  p.std_dev = std::exp(gsl_vector_get(x, 2));
  return p;
}

double l2_residual(const MixtureParams& p, const Histogram& h) {
  double sum = 0.0;
  for (std::size_t b = 0; b < h.density.size(); ++b) {
    const double diff = mixture_pdf(h.center(b), p) - h.density[b];
    sum += diff * diff;
  }
  return std::sqrt(sum * h.width());
}

double objective(const gsl_vector* x, void* data) {
  const auto* problem = static_cast<const FitProblem*>(data);
  const MixtureParams p = decode(x);
  if (!std::isfinite(p.radius) || !std::isfinite(p.std_dev) || p.radius <= 0 ||
      p.std_dev <= 0) {
    return 1e300;
  }
  // Penalize leaving [0, 1] so the simplex does not drift along a flat ridge.
  const double a = gsl_vector_get(x, 0);
  const double overshoot = a < 0 ? -a : (a > 1 ? a - 1 : 0.0);
  return l2_residual(p, problem->histogram) + overshoot;
}

struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};
struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};

MixtureFit run_simplex(FitProblem& problem, const std::array<double, 3>& start) {
  gsl_multimin_function fn{&objective, 3, &problem};
  std::unique_ptr<gsl_vector, VectorDeleter> x(gsl_vector_alloc(3));
  std::unique_ptr<gsl_vector, VectorDeleter> step(gsl_vector_alloc(3));
  for (std::size_t i = 0; i < 3; ++i) gsl_vector_set(x.get(), i, start[i]);
  gsl_vector_set(step.get(), 0, 0.2);
  gsl_vector_set(step.get(), 1, 0.3);
  gsl_vector_set(step.get(), 2, 0.3);

  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> minimizer(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 3));
  gsl_multimin_fminimizer_set(minimizer.get(), &fn, x.get(), step.get());

  MixtureFit fit;
  int status = GSL_CONTINUE;
  std::size_t iter = 0;
  while (status == GSL_CONTINUE && iter < 5000) {
    ++iter;
    if (gsl_multimin_fminimizer_iterate(minimizer.get()) != GSL_SUCCESS) break;
    status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(minimizer.get()), 1e-9);
  }
  fit.params = decode(gsl_multimin_fminimizer_x(minimizer.get()));
  fit.residual = l2_residual(fit.params, problem.histogram);
  fit.converged = status == GSL_SUCCESS;
  fit.iterations = iter;
  return fit;
}

}  // namespace

MixtureFit fit_mixture(const EmpiricalDistribution& esd, std::size_t bins) {
  if (esd.size() < 1000) {
    throw std::invalid_argument("fit_mixture: need at least 1000 samples");
  }
  const auto xs = esd.samples();
  FitProblem problem{density_histogram(xs, bins, xs.front(), xs.back())};

  const double sd = std::sqrt(esd.variance());
  const double log_sd = std::log(sd);
  // Semicircle of half-width r has standard deviation r/2.
  const std::array<std::array<double, 3>, 3> starts{{
      {0.5, std::log(2.0 * sd), log_sd},
      {0.2, std::log(1.5 * sd), log_sd},
      {0.8, std::log(2.0 * sd), std::log(0.7 * sd)},
  }};

  gsl_error_handler_t* previous = gsl_set_error_handler_off();
  MixtureFit best;
  bool have = false;
  for (const auto& start : starts) {
    MixtureFit fit = run_simplex(problem, start);
    if (!have || fit.residual < best.residual) {
      best = fit;
      have = true;
    }
  }
  gsl_set_error_handler(previous);
  return best;
}

}  // namespace laprmt
