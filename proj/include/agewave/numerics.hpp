#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "agewave/errors.hpp"

namespace agewave {

/// Composite trapezoid weights on a uniform grid of n nodes with spacing h.
std::vector<double> trapezoid_weights(int n, double h);

/// Composite trapezoid value of samples f on a uniform grid with spacing h.
double trapezoid(const std::vector<double>& f, double h);

/// Running integral F_i = int_{x_0}^{x_i} f, one trapezoid cell at a time.
std::vector<double> cumulative_trapezoid(const std::vector<double>& f, double h);

/// Error estimate for trapezoid(f, h): compares against the coarsened grid
/// (every other node) when the node count allows it, Richardson style.
/// Returns 0 when no estimate is possible (even node count).
double trapezoid_error_estimate(const std::vector<double>& f, double h);

/// Adaptive Simpson quadrature of f over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-12, int max_depth = 48);

/// Bisection root of a continuous f with f(lo), f(hi) of opposite sign.
/// Stops when the bracket is narrower than xtol or |f| at the midpoint is
/// below ftol (pass 0 to disable the f-based stop).
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol, double ftol = 0.0, int max_iter = 2000);

/// Golden-section minimizer of a unimodal f on [lo, hi]; returns argmin.
double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double xtol, int max_iter = 400);

/// Linear interpolation of uniformly gridded samples v (first node x0,
/// spacing h). Outside the grid returns the closure values left / right.
inline double interp_uniform(const std::vector<double>& v, double x0, double h,
                             double x, double left, double right) {
  const int n = static_cast<int>(v.size());
  const double s = (x - x0) / h;
  if (s < 0.0) return left;
  if (s >= static_cast<double>(n - 1)) {
    return (s > static_cast<double>(n - 1)) ? right : v[static_cast<size_t>(n - 1)];
  }
  const int i = static_cast<int>(s);
  const double t = s - i;
  return v[static_cast<size_t>(i)] * (1.0 - t) + v[static_cast<size_t>(i) + 1] * t;
}

/// int_0^1 e^{z t} (1 - t) dt, series fallback for small |z|.
double exp_moment0(double z);

/// int_0^1 e^{z t} t dt, series fallback for small |z|.
double exp_moment1(double z);

/// Ordinary least squares y ~ a + b x. Returns {slope, intercept,
/// slope standard error}; needs at least 3 points.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  int n = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace agewave
