#include "agewave/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace agewave {

std::vector<double> trapezoid_weights(int n, double h) {
  if (n < 2) throw ValidationError("trapezoid rule needs at least two nodes");
  if (!(h > 0.0)) throw ValidationError("trapezoid rule needs positive spacing");
  std::vector<double> w(static_cast<size_t>(n), h);
  w.front() = 0.5 * h;
  w.back() = 0.5 * h;
  return w;
}

double trapezoid(const std::vector<double>& f, double h) {
  if (f.size() < 2) throw ValidationError("trapezoid rule needs at least two nodes");
  double acc = 0.5 * (f.front() + f.back());
  for (size_t i = 1; i + 1 < f.size(); ++i) acc += f[i];
  return acc * h;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& f, double h) {
  if (f.size() < 2) throw ValidationError("trapezoid rule needs at least two nodes");
  std::vector<double> out(f.size(), 0.0);
  for (size_t i = 1; i < f.size(); ++i) {
    out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
  }
  return out;
}

double trapezoid_error_estimate(const std::vector<double>& f, double h) {
  const size_t n = f.size();
  if (n < 5 || n % 2 == 0) return 0.0;
  std::vector<double> coarse;
  coarse.reserve((n + 1) / 2);
  for (size_t i = 0; i < n; i += 2) coarse.push_back(f[i]);
  const double fine = trapezoid(f, h);
  const double twice = trapezoid(coarse, 2.0 * h);
  return std::abs(fine - twice) / 3.0;
}

namespace {

double simpson(double fa, double fm, double fb, double width) {
  return width * (fa + 4.0 * fm + fb) / 6.0;
}

double adaptive_step(const std::function<double(double)>& f, double a, double b,
                     double fa, double fm, double fb, double whole, double tol,
                     int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = simpson(fa, fm, fb, b - a);
  return adaptive_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol, double ftol, int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw NumericalError("bisect: no sign change on the given bracket");
  }
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < max_iter; ++it) {
    mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if (ftol > 0.0 && std::abs(fmid) < ftol) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
    if (hi - lo < xtol) return 0.5 * (lo + hi);
  }
  return mid;
}

double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double xtol, int max_iter) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

double exp_moment0(double z) {
  if (std::abs(z) < 0.5) {
    // sum_k z^k / (k+2)!
    double term = 0.5;
    double acc = term;
    for (int k = 1; k <= 16; ++k) {
      term *= z / static_cast<double>(k + 2);
      acc += term;
    }
    return acc;
  }
  return (std::exp(z) - 1.0 - z) / (z * z);
}

double exp_moment1(double z) {
  if (std::abs(z) < 0.5) {
    // sum_k z^k (k+1) / (k+2)!
    double fact = 0.5;  // 1/(k+2)! running product, starts at 1/2!
    double acc = fact;
    for (int k = 1; k <= 16; ++k) {
      fact *= z / static_cast<double>(k + 2);
      acc += fact * static_cast<double>(k + 1);
    }
    return acc;
  }
  return (std::exp(z) * (z - 1.0) + 1.0) / (z * z);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw ValidationError("fit_line needs at least three matched points");
  }
  const int n = static_cast<int>(x.size());
  double sx = 0.0, sy = 0.0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw ValidationError("fit_line: degenerate abscissae");
  LineFit fit;
  fit.n = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    ss += r * r;
  }
  fit.slope_stderr = std::sqrt(ss / (n - 2) / sxx);
  return fit;
}

}  // namespace agewave
