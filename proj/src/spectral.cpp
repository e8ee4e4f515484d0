#include "agewave/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "agewave/errors.hpp"
#include "agewave/numerics.hpp"

namespace agewave {

std::vector<double> LsMatrix::apply(const std::vector<double>& v) const {
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double* row = m.data() + static_cast<size_t>(i) * n;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += row[j] * v[j];
    out[i] = acc;
  }
  return out;
}

LsMatrix assemble_Ls(const ModelSpec& model, double s) {
  const int n = model.n();
  const double h = model.age.h();
  LsMatrix out;
  out.n = n;
  out.s = s;
  out.m.assign(static_cast<size_t>(n) * n, 0.0);

  const double z = s * h;
  const double e = std::exp(z);
  const double A = exp_moment0(z);
  const double B = exp_moment1(z);

  // Row i column j: e^{s a_i} gamma_j w_j
  //   + sum over cells [a_k, a_{k+1}], k < i, of the exact integral of
  //     e^{s(a_i - l)} times the linear interpolant of q(l) = [Kpi v](l),
  //     which contributes h (B Kpi[k][j] + A Kpi[k+1][j]) carried forward
  //     through the factor e^{s h} per extra cell.
  //
  // cell[j] accumulates sum_k e^{s h (i-1-k)} (B Kpi[k][j] + A Kpi[k+1][j]).
  std::vector<double> cell(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double* row = out.m.data() + static_cast<size_t>(i) * n;
    const double esa = std::exp(s * model.age.node(i));
    if (i > 0) {
      const double* klo = model.Kpi.data() + static_cast<size_t>(i - 1) * n;
      const double* khi = model.Kpi.data() + static_cast<size_t>(i) * n;
      for (int j = 0; j < n; ++j) cell[j] = e * cell[j] + B * klo[j] + A * khi[j];
    }
    for (int j = 0; j < n; ++j) {
      row[j] = esa * model.gamma[j] * model.age_w[j] + h * cell[j];
    }
  }
  return out;
}

PowerResult spectral_radius(const LsMatrix& M, double tol, int max_iter) {
  const int n = M.n;
  PowerResult res;
  res.vec.assign(n, 1.0);
  double rho_prev = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    std::vector<double> next = M.apply(res.vec);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
      num += next[i] * res.vec[i];
      den += res.vec[i] * res.vec[i];
    }
    const double rho = num / den;
    double peak = 0.0;
    for (double v : next) peak = std::max(peak, std::abs(v));
    if (peak <= 0.0) {
      throw NumericalError("spectral_radius: iterate collapsed to zero");
    }
    for (double& v : next) v /= peak;
    res.vec = std::move(next);
    res.iterations = it;
    if (it > 1 && std::abs(rho - rho_prev) <= tol * std::max(1.0, std::abs(rho))) {
      res.rho = rho;
      break;
    }
    rho_prev = rho;
    res.rho = rho;
  }
  std::vector<double> image = M.apply(res.vec);
  double resid = 0.0;
  for (int i = 0; i < n; ++i) {
    resid = std::max(resid, std::abs(image[i] - res.rho * res.vec[i]));
  }
  res.residual = resid;
  return res;
}

namespace {

double rho_at(const ModelSpec& model, double s) {
  return spectral_radius(assemble_Ls(model, s)).rho;
}

}  // namespace

double find_s0(const ModelSpec& model, double rho_tol) {
  const double rho0 = rho_at(model, 0.0);
  if (!(rho0 > 1.0)) {
    throw ValidationError(
        "find_s0: the basic reproduction ratio is " + std::to_string(rho0) +
        " <= 1, no invasion exponent exists");
  }
  double lo = -1.0;
  int guard = 0;
  while (rho_at(model, lo) >= 1.0) {
    lo *= 2.0;
    if (++guard > 60) {
      throw NumericalError("find_s0: failed to bracket the root below zero");
    }
  }
  double hi = 0.0;  // rho > 1 there
  double flo = rho_at(model, lo) - 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = rho_at(model, mid) - 1.0;
    if (std::abs(fm) < rho_tol) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-14 * std::max(1.0, std::abs(lo))) break;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> eigenfunction_phi(const ModelSpec& model, double s0,
                                      double residual_tol) {
  const LsMatrix M = assemble_Ls(model, s0);
  PowerResult res = spectral_radius(M);
  // rho(L_{s0}) = 1, so renormalize the iterate as an eigenvector of
  // eigenvalue rho and check the residual against eigenvalue exactly rho.
  if (res.residual > residual_tol) {
    throw NumericalError("eigenfunction_phi: eigen residual " +
                         std::to_string(res.residual) + " exceeds tolerance");
  }
  double peak = 0.0;
  for (double v : res.vec) peak = std::max(peak, v);
  if (!(peak > 0.0)) {
    throw NumericalError("eigenfunction_phi: eigenvector is not positive");
  }
  std::vector<double> phi = res.vec;
  for (double& v : phi) v /= peak;
  for (double v : phi) {
    if (!(v > 0.0)) {
      throw NumericalError("eigenfunction_phi: eigenvector is not positive");
    }
  }
  return phi;
}

double mgf_J(const ModelSpec& model, double lambda) {
  return model.kernel->moment_exp(lambda);
}

double big_lambda(const ModelSpec& model, double lambda, double c) {
  return mgf_J(model, lambda) - 1.0 - c * lambda;
}

double lambda_of_c(const ModelSpec& model, double c, double tol) {
  if (!(c > 0.0)) {
    throw ValidationError("lambda_of_c: speed must be positive, got " +
                          std::to_string(c));
  }
  // g(lambda) = int J y e^{lambda y} dy is increasing from 0 (symmetry) and
  // unbounded for kernels with mass on both sides, so bisect after doubling.
  const auto g = [&](double lam) {
    return model.kernel->moment_exp_linear(lam) - c;
  };
  double hi = 1.0;
  int guard = 0;
  while (g(hi) < 0.0) {
    hi *= 2.0;
    if (++guard > 200) {
      throw NumericalError("lambda_of_c: failed to bracket the moment root");
    }
  }
  return bisect(g, 0.0, hi, tol);
}

double critical_speed(const ModelSpec& model, double s0, double tol) {
  if (!(s0 < 0.0)) {
    throw ValidationError("critical_speed: expected a negative exponent, got " +
                          std::to_string(s0));
  }
  // Lambda(lambda(c), c) decreases continuously in c from 0- (c -> 0) to
  // -infinity, so the level s0 < 0 is crossed exactly once.
  const auto f = [&](double c) {
    return big_lambda(model, lambda_of_c(model, c), c) - s0;
  };
  double lo = 1e-8;
  if (f(lo) <= 0.0) {
    throw NumericalError("critical_speed: no positive bracket at tiny speeds");
  }
  double hi = 1.0;
  int guard = 0;
  while (f(hi) > 0.0) {
    hi *= 2.0;
    if (++guard > 200) {
      throw NumericalError("critical_speed: failed to bracket the wave speed");
    }
  }
  return bisect(f, lo, hi, tol);
}

DispersionReport dispersion_report(const ModelSpec& model) {
  DispersionReport rep;
  rep.rho_at_zero = rho_at(model, 0.0);
  rep.s0 = find_s0(model);
  rep.phi = eigenfunction_phi(model, rep.s0);
  rep.qphi = model.apply_Q(rep.phi);
  const LsMatrix M = assemble_Ls(model, rep.s0);
  std::vector<double> image = M.apply(rep.phi);
  double resid = 0.0;
  for (int i = 0; i < model.n(); ++i) {
    resid = std::max(resid, std::abs(image[i] - rep.phi[i]));
  }
  rep.eigen_residual = resid;
  rep.c_star = critical_speed(model, rep.s0);
  rep.lambda_star = lambda_of_c(model, rep.c_star);
  rep.min_phi = *std::min_element(rep.phi.begin(), rep.phi.end());
  rep.max_phi = *std::max_element(rep.phi.begin(), rep.phi.end());
  rep.sup_qphi = *std::max_element(rep.qphi.begin(), rep.qphi.end());
  return rep;
}

std::pair<double, double> decay_roots(const ModelSpec& model, double s0, double c,
                                      double tol) {
  const double lam_c = lambda_of_c(model, c);
  const double f_min = big_lambda(model, lam_c, c) - s0;
  if (f_min > 1e-9) {
    throw ValidationError(
        "decay_roots: speed " + std::to_string(c) +
        " is below the critical speed, the decay equation has no real roots");
  }
  if (std::abs(f_min) <= 1e-9) {
    return {lam_c, lam_c};
  }
  const auto f = [&](double lam) { return big_lambda(model, lam, c) - s0; };
  // Left root: f(0+) = -s0 > 0, f(lam_c) < 0.
  const double lam1 = bisect(f, 1e-12, lam_c, tol);
  // Right root: expand beyond the minimizer until f turns positive.
  double hi = 2.0 * lam_c;
  int guard = 0;
  while (f(hi) < 0.0) {
    hi *= 2.0;
    if (++guard > 200) {
      throw NumericalError("decay_roots: failed to bracket the steep root");
    }
  }
  const double lam2 = bisect(f, lam_c, hi, tol);
  return {lam1, lam2};
}

}  // namespace agewave
