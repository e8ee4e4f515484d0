#pragma once

#include <utility>
#include <vector>

#include "agewave/model.hpp"

namespace agewave {

/// Dense discretization of the tilted age-renewal operator
///   [L_s v](a) = e^{s a} int_0^{a+} gamma v
///              + int_0^a e^{s(a-l)} int_0^{a+} K(l,a') pi(a') v(a') da' dl.
/// The a'-integrals are trapezoid sums; the l-integral weights the
/// piecewise-linear interpolant of the inner integral exactly against
/// e^{s(a-l)} cell by cell.
struct LsMatrix {
  int n = 0;
  double s = 0.0;
  std::vector<double> m;  // row-major n*n

  double at(int i, int j) const { return m[static_cast<size_t>(i) * n + j]; }
  std::vector<double> apply(const std::vector<double>& v) const;
};

LsMatrix assemble_Ls(const ModelSpec& model, double s);

struct PowerResult {
  double rho = 0.0;
  std::vector<double> vec;  // max-normalized nonnegative eigenvector
  int iterations = 0;
  double residual = 0.0;  // max |M v - rho v|
};

/// Power iteration from the all-ones start, Rayleigh-quotient convergence.
PowerResult spectral_radius(const LsMatrix& M, double tol = 1e-12,
                            int max_iter = 50000);

/// Unique s0 < 0 with rho(L_{s0}) = 1. Requires rho(L_0) > 1.
double find_s0(const ModelSpec& model, double rho_tol = 1e-10);

/// Positive eigenprofile of L_{s0}, normalized to max = 1; the attained
/// eigen residual must come in below residual_tol.
std::vector<double> eigenfunction_phi(const ModelSpec& model, double s0,
                                      double residual_tol = 1e-9);

/// int J e^{lambda y} dy over the kernel's truncated support.
double mgf_J(const ModelSpec& model, double lambda);

/// Dispersion function Lambda(lambda, c) = mgf_J(lambda) - 1 - c lambda.
double big_lambda(const ModelSpec& model, double lambda, double c);

/// Unique minimizer-defining root of int J y e^{lambda y} dy = c, c > 0.
double lambda_of_c(const ModelSpec& model, double c, double tol = 1e-12);

/// Critical speed: the c with Lambda(lambda(c), c) = s0.
double critical_speed(const ModelSpec& model, double s0, double tol = 1e-10);

struct DispersionReport {
  double s0 = 0.0;
  double rho_at_zero = 0.0;
  std::vector<double> phi;   // max-normalized eigenprofile at s0
  std::vector<double> qphi;  // int K pi phi per age node
  double eigen_residual = 0.0;
  double c_star = 0.0;
  double lambda_star = 0.0;  // lambda(c_star)
  double min_phi = 0.0;
  double max_phi = 0.0;
  double sup_qphi = 0.0;
};

DispersionReport dispersion_report(const ModelSpec& model);

/// Decay exponents 0 < lambda1 <= lambda(c) <= lambda2 with
/// Lambda(lambda_i, c) = s0 for c > c*. At the tangency (|Lambda(lambda(c),c)
/// - s0| <= 1e-9) both come back equal to lambda(c); clearly subcritical
/// speeds are a domain error.
std::pair<double, double> decay_roots(const ModelSpec& model, double s0, double c,
                                      double tol = 1e-12);

}  // namespace agewave
