#pragma once

#include <functional>
#include <string>
#include <vector>

#include "agewave/kernels.hpp"

namespace agewave {

/// Uniform age grid on [0, a_max].
struct AgeGrid {
  double a_max = 1.0;
  int n = 101;

  double h() const { return a_max / (n - 1); }
  double node(int i) const { return a_max * i / (n - 1); }
};

/// Uniform symmetric space grid on [-half_width, half_width].
struct SpaceGrid {
  double half_width = 30.0;
  int n = 1201;

  double h() const { return 2.0 * half_width / (n - 1); }
  double node(int j) const { return -half_width + j * h(); }
};

/// Survival probability pi(a) = exp(-int_0^a mu); mu samples must be >= 0.
std::vector<double> build_survival(const std::vector<double>& mu, const AgeGrid& grid);

/// Birth kernel gamma = beta * pi. Throws when the quadrature mass of gamma
/// strays from 1 beyond max(tol, 10x the Richardson error estimate).
std::vector<double> build_gamma(const std::vector<double>& beta,
                                const std::vector<double>& pi, const AgeGrid& grid,
                                double tol = 1e-10);

/// |int beta exp(-int mu) - 1|: how far the demography is from equilibrium.
double demography_residual(const std::vector<double>& beta,
                           const std::vector<double>& mu, const AgeGrid& grid);

/// Age-structured model with nonlocal dispersal: demography samples on the
/// age grid plus the transmission kernel K and the dispersal kernel J.
struct ModelSpec {
  AgeGrid age;
  std::vector<double> mu, beta, pi, gamma;
  std::vector<double> age_w;      // trapezoid weights on the age grid
  std::vector<double> renewal_w;  // age_w * gamma, normalized to unit sum
  double gamma_mass = 0.0;        // raw trapezoid mass of gamma
  std::vector<double> K;          // n x n row-major, K(a_i, a'_j)
  std::vector<double> Kpi;        // K(i,j) * pi_j * age_w_j
  KernelPtr kernel;
  double M = 0.0;        // max_a int K(a,a') pi(a') da'
  double q_row_min = 0.0;  // min_a of the same row integrals

  int n() const { return age.n; }
  double kk(int i, int j) const { return K[static_cast<size_t>(i) * n() + j]; }

  /// (Q v)(a_i) = int K(a_i, a') pi(a') v(a') da' on the grid.
  std::vector<double> apply_Q(const std::vector<double>& v) const;

  /// int gamma v da with the normalized renewal weights.
  double renewal(const std::vector<double>& v) const;
};

using AgeFn = std::function<double(double)>;
using AgeAgeFn = std::function<double(double, double)>;

ModelSpec make_model(double a_max, int n_a, const AgeFn& mu, const AgeFn& beta,
                     KernelPtr kernel, const AgeAgeFn& K,
                     double gamma_tol = 1e-10);

/// Reference model: a_max, mu = 0, beta = 1/a_max, K = kappa, J gaussian.
ModelSpec make_reference_model(int n_a = 101, double kappa = 1.0,
                               double sigma = 1.0, double a_max = 1.0);

/// One line of the model-assumption report.
struct AssumptionCheck {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<AssumptionCheck> items;
  bool ok = true;
};

/// Checks the standing assumptions: normalized birth kernel, positive
/// survival, admissible dispersal kernel, strictly positive transmission.
ValidationReport validate_assumptions(const ModelSpec& model);

}  // namespace agewave
