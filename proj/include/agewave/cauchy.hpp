#pragma once

#include <functional>
#include <vector>

#include "agewave/model.hpp"

namespace agewave {

/// Far-field closure for spatial convolutions: zero-extension for compactly
/// supported data, edge-value extension for fronts with a nonzero left state.
enum class SpaceClosure { zero, edge };

/// State of the simulation at one instant: u(a_i, x_j) row-major by age.
struct Field {
  double t = 0.0;
  AgeGrid age;
  SpaceGrid space;
  std::vector<double> u;

  double at(int i, int j) const {
    return u[static_cast<size_t>(i) * space.n + j];
  }
  double* row(int i) { return u.data() + static_cast<size_t>(i) * space.n; }
  const double* row(int i) const {
    return u.data() + static_cast<size_t>(i) * space.n;
  }
};

/// Samples u0(a, x) on the grids; entries must land in [0, 1].
Field make_field(const ModelSpec& model, const SpaceGrid& grid,
                 const std::function<double(double, double)>& u0);

Field make_constant_field(const ModelSpec& model, const SpaceGrid& grid,
                          double value);

struct Trajectory {
  std::vector<Field> snapshots;
  double dt = 0.0;
  double range_low = 0.0;   // running min over every step of the run
  double range_high = 1.0;  // running max over every step of the run
};

/// Method-of-characteristics stepper in lockstep dt = age spacing, so each
/// step shifts values one age row up while applying the dispersal and
/// transmission sources, and the renewal row closes the system from the
/// just-computed rows (its own trapezoid weight folded to the left side).
class CauchySimulator {
 public:
  CauchySimulator(const ModelSpec& model, const SpaceGrid& grid,
                  SpaceClosure closure = SpaceClosure::zero);

  /// One step of size dt(); throws NumericalError when any entry leaves
  /// [-range_tol, 1 + range_tol].
  void step(Field& field, double range_tol = 1e-8);

  /// Steps from the start field to time T, collecting snapshots at the
  /// requested times (each must sit on the step grid within dt/2).
  Trajectory run(const Field& start, double T,
                 const std::vector<double>& sample_times,
                 double range_tol = 1e-8);

  double dt() const { return model_->age.h(); }
  const Stencil& stencil() const { return stencil_; }
  const SpaceGrid& grid() const { return grid_; }
  SpaceClosure closure() const { return closure_; }
  const ModelSpec& model() const { return *model_; }

 private:
  const ModelSpec* model_;
  SpaceGrid grid_;
  SpaceClosure closure_;
  Stencil stencil_;
  std::vector<double> next_, qmat_, conv_, row_in_;
};

/// Sup-norm defect at (t, a) of the stepped solution against the
/// characteristics representation
///   u(t,a) = e^{(T-I)t} u0(a-t)       + int_0^t   e^{(T-I)(t-s)} [K(u(s))](s+a-t) ds   (a >= t)
///   u(t,a) = e^{(T-I)a} u(t-a, 0)     + int_{t-a}^t e^{(T-I)(t-s)} [K(u(s))](s+a-t) ds (a <  t)
/// with the semigroup evaluated by the truncated exponential series of the
/// same convolution stencil the stepper uses, terms until the Poisson tail
/// drops below series_tol, and the s-integral by trapezoid on the step grid.
/// history must hold every step from t = 0 through t.
double renewal_formula_check(const std::vector<Field>& history,
                             const ModelSpec& model, const Stencil& stencil,
                             SpaceClosure closure, double t, double a,
                             double series_tol = 1e-10);

struct SteadyEquilibrium {
  std::vector<double> profile;
  double ode_residual = 0.0;
  double boundary_residual = 0.0;
};

struct SteadyScanResult {
  std::vector<SteadyEquilibrium> equilibria;  // deduplicated, ordered by level
  std::vector<double> guesses;                // probed boundary values
  std::vector<int> basin;                     // guess index -> equilibrium index
};

/// Probes the limiting age ODE du/da = (int K pi u da')(1 - u) with renewal
/// closure from n_guesses interior constant guesses plus the two constant
/// states. Each probe alternates an inner Picard pass on the nonlocal
/// integral with an outer renewal update of u(0). The converged set must be
/// the two-point dichotomy {0-profile, 1-profile} up to 1e-7; anything else
/// is reported as a model inconsistency.
SteadyScanResult steady_state_scan(const ModelSpec& model, int n_guesses);

struct ComparisonReport {
  bool ordered = false;
  double worst_margin = 0.0;  // min over steps and nodes of (v - u)
};

/// Steps the ordered pair u0 <= v0 side by side to time T and reports the
/// worst ordering margin; ordered means the margin never drops below -1e-10.
ComparisonReport comparison_check(const Field& u0, const Field& v0,
                                  const ModelSpec& model, SpaceClosure closure,
                                  double T);

}  // namespace agewave
