#pragma once

#include <vector>

#include "agewave/cauchy.hpp"
#include "agewave/model.hpp"
#include "agewave/spectral.hpp"

namespace agewave {

/// Level crossings of the age-max slice max_a u(a, x) at one instant.
struct FrontPosition {
  bool present = false;
  double x_plus = 0.0;
  double x_minus = 0.0;
};

/// Rightmost and leftmost x where the slice meets rho, linearly interpolated
/// between the bracketing nodes; a slice at the level everywhere reports the
/// domain edges.
FrontPosition front_position(const Field& field, double rho);

struct FrontTrack {
  double rho = 0.5;
  std::vector<double> times;
  std::vector<double> x_plus;
  std::vector<double> x_minus;
  std::vector<char> present;
};

FrontTrack track_front(const Trajectory& traj, double rho);

struct SpeedEstimate {
  double c_right = 0.0;
  double c_left = 0.0;       // sign-flipped so symmetric spread gives c_left ~ c_right
  double stderr_right = 0.0;
  double asymmetry = 0.0;    // |c_right - c_left|
  int points = 0;
};

/// Least-squares front speed over the late-time window (the first skip_frac
/// of the time range is discarded as transient); needs at least 10 windowed
/// points with the level present.
SpeedEstimate estimate_speed(const FrontTrack& track, double skip_frac = 0.4);

/// Constants of the scalar comparison equation
///   dv/dt = J*v - v + lambda0 v (1 - P v):
/// lambda0 = -s0, Phi_min = min_a int K pi da', P = sup_a int K pi phi / lambda0,
/// and the scalar spreading speed c0 = inf_{lambda>0} (mgf_J - 1 + lambda0)/lambda,
/// which must reproduce the dispersion critical speed.
struct KppReference {
  double lambda0 = 0.0;
  double phi_min = 0.0;     // Phi_min
  double P = 0.0;
  double c0 = 0.0;
  double lambda_min = 0.0;  // argmin of the c0 objective
  double rho0 = 0.0;        // min phi / P, the inner spreading floor
};

KppReference kpp_reference(const ModelSpec& model, const DispersionReport& report);

struct OuterBoundResult {
  double worst_margin = 0.0;  // min over snapshots and nodes of (v - u)
  double v0 = 0.0;
  double lambda = 0.0;        // decay rate lambda_1(c) of the moving envelope
};

/// Checks u(t,a,x) <= v0 e^{-lambda(x - c t)} phi(a) on every snapshot for a
/// supercritical speed c. v0_amp <= 0 scales the envelope to dominate the
/// first snapshot exactly; margins below -1e-8 are a comparison failure.
OuterBoundResult outer_bound_check(const Trajectory& traj, const ModelSpec& model,
                                   const DispersionReport& report, double c,
                                   double v0_amp = 0.0);

struct HairTriggerResult {
  bool reached = false;
  double elapsed = 0.0;       // first time u >= rho on [x0-1, x0+1], all ages
  double worst_margin = 0.0;  // min over steps of (full - auxiliary)
};

/// Runs the full system from rho0 on [x0-1, x0+1] (all ages) next to the
/// scalar auxiliary equation with Phi_min from the same data, asserting the
/// auxiliary solution stays a pointwise lower bound, and reports when the
/// full solution first clears rho on that interval.
HairTriggerResult hair_trigger_check(const ModelSpec& model, const SpaceGrid& grid,
                                     double rho0, double rho, double x0,
                                     double t_max, double margin_tol = 1e-10);

struct InnerSpreadingResult {
  double interior_min = 0.0;  // min u over |x| <= c_frac c* T at the final time
  double sub_margin = 0.0;    // min over steps of (u - phi v)
  double p_cap_excess = 0.0;  // max over steps of (sup v - 1/P)
  double v0_amp = 0.0;
  double plateau = 0.0;       // min of u(a_max span) on [-R, R], the v0 scale source
};

/// Inner spreading certificate: runs the full system one age span
/// so the solution is uniformly positive on [-R, R], scales a Lipschitz tent
/// v0 with sup v0 <= 1/P and phi v0 below that plateau, then steps the
/// scalar comparison equation alongside and checks phi(a) v(t, x) stays a
/// lower bound while v respects the 1/P cap. The interior minimum at the
/// final time must clear 1 - eps_target.
InnerSpreadingResult inner_spreading_check(const ModelSpec& model,
                                           const DispersionReport& report,
                                           const SpaceGrid& grid, const Field& u0,
                                           double c_frac, double T,
                                           double eps_target = 0.05,
                                           double R = 1.0,
                                           double sub_tol = 1e-8);

}  // namespace agewave
