#pragma once

#include <vector>

#include "agewave/model.hpp"
#include "agewave/spectral.hpp"

namespace agewave {

/// Which extremal solution the monotone iteration targets: the maximal
/// branch descends from the super-solution (production path), the minimal
/// branch ascends from the sub-solution (coincidence diagnostic).
enum class WaveBranch { maximal, minimal };

/// Explicit ordered profile pair bracketing the traveling wave at speed c:
///   upper  min{1, e^{-lambda z} phi(a)}
///   lower  max{0, (e^{-lambda z} - k e^{-(lambda+eta) z}) phi(a)}
/// with z = xi - xi_shift. The pair lives in the wave frame, where the
/// renewal boundary is local in xi; profile_* evaluates the same functions
/// in the solver frame, which follows age characteristics and samples at
/// xi - c a.
struct SubSuperPair {
  double c = 0.0;
  double s0 = 0.0;
  double lambda = 0.0;   // shared decay rate (smaller root for c > c*)
  double lambda2 = 0.0;  // larger decay root, bounds eta from above
  double eta = 0.0;      // correction exponent of the lower profile
  double k = 1.0;        // correction amplitude of the lower profile
  double alpha = 1.0;    // max phi; 1 - upper >= (1 - alpha e^{-lambda z})^+
  double xi_M = 0.0;     // ln(alpha)/lambda, where that bracket turns on
  double p_eta = 0.0;    // s0 - Lambda(lambda + eta, c) > 0
  double xi_shift = 0.0; // translate applied to both profiles
  AgeGrid age;
  std::vector<double> phi;   // eigenprofile, max-normalized
  std::vector<double> qphi;  // int K pi phi per age node

  double super_at(int i, double xi) const;
  double sub_at(int i, double xi) const;
  double super_profile(int i, double xi) const;  // super_at(i, xi - c a_i)
  double sub_profile(int i, double xi) const;
};

/// p(eta) = int J e^{lambda y} - c lambda - int J e^{(lambda+eta) y}
///        + c (lambda + eta), the sub-solution margin rate; p(0) = 0 and
/// p > 0 for small eta > 0 whenever lambda < lambda(c).
double p_of_eta(const ModelSpec& model, double eta, double lambda, double c);

/// Worst value of a pointwise inequality with the grid location where it
/// was attained (xi in the wave frame).
struct PairMargin {
  double value = 0.0;
  int age_index = 0;
  double xi = 0.0;
};

/// Margins from verify_ordered_pair; every entry must be nonnegative up to
/// tolerance for the pair to certify.
struct PairReport {
  PairMargin order;           // min of {upper - lower, lower, 1 - upper}
  PairMargin super_interior;  // upper differential inequality
  PairMargin super_boundary;  // upper(0,xi) - int gamma upper
  PairMargin sub_interior;    // lower differential inequality, (1-lower) factor
  PairMargin sub_bracket;     // same with the (1 - alpha e^{-lambda z})^+ factor
  PairMargin sub_boundary;    // int gamma lower - lower(0,xi)
  double case1 = 0.0;  // analytic sufficient margin, bracket active region
  double case2 = 0.0;  // analytic sufficient margin, bracket dead region

  double worst() const;
  bool ok(double tol = 1e-9) const { return worst() >= -tol; }
};

/// Checks 0 <= lower <= upper <= 1 and both differential inequalities
/// pointwise on the age x space grid, in the wave frame. Convolutions
/// sample the profile callables beyond the grid edges, age and space
/// derivatives are evaluated branch-analytically, and the transmission
/// integral uses the trapezoid rule on the true (clipped) profile values.
PairReport verify_ordered_pair(const SubSuperPair& pair, const ModelSpec& model,
                               const SpaceGrid& grid);

/// Builds the profile pair for c > c*: alpha = max phi, eta starts at
/// half of min(lambda1, lambda2 - lambda1), and k is the smallest amplitude
/// that settles both sufficient inequalities plus the positivity crossover
/// ln(k)/eta >= xi_M. Each candidate is certified with verify_ordered_pair;
/// on failure eta halves and k doubles, up to 40 attempts.
SubSuperPair select_sub_parameters(const ModelSpec& model,
                                   const DispersionReport& report, double c,
                                   const SpaceGrid& grid,
                                   double margin_tol = 1e-9);

/// Traveling wave profile on the age x space grid in the solver frame
/// (xi follows age characteristics; the renewal boundary samples at
/// xi + c a). Diagnostics are filled by monotone_iterate.
struct WaveProfile {
  double c = 0.0;
  double lambda = 0.0;  // decay rate inherited from the generating pair
  AgeGrid age;
  SpaceGrid xi;
  std::vector<double> w;  // n_a x n_xi row-major

  int iterations = 0;
  double last_increment = 0.0;
  double residual = 0.0;
  double lipschitz_m = 0.0;
  double sandwich_low = 0.0;   // min over iterates of (iterate - lower)
  double sandwich_high = 0.0;  // min over iterates of (upper - iterate)
  double mono_margin = 0.0;    // max over nodes of w(a, xi_{j+1}) - w(a, xi_j)
  double range_min = 0.0;
  double range_max = 0.0;
  double translate = 0.0;  // accumulated centering shift

  double at(int i, int j) const {
    return w[static_cast<size_t>(i) * xi.n + j];
  }
};

/// Transmission integral along age characteristics: for target age a_i the
/// source row a_j is sampled at xi + c (a_j - a_i), linearly interpolated
/// with far-field closures 1 (left) and 0 (right). The renewal boundary
/// shift and this integral follow the same characteristic change of
/// variables; leaving the integral unshifted breaks the comparison
/// structure of the iteration.
void apply_coupling_profile(const ModelSpec& model, const SpaceGrid& grid,
                            double c, const std::vector<double>& field,
                            std::vector<double>& out);

/// Monotone iteration toward the extremal wave: starts from the selected
/// branch's profile, repeats the linear age sweep
///   d_a u = J*u - (1+M) u + [coupling(prev)](1 - prev) + M prev
/// with boundary u(0,xi) = int gamma prev(a, xi + c a) da, and stops when
/// the sup increment drops below tol. The first boundary row evaluates the
/// pair callables exactly; later rows interpolate the previous iterate.
/// ordering_tol 0 picks the branch default (1e-8 maximal, 1e-5 minimal).
WaveProfile monotone_iterate(const ModelSpec& model, const SubSuperPair& pair,
                             const SpaceGrid& grid, double tol = 1e-8,
                             int max_iter = 2000,
                             WaveBranch branch = WaveBranch::maximal,
                             double ordering_tol = 0.0);

/// Sup-norm defect of the profile equation: forward age differences against
/// convolution plus the characteristic-shifted transmission term, plus the
/// renewal boundary defect, maximized over the interior (both space edges
/// excluded by a band of twice the kernel support radius).
double wave_residual(const WaveProfile& profile, const ModelSpec& model);

/// Smallest candidate modulus m (grid lambda*(1 + j/4), j = 0..40) with
/// |w(a, xi+h) - w(a, xi)| <= e^{m|h|} - 1 for all pairs up to 5 spacings,
/// and m >= lambda. Throws when no candidate suffices.
double lipschitz_modulus_check(const WaveProfile& profile);

/// Decay rate mu > 0 of 1 - w on the left tail: the root of
///   int gamma(a) exp[(mgf_J(mu) - 1 + c mu) a - int_0^a q] da = 1,
/// where q(a) = int K(a,a') pi(a') da'.
double left_decay_exponent(const ModelSpec& model, double c);

/// Far-field defects of a converged profile against the limits 1 and 0,
/// with tolerances implied by the decay rates and the domain half-width.
struct EdgeReport {
  double left_defect = 0.0;
  double right_defect = 0.0;
  double left_tol = 0.0;
  double right_tol = 0.0;
  bool ok() const {
    return left_defect <= left_tol && right_defect <= right_tol;
  }
};

EdgeReport edge_limits(const WaveProfile& profile, const ModelSpec& model);

/// Translates the profile so the youngest-age row crosses the level at
/// xi = 0 (leftmost crossing, linear interpolation; far-field closures 1
/// and 0 when re-sampling). Returns the applied shift.
double center_profile(WaveProfile& profile, double level = 0.5);

/// Wave family along speeds approaching c* from above, each profile
/// centered at level 1/2; gaps are sup-differences between successive
/// centered profiles, geometrically extrapolated to the limit.
struct CriticalWave {
  WaveProfile profile;  // the profile at the smallest speed
  std::vector<double> speeds;
  std::vector<double> gaps;
  std::vector<double> translates;
  double extrapolated_gap = 0.0;
};

CriticalWave critical_wave(const ModelSpec& model,
                           const DispersionReport& report,
                           const SpaceGrid& grid, double tol = 1e-8,
                           int max_iter = 2000);

}  // namespace agewave
