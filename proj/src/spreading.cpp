#include "agewave/spreading.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "agewave/errors.hpp"
#include "agewave/numerics.hpp"

namespace agewave {

FrontPosition front_position(const Field& field, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) {
    throw ValidationError("front_position: level must lie in (0,1)");
  }
  const int na = field.age.n;
  const int nx = field.space.n;
  std::vector<double> slice(nx, 0.0);
  for (int i = 0; i < na; ++i) {
    const double* row = field.row(i);
    for (int j = 0; j < nx; ++j) slice[j] = std::max(slice[j], row[j]);
  }

  FrontPosition pos;
  int hi = nx - 1;
  while (hi >= 0 && slice[hi] < rho) --hi;
  if (hi < 0) return pos;
  pos.present = true;
  const double h = field.space.h();
  if (hi == nx - 1) {
    pos.x_plus = field.space.half_width;
  } else {
    pos.x_plus = field.space.node(hi) +
                 h * (slice[hi] - rho) / (slice[hi] - slice[hi + 1]);
  }
  int lo = 0;
  while (slice[lo] < rho) ++lo;
  if (lo == 0) {
    pos.x_minus = -field.space.half_width;
  } else {
    pos.x_minus = field.space.node(lo) -
                  h * (slice[lo] - rho) / (slice[lo] - slice[lo - 1]);
  }
  return pos;
}

FrontTrack track_front(const Trajectory& traj, double rho) {
  FrontTrack track;
  track.rho = rho;
  for (const Field& f : traj.snapshots) {
    const FrontPosition pos = front_position(f, rho);
    track.times.push_back(f.t);
    track.x_plus.push_back(pos.present ? pos.x_plus : 0.0);
    track.x_minus.push_back(pos.present ? pos.x_minus : 0.0);
    track.present.push_back(pos.present ? 1 : 0);
  }
  return track;
}

SpeedEstimate estimate_speed(const FrontTrack& track, double skip_frac) {
  if (track.times.empty()) {
    throw ValidationError("estimate_speed: empty track");
  }
  const double t0 = track.times.front();
  const double cut = t0 + skip_frac * (track.times.back() - t0);
  std::vector<double> t, xr, xl;
  for (size_t k = 0; k < track.times.size(); ++k) {
    if (track.times[k] < cut || !track.present[k]) continue;
    t.push_back(track.times[k]);
    xr.push_back(track.x_plus[k]);
    xl.push_back(track.x_minus[k]);
  }
  if (t.size() < 10) {
    throw ValidationError("estimate_speed: only " + std::to_string(t.size()) +
                          " windowed points, need 10");
  }
  const LineFit right = fit_line(t, xr);
  const LineFit left = fit_line(t, xl);
  SpeedEstimate est;
  est.c_right = right.slope;
  est.c_left = -left.slope;
  est.stderr_right = right.slope_stderr;
  est.asymmetry = std::abs(est.c_right - est.c_left);
  est.points = static_cast<int>(t.size());
  return est;
}

KppReference kpp_reference(const ModelSpec& model, const DispersionReport& report) {
  if (!(report.s0 < 0.0)) {
    throw ValidationError("kpp_reference: s0 must be negative");
  }
  KppReference ref;
  ref.lambda0 = -report.s0;
  ref.phi_min = model.q_row_min;
  ref.P = report.sup_qphi / ref.lambda0;
  ref.rho0 = report.min_phi / ref.P;

  const auto objective = [&](double lam) {
    return (mgf_J(model, lam) - 1.0 + ref.lambda0) / lam;
  };
  // The objective blows up at both ends; double the right edge until the
  // minimum is interior, then golden-section.
  double hi = 1.0;
  while (objective(2.0 * hi) < objective(hi)) {
    hi *= 2.0;
    if (hi > 1e6) throw NumericalError("kpp_reference: no interior minimum");
  }
  ref.lambda_min = golden_min(objective, 1e-4, 2.0 * hi, 1e-11);
  ref.c0 = objective(ref.lambda_min);

  const double rel = std::abs(ref.c0 - report.c_star) / report.c_star;
  if (rel > 1e-6) {
    throw NumericalError(
        "kpp_reference: scalar speed c0 = " + std::to_string(ref.c0) +
        " disagrees with the dispersion speed " + std::to_string(report.c_star));
  }
  return ref;
}

OuterBoundResult outer_bound_check(const Trajectory& traj, const ModelSpec& model,
                                   const DispersionReport& report, double c,
                                   double v0_amp) {
  if (traj.snapshots.empty()) {
    throw ValidationError("outer_bound_check: empty trajectory");
  }
  const auto roots = decay_roots(model, report.s0, c);
  OuterBoundResult res;
  res.lambda = roots.first;

  const Field& first = traj.snapshots.front();
  const int na = first.age.n;
  const int nx = first.space.n;
  if (v0_amp > 0.0) {
    res.v0 = v0_amp;
  } else {
    // Smallest amplitude dominating the first snapshot.
    double need = 0.0;
    for (int i = 0; i < na; ++i) {
      const double* row = first.row(i);
      const double phi = report.phi[i];
      for (int j = 0; j < nx; ++j) {
        if (row[j] <= 0.0) continue;
        const double envelope = std::exp(-res.lambda * first.space.node(j)) * phi;
        need = std::max(need, row[j] / envelope);
      }
    }
    res.v0 = (need > 0.0) ? need : 1.0;
  }

  double worst = 1e300;
  for (const Field& f : traj.snapshots) {
    const double shift = c * f.t;
    for (int i = 0; i < na; ++i) {
      const double* row = f.row(i);
      const double amp = res.v0 * report.phi[i];
      for (int j = 0; j < nx; ++j) {
        const double bound =
            amp * std::exp(-res.lambda * (f.space.node(j) - shift));
        const double margin = std::min(bound, 2.0) - row[j];
        worst = std::min(worst, margin);
      }
    }
  }
  res.worst_margin = worst;
  if (worst < -1e-8) {
    throw NumericalError("outer_bound_check: envelope pierced by " +
                         std::to_string(-worst));
  }
  return res;
}

namespace {

/// One explicit step of the scalar comparison equation
/// w <- w + dt (J*w - w + r w (1 - p w)), zero far-field closure.
void scalar_step(const Stencil& stz, std::vector<double>& w,
                 std::vector<double>& scratch, double dt, double r, double p) {
  stz.convolve(w, scratch, 0.0, 0.0);
  const int n = static_cast<int>(w.size());
  for (int x = 0; x < n; ++x) {
    w[x] += dt * (scratch[x] - w[x] + r * w[x] * (1.0 - p * w[x]));
  }
}

}  // namespace

HairTriggerResult hair_trigger_check(const ModelSpec& model, const SpaceGrid& grid,
                                     double rho0, double rho, double x0,
                                     double t_max, double margin_tol) {
  if (!(rho0 > 0.0 && rho0 < 1.0 && rho > 0.0 && rho < 1.0)) {
    throw ValidationError("hair_trigger_check: levels must lie in (0,1)");
  }
  CauchySimulator sim(model, grid, SpaceClosure::zero);
  Field full = make_field(model, grid, [&](double, double x) {
    return std::abs(x - x0) <= 1.0 ? rho0 : 0.0;
  });
  const int nx = grid.n;
  std::vector<double> aux(nx), scratch(nx);
  for (int j = 0; j < nx; ++j) {
    aux[j] = std::abs(grid.node(j) - x0) <= 1.0 ? rho0 : 0.0;
  }

  const double phi_min = model.q_row_min;
  const int na = model.n();
  HairTriggerResult res;
  res.worst_margin = 1e300;

  const auto ball_min = [&](const Field& f) {
    double lo = 1e300;
    for (int j = 0; j < nx; ++j) {
      if (std::abs(grid.node(j) - x0) > 1.0) continue;
      for (int i = 0; i < na; ++i) lo = std::min(lo, f.at(i, j));
    }
    return lo;
  };
  const auto margin = [&]() {
    double worst = 1e300;
    for (int j = 0; j < nx; ++j) {
      double col = 1e300;
      for (int i = 0; i < na; ++i) col = std::min(col, full.at(i, j));
      worst = std::min(worst, col - aux[j]);
    }
    return worst;
  };

  res.worst_margin = std::min(res.worst_margin, margin());
  if (ball_min(full) >= rho) {
    res.reached = true;
    res.elapsed = 0.0;
    return res;
  }
  const int n_steps = static_cast<int>(std::ceil(t_max / sim.dt() - 1e-12));
  for (int s = 1; s <= n_steps; ++s) {
    sim.step(full);
    scalar_step(sim.stencil(), aux, scratch, sim.dt(), phi_min, 1.0);
    const double m = margin();
    res.worst_margin = std::min(res.worst_margin, m);
    if (m < -margin_tol) {
      throw NumericalError(
          "hair_trigger_check: auxiliary bound violated by " +
          std::to_string(-m) + " at t = " + std::to_string(full.t));
    }
    if (!res.reached && ball_min(full) >= rho) {
      res.reached = true;
      res.elapsed = full.t;
    }
  }
  return res;
}

InnerSpreadingResult inner_spreading_check(const ModelSpec& model,
                                           const DispersionReport& report,
                                           const SpaceGrid& grid, const Field& u0,
                                           double c_frac, double T,
                                           double eps_target, double R,
                                           double sub_tol) {
  if (!(c_frac > 0.0 && c_frac < 1.0)) {
    throw ValidationError("inner_spreading_check: c_frac must lie in (0,1)");
  }
  CauchySimulator sim(model, grid, SpaceClosure::zero);
  const double dt = sim.dt();
  const double a_span = model.age.a_max;
  if (T <= a_span) {
    throw ValidationError("inner_spreading_check: T must exceed one age span");
  }

  // Warm-up over one age span so the solution is uniformly positive on the
  // plateau interval [-R, R].
  Field full = u0;
  const int warm_steps = static_cast<int>(std::llround(a_span / dt));
  for (int s = 0; s < warm_steps; ++s) sim.step(full);

  const int na = model.n();
  const int nx = grid.n;
  InnerSpreadingResult res;
  res.plateau = 1e300;
  for (int j = 0; j < nx; ++j) {
    if (std::abs(grid.node(j)) > R) continue;
    for (int i = 0; i < na; ++i) res.plateau = std::min(res.plateau, full.at(i, j));
  }
  if (!(res.plateau > 0.0)) {
    throw NumericalError("inner_spreading_check: no positive plateau after one age span");
  }

  const KppReference kpp = kpp_reference(model, report);
  res.v0_amp = std::min(1.0 / kpp.P, res.plateau / report.max_phi);
  if (dt * (1.0 + kpp.lambda0) > 1.0) {
    throw NumericalError("inner_spreading_check: dt (1 + lambda0) exceeds 1");
  }

  std::vector<double> v(nx), scratch(nx);
  for (int j = 0; j < nx; ++j) {
    v[j] = res.v0_amp * std::max(0.0, 1.0 - std::abs(grid.node(j)) / R);
  }

  res.sub_margin = 1e300;
  res.p_cap_excess = -1e300;
  const double cap = 1.0 / kpp.P;
  const auto record = [&]() {
    double worst = 1e300, peak = -1e300;
    for (int j = 0; j < nx; ++j) {
      peak = std::max(peak, v[j]);
      for (int i = 0; i < na; ++i) {
        worst = std::min(worst, full.at(i, j) - report.phi[i] * v[j]);
      }
    }
    res.sub_margin = std::min(res.sub_margin, worst);
    res.p_cap_excess = std::max(res.p_cap_excess, peak - cap);
  };
  record();

  const int run_steps = static_cast<int>(std::llround((T - a_span) / dt));
  for (int s = 0; s < run_steps; ++s) {
    sim.step(full);
    scalar_step(sim.stencil(), v, scratch, dt, kpp.lambda0, kpp.P);
    record();
    if (res.sub_margin < -sub_tol) {
      throw NumericalError("inner_spreading_check: sub-solution bound violated by " +
                           std::to_string(-res.sub_margin) + " at t = " +
                           std::to_string(full.t));
    }
  }

  const double radius = c_frac * report.c_star * T;
  res.interior_min = 1e300;
  for (int j = 0; j < nx; ++j) {
    if (std::abs(grid.node(j)) > radius) continue;
    for (int i = 0; i < na; ++i)
      res.interior_min = std::min(res.interior_min, full.at(i, j));
  }
  if (res.interior_min < 1.0 - eps_target) {
    throw NumericalError("inner_spreading_check: interior minimum " +
                         std::to_string(res.interior_min) +
                         " misses the target " + std::to_string(1.0 - eps_target));
  }
  return res;
}

}  // namespace agewave
