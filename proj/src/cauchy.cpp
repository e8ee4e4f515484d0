#include "agewave/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "agewave/errors.hpp"
#include "agewave/numerics.hpp"

namespace agewave {

namespace {

void check_range(const Field& f, double tol, const char* where) {
  double lo = f.u[0], hi = f.u[0];
  for (double v : f.u) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(lo >= -tol && hi <= 1.0 + tol)) {
    throw NumericalError(std::string(where) + ": field left [0,1] by " +
                         std::to_string(std::max(-lo, hi - 1.0)) +
                         " at t = " + std::to_string(f.t));
  }
}

void closure_values(const double* row, int n, SpaceClosure closure,
                    double& left, double& right) {
  if (closure == SpaceClosure::zero) {
    left = 0.0;
    right = 0.0;
  } else {
    left = row[0];
    right = row[n - 1];
  }
}

}  // namespace

Field make_field(const ModelSpec& model, const SpaceGrid& grid,
                 const std::function<double(double, double)>& u0) {
  Field f;
  f.age = model.age;
  f.space = grid;
  f.u.resize(static_cast<size_t>(model.n()) * grid.n);
  for (int i = 0; i < model.n(); ++i) {
    double* row = f.row(i);
    const double a = model.age.node(i);
    for (int j = 0; j < grid.n; ++j) row[j] = u0(a, grid.node(j));
  }
  check_range(f, 0.0, "make_field");
  return f;
}

Field make_constant_field(const ModelSpec& model, const SpaceGrid& grid,
                          double value) {
  return make_field(model, grid,
                    [value](double, double) { return value; });
}

CauchySimulator::CauchySimulator(const ModelSpec& model, const SpaceGrid& grid,
                                 SpaceClosure closure)
    : model_(&model),
      grid_(grid),
      closure_(closure),
      stencil_(make_stencil(*model.kernel, grid.h())) {
  const double dt = model.age.h();
  if (dt * (1.0 + model.M) > 1.0) {
    throw NumericalError("CauchySimulator: dt (1 + M) = " +
                         std::to_string(dt * (1.0 + model.M)) +
                         " exceeds 1, refine the age grid");
  }
  const size_t cells = static_cast<size_t>(model.n()) * grid.n;
  next_.resize(cells);
  qmat_.resize(cells);
  conv_.resize(grid.n);
}

void CauchySimulator::step(Field& field, double range_tol) {
  const int na = model_->n();
  const int nx = grid_.n;
  const double dt = model_->age.h();

  // Transmission pressure rows q(a_i, x) = int K(a_i, a') pi u(a', x) da',
  // accumulated in j-blocks so each source row is streamed once per block.
  std::fill(qmat_.begin(), qmat_.end(), 0.0);
  constexpr int kBlock = 8;
  for (int j0 = 0; j0 < na; j0 += kBlock) {
    const int jb = std::min(kBlock, na - j0);
    for (int i = 0; i < na; ++i) {
      double* qi = qmat_.data() + static_cast<size_t>(i) * nx;
      const double* kp = model_->Kpi.data() + static_cast<size_t>(i) * na + j0;
      for (int j = 0; j < jb; ++j) {
        const double c = kp[j];
        if (c == 0.0) continue;
        const double* src = field.row(j0 + j);
        for (int x = 0; x < nx; ++x) qi[x] += c * src[x];
      }
    }
  }

  // March characteristics: row i at the new time comes from row i-1.
  for (int i = na - 1; i >= 1; --i) {
    const double* prev = field.row(i - 1);
    const double* q = qmat_.data() + static_cast<size_t>(i - 1) * nx;
    double* out = next_.data() + static_cast<size_t>(i) * nx;
    double cl, cr;
    closure_values(prev, nx, closure_, cl, cr);
    row_in_.assign(prev, prev + nx);
    stencil_.convolve(row_in_, conv_, cl, cr);
    for (int x = 0; x < nx; ++x) {
      out[x] = prev[x] +
               dt * (conv_[x] - prev[x] + q[x] * (1.0 - prev[x]));
    }
  }

  // Renewal row from the just-computed rows; its own trapezoid weight sits
  // on the left side, so divide it out.
  const std::vector<double>& r = model_->renewal_w;
  double* row0 = next_.data();
  std::fill(row0, row0 + nx, 0.0);
  for (int i = 1; i < na; ++i) {
    const double ri = r[i];
    if (ri == 0.0) continue;
    const double* src = next_.data() + static_cast<size_t>(i) * nx;
    for (int x = 0; x < nx; ++x) row0[x] += ri * src[x];
  }
  const double scale = 1.0 / (1.0 - r[0]);
  for (int x = 0; x < nx; ++x) row0[x] *= scale;

  field.u.swap(next_);
  field.t += dt;
  check_range(field, range_tol, "CauchySimulator::step");
}

Trajectory CauchySimulator::run(const Field& start, double T,
                                const std::vector<double>& sample_times,
                                double range_tol) {
  const double dt = this->dt();
  const int n_steps = static_cast<int>(std::llround(T / dt));
  if (std::abs(n_steps * dt - T) > 1e-9 * std::max(1.0, T)) {
    throw ValidationError("run: T = " + std::to_string(T) +
                          " is not a multiple of dt = " + std::to_string(dt));
  }
  std::vector<int> want(sample_times.size());
  for (size_t k = 0; k < sample_times.size(); ++k) {
    const int idx = static_cast<int>(std::llround(sample_times[k] / dt));
    if (idx < 0 || idx > n_steps ||
        std::abs(idx * dt - sample_times[k]) > 0.5 * dt) {
      throw ValidationError("run: sample time " +
                            std::to_string(sample_times[k]) +
                            " is outside the step grid");
    }
    want[k] = idx;
  }

  Trajectory traj;
  traj.dt = dt;
  Field f = start;
  traj.range_low = *std::min_element(f.u.begin(), f.u.end());
  traj.range_high = *std::max_element(f.u.begin(), f.u.end());
  for (size_t k = 0; k < want.size(); ++k)
    if (want[k] == 0) traj.snapshots.push_back(f);
  for (int s = 1; s <= n_steps; ++s) {
    step(f, range_tol);
    traj.range_low =
        std::min(traj.range_low, *std::min_element(f.u.begin(), f.u.end()));
    traj.range_high =
        std::max(traj.range_high, *std::max_element(f.u.begin(), f.u.end()));
    for (size_t k = 0; k < want.size(); ++k)
      if (want[k] == s) traj.snapshots.push_back(f);
  }
  return traj;
}

namespace {

/// result = e^{(T-I)tau} row, T the stencil convolution: truncated Poisson
/// series sum_k e^{-tau} tau^k/k! T^k row, stopped when the tail mass drops
/// below tol.
std::vector<double> exp_semigroup(const Stencil& stz, SpaceClosure closure,
                                  double tau, std::vector<double> row,
                                  double tol) {
  const int n = static_cast<int>(row.size());
  std::vector<double> result(n, 0.0), conv(n);
  double coeff = std::exp(-tau);
  double partial = 0.0;
  const int max_terms = 500;
  for (int k = 0; k <= max_terms; ++k) {
    for (int x = 0; x < n; ++x) result[x] += coeff * row[x];
    partial += coeff;
    if (1.0 - partial < tol) return result;
    double cl, cr;
    closure_values(row.data(), n, closure, cl, cr);
    stz.convolve(row, conv, cl, cr);
    row.swap(conv);
    coeff *= tau / (k + 1);
  }
  throw NumericalError(
      "renewal_formula_check: semigroup series not converged, tail " +
      std::to_string(1.0 - partial));
}

/// [K(F)](a_i, x) = q(a_i, x) (1 - u(a_i, x)) for the single age row i.
std::vector<double> transmission_row(const Field& f, const ModelSpec& model,
                                     int i) {
  const int na = model.n();
  const int nx = f.space.n;
  std::vector<double> out(nx, 0.0);
  const double* kp = model.Kpi.data() + static_cast<size_t>(i) * na;
  for (int j = 0; j < na; ++j) {
    const double c = kp[j];
    if (c == 0.0) continue;
    const double* src = f.row(j);
    for (int x = 0; x < nx; ++x) out[x] += c * src[x];
  }
  const double* ui = f.row(i);
  for (int x = 0; x < nx; ++x) out[x] *= 1.0 - ui[x];
  return out;
}

int grid_index(double value, double h, int n, const char* what) {
  const int idx = static_cast<int>(std::llround(value / h));
  if (idx < 0 || idx >= n || std::abs(idx * h - value) > 1e-9) {
    throw ValidationError(std::string("renewal_formula_check: ") + what +
                          " = " + std::to_string(value) +
                          " is not on the grid");
  }
  return idx;
}

}  // namespace

double renewal_formula_check(const std::vector<Field>& history,
                             const ModelSpec& model, const Stencil& stencil,
                             SpaceClosure closure, double t, double a,
                             double series_tol) {
  if (history.empty()) throw ValidationError("renewal_formula_check: empty history");
  const double dt = model.age.h();
  const int nx = history[0].space.n;
  const int kt = grid_index(t, dt, static_cast<int>(history.size()), "t");
  const int ia = grid_index(a, dt, model.n(), "a");
  for (size_t k = 0; k < history.size(); ++k) {
    if (std::abs(history[k].t - k * dt) > 1e-9) {
      throw ValidationError("renewal_formula_check: history is not lockstep");
    }
  }

  // Base term and s-range differ between the two characteristic branches.
  std::vector<double> rhs(nx, 0.0);
  int s_lo;
  if (ia >= kt) {
    s_lo = 0;
    std::vector<double> base(history[0].row(ia - kt),
                             history[0].row(ia - kt) + nx);
    rhs = exp_semigroup(stencil, closure, t, std::move(base), series_tol);
  } else {
    s_lo = kt - ia;
    std::vector<double> base(history[s_lo].row(0), history[s_lo].row(0) + nx);
    rhs = exp_semigroup(stencil, closure, a, std::move(base), series_tol);
  }

  // Trapezoid in s over the step grid; the source age s + a - t lands on
  // nodes because everything is lockstep.
  for (int ks = s_lo; ks <= kt; ++ks) {
    double w = dt;
    if (ks == s_lo || ks == kt) w *= 0.5;
    if (s_lo == kt) break;  // t = 0 or empty integration range
    const int src_age = ks + ia - kt;
    std::vector<double> term = transmission_row(history[ks], model, src_age);
    term = exp_semigroup(stencil, closure, t - ks * dt, std::move(term),
                         series_tol);
    for (int x = 0; x < nx; ++x) rhs[x] += w * term[x];
  }

  const double* stepped = history[kt].row(ia);
  double defect = 0.0;
  for (int x = 0; x < nx; ++x)
    defect = std::max(defect, std::abs(stepped[x] - rhs[x]));
  return defect;
}

namespace {

/// One probe of the limiting ODE: from boundary guess b, Picard on the
/// nonlocal integral with the exact cell solution u = 1 - (1-b) e^{-int q},
/// then renewal update b <- int gamma u, until the boundary value settles.
std::vector<double> steady_probe(const ModelSpec& model, double guess) {
  const int n = model.n();
  const double h = model.age.h();
  std::vector<double> u(n, guess);
  double b = guess;
  for (int outer = 0; outer < 500; ++outer) {
    for (int picard = 0; picard < 200; ++picard) {
      const std::vector<double> q = model.apply_Q(u);
      const std::vector<double> cum = cumulative_trapezoid(q, h);
      double change = 0.0;
      for (int i = 0; i < n; ++i) {
        const double next = 1.0 - (1.0 - b) * std::exp(-cum[i]);
        change = std::max(change, std::abs(next - u[i]));
        u[i] = next;
      }
      if (change < 1e-14) break;
    }
    const double b_next = model.renewal(u);
    const double db = std::abs(b_next - b);
    b = b_next;
    u[0] = b;
    if (db < 1e-13) return u;
  }
  throw NumericalError("steady_state_scan: probe " + std::to_string(guess) +
                       " did not settle");
}

double steady_ode_residual(const ModelSpec& model,
                           const std::vector<double>& u) {
  const int n = model.n();
  const double h = model.age.h();
  const std::vector<double> q = model.apply_Q(u);
  double worst = 0.0;
  for (int i = 1; i + 1 < n; ++i) {
    const double du = (u[i + 1] - u[i - 1]) / (2.0 * h);
    worst = std::max(worst, std::abs(du - q[i] * (1.0 - u[i])));
  }
  return worst;
}

}  // namespace

SteadyScanResult steady_state_scan(const ModelSpec& model, int n_guesses) {
  if (n_guesses < 1) throw ValidationError("steady_state_scan: need guesses");
  SteadyScanResult res;
  res.guesses.push_back(0.0);
  for (int g = 1; g <= n_guesses; ++g)
    res.guesses.push_back(static_cast<double>(g) / (n_guesses + 1));
  res.guesses.push_back(1.0);

  const int n = model.n();
  for (double guess : res.guesses) {
    const std::vector<double> u = steady_probe(model, guess);
    int found = -1;
    for (size_t e = 0; e < res.equilibria.size(); ++e) {
      double gap = 0.0;
      for (int i = 0; i < n; ++i)
        gap = std::max(gap, std::abs(u[i] - res.equilibria[e].profile[i]));
      if (gap <= 1e-7) {
        found = static_cast<int>(e);
        break;
      }
    }
    if (found < 0) {
      SteadyEquilibrium eq;
      eq.profile = u;
      eq.ode_residual = steady_ode_residual(model, u);
      eq.boundary_residual = std::abs(model.renewal(u) - u[0]);
      res.equilibria.push_back(std::move(eq));
      found = static_cast<int>(res.equilibria.size()) - 1;
    }
    res.basin.push_back(found);
  }

  std::vector<int> order(res.equilibria.size());
  for (size_t e = 0; e < order.size(); ++e) order[e] = static_cast<int>(e);
  std::sort(order.begin(), order.end(), [&](int lhs, int rhs) {
    return res.equilibria[lhs].profile[0] < res.equilibria[rhs].profile[0];
  });
  std::vector<int> rank(order.size());
  std::vector<SteadyEquilibrium> sorted;
  for (size_t p = 0; p < order.size(); ++p) {
    rank[order[p]] = static_cast<int>(p);
    sorted.push_back(std::move(res.equilibria[order[p]]));
  }
  res.equilibria = std::move(sorted);
  for (int& bidx : res.basin) bidx = rank[bidx];

  if (res.equilibria.size() != 2) {
    throw NumericalError("steady_state_scan: expected the {0, 1} dichotomy, found " +
                         std::to_string(res.equilibria.size()) + " equilibria");
  }
  for (int i = 0; i < n; ++i) {
    if (std::abs(res.equilibria[0].profile[i]) > 1e-7 ||
        std::abs(res.equilibria[1].profile[i] - 1.0) > 1e-7) {
      throw NumericalError(
          "steady_state_scan: converged equilibria are not the constant "
          "states");
    }
  }
  return res;
}

ComparisonReport comparison_check(const Field& u0, const Field& v0,
                                  const ModelSpec& model, SpaceClosure closure,
                                  double T) {
  if (u0.u.size() != v0.u.size()) {
    throw ValidationError("comparison_check: mismatched grids");
  }
  for (size_t k = 0; k < u0.u.size(); ++k) {
    if (u0.u[k] > v0.u[k] + 1e-12) {
      throw ValidationError("comparison_check: initial data not ordered");
    }
  }
  CauchySimulator sim(model, u0.space, closure);
  Field u = u0, v = v0;
  const int n_steps = static_cast<int>(std::llround(T / sim.dt()));
  ComparisonReport rep;
  rep.worst_margin = 1e300;
  auto record = [&]() {
    for (size_t k = 0; k < u.u.size(); ++k)
      rep.worst_margin = std::min(rep.worst_margin, v.u[k] - u.u[k]);
  };
  record();
  for (int s = 0; s < n_steps; ++s) {
    sim.step(u);
    sim.step(v);
    record();
  }
  rep.ordered = rep.worst_margin >= -1e-10;
  return rep;
}

}  // namespace agewave
