#include "agewave/waves.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <utility>

#include "agewave/errors.hpp"
#include "agewave/numerics.hpp"

namespace agewave {

namespace {

// Exponent guard: far enough left the lower profile is identically zero and
// evaluating its exponentials would overflow first.
constexpr double kExpFloor = 600.0;

double sample_point(const double* row, int n, double s, double left,
                    double right) {
  if (s < 0.0) return left;
  if (s >= static_cast<double>(n - 1)) {
    return (s > static_cast<double>(n - 1)) ? right : row[n - 1];
  }
  const int i = static_cast<int>(s);
  const double t = s - i;
  return row[i] * (1.0 - t) + row[i + 1] * t;
}

// acc[j] += coeff * field(xi_j + off_nodes * h), far-field closures 1 / 0.
// Offsets that are integer up to roundoff snap to exact node sampling.
void accumulate_shifted(const double* row, int n, double off_nodes,
                        double coeff, double* acc) {
  const double fl = std::floor(off_nodes);
  int i0 = static_cast<int>(fl);
  double t = off_nodes - fl;
  if (t < 1e-12) {
    t = 0.0;
  } else if (t > 1.0 - 1e-12) {
    t = 0.0;
    ++i0;
  }
  if (t == 0.0) {
    const int jlo = std::min(std::max(0, -i0), n);
    const int jhi = std::min(n - 1, n - 1 - i0);
    for (int j = 0; j < jlo; ++j) acc[j] += coeff;
    for (int j = jlo; j <= jhi; ++j) acc[j] += coeff * row[j + i0];
  } else {
    const int jlo = std::min(std::max(0, -i0), n);
    const int jhi = std::min(n - 1, n - 2 - i0);
    for (int j = 0; j < jlo; ++j) acc[j] += coeff;
    const double u = 1.0 - t;
    for (int j = jlo; j <= jhi; ++j)
      acc[j] += coeff * (u * row[j + i0] + t * row[j + i0 + 1]);
  }
}

struct MarginTracker {
  PairMargin margin;
  bool seeded = false;

  void update(double value, int age_index, double xi) {
    if (!seeded || value < margin.value) {
      margin.value = value;
      margin.age_index = age_index;
      margin.xi = xi;
      seeded = true;
    }
  }
};

}  // namespace

double SubSuperPair::super_at(int i, double xi) const {
  const double z = xi - xi_shift;
  const double v = std::exp(-lambda * z) * phi[static_cast<size_t>(i)];
  return v < 1.0 ? v : 1.0;
}

double SubSuperPair::sub_at(int i, double xi) const {
  const double z = xi - xi_shift;
  if ((lambda + eta) * z < -kExpFloor) return 0.0;
  const double v = (std::exp(-lambda * z) - k * std::exp(-(lambda + eta) * z)) *
                   phi[static_cast<size_t>(i)];
  return v > 0.0 ? v : 0.0;
}

double SubSuperPair::super_profile(int i, double xi) const {
  return super_at(i, xi - c * age.node(i));
}

double SubSuperPair::sub_profile(int i, double xi) const {
  return sub_at(i, xi - c * age.node(i));
}

double p_of_eta(const ModelSpec& model, double eta, double lambda, double c) {
  if (lambda <= 0.0 || eta < 0.0)
    throw ValidationError("p(eta) needs lambda > 0 and eta >= 0");
  return big_lambda(model, lambda, c) - big_lambda(model, lambda + eta, c);
}

double PairReport::worst() const {
  double v = order.value;
  v = std::min(v, super_interior.value);
  v = std::min(v, super_boundary.value);
  v = std::min(v, sub_interior.value);
  v = std::min(v, sub_bracket.value);
  v = std::min(v, sub_boundary.value);
  v = std::min(v, case1);
  v = std::min(v, case2);
  return v;
}

PairReport verify_ordered_pair(const SubSuperPair& pair, const ModelSpec& model,
                               const SpaceGrid& grid) {
  const int na = model.n();
  if (static_cast<int>(pair.phi.size()) != na ||
      static_cast<int>(pair.qphi.size()) != na)
    throw ValidationError("profile pair and model use different age grids");
  const int n = grid.n;
  const double h = grid.h();
  const double x0 = grid.node(0);
  const Stencil st = make_stencil(*model.kernel, h);
  const int m = st.m;
  const size_t total = static_cast<size_t>(na) * n;

  std::vector<double> vsup(total), vsub(total), csup(total), csub(total);
  {
    std::vector<double> pad(static_cast<size_t>(n) + 2 * m), out(n);
    for (int i = 0; i < na; ++i) {
      for (int t = 0; t < n + 2 * m; ++t)
        pad[t] = pair.super_at(i, x0 + (t - m) * h);
      st.convolve_padded(pad, out);
      std::copy(out.begin(), out.end(), csup.begin() + static_cast<size_t>(i) * n);
      std::copy(pad.begin() + m, pad.begin() + m + n,
                vsup.begin() + static_cast<size_t>(i) * n);
      for (int t = 0; t < n + 2 * m; ++t)
        pad[t] = pair.sub_at(i, x0 + (t - m) * h);
      st.convolve_padded(pad, out);
      std::copy(out.begin(), out.end(), csub.begin() + static_cast<size_t>(i) * n);
      std::copy(pad.begin() + m, pad.begin() + m + n,
                vsub.begin() + static_cast<size_t>(i) * n);
    }
  }

  std::vector<double> qsup(total, 0.0), qsub(total, 0.0);
  for (int i = 0; i < na; ++i) {
    double* qs = qsup.data() + static_cast<size_t>(i) * n;
    double* qb = qsub.data() + static_cast<size_t>(i) * n;
    const double* kpi = model.Kpi.data() + static_cast<size_t>(i) * na;
    for (int i2 = 0; i2 < na; ++i2) {
      const double coeff = kpi[i2];
      const double* rs = vsup.data() + static_cast<size_t>(i2) * n;
      const double* rb = vsub.data() + static_cast<size_t>(i2) * n;
      for (int j = 0; j < n; ++j) {
        qs[j] += coeff * rs[j];
        qb[j] += coeff * rb[j];
      }
    }
  }

  MarginTracker order, sup_in, sup_bd, sub_in, sub_br, sub_bd;
  const double lam = pair.lambda;
  const double let = pair.lambda + pair.eta;
  for (int i = 0; i < na; ++i) {
    const double phi = pair.phi[static_cast<size_t>(i)];
    const double qphi = pair.qphi[static_cast<size_t>(i)];
    const double dphi = pair.s0 * phi + qphi;
    const size_t off = static_cast<size_t>(i) * n;
    for (int j = 0; j < n; ++j) {
      const double xi = x0 + j * h;
      const double z = xi - pair.xi_shift;
      const double us = vsup[off + j];
      const double ub = vsub[off + j];
      order.update(std::min({us - ub, ub, 1.0 - us}), i, xi);

      if (us < 1.0) {
        const double e1 = std::exp(-lam * z);
        sup_in.update(e1 * dphi - (csup[off + j] - us) +
                          pair.c * lam * us - (1.0 - us) * qsup[off + j],
                      i, xi);
      } else {
        sup_in.update(1.0 - csup[off + j], i, xi);
      }

      if (let * z >= -kExpFloor) {
        const double e1 = std::exp(-lam * z);
        const double e2 = pair.k * std::exp(-let * z);
        const double raw = (e1 - e2) * phi;
        if (raw > 0.0) {
          const double da = (e1 - e2) * dphi;
          const double dxi = phi * (-lam * e1 + let * e2);
          const double base = (csub[off + j] - raw) + pair.c * dxi - da;
          sub_in.update(base + (1.0 - raw) * qsub[off + j], i, xi);
          const double bracket = std::max(0.0, 1.0 - pair.alpha * e1);
          sub_br.update(base + bracket * qsub[off + j], i, xi);
          continue;
        }
      }
      sub_in.update(csub[off + j] + qsub[off + j], i, xi);
      sub_br.update(csub[off + j], i, xi);
    }
  }

  for (int j = 0; j < n; ++j) {
    const double xi = x0 + j * h;
    double rs = 0.0, rb = 0.0;
    for (int i = 0; i < na; ++i) {
      rs += model.renewal_w[static_cast<size_t>(i)] * vsup[static_cast<size_t>(i) * n + j];
      rb += model.renewal_w[static_cast<size_t>(i)] * vsub[static_cast<size_t>(i) * n + j];
    }
    sup_bd.update(vsup[static_cast<size_t>(j)] - rs, 0, xi);
    sub_bd.update(rb - vsub[static_cast<size_t>(j)], 0, xi);
  }

  PairReport rep;
  rep.order = order.margin;
  rep.super_interior = sup_in.margin;
  rep.super_boundary = sup_bd.margin;
  rep.sub_interior = sub_in.margin;
  rep.sub_bracket = sub_br.margin;
  rep.sub_boundary = sub_bd.margin;

  const double grow = std::exp((pair.eta - lam) * pair.xi_M);
  const double damp = std::exp(-pair.eta * pair.xi_M);
  rep.case1 = std::numeric_limits<double>::infinity();
  rep.case2 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < na; ++i) {
    const double phi = pair.phi[static_cast<size_t>(i)];
    const double qphi = pair.qphi[static_cast<size_t>(i)];
    rep.case1 = std::min(rep.case1,
                         pair.k * pair.p_eta * phi - pair.alpha * qphi * grow);
    rep.case2 = std::min(rep.case2, pair.k * pair.p_eta * phi * damp -
                                        qphi * (1.0 - pair.k * damp));
  }
  return rep;
}

SubSuperPair select_sub_parameters(const ModelSpec& model,
                                   const DispersionReport& report, double c,
                                   const SpaceGrid& grid, double margin_tol) {
  const auto roots = decay_roots(model, report.s0, c);
  if (roots.second - roots.first < 1e-8)
    throw ValidationError(
        "profile pair needs a speed strictly above critical: decay roots "
        "coincide");

  SubSuperPair pair;
  pair.c = c;
  pair.s0 = report.s0;
  pair.lambda = roots.first;
  pair.lambda2 = roots.second;
  pair.alpha = report.max_phi;
  pair.xi_M = std::log(pair.alpha) / pair.lambda;
  pair.age = model.age;
  pair.phi = report.phi;
  pair.qphi = report.qphi;

  const double eta0 = 0.5 * std::min(pair.lambda, pair.lambda2 - pair.lambda);
  double worst = -std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < 40; ++attempt) {
    const double eta = eta0 * std::pow(0.5, attempt);
    const double p = p_of_eta(model, eta, pair.lambda, c);
    if (p <= 0.0) continue;
    const double k1 = pair.alpha * report.sup_qphi *
                      std::exp((eta - pair.lambda) * pair.xi_M) /
                      (p * report.min_phi);
    const double k2 = report.sup_qphi * std::exp(eta * pair.xi_M) /
                      (p * report.min_phi);
    const double k3 = std::exp(eta * pair.xi_M);
    pair.eta = eta;
    pair.p_eta = p;
    pair.k = 1.05 * std::max({k1, k2, k3, 1.0}) * std::pow(2.0, attempt);
    const PairReport rep = verify_ordered_pair(pair, model, grid);
    if (rep.ok(margin_tol)) return pair;
    worst = rep.worst();
  }
  std::ostringstream os;
  os << "no certified profile pair at c = " << c << " after 40 attempts; "
     << "worst margin " << worst;
  throw NumericalError(os.str());
}

void apply_coupling_profile(const ModelSpec& model, const SpaceGrid& grid,
                            double c, const std::vector<double>& field,
                            std::vector<double>& out) {
  const int na = model.n();
  const int n = grid.n;
  if (static_cast<int>(field.size()) != na * n)
    throw ValidationError("field size does not match the age and space grids");
  const double ratio = c * model.age.h() / grid.h();
  out.assign(static_cast<size_t>(na) * n, 0.0);
  for (int i = 0; i < na; ++i) {
    double* acc = out.data() + static_cast<size_t>(i) * n;
    const double* kpi = model.Kpi.data() + static_cast<size_t>(i) * na;
    for (int i2 = 0; i2 < na; ++i2) {
      if (kpi[i2] == 0.0) continue;
      accumulate_shifted(field.data() + static_cast<size_t>(i2) * n, n,
                         ratio * (i2 - i), kpi[i2], acc);
    }
  }
}

WaveProfile monotone_iterate(const ModelSpec& model, const SubSuperPair& pair,
                             const SpaceGrid& grid, double tol, int max_iter,
                             WaveBranch branch, double ordering_tol) {
  const int na = model.n();
  const int n = grid.n;
  if (static_cast<int>(pair.phi.size()) != na)
    throw ValidationError("profile pair and model use different age grids");
  if (tol <= 0.0 || max_iter < 1)
    throw ValidationError("monotone sweep needs tol > 0 and max_iter >= 1");
  const double ha = model.age.h();
  if (ha * (1.0 + model.M) > 0.25)
    throw ValidationError(
        "age step too coarse for the monotone sweep: need h_a (1 + M) <= 1/4");
  const bool maximal = branch == WaveBranch::maximal;
  const double otol =
      ordering_tol > 0.0 ? ordering_tol : (maximal ? 1e-8 : 1e-5);
  const double h = grid.h();
  const double x0 = grid.node(0);
  const double c = pair.c;
  const Stencil st = make_stencil(*model.kernel, h);
  const size_t total = static_cast<size_t>(na) * n;

  std::vector<double> vsup(total), vsub(total);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < n; ++j) {
      const size_t idx = static_cast<size_t>(i) * n + j;
      vsup[idx] = pair.super_profile(i, x0 + j * h);
      vsub[idx] = pair.sub_profile(i, x0 + j * h);
    }

  std::vector<double> old = maximal ? vsup : vsub;
  std::vector<double> next(total), q(total), bound(n), rowbuf(n), convrow(n);
  double slow = std::numeric_limits<double>::infinity();
  double shigh = slow;
  for (size_t idx = 0; idx < total; ++idx) {
    slow = std::min(slow, old[idx] - vsub[idx]);
    shigh = std::min(shigh, vsup[idx] - old[idx]);
  }
  double rmin = std::numeric_limits<double>::infinity();
  double rmax = -rmin;
  double inc = std::numeric_limits<double>::infinity();
  int iters = 0;

  for (int it = 1; it <= max_iter; ++it) {
    if (it == 1) {
      // The first sweep reads the generating profiles directly instead of
      // interpolating their node values.
      const double lam = pair.lambda;
      const double let = pair.lambda + pair.eta;
      for (int i = 0; i < na; ++i) {
        double* qi = q.data() + static_cast<size_t>(i) * n;
        const double* kpi = model.Kpi.data() + static_cast<size_t>(i) * na;
        const double ca = c * model.age.node(i);
        for (int j = 0; j < n; ++j) {
          const double z = x0 + j * h - ca - pair.xi_shift;
          double acc = 0.0;
          if (maximal) {
            const double e1 = std::exp(-lam * z);
            for (int i2 = 0; i2 < na; ++i2) {
              const double v = e1 * pair.phi[static_cast<size_t>(i2)];
              acc += kpi[i2] * (v < 1.0 ? v : 1.0);
            }
          } else if (let * z >= -kExpFloor) {
            const double e1 = std::exp(-lam * z);
            const double e2 = pair.k * std::exp(-let * z);
            for (int i2 = 0; i2 < na; ++i2) {
              const double v = (e1 - e2) * pair.phi[static_cast<size_t>(i2)];
              if (v > 0.0) acc += kpi[i2] * v;
            }
          }
          qi[j] = acc;
        }
      }
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int i = 0; i < na; ++i) {
          const double v = maximal ? pair.super_at(i, x0 + j * h)
                                   : pair.sub_at(i, x0 + j * h);
          acc += model.renewal_w[static_cast<size_t>(i)] * v;
        }
        bound[j] = acc;
      }
    } else {
      apply_coupling_profile(model, grid, c, old, q);
      std::fill(bound.begin(), bound.end(), 0.0);
      for (int i = 0; i < na; ++i) {
        const double* row = old.data() + static_cast<size_t>(i) * n;
        const double rw = model.renewal_w[static_cast<size_t>(i)];
        const double off = c * model.age.node(i) / h;
        for (int j = 0; j < n; ++j)
          bound[j] += rw * sample_point(row, n, j + off, 1.0, 0.0);
      }
    }

    std::copy(bound.begin(), bound.end(), next.begin());
    for (int i = 0; i + 1 < na; ++i) {
      const double* cur = next.data() + static_cast<size_t>(i) * n;
      std::copy(cur, cur + n, rowbuf.begin());
      st.convolve(rowbuf, convrow, 1.0, 0.0);
      const double* po = old.data() + static_cast<size_t>(i) * n;
      const double* pq = q.data() + static_cast<size_t>(i) * n;
      double* nx = next.data() + static_cast<size_t>(i + 1) * n;
      for (int j = 0; j < n; ++j) {
        const double g = pq[j] * (1.0 - po[j]) + model.M * po[j];
        nx[j] = cur[j] + ha * (convrow[j] - (1.0 + model.M) * cur[j] + g);
      }
    }

    double viol = -std::numeric_limits<double>::infinity();
    size_t viol_idx = 0;
    double step = 0.0;
    for (size_t idx = 0; idx < total; ++idx) {
      const double d = next[idx] - old[idx];
      step = std::max(step, std::abs(d));
      const double v = maximal ? d : -d;
      if (v > viol) {
        viol = v;
        viol_idx = idx;
      }
      slow = std::min(slow, next[idx] - vsub[idx]);
      shigh = std::min(shigh, vsup[idx] - next[idx]);
      rmin = std::min(rmin, next[idx]);
      rmax = std::max(rmax, next[idx]);
    }
    if (viol > otol) {
      std::ostringstream os;
      os << "ordering violation " << viol << " at sweep " << it << ", age "
         << model.age.node(static_cast<int>(viol_idx) / n) << ", xi "
         << x0 + (static_cast<int>(viol_idx) % n) * h
         << ": grid too coarse for the monotone sweep";
      throw NumericalError(os.str());
    }
    old.swap(next);
    iters = it;
    inc = step;
    if (inc < tol) break;
  }
  if (!(inc < tol)) {
    std::ostringstream os;
    os << "monotone sweep still moving after " << max_iter
       << " iterations; last increment " << inc;
    throw NumericalError(os.str());
  }

  WaveProfile prof;
  prof.c = c;
  prof.lambda = pair.lambda;
  prof.age = model.age;
  prof.xi = grid;
  prof.w = std::move(old);
  prof.iterations = iters;
  prof.last_increment = inc;
  prof.sandwich_low = slow;
  prof.sandwich_high = shigh;
  prof.range_min = rmin;
  prof.range_max = rmax;
  double mono = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < na; ++i) {
    const double* row = prof.w.data() + static_cast<size_t>(i) * n;
    for (int j = 0; j + 1 < n; ++j) mono = std::max(mono, row[j + 1] - row[j]);
  }
  prof.mono_margin = mono;
  prof.residual = wave_residual(prof, model);
  prof.lipschitz_m = lipschitz_modulus_check(prof);
  return prof;
}

double wave_residual(const WaveProfile& profile, const ModelSpec& model) {
  const int na = profile.age.n;
  const int n = profile.xi.n;
  if (model.n() != na)
    throw ValidationError("profile and model use different age grids");
  if (static_cast<int>(profile.w.size()) != na * n)
    throw ValidationError("profile field does not match its grids");
  const double h = profile.xi.h();
  const double ha = profile.age.h();
  const double c = profile.c;
  const Stencil st = make_stencil(*model.kernel, h);
  const double band = std::max(2.0 * model.kernel->support_radius(),
                               c * profile.age.a_max);
  const int skip = static_cast<int>(std::ceil(band / h - 1e-9));
  const int jlo = skip;
  const int jhi = n - 1 - skip;
  if (jlo > jhi)
    throw ValidationError("domain too narrow for an interior residual band");

  std::vector<double> q;
  apply_coupling_profile(model, profile.xi, c, profile.w, q);

  double worst = 0.0;
  std::vector<double> rowbuf(n), convrow(n);
  for (int i = 0; i + 1 < na; ++i) {
    const double* cur = profile.w.data() + static_cast<size_t>(i) * n;
    std::copy(cur, cur + n, rowbuf.begin());
    st.convolve(rowbuf, convrow, 1.0, 0.0);
    const double* nx = profile.w.data() + static_cast<size_t>(i + 1) * n;
    const double* pq = q.data() + static_cast<size_t>(i) * n;
    for (int j = jlo; j <= jhi; ++j) {
      const double rhs = convrow[j] - cur[j] + pq[j] * (1.0 - cur[j]);
      worst = std::max(worst, std::abs((nx[j] - cur[j]) / ha - rhs));
    }
  }

  std::vector<double> bound(n, 0.0);
  for (int i = 0; i < na; ++i) {
    const double* row = profile.w.data() + static_cast<size_t>(i) * n;
    const double rw = model.renewal_w[static_cast<size_t>(i)];
    const double off = c * profile.age.node(i) / h;
    for (int j = jlo; j <= jhi; ++j)
      bound[j] += rw * sample_point(row, n, j + off, 1.0, 0.0);
  }
  for (int j = jlo; j <= jhi; ++j)
    worst = std::max(worst, std::abs(profile.w[static_cast<size_t>(j)] - bound[j]));
  return worst;
}

double lipschitz_modulus_check(const WaveProfile& profile) {
  const int na = profile.age.n;
  const int n = profile.xi.n;
  const double h = profile.xi.h();
  if (profile.lambda <= 0.0)
    throw ValidationError("profile carries no positive decay rate");
  double need = 0.0;
  for (int gap = 1; gap <= 5; ++gap) {
    double dmax = 0.0;
    for (int i = 0; i < na; ++i) {
      const double* row = profile.w.data() + static_cast<size_t>(i) * n;
      for (int j = 0; j + gap < n; ++j)
        dmax = std::max(dmax, std::abs(row[j + gap] - row[j]));
    }
    need = std::max(need, std::log1p(dmax) / (gap * h));
  }
  for (int j = 0; j <= 40; ++j) {
    const double cand = profile.lambda * (1.0 + 0.25 * j);
    if (cand >= need) return cand;
  }
  throw NumericalError(
      "no admissible Lipschitz modulus within 11x the decay rate");
}

double left_decay_exponent(const ModelSpec& model, double c) {
  const int na = model.n();
  const std::vector<double> qrow = model.apply_Q(std::vector<double>(na, 1.0));
  const std::vector<double> cumq = cumulative_trapezoid(qrow, model.age.h());
  const auto defect = [&](double mu) {
    const double rate = mgf_J(model, mu) - 1.0 + c * mu;
    double acc = 0.0;
    for (int i = 0; i < na; ++i)
      acc += model.age_w[static_cast<size_t>(i)] *
             model.gamma[static_cast<size_t>(i)] *
             std::exp(rate * model.age.node(i) - cumq[static_cast<size_t>(i)]);
    return acc - 1.0;
  };
  if (defect(0.0) >= 0.0)
    throw NumericalError(
        "left decay condition degenerate: transmission does not damp the "
        "stable state");
  double hi = 1.0;
  int doublings = 0;
  while (defect(hi) < 0.0) {
    hi *= 2.0;
    if (++doublings > 40)
      throw NumericalError("left decay exponent did not bracket");
  }
  return bisect(defect, 0.0, hi, 1e-12);
}

EdgeReport edge_limits(const WaveProfile& profile, const ModelSpec& model) {
  const int na = profile.age.n;
  const int n = profile.xi.n;
  const double span =
      profile.xi.half_width - profile.c * profile.age.a_max;
  if (span <= 0.0)
    throw ValidationError("domain too narrow for far-field limits");
  EdgeReport rep;
  for (int i = 0; i < na; ++i) {
    const double* row = profile.w.data() + static_cast<size_t>(i) * n;
    rep.left_defect = std::max(rep.left_defect, std::abs(1.0 - row[0]));
    rep.right_defect = std::max(rep.right_defect, std::abs(row[n - 1]));
  }
  const double mu = left_decay_exponent(model, profile.c);
  rep.left_tol = 25.0 * std::exp(-mu * span);
  rep.right_tol = 10.0 * std::exp(-profile.lambda * span);
  return rep;
}

double center_profile(WaveProfile& profile, double level) {
  const int na = profile.age.n;
  const int n = profile.xi.n;
  if (level <= 0.0 || level >= 1.0)
    throw ValidationError("centering level must sit inside (0, 1)");
  const double* row0 = profile.w.data();
  if (row0[0] < level)
    throw NumericalError("profile sits below the centering level at the left edge");
  int jc = -1;
  for (int j = 0; j + 1 < n; ++j) {
    if (row0[j + 1] <= level) {
      jc = j;
      break;
    }
  }
  if (jc < 0)
    throw NumericalError("profile never reaches the centering level");
  const double h = profile.xi.h();
  const double denom = row0[jc] - row0[jc + 1];
  const double frac = denom > 0.0 ? (row0[jc] - level) / denom : 0.0;
  const double xhat = profile.xi.node(jc) + h * frac;

  const double off = xhat / h;
  std::vector<double> shifted(profile.w.size());
  for (int i = 0; i < na; ++i) {
    const double* row = profile.w.data() + static_cast<size_t>(i) * n;
    double* dst = shifted.data() + static_cast<size_t>(i) * n;
    for (int j = 0; j < n; ++j)
      dst[j] = sample_point(row, n, j + off, 1.0, 0.0);
  }
  profile.w.swap(shifted);
  profile.translate += xhat;
  return xhat;
}

CriticalWave critical_wave(const ModelSpec& model,
                           const DispersionReport& report,
                           const SpaceGrid& grid, double tol, int max_iter) {
  static constexpr double kOffsets[] = {0.2, 0.1, 0.05, 0.025};
  CriticalWave out;
  std::vector<double> prev;
  WaveProfile prof;
  for (const double off : kOffsets) {
    const double c = report.c_star + off;
    const SubSuperPair pair = select_sub_parameters(model, report, c, grid);
    prof = monotone_iterate(model, pair, grid, tol, max_iter);
    out.translates.push_back(center_profile(prof));
    out.speeds.push_back(c);
    if (!prev.empty()) {
      double gap = 0.0;
      for (size_t idx = 0; idx < prev.size(); ++idx)
        gap = std::max(gap, std::abs(prof.w[idx] - prev[idx]));
      out.gaps.push_back(gap);
    }
    prev = prof.w;
  }
  const size_t ng = out.gaps.size();
  if (ng >= 2 && out.gaps[ng - 1] > 0.0 &&
      out.gaps[ng - 1] < out.gaps[ng - 2]) {
    const double r = out.gaps[ng - 1] / out.gaps[ng - 2];
    out.extrapolated_gap = out.gaps[ng - 1] * r / (1.0 - r);
  } else if (ng >= 1) {
    out.extrapolated_gap = out.gaps[ng - 1];
  }
  out.profile = std::move(prof);
  return out;
}

}  // namespace agewave
