#include "agewave/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "agewave/errors.hpp"
#include "agewave/numerics.hpp"

namespace agewave {

std::vector<double> build_survival(const std::vector<double>& mu, const AgeGrid& grid) {
  if (static_cast<int>(mu.size()) != grid.n) {
    throw ValidationError("mu sample count does not match the age grid");
  }
  if (grid.n < 3) throw ValidationError("age grid needs at least three nodes");
  for (double v : mu) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ValidationError("mortality samples must be finite and nonnegative");
    }
  }
  const auto acc = cumulative_trapezoid(mu, grid.h());
  std::vector<double> pi(mu.size());
  for (size_t i = 0; i < mu.size(); ++i) pi[i] = std::exp(-acc[i]);
  return pi;
}

std::vector<double> build_gamma(const std::vector<double>& beta,
                                const std::vector<double>& pi, const AgeGrid& grid,
                                double tol) {
  if (beta.size() != pi.size() || static_cast<int>(beta.size()) != grid.n) {
    throw ValidationError("beta/pi sample counts do not match the age grid");
  }
  for (double v : beta) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ValidationError("birth-rate samples must be finite and nonnegative");
    }
  }
  std::vector<double> gamma(beta.size());
  for (size_t i = 0; i < beta.size(); ++i) gamma[i] = beta[i] * pi[i];
  const double mass = trapezoid(gamma, grid.h());
  const double est = trapezoid_error_estimate(gamma, grid.h());
  const double allowed = std::max(tol, 10.0 * est);
  if (std::abs(mass - 1.0) > allowed) {
    std::ostringstream os;
    os << "birth kernel mass " << mass << " deviates from 1 beyond " << allowed
       << "; rescale beta or refine the age grid";
    throw ValidationError(os.str());
  }
  return gamma;
}

double demography_residual(const std::vector<double>& beta,
                           const std::vector<double>& mu, const AgeGrid& grid) {
  const auto pi = build_survival(mu, grid);
  std::vector<double> gamma(beta.size());
  if (beta.size() != pi.size()) {
    throw ValidationError("beta/mu sample counts do not match");
  }
  for (size_t i = 0; i < beta.size(); ++i) gamma[i] = beta[i] * pi[i];
  return std::abs(trapezoid(gamma, grid.h()) - 1.0);
}

std::vector<double> ModelSpec::apply_Q(const std::vector<double>& v) const {
  const int nn = n();
  std::vector<double> out(static_cast<size_t>(nn), 0.0);
  for (int i = 0; i < nn; ++i) {
    const double* row = Kpi.data() + static_cast<size_t>(i) * nn;
    double acc = 0.0;
    for (int j = 0; j < nn; ++j) acc += row[j] * v[static_cast<size_t>(j)];
    out[static_cast<size_t>(i)] = acc;
  }
  return out;
}

double ModelSpec::renewal(const std::vector<double>& v) const {
  double acc = 0.0;
  for (size_t i = 0; i < renewal_w.size(); ++i) acc += renewal_w[i] * v[i];
  return acc;
}

ModelSpec make_model(double a_max, int n_a, const AgeFn& mu, const AgeFn& beta,
                     KernelPtr kernel, const AgeAgeFn& K, double gamma_tol) {
  if (!(a_max > 0.0)) throw ValidationError("a_max must be positive");
  if (n_a < 3) throw ValidationError("age grid needs at least three nodes");
  if (!kernel) throw ValidationError("dispersal kernel missing");

  ModelSpec m;
  m.age = AgeGrid{a_max, n_a};
  m.kernel = std::move(kernel);
  m.mu.resize(static_cast<size_t>(n_a));
  m.beta.resize(static_cast<size_t>(n_a));
  for (int i = 0; i < n_a; ++i) {
    const double a = m.age.node(i);
    m.mu[static_cast<size_t>(i)] = mu(a);
    m.beta[static_cast<size_t>(i)] = beta(a);
  }
  m.pi = build_survival(m.mu, m.age);
  m.gamma = build_gamma(m.beta, m.pi, m.age, gamma_tol);
  m.gamma_mass = trapezoid(m.gamma, m.age.h());
  m.age_w = trapezoid_weights(n_a, m.age.h());

  m.renewal_w.resize(static_cast<size_t>(n_a));
  double rsum = 0.0;
  for (int i = 0; i < n_a; ++i) {
    m.renewal_w[static_cast<size_t>(i)] = m.age_w[static_cast<size_t>(i)] * m.gamma[static_cast<size_t>(i)];
    rsum += m.renewal_w[static_cast<size_t>(i)];
  }
  if (!(rsum > 0.0)) throw ValidationError("birth kernel is identically zero");
  for (double& v : m.renewal_w) v /= rsum;

  m.K.resize(static_cast<size_t>(n_a) * n_a);
  m.Kpi.resize(static_cast<size_t>(n_a) * n_a);
  for (int i = 0; i < n_a; ++i) {
    for (int j = 0; j < n_a; ++j) {
      const double k = K(m.age.node(i), m.age.node(j));
      if (!std::isfinite(k)) throw ValidationError("transmission kernel sample is not finite");
      m.K[static_cast<size_t>(i) * n_a + j] = k;
      m.Kpi[static_cast<size_t>(i) * n_a + j] =
          k * m.pi[static_cast<size_t>(j)] * m.age_w[static_cast<size_t>(j)];
    }
  }
  m.M = 0.0;
  m.q_row_min = 0.0;
  for (int i = 0; i < n_a; ++i) {
    double row = 0.0;
    for (int j = 0; j < n_a; ++j) row += m.Kpi[static_cast<size_t>(i) * n_a + j];
    m.M = std::max(m.M, row);
    m.q_row_min = (i == 0) ? row : std::min(m.q_row_min, row);
  }
  return m;
}

ModelSpec make_reference_model(int n_a, double kappa, double sigma, double a_max) {
  if (!(kappa > 0.0)) throw ValidationError("reference model needs kappa > 0");
  const double b = 1.0 / a_max;
  return make_model(
      a_max, n_a, [](double) { return 0.0; }, [b](double) { return b; },
      std::make_shared<GaussianKernel>(sigma),
      [kappa](double, double) { return kappa; });
}

ValidationReport validate_assumptions(const ModelSpec& model) {
  ValidationReport rep;
  const int n = model.n();

  {
    AssumptionCheck c;
    c.name = "birth kernel nonnegative with unit mass";
    double gmin = model.gamma[0];
    for (double v : model.gamma) gmin = std::min(gmin, v);
    const double est = trapezoid_error_estimate(model.gamma, model.age.h());
    const double allowed = std::max(1e-10, 10.0 * est);
    c.measured = model.gamma_mass;
    c.pass = gmin >= 0.0 && std::abs(model.gamma_mass - 1.0) <= allowed;
    std::ostringstream os;
    os << "min gamma " << gmin << ", mass " << model.gamma_mass << " (allowed deviation "
       << allowed << ")";
    c.detail = os.str();
    rep.items.push_back(c);
  }
  {
    AssumptionCheck c;
    c.name = "survival positive, transmission pressure not degenerate";
    double pmin = model.pi[0];
    for (double v : model.pi) pmin = std::min(pmin, v);
    double gp = 0.0;
    for (int i = 0; i < n; ++i) gp = std::max(gp, model.gamma[static_cast<size_t>(i)] * model.pi[static_cast<size_t>(i)]);
    c.measured = pmin;
    c.pass = pmin > 0.0 && model.pi[0] == 1.0 && gp > 0.0;
    std::ostringstream os;
    os << "min pi " << pmin << ", pi(0) " << model.pi[0] << ", max gamma*pi " << gp;
    c.detail = os.str();
    rep.items.push_back(c);
  }
  {
    AssumptionCheck c;
    c.name = "dispersal kernel symmetric, unit mass, positive at 0, finite moments";
    const auto& J = *model.kernel;
    const double r = J.support_radius();
    double asym = 0.0;
    for (int k = 1; k <= 32; ++k) {
      const double y = r * k / 32.0;
      asym = std::max(asym, std::abs(J(y) - J(-y)));
    }
    const double mass = J.moment_exp(0.0);
    bool finite = J(0.0) > 0.0;
    for (double lam : {0.5, 1.0, 2.0}) {
      const double mv = J.moment_exp(lam);
      finite = finite && std::isfinite(mv) && mv > 0.0;
    }
    c.measured = mass;
    c.pass = asym <= 1e-10 && std::abs(mass - 1.0) <= 1e-10 && finite;
    std::ostringstream os;
    os << "mass " << mass << ", max asymmetry " << asym << ", J(0) " << J(0.0);
    c.detail = os.str();
    rep.items.push_back(c);
  }
  {
    AssumptionCheck c;
    c.name = "transmission kernel strictly positive";
    double kmin = model.K[0];
    for (double v : model.K) kmin = std::min(kmin, v);
    c.measured = kmin;
    c.pass = kmin > 0.0;
    std::ostringstream os;
    os << "min K " << kmin << ", max row integral " << model.M;
    c.detail = os.str();
    rep.items.push_back(c);
  }

  rep.ok = true;
  for (const auto& c : rep.items) rep.ok = rep.ok && c.pass;
  return rep;
}

}  // namespace agewave
