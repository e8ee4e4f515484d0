#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "agewave/errors.hpp"
#include "agewave/model.hpp"
#include "agewave/spectral.hpp"

using namespace agewave;
using doctest::Approx;

namespace {

// Rank-one closed form for the reference family: with constant transmission
// kappa, unit survival, and uniform births on [0,1], the tilted operator's
// radius is (e^s - 1)/s (1 + kappa/s) - kappa/s, continued to 3/2 + ... at 0.
double reference_rho(double s, double kappa = 1.0) {
  if (std::abs(s) < 1e-7) {
    return 1.0 + kappa / 2.0 + s * (0.5 + kappa / 6.0);
  }
  return (std::expm1(s) / s) * (1.0 + kappa / s) - kappa / s;
}

}  // namespace

TEST_CASE("power iteration reproduces the closed-form radius") {
  // The operator's eigenprofile e^{sa} + kappa (e^{sa} - 1)/s is constant
  // at s = -1 and linear at s = 0, where the trapezoid radius is exact;
  // at other tilts the quadrature error is O(h^2).
  ModelSpec model = make_reference_model(101);
  for (double s : {-2.0, -1.5, -1.0, -0.5, 0.0, 0.5}) {
    PowerResult pr = spectral_radius(assemble_Ls(model, s));
    CHECK(pr.rho == Approx(reference_rho(s)).epsilon(1e-4));
    CHECK(pr.residual < 1e-10);
  }
  CHECK(spectral_radius(assemble_Ls(model, -1.0)).rho == Approx(1.0).epsilon(1e-9));
  CHECK(spectral_radius(assemble_Ls(model, 0.0)).rho == Approx(1.5).epsilon(1e-9));
}

TEST_CASE("closed-form agreement improves at second order in the age step") {
  const double s = 0.5;
  double err_coarse =
      std::abs(spectral_radius(assemble_Ls(make_reference_model(51), s)).rho -
               reference_rho(s));
  double err_fine =
      std::abs(spectral_radius(assemble_Ls(make_reference_model(101), s)).rho -
               reference_rho(s));
  CHECK(err_coarse / err_fine == Approx(4.0).epsilon(0.1));
}

TEST_CASE("radius is strictly increasing in the tilt") {
  ModelSpec model = make_reference_model(101);
  double prev = -1.0;
  for (double s : {-2.0, -1.5, -1.0, -0.5, 0.0, 0.5}) {
    double rho = spectral_radius(assemble_Ls(model, s)).rho;
    CHECK(rho > prev);
    prev = rho;
  }
}

TEST_CASE("principal exponent of the reference model is minus one") {
  ModelSpec model = make_reference_model(101);
  CHECK(find_s0(model) == Approx(-1.0).epsilon(1e-8));
  ModelSpec twice = make_reference_model(101, 2.0);
  CHECK(find_s0(twice) == Approx(-2.0).epsilon(1e-8));
}

TEST_CASE("eigenprofile of the reference model is flat") {
  ModelSpec model = make_reference_model(101);
  auto phi = eigenfunction_phi(model, find_s0(model));
  for (int i : {0, 33, 100}) CHECK(phi[i] == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("kernel moment generating function matches the gaussian closed form") {
  // The truncated support costs a tail of roughly Q(radius - lambda), so
  // the largest tilt gets a looser tolerance.
  ModelSpec model = make_reference_model(51);
  for (double lam : {0.25, 1.0})
    CHECK(mgf_J(model, lam) == Approx(std::exp(lam * lam / 2.0)).epsilon(1e-9));
  CHECK(mgf_J(model, 1.75) == Approx(std::exp(1.75 * 1.75 / 2.0)).epsilon(1e-7));
  CHECK(big_lambda(model, 1.0, 2.0) ==
        Approx(std::exp(0.5) - 1.0 - 2.0).epsilon(1e-9));
}

TEST_CASE("tangency point solves the moment equation") {
  ModelSpec model = make_reference_model(51);
  double c = std::sqrt(std::exp(1.0));
  double lam = lambda_of_c(model, c);
  CHECK(lam == Approx(1.0).epsilon(1e-6));
  CHECK(lambda_of_c(model, 3.0) > lambda_of_c(model, 2.0));
  CHECK_THROWS_AS(lambda_of_c(model, -1.0), ValidationError);
}

TEST_CASE("critical speed of the reference model is sqrt(e)") {
  ModelSpec model = make_reference_model(101);
  double s0 = find_s0(model);
  double c_star = critical_speed(model, s0);
  CHECK(c_star == Approx(std::sqrt(std::exp(1.0))).epsilon(1e-8));
  CHECK_THROWS_AS(critical_speed(model, 0.5), ValidationError);
}

TEST_CASE("dispersion report assembles the consistent picture") {
  ModelSpec model = make_reference_model(101);
  DispersionReport rep = dispersion_report(model);
  CHECK(rep.s0 == Approx(-1.0).epsilon(1e-8));
  CHECK(rep.rho_at_zero == Approx(1.5).epsilon(1e-8));
  CHECK(rep.c_star == Approx(std::sqrt(std::exp(1.0))).epsilon(1e-8));
  CHECK(rep.lambda_star == Approx(1.0).epsilon(1e-6));
  CHECK(rep.min_phi == Approx(1.0).epsilon(1e-9));
  CHECK(rep.max_phi == Approx(1.0).epsilon(1e-9));
  CHECK(rep.sup_qphi == Approx(1.0).epsilon(1e-8));
  CHECK(rep.eigen_residual < 1e-9);
  // The tangency identity Lambda(lambda*, c*) = s0 closes the loop.
  CHECK(big_lambda(model, rep.lambda_star, rep.c_star) == Approx(rep.s0).epsilon(1e-8));
}

TEST_CASE("decay roots bracket the tangency exponent") {
  ModelSpec model = make_reference_model(101);
  DispersionReport rep = dispersion_report(model);
  auto [l1, l2] = decay_roots(model, rep.s0, 2.0);
  CHECK(l1 == Approx(0.597831879526).epsilon(1e-6));
  CHECK(l2 == Approx(1.46741008871).epsilon(1e-6));
  double lc = lambda_of_c(model, 2.0);
  CHECK(l1 < lc);
  CHECK(l2 > lc);
  CHECK(big_lambda(model, l1, 2.0) == Approx(rep.s0).epsilon(1e-9));
  CHECK(big_lambda(model, l2, 2.0) == Approx(rep.s0).epsilon(1e-9));
}

TEST_CASE("decay roots collapse at the critical speed and refuse below it") {
  ModelSpec model = make_reference_model(101);
  DispersionReport rep = dispersion_report(model);
  auto [l1, l2] = decay_roots(model, rep.s0, rep.c_star);
  CHECK(l1 == Approx(l2).epsilon(1e-12));
  CHECK(l1 == Approx(rep.lambda_star).epsilon(1e-9));
  CHECK_THROWS_AS(decay_roots(model, rep.s0, 1.0), ValidationError);
}

TEST_CASE("matrix apply agrees with explicit row sums") {
  ModelSpec model = make_reference_model(41);
  LsMatrix L = assemble_Ls(model, -0.7);
  std::vector<double> v(41);
  for (int i = 0; i < 41; ++i) v[i] = 1.0 / (1.0 + i);
  auto out = L.apply(v);
  for (int i : {0, 17, 40}) {
    double sum = 0.0;
    for (int j = 0; j < 41; ++j) sum += L.at(i, j) * v[j];
    CHECK(out[i] == Approx(sum).epsilon(1e-13));
  }
}

TEST_CASE("laplace dispersal shifts the critical speed consistently") {
  ModelSpec model = make_model(
      1.0, 101, [](double) { return 0.0; }, [](double) { return 1.0; },
      std::make_shared<LaplaceKernel>(0.5), [](double, double) { return 1.0; });
  double s0 = find_s0(model);
  CHECK(s0 == Approx(-1.0).epsilon(1e-8));
  double c_star = critical_speed(model, s0);
  double lam = lambda_of_c(model, c_star);
  CHECK(big_lambda(model, lam, c_star) == Approx(s0).epsilon(1e-8));
  CHECK(c_star > 0.0);
}
