#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "agewave/cauchy.hpp"
#include "agewave/errors.hpp"
#include "agewave/model.hpp"
#include "agewave/spectral.hpp"
#include "agewave/spreading.hpp"

using namespace agewave;
using doctest::Approx;

namespace {

Field box_all_ages(const ModelSpec& model, const SpaceGrid& grid) {
  return make_field(model, grid,
                    [](double, double x) { return std::abs(x) <= 1.0 ? 1.0 : 0.0; });
}

}  // namespace

TEST_CASE("front position interpolates the level crossing") {
  ModelSpec model = make_reference_model(21);
  SpaceGrid grid{20.0, 401};
  Field step = make_field(model, grid, [](double, double x) { return x <= 3.0 ? 0.8 : 0.0; });
  FrontPosition f = front_position(step, 0.5);
  CHECK(f.present);
  CHECK(f.x_plus == Approx(3.0375).epsilon(1e-12));
  CHECK(f.x_minus == -20.0);

  Field ones = make_constant_field(model, grid, 1.0);
  FrontPosition fo = front_position(ones, 0.5);
  CHECK(fo.present);
  CHECK(fo.x_plus == 20.0);
  CHECK(fo.x_minus == -20.0);

  Field zeros = make_constant_field(model, grid, 0.0);
  CHECK_FALSE(front_position(zeros, 0.5).present);
}

TEST_CASE("front position level must be interior") {
  ModelSpec model = make_reference_model(11);
  SpaceGrid grid{5.0, 51};
  Field f = make_constant_field(model, grid, 0.5);
  CHECK_THROWS_AS(front_position(f, 0.0), ValidationError);
  CHECK_THROWS_AS(front_position(f, 1.0), ValidationError);
}

TEST_CASE("speed estimate recovers a synthetic linear front exactly") {
  FrontTrack track;
  track.rho = 0.5;
  for (int k = 0; k <= 40; ++k) {
    double t = 0.25 * k;
    track.times.push_back(t);
    track.x_plus.push_back(1.0 + 1.7 * t);
    track.x_minus.push_back(-1.0 - 1.7 * t);
    track.present.push_back(1);
  }
  SpeedEstimate est = estimate_speed(track, 0.4);
  CHECK(est.c_right == Approx(1.7).epsilon(1e-4));
  CHECK(est.c_left == Approx(1.7).epsilon(1e-4));
  CHECK(est.asymmetry < 1e-10);
  CHECK(est.stderr_right < 1e-10);
  CHECK(est.points == 25);
}

TEST_CASE("speed estimate of a stalled front is zero") {
  FrontTrack track;
  track.rho = 0.5;
  for (int k = 0; k <= 30; ++k) {
    track.times.push_back(0.5 * k);
    track.x_plus.push_back(2.0);
    track.x_minus.push_back(-2.0);
    track.present.push_back(1);
  }
  SpeedEstimate est = estimate_speed(track, 0.4);
  CHECK(est.c_right == Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(est.c_left == Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("speed estimate needs enough windowed points") {
  FrontTrack track;
  track.rho = 0.5;
  for (int k = 0; k < 8; ++k) {
    track.times.push_back(k);
    track.x_plus.push_back(k);
    track.x_minus.push_back(-double(k));
    track.present.push_back(1);
  }
  CHECK_THROWS_AS(estimate_speed(track, 0.4), ValidationError);
}

TEST_CASE("kpp reference constants collapse to closed forms") {
  ModelSpec model = make_reference_model(101);
  DispersionReport rep = dispersion_report(model);
  KppReference kpp = kpp_reference(model, rep);
  CHECK(kpp.lambda0 == Approx(1.0).epsilon(1e-8));
  CHECK(kpp.phi_min == Approx(1.0).epsilon(1e-12));
  CHECK(kpp.P == Approx(1.0).epsilon(1e-8));
  CHECK(kpp.rho0 == Approx(1.0).epsilon(1e-8));
  CHECK(kpp.lambda_min == Approx(1.0).epsilon(1e-6));
  CHECK(kpp.c0 == Approx(rep.c_star).epsilon(1e-6));
  CHECK(kpp.c0 == Approx(std::sqrt(std::exp(1.0))).epsilon(1e-6));
}

TEST_CASE("kpp reference scales with the transmission strength") {
  ModelSpec model = make_reference_model(101, 2.0);
  DispersionReport rep = dispersion_report(model);
  KppReference kpp = kpp_reference(model, rep);
  CHECK(kpp.lambda0 == Approx(2.0).epsilon(1e-8));
  CHECK(kpp.c0 == Approx(rep.c_star).epsilon(1e-6));
  CHECK(kpp.c0 > std::sqrt(std::exp(1.0)));
}

TEST_CASE("outer exponential bound dominates a compact release") {
  ModelSpec model = make_reference_model(101);
  DispersionReport rep = dispersion_report(model);
  SpaceGrid grid{30.0, 601};
  CauchySimulator sim(model, grid);
  Trajectory traj = sim.run(box_all_ages(model, grid), 4.0, {0.0, 1.0, 2.0, 3.0, 4.0});
  OuterBoundResult ob = outer_bound_check(traj, model, rep, rep.c_star + 0.3);
  CHECK(ob.worst_margin >= -1e-12);
  CHECK(ob.worst_margin <= 1e-9);
  CHECK(ob.lambda == Approx(0.623101696544).epsilon(1e-8));
  CHECK(ob.v0 == Approx(std::exp(ob.lambda)).epsilon(1e-9));
}

TEST_CASE("hair trigger fires and its scalar minorant never crosses above") {
  ModelSpec model = make_reference_model(101);
  SpaceGrid grid{20.0, 201};
  HairTriggerResult ht = hair_trigger_check(model, grid, 0.1, 0.9, 0.0, 40.0);
  CHECK(ht.reached);
  CHECK(ht.elapsed == Approx(5.95).epsilon(1e-9));
  CHECK(ht.worst_margin >= -1e-12);

  HairTriggerResult shifted = hair_trigger_check(model, grid, 0.1, 0.9, 3.0, 40.0);
  CHECK(shifted.reached);
  CHECK(shifted.elapsed == Approx(ht.elapsed).epsilon(1e-12));
  CHECK(shifted.worst_margin >= -1e-12);
}

TEST_CASE("hair trigger reports a miss within a short budget") {
  ModelSpec model = make_reference_model(101);
  SpaceGrid grid{20.0, 201};
  HairTriggerResult ht = hair_trigger_check(model, grid, 0.1, 0.9, 0.0, 1.0);
  CHECK_FALSE(ht.reached);
  CHECK(ht.worst_margin >= -1e-12);
}

TEST_CASE("interior of the spreading cone saturates") {
  ModelSpec model = make_reference_model(101);
  DispersionReport rep = dispersion_report(model);
  SpaceGrid grid{30.0, 601};
  Field u0 = box_all_ages(model, grid);
  InnerSpreadingResult in = inner_spreading_check(model, rep, grid, u0, 0.2, 12.0);
  CHECK(in.interior_min == Approx(0.998798824).epsilon(1e-6));
  CHECK(in.interior_min > 0.95);
  CHECK(in.sub_margin >= -1e-12);
  CHECK(in.p_cap_excess <= 0.0);
  CHECK(in.plateau == Approx(0.775071986).epsilon(1e-6));
  CHECK(in.v0_amp == Approx(in.plateau).epsilon(1e-9));
}

TEST_CASE("inner check needs time beyond one age span") {
  ModelSpec model = make_reference_model(51);
  DispersionReport rep = dispersion_report(model);
  SpaceGrid grid{10.0, 101};
  Field u0 = box_all_ages(model, grid);
  CHECK_THROWS_AS(inner_spreading_check(model, rep, grid, u0, 0.5, 0.5), ValidationError);
}

TEST_CASE("tracked front of a real run moves at a plausible fraction of c*") {
  ModelSpec model = make_reference_model(101);
  DispersionReport rep = dispersion_report(model);
  SpaceGrid grid{20.0, 201};
  CauchySimulator sim(model, grid);
  std::vector<double> times;
  for (int k = 0; k <= 40; ++k) times.push_back(6.0 * k / 40.0);
  Trajectory traj = sim.run(box_all_ages(model, grid), 6.0, times);
  FrontTrack track = track_front(traj, 0.5);
  SpeedEstimate est = estimate_speed(track, 0.4);
  CHECK(est.c_right > 0.6 * rep.c_star);
  CHECK(est.c_right < rep.c_star);
  CHECK(est.asymmetry < 1e-10);
}
