#include <cmath>
#include <sstream>

#include "ctdde/errors.hpp"
#include "ctdde/trajectory.hpp"
#include "doctest.h"

using namespace ctdde;

TEST_SUITE_BEGIN("trajectory");

namespace {

// x(t) = 2^{-floor(t)} (1 - frac(t)), affine on every piece.
Trajectory decaying_sawtooth(int start, int end, int q) {
  return Trajectory::from_expression(parse_expression("0.5^floor(t)*(1 - frac(t))"), start,
                                     end, GridSpec{q});
}

}  // namespace

TEST_CASE("value_at: worked sawtooth example") {
  Trajectory traj = decaying_sawtooth(0, 4, 4);
  CHECK(traj.value_at(1.5) == 0.25);  // 2^-1 * 0.5, stored abscissa
  // stored abscissas return stored values exactly
  CHECK(traj.value_at(2.25) == traj.sample(2, 1));
  // extrapolation beyond the last sample of a piece is exact for affine pieces
  CHECK(traj.value_at(1.875) == doctest::Approx(0.0625).epsilon(1e-15));
}

TEST_CASE("value_at: never interpolates across an integer boundary") {
  // jump at t = 1: piece 0 is constant 1, piece 1 is constant 5
  Trajectory traj(0, GridSpec{4});
  traj.append_piece({1, 1, 1, 1}, Provenance::History);
  traj.append_piece({5, 5, 5, 5}, Provenance::Computed);
  CHECK(traj.value_at(0.999) == 1.0);  // extrapolated from piece 0 only
  CHECK(traj.value_at(1.0) == 5.0);    // integer belongs to [1, 2)
}

TEST_CASE("value_at: out of range throws") {
  Trajectory traj = decaying_sawtooth(0, 2, 4);
  CHECK_THROWS_AS(traj.value_at(-0.1), TrajectoryError);
  CHECK_THROWS_AS(traj.value_at(2.0), TrajectoryError);
  CHECK_NOTHROW(traj.value_at(1.999));
}

TEST_CASE("append_piece validates shape and finiteness") {
  Trajectory traj(0, GridSpec{4});
  CHECK_THROWS_AS(traj.append_piece({1.0, 2.0}, Provenance::History), TrajectoryError);
  CHECK_THROWS_AS(traj.append_piece({1.0, 2.0, std::nan(""), 3.0}, Provenance::History),
                  TrajectoryError);
}

TEST_CASE("seg_min on the sawtooth grid") {
  Trajectory traj = decaying_sawtooth(0, 4, 4);
  // grid minimum over [2, 3] sits at t = 2.75 (the true inf over [2, 3),
  // which is 0, is unattained and invisible to the grid); the endpoint
  // value at 3 belongs to piece [3, 4) by the half-open convention
  CHECK(traj.seg_min(2.0, 3.0) == doctest::Approx(0.0625).epsilon(1e-12));
}

TEST_CASE("seg_min equals seg_max on a constant piece") {
  Trajectory traj(0, GridSpec{8});
  traj.append_piece(std::vector<double>(8, 3.25), Provenance::History);
  CHECK(traj.seg_min(0.0, 0.9) == 3.25);
  CHECK(traj.seg_max(0.0, 0.9) == 3.25);
}

TEST_CASE("seg extrema include non-grid endpoints") {
  // strictly decreasing within the piece; endpoints of the segment matter
  Trajectory traj = decaying_sawtooth(0, 1, 4);
  double m = traj.seg_min(0.1, 0.2);  // no grid point inside (0.1, 0.2)
  CHECK(m == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(traj.seg_max(0.1, 0.2) == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("sign_events: strictly positive trajectory has none") {
  Trajectory traj = decaying_sawtooth(0, 4, 8);
  CHECK(traj.sign_events(0.0, 4.0).empty());
}

TEST_CASE("sign_events: sampled sine flips near the integers") {
  Expression e = parse_expression("sin(3.141592653589793*t)");
  Trajectory traj = Trajectory::from_expression(e, 0, 3, GridSpec{64});
  auto events = traj.sign_events(0.0, 3.0);
  REQUIRE(events.size() == 2);
  CHECK(events[0].t_left <= 1.0);
  CHECK(events[0].t_right >= 1.0 - 1.0 / 64);
  CHECK(std::abs(events[0].t_right - 1.0) <= 1.0 / 64);
  CHECK(std::abs(events[1].t_right - 2.0) <= 1.0 / 64);
}

TEST_CASE("sign_events: zero counts as nonnegative") {
  Trajectory traj(0, GridSpec{4});
  traj.append_piece({1.0, 0.0, -1.0, 0.0}, Provenance::History);
  auto events = traj.sign_events(0.0, 1.0);
  REQUIRE(events.size() == 2);
  CHECK(events[0].t_left == 0.25);   // 0 -> -1 is an event
  CHECK(events[1].t_left == 0.5);    // -1 -> 0 is an event
}

TEST_CASE("refinement: doubling Q agrees at common abscissas") {
  Trajectory coarse = decaying_sawtooth(0, 5, 16);
  Trajectory fine = decaying_sawtooth(0, 5, 32);
  for (int n = 0; n < 5; ++n) {
    for (int j = 0; j < 16; ++j) {
      CHECK(coarse.sample(n, j) == fine.sample(n, 2 * j));
    }
  }
}

TEST_CASE("piecewise-affine closed forms are reproduced everywhere") {
  Expression e = parse_expression("(2 - 0.25*floor(t))*(0.3 + 0.5*frac(t))");
  Trajectory traj = Trajectory::from_expression(e, -2, 4, GridSpec{8});
  for (double t : {-1.97, -0.5, 0.205, 1.99, 2.5, 3.96875, 3.999}) {
    CAPTURE(t);
    CHECK(traj.value_at(t) == doctest::Approx(e.eval(t)).epsilon(1e-13));
  }
}

TEST_CASE("seg extrema bracket every stored abscissa") {
  Trajectory traj = Trajectory::from_expression(
      parse_expression("sin(2*t) + 0.25*frac(3*t)"), 0, 6, GridSpec{16});
  double mn = traj.seg_min(1.0, 5.0), mx = traj.seg_max(1.0, 5.0);
  for (int n = 1; n < 5; ++n) {
    for (int j = 0; j < 16; ++j) {
      double v = traj.sample(n, j);
      CHECK(v >= mn);
      CHECK(v <= mx);
    }
  }
}

TEST_CASE("CSV export shape") {
  Trajectory traj = decaying_sawtooth(-1, 1, 4);
  std::ostringstream os;
  traj.write_csv(os);
  std::string csv = os.str();
  CHECK(csv.substr(0, 31) == "t,value,piece_index,provenance\n");
  // x(-1) = 0.5^-1 * 1 = 2
  CHECK(csv.find("-1,2,-1,history\n") != std::string::npos);
  // 8 samples + header = 9 lines
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
}

TEST_SUITE_END();
