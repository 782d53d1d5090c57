#include <cmath>
#include <random>

#include "ctdde/engine.hpp"
#include "ctdde/errors.hpp"
#include "doctest.h"

using namespace ctdde;

TEST_SUITE_BEGIN("engine");

namespace {

EquationSpec make_spec(const char* a, const char* h, const char* label = "test") {
  EquationSpec eq;
  eq.label = label;
  eq.terms.push_back(Term{parse_expression(a), parse_expression(h)});
  return eq;
}

// The worked single-delay equation whose solution stays above 1 at the
// integers: a(t) = 1/(2 + 0.5^(floor(t)-2)), h(t) = floor(t) - 0.5^floor(t)(1-{t}).
EquationSpec worked_example() {
  return make_spec("1/(2 + 0.5^(floor(t) - 2))",
                   "floor(t) - 0.5^floor(t)*(1 - frac(t))", "worked");
}

std::vector<double> uniform_samples(double lo, double hi, int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> out(static_cast<std::size_t>(count));
  for (auto& v : out) v = dist(rng);
  return out;
}

// Dyadic abscissas: keeps 1 - frac(t) >= 1/256, so delay arguments that
// scale like 0.5^floor(t) * (1 - frac(t)) never underflow onto the jump
// of the solution at the next integer.
std::vector<double> grid_samples(double lo, double hi, int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long long> dist(static_cast<long long>(lo * 256),
                                                static_cast<long long>(hi * 256) - 1);
  std::vector<double> out(static_cast<std::size_t>(count));
  for (auto& v : out) v = static_cast<double>(dist(rng)) / 256.0;
  return out;
}

}  // namespace

TEST_CASE("simulate reproduces the worked closed form") {
  EquationSpec eq = worked_example();
  InitialCondition init{parse_expression("(1 + 0.5^floor(t))*(1 - frac(t))"), -1};
  SimConfig cfg;
  cfg.horizon = 30;
  Trajectory traj = simulate(eq, init, cfg);
  double worst = 0.0;
  for (int n = 1; n < 30; ++n) {
    for (int j = 0; j < 64; ++j) {
      double t = traj.abscissa(n, j);
      double ref = (1.0 + std::pow(0.5, n)) * (1.0 - (t - n));
      worst = std::max(worst, std::abs(traj.sample(n, j) - ref));
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("simulate: variable-delay sign-change example") {
  EquationSpec eq = make_spec(
      "0.25", "piecewise(frac(t) < 0.5 : t ; floor(t) <= 4 : t - 1 ; otherwise : t - 0.5)");
  InitialCondition init{parse_expression("0.5^t"), -1};
  SimConfig cfg;
  cfg.horizon = 10;
  Trajectory traj = simulate(eq, init, cfg);

  // x = (3/2)^n 2^{-t} on [n, n+1/2) up to 6.5 and 2^{-t} on [n+1/2, n+1)
  // up to 6; probe at grid abscissas (the interpolant between them is only
  // first-order accurate for this non-affine solution)
  for (double t : {0.25, 1.25, 3.0, 5.25, 6.25}) {
    int n = static_cast<int>(std::floor(t));
    CHECK(traj.value_at(t) ==
          doctest::Approx(std::pow(1.5, n) * std::pow(2.0, -t)).epsilon(1e-12));
  }
  for (double t : {0.75, 2.5, 4.90625, 5.75}) {
    CHECK(traj.value_at(t) == doctest::Approx(std::pow(2.0, -t)).epsilon(1e-12));
  }
  CHECK(traj.value_at(6.75) < 0.0);

  OscillationReport osc = detect_oscillation(traj, 0.0);
  REQUIRE(!osc.events.empty());
  CHECK(osc.events.front().t_right >= 6.5);
  CHECK(osc.events.front().t_right < 7.0);
}

TEST_CASE("simulate: undelayed equation with periodic coefficient") {
  EquationSpec eq = make_spec("0.5 - 0.5*frac(t)", "t");
  InitialCondition init{parse_expression("1"), 0};
  SimConfig cfg;
  cfg.horizon = 20;
  Trajectory traj = simulate(eq, init, cfg);
  CHECK(traj.value_at(2.5) == doctest::Approx(0.5625).epsilon(1e-15));  // 0.75^2
  double worst = 0.0;
  for (int n = 0; n < 20; ++n) {
    for (int j = 0; j < 64; ++j) {
      double t = traj.abscissa(n, j);
      double ref = std::pow(0.5 + 0.5 * (t - n), n);
      worst = std::max(worst, std::abs(traj.sample(n, j) - ref));
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("simulate errors: delay underflow") {
  EquationSpec eq = make_spec("0.25", "t - 3");
  InitialCondition init{parse_expression("1"), -1};  // needs history back to -3
  SimConfig cfg;
  cfg.horizon = 5;
  CHECK_THROWS_AS(simulate(eq, init, cfg), SimulationError);
}

TEST_CASE("simulate errors: constraint violations") {
  SimConfig cfg;
  cfg.horizon = 3;
  InitialCondition init{parse_expression("1"), -1};
  // negative coefficient
  CHECK_THROWS_AS(simulate(make_spec("-0.1", "t - 1"), init, cfg), SimulationError);
  // advanced argument h(t) > t
  CHECK_THROWS_AS(simulate(make_spec("0.1", "t + 0.5"), init, cfg), SimulationError);
}

TEST_CASE("simulate errors: non-finite value") {
  // coefficient blows up within the horizon
  EquationSpec eq = make_spec("exp(exp(t))", "t - 1");
  InitialCondition init{parse_expression("1"), -1};
  SimConfig cfg;
  cfg.horizon = 8;
  CHECK_THROWS_AS(simulate(eq, init, cfg), SimulationError);
}

TEST_CASE("positivity transfer: zero coefficients extend the history periodically") {
  EquationSpec eq = make_spec("0", "t - 1");
  InitialCondition init{parse_expression("2 + frac(t)"), -1};
  SimConfig cfg;
  cfg.horizon = 6;
  Trajectory traj = simulate(eq, init, cfg);
  for (int n = 1; n < 6; ++n) {
    for (int j = 0; j < 64; ++j) {
      CHECK(traj.sample(n, j) == traj.sample(0, j));
    }
  }
}

TEST_CASE("recurrence self-consistency is bit-exact") {
  EquationSpec eq = worked_example();
  InitialCondition init{parse_expression("(1 + 0.5^floor(t))*(1 - frac(t))"), -1};
  SimConfig cfg;
  cfg.horizon = 12;
  Trajectory traj = simulate(eq, init, cfg);
  for (int p = 1; p <= 12; ++p) {
    for (int j = 0; j < 64; ++j) {
      double t = traj.abscissa(p - 1, j);
      CHECK(traj.sample(p, j) == recurrence_rhs(eq, traj, t));
    }
  }
}

TEST_CASE("grid-alignment: doubling Q leaves common abscissas unchanged") {
  EquationSpec eq = make_spec(
      "0.25", "piecewise(frac(t) < 0.5 : t ; floor(t) <= 4 : t - 1 ; otherwise : t - 0.5)");
  InitialCondition init{parse_expression("0.5^t"), -1};
  SimConfig coarse_cfg{8, GridSpec{32}};
  SimConfig fine_cfg{8, GridSpec{64}};
  Trajectory coarse = simulate(eq, init, coarse_cfg);
  Trajectory fine = simulate(eq, init, fine_cfg);
  double worst = 0.0;
  for (int n = -1; n < 9; ++n) {
    for (int j = 0; j < 32; ++j) {
      worst = std::max(worst, std::abs(coarse.sample(n, j) - fine.sample(n, 2 * j)));
    }
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("residual: worked closed form solves its equation") {
  EquationSpec eq = worked_example();
  Expression candidate = parse_expression("(1 + 0.5^floor(t))*(1 - frac(t))");
  auto samples = grid_samples(1.0, 40.0, 2000, 7u);
  CHECK(residual(eq, candidate, samples) <= 1e-12);
}

TEST_CASE("residual: characteristic double root at 1/2") {
  EquationSpec eq = make_spec("0.25", "t - 1");
  Expression candidate = parse_expression("0.5^t");
  auto samples = uniform_samples(1.0, 40.0, 2000, 8u);
  CHECK(residual(eq, candidate, samples) <= 1e-15);
}

TEST_CASE("residual: large-coefficient construction") {
  // a = 2^7 = 128 >= M = 100, delay shaped so x = 2^{-floor(t)}(1-{t}) solves it
  EquationSpec eq = make_spec("128", "floor(t) - 2^-9*(1 - frac(t))");
  Expression candidate = parse_expression("0.5^floor(t)*(1 - frac(t))");
  auto samples = grid_samples(1.0, 40.0, 2000, 9u);
  CHECK(residual(eq, candidate, samples) <= 1e-12);
}

TEST_CASE("residual reports evaluation failures") {
  EquationSpec eq = make_spec("1/(t - 2)", "t - 1");
  Expression candidate = parse_expression("0.5^t");
  std::vector<double> samples = {2.0};
  CHECK_THROWS_AS(residual(eq, candidate, samples), EvalError);
}

TEST_CASE("detect_oscillation on a sampled sine") {
  Trajectory traj = Trajectory::from_expression(
      parse_expression("sin(3.141592653589793*t)"), 0, 10, GridSpec{64});
  OscillationReport rep = detect_oscillation(traj, 0.0);
  CHECK(rep.oscillatory_within_horizon);
  CHECK(!rep.eventually_positive);
  CHECK(!rep.eventually_negative);
}

TEST_CASE("check_condition5: per-interval minima of the decaying sawtooth") {
  Trajectory traj = Trajectory::from_expression(
      parse_expression("0.5^floor(t)*(1 - frac(t))"), 0, 45, GridSpec{64});
  SegmentPositivityReport rep = check_condition5(traj, 45);
  for (int n = 0; n < 45; ++n) {
    double ref = std::pow(0.5, n) / 64.0;
    CHECK(rep.y[static_cast<std::size_t>(n)] == doctest::Approx(ref).epsilon(1e-12));
  }
  CHECK(rep.all_positive);
  CHECK(rep.cond5_suspect);
  // 2^{-n}/64 crosses 1e-12 at n = 34
  CHECK(rep.first_suspect_n == 34);
}

TEST_CASE("check_condition5: constant one raises no flag") {
  Trajectory traj = Trajectory::from_expression(parse_expression("1"), 0, 10, GridSpec{16});
  SegmentPositivityReport rep = check_condition5(traj, 10);
  for (double y : rep.y) CHECK(y == 1.0);
  CHECK(!rep.cond5_suspect);
}

TEST_SUITE_END();
