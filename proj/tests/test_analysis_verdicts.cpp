#include <cmath>

#include "ctdde/analysis.hpp"
#include "ctdde/errors.hpp"
#include "doctest.h"

using namespace ctdde;

TEST_SUITE_BEGIN("verdicts");

namespace {

EquationSpec single(const char* a, const char* h) {
  EquationSpec eq;
  eq.terms.push_back(Term{parse_expression(a), parse_expression(h)});
  return eq;
}

EquationSpec constant_q_sigma(double q, int sigma) {
  EquationSpec eq;
  eq.terms.push_back(Term{Expression::constant(q),
                          parse_expression("t - " + std::to_string(sigma))});
  return eq;
}

// q * sum_{j=1}^{sigma} (1-q)^j, the closed form of S for constant data.
double s_closed_form(double q, int sigma) {
  double sum = 0.0, pw = 1.0;
  for (int j = 1; j <= sigma; ++j) {
    pw *= 1.0 - q;
    sum += pw;
  }
  return q * sum;
}

EquationSpec burst_spec() {
  EquationSpec eq;
  eq.terms.push_back(Term{parse_expression("piecewise(t < 9 : 0 ; otherwise : 0.5)"),
                          parse_expression("piecewise(t < 10 : t - 1 ; otherwise : t - 10)")});
  return eq;
}

Expression burst_g() {
  return parse_expression("piecewise(t < 10 : t - 1 ; t < 19 : 9 ; otherwise : t - 10)");
}

}  // namespace

TEST_CASE("S matches the geometric closed form for constant data") {
  for (double q : {0.1, 0.25, 0.3}) {
    for (int sigma : {1, 2, 5, 10}) {
      EquationSpec eq = constant_q_sigma(q, sigma);
      DelayMajorant g = majorant_from(parse_expression("t - " + std::to_string(sigma)));
      double expected = s_closed_form(q, sigma);
      for (double t : {25.0, 30.0, 33.5}) {
        CAPTURE(q);
        CAPTURE(sigma);
        CHECK(s_value(eq, g, t) == doctest::Approx(expected).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("S is zero when the delay majorant reaches t") {
  EquationSpec eq = single("0.5 - 0.5*frac(t)", "t");
  DelayMajorant g = majorant_from(parse_expression("t"));
  for (double t : {2.0, 7.5, 19.0}) CHECK(s_value(eq, g, t) == 0.0);
}

TEST_CASE("S of the burst equation at the witness") {
  EquationSpec eq = burst_spec();
  DelayMajorant g = majorant_from(burst_g());
  CHECK(s_value(eq, g, 18.0) == doctest::Approx(4.5).epsilon(1e-12));
}

TEST_CASE("s_scan fires on the burst equation") {
  EquationSpec eq = burst_spec();
  SScanResult res = s_scan(eq, majorant_from(burst_g()), 1.0, 18.0, 0.5);
  CHECK(res.fired);
  CHECK(res.verdict.tag == VerdictTag::NoPositiveNonincreasing);
  CHECK(res.witness_s > 1.0);
  CHECK(res.sup == doctest::Approx(4.5).epsilon(1e-12));
  CHECK(res.arg_t == 18.0);
}

TEST_CASE("s_scan stays inconclusive for constant data") {
  // S -> 1 - q from below as sigma grows, so it never crosses 1
  for (double q : {0.1, 0.3}) {
    EquationSpec eq = constant_q_sigma(q, 10);
    SScanResult res = s_scan(eq, majorant_from(parse_expression("t - 10")), 12.0, 40.0, 1.0);
    CHECK(!res.fired);
    CHECK(res.verdict.tag == VerdictTag::Inconclusive);
    CHECK(res.sup < 1.0);
    CHECK(res.sup == doctest::Approx(s_closed_form(q, 10)).epsilon(1e-12));
  }
}

TEST_CASE("s_scan with zero coefficients") {
  EquationSpec eq = single("0", "t - 2");
  SScanResult res = s_scan(eq, majorant_from(parse_expression("t - 2")), 3.0, 20.0, 1.0);
  CHECK(!res.fired);
  CHECK(res.sup == 0.0);
}

TEST_CASE("discrete test: sum form") {
  DiscreteTestInput in;
  in.p = {0.27};
  in.sigma = {1.0};
  DiscreteTestResult r = discrete_oscillation_test(in);
  CHECK(r.oscillatory);
  CHECK(r.fired_by == "sum-test");
  CHECK(r.sum_test_value == doctest::Approx(1.08).epsilon(1e-14));
}

TEST_CASE("discrete test: boundary value stays inconclusive") {
  DiscreteTestInput in;
  in.p = {0.25};
  in.sigma = {1.0};
  DiscreteTestResult r = discrete_oscillation_test(in);
  CHECK(!r.oscillatory);
  CHECK(r.sum_test_value == 1.0);
}

TEST_CASE("discrete test: two terms accumulate") {
  DiscreteTestInput in;
  in.p = {0.2, 0.2};
  in.sigma = {1.0, 2.0};
  DiscreteTestResult r = discrete_oscillation_test(in);
  CHECK(r.oscillatory);
  // 0.2*4 + 0.2*27/4 = 2.15
  CHECK(r.sum_test_value == doctest::Approx(2.15).epsilon(1e-14));
}

TEST_CASE("discrete test: geometric-mean form can fire alone") {
  // with unequal delays the geometric form can beat the sum form:
  // sum = 0.045*4 + 0.04*8^8/7^7 = 0.9949 <= 1, while
  // geometric = 2*sqrt(0.045*0.04)*(5^5/4^4) = 1.0358 > 1
  DiscreteTestInput in;
  in.p = {0.045, 0.04};
  in.sigma = {1.0, 7.0};
  DiscreteTestResult r = discrete_oscillation_test(in);
  CHECK(r.oscillatory);
  CHECK(r.fired_by == "geometric-mean-test");
  CHECK(r.sum_test_value < 1.0);
  CHECK(r.geometric_test_value > 1.0);
}

TEST_CASE("discrete test: zero delay uses the 0^0 = 1 convention") {
  DiscreteTestInput in;
  in.p = {1.5};
  in.sigma = {0.0};
  DiscreteTestResult r = discrete_oscillation_test(in);
  CHECK(r.oscillatory);
  CHECK(r.sum_test_value == 1.5);

  in.p = {0.9};
  CHECK(!discrete_oscillation_test(in).oscillatory);
}

TEST_CASE("discrete test: running-sum sequence form") {
  DiscreteTestInput in;
  in.seq.emplace();
  // burst of coefficient mass with a delay window reaching back two steps
  in.seq->a = {0.0, 0.0, 0.0, 0.4, 0.4, 0.4, 0.0, 0.0};
  in.seq->h = {0, 1, 2, 1, 2, 3, 6, 7};
  DiscreteTestResult r = discrete_oscillation_test(in);
  CHECK(r.oscillatory);
  CHECK(r.fired_by == "running-sum-test");
  CHECK(r.running_sum_sup == doctest::Approx(1.2).epsilon(1e-14));
}

TEST_CASE("discrete test: invalid inputs throw") {
  DiscreteTestInput in;
  in.p = {0.0};
  in.sigma = {1.0};
  CHECK_THROWS_AS(discrete_oscillation_test(in), AnalysisError);
  in.p = {0.5};
  in.sigma = {-1.0};
  CHECK_THROWS_AS(discrete_oscillation_test(in), AnalysisError);
  in.p = {0.5, 0.5};
  in.sigma = {1.0};
  CHECK_THROWS_AS(discrete_oscillation_test(in), AnalysisError);
}

TEST_CASE("monotonicity: raising a coefficient never un-fires the test") {
  DiscreteTestInput in;
  in.p = {0.2, 0.21};
  in.sigma = {1.0, 2.0};
  DiscreteTestResult base = discrete_oscillation_test(in);
  REQUIRE(base.oscillatory);
  for (double scale : {1.01, 1.5, 10.0}) {
    DiscreteTestInput up = in;
    for (double& p : up.p) p *= scale;
    CHECK(discrete_oscillation_test(up).oscillatory);
  }
}

TEST_CASE("envelope comparison fires for a plain constant-delay equation") {
  EquationSpec eq = single("0.3", "t - 1");
  std::vector<double> alphas = {0.0};
  Verdict v = envelope_comparison_verdict(eq, 0, 10, alphas);
  CHECK(v.tag == VerdictTag::NoPositiveSolutionUnderCond5);
}

TEST_CASE("envelope comparison stays inconclusive without coefficient mass") {
  EquationSpec eq = single("0", "t - 1");
  std::vector<double> alphas = {0.0, 0.5};
  Verdict v = envelope_comparison_verdict(eq, 0, 10, alphas);
  CHECK(v.tag == VerdictTag::Inconclusive);
}

TEST_CASE("certificate: the worked trap passes") {
  EquationSpec eq = single("0.5^(floor(t) + 2)", "floor(t) - 1 - 0.8*cos(t)");
  EnvelopeTable env = compute_envelopes(eq, 0, 30, 0.0, EnvelopeMode::Rigorous);
  Certificate cert;
  for (int n = 0; n <= 31; ++n) {
    cert.u.push_back(0.5 + int_pow(0.5, n + 1));
    cert.v.push_back(1.0);
  }
  CertificateCheckResult res = verify_certificate(cert, env);
  CHECK(res.pass);
}

TEST_CASE("certificate: equality-tight certificate from a discrete solution") {
  // piecewise-constant equation; z(n) = 2^{-n} solves the discrete
  // comparison equation exactly, and u = V = z passes with equalities,
  // provided the pre-history values follow z as well
  EquationSpec eq = single("0.25", "floor(t) - 1");
  EnvelopeTable env = compute_envelopes(eq, 0, 20, 0.0, EnvelopeMode::Rigorous);
  Certificate cert;
  for (int n = 0; n <= 21; ++n) {
    cert.u.push_back(int_pow(0.5, n));
    cert.v.push_back(int_pow(0.5, n));
  }
  cert.u_neg = {2.0};
  cert.v_neg = {2.0};
  CertificateCheckResult res = verify_certificate(cert, env);
  CHECK(res.pass);

  // with the default constant tail the upper-step condition fails at n = 0
  Certificate flat = cert;
  flat.u_neg.clear();
  flat.v_neg.clear();
  CertificateCheckResult res2 = verify_certificate(flat, env);
  CHECK(!res2.pass);
  CHECK(res2.condition == "upper-step");
  CHECK(res2.index == 0);
}

TEST_CASE("certificate: impossible trap fails at the lower step") {
  EquationSpec eq = single("0.25", "floor(t) - 1");
  EnvelopeTable env = compute_envelopes(eq, 0, 10, 0.0, EnvelopeMode::Rigorous);
  Certificate cert;
  for (int n = 0; n <= 11; ++n) {
    cert.u.push_back(1.0);
    cert.v.push_back(1.0);
  }
  CertificateCheckResult res = verify_certificate(cert, env);
  CHECK(!res.pass);
  CHECK(res.condition == "lower-step");
  CHECK(res.index == 0);
}

TEST_CASE("certificate verification rejects sampled envelopes") {
  EquationSpec eq = single("0.25", "floor(t) - 1");
  EnvelopeTable env = compute_envelopes(eq, 0, 5, 0.0, EnvelopeMode::Sampled);
  Certificate cert;
  for (int n = 0; n <= 6; ++n) {
    cert.u.push_back(1.0);
    cert.v.push_back(1.0);
  }
  CHECK_THROWS_AS(verify_certificate(cert, env), AnalysisError);
}

TEST_CASE("construct_bounded_solution: worked trap stays within bounds") {
  EquationSpec eq = single("0.5^(floor(t) + 2)", "floor(t) - 1 - 0.8*cos(t)");
  Certificate cert;
  for (int n = 0; n <= 31; ++n) {
    cert.u.push_back(0.5 + int_pow(0.5, n + 1));
    cert.v.push_back(1.0);
  }
  auto [traj, rep] = construct_bounded_solution(eq, cert, 30);
  CHECK(rep.violations == 0);
  CHECK(traj.value_at(0.0) == 1.0);
}

TEST_CASE("construct_bounded_solution: zero coefficients give the constant solution") {
  EquationSpec eq = single("0", "t - 1");
  Certificate cert;
  for (int n = 0; n <= 9; ++n) {
    cert.u.push_back(1.0);
    cert.v.push_back(1.0);
  }
  auto [traj, rep] = construct_bounded_solution(eq, cert, 8);
  CHECK(rep.violations == 0);
  for (int n = 0; n < 8; ++n) {
    CHECK(traj.piece_min(n) == 1.0);
    CHECK(traj.piece_max(n) == 1.0);
  }
}

TEST_CASE("construct_bounded_solution accepts any history between u and V") {
  EquationSpec eq = single("0.5^(floor(t) + 2)", "floor(t) - 1 - 0.8*cos(t)");
  Certificate cert;
  for (int n = 0; n <= 21; ++n) {
    cert.u.push_back(0.5 + int_pow(0.5, n + 1));
    cert.v.push_back(1.0);
  }
  // u(n) = V(n) = 1 for n <= 0, so the only admissible history is 1;
  // passing it explicitly exercises the phi parameter
  auto [traj, rep] =
      construct_bounded_solution(eq, cert, 20, GridSpec{64}, parse_expression("1"));
  CHECK(rep.violations == 0);
  CHECK(traj.value_at(-1.5) == 1.0);
}

TEST_CASE("construct_bounded_solution: piecewise-constant lift of the discrete solution") {
  EquationSpec eq = single("0.25", "floor(t) - 1");
  Certificate cert;
  for (int n = 0; n <= 13; ++n) {
    cert.u.push_back(int_pow(0.5, n));
    cert.v.push_back(int_pow(0.5, n));
  }
  cert.u_neg = {2.0};
  cert.v_neg = {2.0};
  auto [traj, rep] = construct_bounded_solution(eq, cert, 12);
  CHECK(rep.violations == 0);
  for (int n = 0; n < 12; ++n) {
    CHECK(traj.piece_min(n) == int_pow(0.5, n));
    CHECK(traj.piece_max(n) == int_pow(0.5, n));
  }
}

TEST_CASE("constant-delay criteria: oscillatory branch") {
  EquationSpec eq = single("0.3", "t - 1");
  Verdict v = constant_delay_verdict(eq, 0, 10);
  CHECK(v.tag == VerdictTag::Oscillatory);
}

TEST_CASE("constant-delay criteria: non-oscillatory branch at the threshold") {
  EquationSpec eq = single("0.25", "t - 1");
  Verdict v = constant_delay_verdict(eq, 0, 10);
  CHECK(v.tag == VerdictTag::NonOscillatory);
}

TEST_CASE("constant-delay criteria: zero coefficient is non-oscillatory") {
  EquationSpec eq = single("0", "t - 3");
  Verdict v = constant_delay_verdict(eq, 0, 10);
  CHECK(v.tag == VerdictTag::NonOscillatory);
}

TEST_CASE("constant-delay criteria reject variable delays") {
  EquationSpec eq = single("0.3", "t - 2.1 + 0.1*sin(t)");
  CHECK_THROWS_AS(constant_delay_verdict(eq, 0, 10), AnalysisError);
}

TEST_SUITE_END();
