#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ctdde/envelope.hpp"
#include "ctdde/report.hpp"

namespace ctdde {

enum class VerdictTag {
  NoPositiveSolutionUnderCond5,
  NoPositiveNonincreasing,
  PositiveSolutionExists,
  Oscillatory,
  NonOscillatory,
  Inconclusive,
};

const char* to_string(VerdictTag tag);

/// Tagged analysis outcome. Non-Inconclusive verdicts carry reproducible
/// evidence values in `evidence` (the witness n/alpha/t and the computed
/// quantities that fired the test).
struct Verdict {
  VerdictTag tag = VerdictTag::Inconclusive;
  std::string method;
  Report evidence;
};

enum class GridSetFlavor { Forward, Backward };

/// Finite integer-spaced set of points between s and t:
///   Forward  {s + j  : j = 0,1,2,...,  s + j <= t - 1}
///   Backward {t - j  : j = 1,2,...,    t - j >= s}
/// Both flavors always have the same cardinality, floor(t - s).
struct GridSet {
  double base = 0;
  GridSetFlavor flavor = GridSetFlavor::Forward;
  std::vector<double> elements;  // ascending
};

GridSet set_N(double s, double t);
GridSet set_M(double s, double t);

struct GronwallBound {
  double value = 1.0;
  /// Some factor 1 - sum_k a_k(r) was <= 0; the product is still returned
  /// but factor_barrier gives the sharp conclusion in that regime.
  bool nonpositive_factor = false;
};

/// Decay bound for positive non-increasing solutions:
///   prod over the chosen set of (1 - sum_k a_k(r)); 1 for empty sets.
GronwallBound gronwall_bound(const EquationSpec& spec, double s, double t,
                             GridSetFlavor flavor);

struct GronwallViolation {
  double s, t;
  GridSetFlavor flavor;
  double lhs;  // x(t)
  double rhs;  // x(s) * bound
};

struct GronwallCheckResult {
  bool hypothesis_positive = false;
  bool hypothesis_nonincreasing = false;
  bool skipped = false;  // hypothesis failed; inequality not applicable
  std::vector<GronwallViolation> violations;
};

/// Asserts x(t) <= x(s) * gronwall_bound(s, t) for both set flavors over
/// the given pairs, tolerance 1e-9. Skipped (with the flags telling why)
/// when the trajectory is not positive and non-increasing on its grid over
/// the range the pairs span.
GronwallCheckResult check_gronwall(const Trajectory& traj, const EquationSpec& spec,
                                   std::span<const std::pair<double, double>> pairs);

/// Smallest grid point r in [t_from, t_to] with sum_k a_k(r) >= 1, if any.
/// At such a point a positive non-increasing solution would be forced
/// non-positive one step later.
std::optional<double> factor_barrier(const EquationSpec& spec, double t_from, double t_to,
                                     GridSpec grid = {});

/// Non-decreasing delay majorant g used by the S(t) functional; built from
/// either an exact expression or a grid running sup.
using DelayMajorant = std::function<double(double)>;

DelayMajorant majorant_from(const Expression& g);
DelayMajorant majorant_from(const RunningSup& rs);

/// The exclusion functional for positive non-increasing solutions:
///   S(t) = sum_{u in N(g(t), t)} sum_k a_k(u) *
///          prod_{r in N(h_k(u), g(t))} (1 - sum_i a_i(r));
/// 0 when the outer set is empty. S(t) > 1 excludes positive
/// non-increasing (and negative non-decreasing) solutions.
double s_value(const EquationSpec& spec, const DelayMajorant& g, double t);

struct SScanResult {
  double sup = 0;
  double arg_t = 0;
  bool fired = false;
  double witness_t = 0;
  double witness_s = 0;
  bool h_iterates_positive_beyond = false;
  Verdict verdict;
};

/// Scans S(t) over [t_from, t_to] with the given step. A witness
/// S(t) > 1 yields NoPositiveNonincreasing; the true criterion is a
/// limsup, so the finite-horizon sup is reported as a proxy and labeled.
SScanResult s_scan(const EquationSpec& spec, const DelayMajorant& g, double t_from,
                   double t_to, double step);

/// Inputs for the discrete oscillation tests: constant coefficient lower
/// bounds p_k > 0 with delay lower bounds sigma_k >= 0, plus optional
/// sequence data for the single-delay running-sum test.
struct DiscreteTestInput {
  std::vector<double> p;
  std::vector<double> sigma;

  struct SequenceData {
    std::vector<double> a;       // a(n), n = 0..
    std::vector<long long> h;    // h(n) <= n
  };
  std::optional<SequenceData> seq;
};

struct DiscreteTestResult {
  bool oscillatory = false;
  std::string fired_by;  // "sum-test" | "geometric-mean-test" | "running-sum-test"
  double sum_test_value = 0;
  double geometric_test_value = 0;
  double running_sum_sup = 0;
};

/// Sufficient oscillation tests for x(n+1) - x(n) + sum p_k x(n - sigma_k) = 0:
///   sum_k p_k (sigma_k+1)^(sigma_k+1) / sigma_k^sigma_k > 1, or the
///   geometric-mean variant with the average delay, or (sequence data) a
///   running coefficient sum over [g(n), n] exceeding 1. Strict
///   inequalities; boundary values stay inconclusive. sigma = 0 uses 0^0 = 1.
DiscreteTestResult discrete_oscillation_test(const DiscreteTestInput& input);

/// Reduction to a comparison discrete equation through rigorous envelopes:
/// constant bounds p_k = min_n a_low[k][n] and sigma_k = min_n (n -
/// hf_high[k][n]) feed the discrete tests, for each alpha in the grid.
/// Any firing alpha gives NoPositiveSolutionUnderCond5: no positive
/// solution whose infimum on every bounded segment stays positive.
Verdict envelope_comparison_verdict(const EquationSpec& spec, int n_from, int n_to,
                                    std::span<const double> alpha_grid);

/// Trap certificate: positive non-increasing sequences u(n) <= V(n).
/// Values for n < 0 default to constant extension by u(0), V(0); explicit
/// tail values (index -1, -2, ...) take precedence and extend by their
/// deepest entry.
struct Certificate {
  std::vector<double> u, v;          // n = 0, 1, ...
  std::vector<double> u_neg, v_neg;  // n = -1, -2, ...

  double u_at(long long n) const;
  double v_at(long long n) const;
};

struct CertificateCheckResult {
  bool pass = false;
  std::string condition;  // "positivity" | "nonincreasing" | "order" | "lower-step" | "upper-step"
  long long index = -1;
  double lhs = 0, rhs = 0;
};

/// Checks, over the envelope range (rigorous mode required):
///   order       u(n) <= V(n)
///   lower-step  u(n+1) <= u(n) - sum_k a_high[k][n] * V(hf_low[k][n])
///   upper-step  V(n+1) >= V(n) - sum_k a_low[k][n]  * u(hf_high[k][n])
/// plus positivity and monotonicity of u and V. A pass certifies a
/// positive solution trapped in [u(n), V(n)] on every [n, n+1).
CertificateCheckResult verify_certificate(const Certificate& cert, const EnvelopeTable& env);

struct BoundsEntry {
  int n;
  double piece_min, piece_max;
  double u, v;
  bool ok;
};

struct BoundsReport {
  std::vector<BoundsEntry> entries;
  int violations = 0;
  double worst_violation = 0;
};

/// Simulates with the history phi(t) = u(floor(t)) (or a caller-supplied
/// phi between u and V) and compares per-interval extrema against
/// [u(n), V(n)], tolerance 1e-9. Call only after verify_certificate
/// passed.
std::pair<Trajectory, BoundsReport> construct_bounded_solution(
    const EquationSpec& spec, const Certificate& cert, int horizon, GridSpec grid = {},
    const std::optional<Expression>& phi = std::nullopt);

/// Criteria for constant delays h_k(t) = t - sigma_k (detected on the
/// grid): the discrete tests with rigorous coefficient lower bounds give
/// Oscillatory; for a single term, a_high <= sigma^sigma/(sigma+1)^(sigma+1)
/// on the whole scanned range gives NonOscillatory (an eventual-inequality
/// proxy over the horizon, labeled as such in the evidence).
Verdict constant_delay_verdict(const EquationSpec& spec, int n_from, int n_to,
                               GridSpec grid = {});

}  // namespace ctdde
