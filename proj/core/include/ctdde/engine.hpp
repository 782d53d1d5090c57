#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ctdde/expr.hpp"
#include "ctdde/trajectory.hpp"

namespace ctdde {

/// One delayed term a(t) * x(h(t)).
struct Term {
  Expression a;
  Expression h;
};

/// The equation  x(t+1) - x(t) + sum_k a_k(t) x(h_k(t)) = 0.
/// Constraints a_k(t) >= 0 and h_k(t) <= t are enforced on the grid with
/// zero tolerance at simulation time.
struct EquationSpec {
  std::vector<Term> terms;
  std::string label;

  int m() const { return static_cast<int>(terms.size()); }
};

/// History function phi on [history_start, 1); the recurrence starts at
/// t0 = 0 and for t in [0,1) consumes history values only.
struct InitialCondition {
  Expression history;
  int history_start = 0;  // H <= 0
};

struct SimConfig {
  int horizon = 20;  // T; the trajectory covers [H, T+1)
  GridSpec grid;
};

/// One recurrence application against stored data:
///   x(t) - sum_k a_k(t) * x(h_k(t)).
/// Exposed so the step rule can be re-evaluated verbatim against a
/// finished trajectory.
double recurrence_rhs(const EquationSpec& spec, const Trajectory& x, double t);

/// Forward simulation by the step-1 recurrence with delayed-argument
/// lookup through Trajectory::value_at. Grid abscissas of the history are
/// sampled from the history expression; every computed grid value
/// satisfies x(t+1) = recurrence_rhs(spec, x, t) bit-for-bit.
///
/// Errors: delay underflow (h_k(t) < H), constraint violations
/// (a_k(t) < 0 or h_k(t) > t at a grid point) and non-finite values all
/// throw SimulationError.
Trajectory simulate(const EquationSpec& spec, const InitialCondition& init,
                    const SimConfig& cfg);

/// Simulation with an arbitrary history sampler instead of an expression.
Trajectory simulate_with_history(const EquationSpec& spec,
                                 const std::function<double(double)>& history,
                                 int history_start, const SimConfig& cfg);

/// Max absolute residual of a closed-form candidate over the samples:
///   max_t | c(t+1) - c(t) + sum_k a_k(t) c(h_k(t)) |.
double residual(const EquationSpec& spec, const Expression& candidate,
                std::span<const double> samples);

struct OscillationReport {
  double from = 0;
  double horizon_end = 0;
  double window_start = 0;  // final 20% of [from, horizon_end)
  std::vector<SignEvent> events;
  bool eventually_positive = false;
  bool eventually_negative = false;
  bool oscillatory_within_horizon = false;
};

/// Sign-change diagnostics over [from, end). `eventually_*` and
/// `oscillatory_within_horizon` look at the final 20% of the horizon only;
/// this is horizon-limited evidence, never a claim about infinite time.
OscillationReport detect_oscillation(const Trajectory& traj, double from);

struct SegmentPositivityReport {
  std::vector<double> y;  // y[n] = min of stored samples on [n, n+1)
  bool all_positive = false;
  bool cond5_suspect = false;
  long long first_suspect_n = -1;
  double min_y = 0;
};

/// Per-interval minima y(n) for n = 0..horizon_n-1. `cond5_suspect` fires
/// when some y(n) drops below 1e-12 while every sample stays positive:
/// the solution is positive but its infimum per segment is heading to
/// zero, so the segment-positivity requirement is suspect.
SegmentPositivityReport check_condition5(const Trajectory& traj, int horizon_n);

}  // namespace ctdde
