#include "ctdde/engine.hpp"

#include <cmath>
#include <limits>

#include "ctdde/errors.hpp"
#include "ctdde/util.hpp"

namespace ctdde {

double recurrence_rhs(const EquationSpec& spec, const Trajectory& x, double t) {
  double v = x.value_at(t);
  for (const Term& term : spec.terms) {
    double a = term.a.eval(t);
    double h = term.h.eval(t);
    v -= a * x.value_at(h);
  }
  return v;
}

Trajectory simulate_with_history(const EquationSpec& spec,
                                 const std::function<double(double)>& history,
                                 int history_start, const SimConfig& cfg) {
  if (history_start > 0) throw SimulationError("history start must be <= 0");
  if (cfg.horizon < 1) throw SimulationError("horizon must be >= 1");
  const int q = cfg.grid.q;
  const int H = history_start;
  const int T = cfg.horizon;

  Trajectory traj(H, cfg.grid);

  // Pre-scan the constraints on the grid before any work: a_k >= 0,
  // h_k <= t (zero tolerance) and h_k >= H.
  for (int n = 0; n < T; ++n) {
    for (int j = 0; j < q; ++j) {
      double t = n + static_cast<double>(j) / q;
      for (int k = 0; k < spec.m(); ++k) {
        double a, h;
        try {
          a = spec.terms[static_cast<std::size_t>(k)].a.eval(t);
          h = spec.terms[static_cast<std::size_t>(k)].h.eval(t);
        } catch (const EvalError& e) {
          throw SimulationError("term " + std::to_string(k + 1) + " not evaluable at t = " +
                                util::fmt_double(t) + ": " + e.what());
        }
        if (a < 0.0) {
          throw SimulationError("coefficient a_" + std::to_string(k + 1) + "(t) = " +
                                util::fmt_double(a) + " < 0 at t = " + util::fmt_double(t));
        }
        if (h > t) {
          throw SimulationError("delay argument h_" + std::to_string(k + 1) + "(t) = " +
                                util::fmt_double(h) + " > t at t = " + util::fmt_double(t));
        }
        if (h < H) {
          throw SimulationError("delay underflow: h_" + std::to_string(k + 1) + "(t) = " +
                                util::fmt_double(h) + " < history start " + std::to_string(H) +
                                " at t = " + util::fmt_double(t));
        }
      }
    }
  }

  // History pieces [H, 1).
  for (int n = H; n <= 0; ++n) {
    std::vector<double> values(static_cast<std::size_t>(q));
    for (int j = 0; j < q; ++j) {
      double t = n + static_cast<double>(j) / q;
      double v = history(t);
      if (!std::isfinite(v)) {
        throw SimulationError("history not finite at t = " + util::fmt_double(t));
      }
      values[static_cast<std::size_t>(j)] = v;
    }
    traj.append_piece(std::move(values), Provenance::History);
  }

  // Computed pieces [1, T+1): piece p from the recurrence at t in [p-1, p).
  for (int p = 1; p <= T; ++p) {
    std::vector<double> values(static_cast<std::size_t>(q));
    for (int j = 0; j < q; ++j) {
      double t = (p - 1) + static_cast<double>(j) / q;
      double v;
      try {
        v = recurrence_rhs(spec, traj, t);
      } catch (const Error& e) {
        throw SimulationError("step at t = " + util::fmt_double(t) + " failed: " + e.what());
      }
      if (!std::isfinite(v)) {
        throw SimulationError("non-finite value produced at t = " +
                              util::fmt_double(t + 1.0));
      }
      values[static_cast<std::size_t>(j)] = v;
    }
    traj.append_piece(std::move(values), Provenance::Computed);
  }

  return traj;
}

Trajectory simulate(const EquationSpec& spec, const InitialCondition& init,
                    const SimConfig& cfg) {
  const Expression& phi = init.history;
  return simulate_with_history(
      spec, [&phi](double t) { return phi.eval(t); }, init.history_start, cfg);
}

double residual(const EquationSpec& spec, const Expression& candidate,
                std::span<const double> samples) {
  double worst = 0.0;
  for (double t : samples) {
    double r = candidate.eval(t + 1.0) - candidate.eval(t);
    for (const Term& term : spec.terms) {
      r += term.a.eval(t) * candidate.eval(term.h.eval(t));
    }
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

OscillationReport detect_oscillation(const Trajectory& traj, double from) {
  if (from < traj.start()) throw TrajectoryError("detection range not covered");
  OscillationReport rep;
  rep.from = from;
  rep.horizon_end = traj.end();
  rep.window_start = from + 0.8 * (rep.horizon_end - from);
  rep.events = traj.sign_events(from, rep.horizon_end);

  bool all_pos = true, all_neg = true;
  const int q = traj.grid().q;
  for (int n = static_cast<int>(std::floor(rep.window_start)); n < traj.end(); ++n) {
    if (n < traj.start()) continue;
    for (int j = 0; j < q; ++j) {
      double t = traj.abscissa(n, j);
      if (t < rep.window_start) continue;
      double v = traj.sample(n, j);
      if (v <= 0.0) all_pos = false;
      if (v >= 0.0) all_neg = false;
    }
  }
  rep.eventually_positive = all_pos;
  rep.eventually_negative = all_neg;
  for (const SignEvent& ev : rep.events) {
    if (ev.t_right >= rep.window_start) {
      rep.oscillatory_within_horizon = true;
      break;
    }
  }
  return rep;
}

SegmentPositivityReport check_condition5(const Trajectory& traj, int horizon_n) {
  if (traj.start() > 0 || traj.end() < horizon_n) {
    throw TrajectoryError("condition-5 check requires coverage of [0, horizon)");
  }
  SegmentPositivityReport rep;
  rep.y.reserve(static_cast<std::size_t>(horizon_n));
  rep.all_positive = true;
  rep.min_y = std::numeric_limits<double>::infinity();
  for (int n = 0; n < horizon_n; ++n) {
    double y = traj.piece_min(n);
    rep.y.push_back(y);
    rep.min_y = std::min(rep.min_y, y);
    if (y <= 0.0) rep.all_positive = false;
  }
  constexpr double kTol = 1e-12;
  if (rep.all_positive) {
    for (int n = 0; n < horizon_n; ++n) {
      if (rep.y[static_cast<std::size_t>(n)] < kTol) {
        rep.cond5_suspect = true;
        rep.first_suspect_n = n;
        break;
      }
    }
  }
  return rep;
}

}  // namespace ctdde
