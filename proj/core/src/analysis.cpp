#include "ctdde/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ctdde/errors.hpp"
#include "ctdde/util.hpp"

namespace ctdde {

const char* to_string(VerdictTag tag) {
  switch (tag) {
    case VerdictTag::NoPositiveSolutionUnderCond5:
      return "NoPositiveSolutionUnderCond5";
    case VerdictTag::NoPositiveNonincreasing:
      return "NoPositiveNonincreasing";
    case VerdictTag::PositiveSolutionExists:
      return "PositiveSolutionExists";
    case VerdictTag::Oscillatory:
      return "Oscillatory";
    case VerdictTag::NonOscillatory:
      return "NonOscillatory";
    case VerdictTag::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// integer-spaced sets

GridSet set_N(double s, double t) {
  if (s > t) throw AnalysisError("set requires s <= t");
  GridSet gs;
  gs.base = s;
  gs.flavor = GridSetFlavor::Forward;
  long long d = static_cast<long long>(std::floor(t - s));
  gs.elements.reserve(static_cast<std::size_t>(std::max<long long>(d, 0)));
  for (long long j = 0; j < d; ++j) gs.elements.push_back(s + static_cast<double>(j));
  return gs;
}

GridSet set_M(double s, double t) {
  if (s > t) throw AnalysisError("set requires s <= t");
  GridSet gs;
  gs.base = t;
  gs.flavor = GridSetFlavor::Backward;
  long long d = static_cast<long long>(std::floor(t - s));
  gs.elements.reserve(static_cast<std::size_t>(std::max<long long>(d, 0)));
  for (long long j = d; j >= 1; --j) gs.elements.push_back(t - static_cast<double>(j));
  return gs;
}

// ---------------------------------------------------------------------------
// decay bounds

namespace {

double coefficient_sum(const EquationSpec& spec, double r) {
  double sum = 0.0;
  for (const Term& term : spec.terms) sum += term.a.eval(r);
  return sum;
}

}  // namespace

GronwallBound gronwall_bound(const EquationSpec& spec, double s, double t,
                             GridSetFlavor flavor) {
  if (s < 0.0 || s > t) throw AnalysisError("bound requires 0 <= s <= t");
  GridSet gs = flavor == GridSetFlavor::Forward ? set_N(s, t) : set_M(s, t);
  GronwallBound b;
  for (double r : gs.elements) {
    double factor = 1.0 - coefficient_sum(spec, r);
    if (factor <= 0.0) b.nonpositive_factor = true;
    b.value *= factor;
  }
  return b;
}

GronwallCheckResult check_gronwall(const Trajectory& traj, const EquationSpec& spec,
                                   std::span<const std::pair<double, double>> pairs) {
  GronwallCheckResult res;
  if (pairs.empty()) {
    res.skipped = true;
    return res;
  }
  double lo = pairs[0].first, hi = pairs[0].second;
  for (const auto& [s, t] : pairs) {
    if (s > t) throw AnalysisError("pair with s > t");
    lo = std::min(lo, s);
    hi = std::max(hi, t);
  }

  // Hypothesis: positive and non-increasing on the grid over [lo, hi].
  res.hypothesis_positive = true;
  res.hypothesis_nonincreasing = true;
  const int q = traj.grid().q;
  double prev = std::numeric_limits<double>::infinity();
  for (int n = static_cast<int>(std::floor(lo)); n < traj.end(); ++n) {
    if (n < traj.start()) continue;
    for (int j = 0; j < q; ++j) {
      double a = traj.abscissa(n, j);
      if (a < lo || a > hi) continue;
      double v = traj.sample(n, j);
      if (v <= 0.0) res.hypothesis_positive = false;
      if (v > prev) res.hypothesis_nonincreasing = false;
      prev = v;
    }
  }
  if (!res.hypothesis_positive || !res.hypothesis_nonincreasing) {
    res.skipped = true;
    return res;
  }

  constexpr double kTol = 1e-9;
  for (const auto& [s, t] : pairs) {
    double xs = traj.value_at(s);
    double xt = traj.value_at(t);
    for (GridSetFlavor flavor : {GridSetFlavor::Forward, GridSetFlavor::Backward}) {
      double bound = gronwall_bound(spec, s, t, flavor).value;
      double rhs = xs * bound;
      if (xt > rhs + kTol) {
        res.violations.push_back(GronwallViolation{s, t, flavor, xt, rhs});
      }
    }
  }
  return res;
}

std::optional<double> factor_barrier(const EquationSpec& spec, double t_from, double t_to,
                                     GridSpec grid) {
  long long first = static_cast<long long>(std::ceil(t_from * grid.q));
  long long last = static_cast<long long>(std::floor(t_to * grid.q));
  for (long long i = first; i <= last; ++i) {
    double r = static_cast<double>(i) / grid.q;
    if (coefficient_sum(spec, r) >= 1.0) return r;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// the S(t) functional

DelayMajorant majorant_from(const Expression& g) {
  return [g](double t) { return g.eval(t); };
}

DelayMajorant majorant_from(const RunningSup& rs) {
  return [rs](double t) { return rs.at(t); };
}

double s_value(const EquationSpec& spec, const DelayMajorant& g, double t) {
  double gt = g(t);
  if (gt > t) throw AnalysisError("delay majorant exceeds t at t = " + util::fmt_double(t));
  GridSet outer = set_N(gt, t);
  double total = 0.0;
  for (double u : outer.elements) {
    for (const Term& term : spec.terms) {
      double a = term.a.eval(u);
      double h = term.h.eval(u);
      if (h > gt) {
        throw AnalysisError("supplied g is not a delay majorant: h(" + util::fmt_double(u) +
                            ") = " + util::fmt_double(h) + " > g(t) = " + util::fmt_double(gt));
      }
      double prod = 1.0;
      for (double r : set_N(h, gt).elements) {
        prod *= 1.0 - coefficient_sum(spec, r);
      }
      total += a * prod;
    }
  }
  return total;
}

SScanResult s_scan(const EquationSpec& spec, const DelayMajorant& g, double t_from,
                   double t_to, double step) {
  if (step <= 0.0 || t_to < t_from) throw AnalysisError("invalid scan range");
  SScanResult res;
  res.sup = -std::numeric_limits<double>::infinity();
  const long long steps = static_cast<long long>(std::floor((t_to - t_from) / step + 1e-9));
  for (long long i = 0; i <= steps; ++i) {
    double t = t_from + static_cast<double>(i) * step;
    double s = s_value(spec, g, t);
    if (s > res.sup) {
      res.sup = s;
      res.arg_t = t;
    }
    if (!res.fired && s > 1.0) {
      res.fired = true;
      res.witness_t = t;
      res.witness_s = s;
    }
  }

  if (res.fired) {
    // The criterion is a limsup; mirror its hypothesis by sampling that the
    // delay iterates stay positive beyond the witness.
    res.h_iterates_positive_beyond = true;
    double probe_step = step / 4.0;
    for (double s = res.witness_t; s <= t_to; s += probe_step) {
      for (const Term& term : spec.terms) {
        double h1 = term.h.eval(s);
        if (h1 <= 0.0) {
          res.h_iterates_positive_beyond = false;
          break;
        }
        for (const Term& inner : spec.terms) {
          if (inner.h.eval(h1) <= 0.0) {
            res.h_iterates_positive_beyond = false;
            break;
          }
        }
      }
      if (!res.h_iterates_positive_beyond) break;
    }
    res.verdict.tag = VerdictTag::NoPositiveNonincreasing;
    res.verdict.method = "gronwall-sum";
    res.verdict.evidence.add("witness_t", res.witness_t);
    res.verdict.evidence.add("witness_S", res.witness_s);
    res.verdict.evidence.add("h_iterates_positive_beyond_witness",
                             res.h_iterates_positive_beyond);
    res.verdict.evidence.add("note", "limsup proxy: single witness on a finite horizon");
  } else {
    res.verdict.tag = VerdictTag::Inconclusive;
    res.verdict.method = "gronwall-sum";
    res.verdict.evidence.add("sup_S", res.sup);
    res.verdict.evidence.add("argmax_t", res.arg_t);
    res.verdict.evidence.add("note", "finite-horizon limsup proxy stayed <= 1");
  }
  return res;
}

// ---------------------------------------------------------------------------
// discrete oscillation tests

namespace {

// (sigma+1)^(sigma+1) / sigma^sigma with the 0^0 = 1 convention.
double delay_ratio(double sigma) {
  if (sigma == 0.0) return 1.0;
  return std::pow(sigma + 1.0, sigma + 1.0) / std::pow(sigma, sigma);
}

}  // namespace

DiscreteTestResult discrete_oscillation_test(const DiscreteTestInput& input) {
  const std::size_t m = input.p.size();
  if (m != input.sigma.size()) throw AnalysisError("p and sigma sizes differ");
  if (m == 0 && !input.seq) throw AnalysisError("no test inputs");
  for (std::size_t k = 0; k < m; ++k) {
    if (!(input.p[k] > 0.0)) throw AnalysisError("p_k must be positive");
    if (input.sigma[k] < 0.0) throw AnalysisError("sigma_k must be >= 0");
  }

  DiscreteTestResult res;
  if (m > 0) {
    double sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) sum += input.p[k] * delay_ratio(input.sigma[k]);
    res.sum_test_value = sum;

    double geo = 1.0, sigma_mean = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      geo *= input.p[k];
      sigma_mean += input.sigma[k];
    }
    sigma_mean /= static_cast<double>(m);
    res.geometric_test_value = static_cast<double>(m) *
                               std::pow(geo, 1.0 / static_cast<double>(m)) *
                               delay_ratio(sigma_mean);

    if (res.sum_test_value > 1.0) {
      res.oscillatory = true;
      res.fired_by = "sum-test";
      return res;
    }
    if (res.geometric_test_value > 1.0) {
      res.oscillatory = true;
      res.fired_by = "geometric-mean-test";
      return res;
    }
  }

  if (input.seq) {
    const auto& seq = *input.seq;
    if (seq.a.size() != seq.h.size()) throw AnalysisError("sequence data sizes differ");
    long long g = std::numeric_limits<long long>::min();
    double sup = 0.0;
    for (std::size_t n = 0; n < seq.a.size(); ++n) {
      long long hn = seq.h[n];
      if (hn > static_cast<long long>(n)) throw AnalysisError("sequence delay h(n) > n");
      g = std::max(g, hn);
      double sum = 0.0;
      for (long long i = std::max<long long>(g, 0); i <= static_cast<long long>(n); ++i) {
        sum += seq.a[static_cast<std::size_t>(i)];
      }
      sup = std::max(sup, sum);
    }
    res.running_sum_sup = sup;
    if (sup > 1.0) {
      res.oscillatory = true;
      res.fired_by = "running-sum-test";
      return res;
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// envelope reduction to a comparison discrete equation

Verdict envelope_comparison_verdict(const EquationSpec& spec, int n_from, int n_to,
                                    std::span<const double> alpha_grid) {
  Verdict verdict;
  verdict.method = "envelope-comparison";
  double best_sum = 0.0;
  double best_alpha = 0.0;

  for (double alpha : alpha_grid) {
    EnvelopeTable env = compute_envelopes(spec, n_from, n_to, alpha, EnvelopeMode::Rigorous);
    DiscreteTestInput input;
    bool usable = true;
    for (int k = 0; k < spec.m() && usable; ++k) {
      double p = std::numeric_limits<double>::infinity();
      long long sigma = std::numeric_limits<long long>::max();
      for (int n = n_from; n <= n_to; ++n) {
        p = std::min(p, env.alow(k, n));
        sigma = std::min(sigma, n - env.hfhigh(k, n));
      }
      if (!(p > 0.0) || sigma < 0) {
        usable = false;  // this alpha gives no positive bound or no delay
        break;
      }
      input.p.push_back(p);
      input.sigma.push_back(static_cast<double>(sigma));
    }
    if (!usable) continue;

    DiscreteTestResult test = discrete_oscillation_test(input);
    double p_sum = 0.0;
    for (double p : input.p) p_sum += p;
    if (p_sum > best_sum) {
      best_sum = p_sum;
      best_alpha = alpha;
    }
    if (test.oscillatory) {
      verdict.tag = VerdictTag::NoPositiveSolutionUnderCond5;
      verdict.evidence.add("alpha", alpha);
      verdict.evidence.add("fired_by", test.fired_by);
      verdict.evidence.add("sum_test_value", test.sum_test_value);
      verdict.evidence.add("geometric_test_value", test.geometric_test_value);
      verdict.evidence.add("p_sum", p_sum);
      for (std::size_t k = 0; k < input.p.size(); ++k) {
        std::string suffix = "[" + std::to_string(k + 1) + "]";
        verdict.evidence.add("p" + suffix, input.p[k]);
        verdict.evidence.add("sigma" + suffix, input.sigma[k]);
      }
      // Threshold the aggregated coefficient sum would need at the common
      // delay, when there is one.
      bool uniform = std::all_of(input.sigma.begin(), input.sigma.end(),
                                 [&](double s) { return s == input.sigma[0]; });
      if (uniform && !input.sigma.empty()) {
        double sigma = input.sigma[0];
        verdict.evidence.add("uniform_sigma", sigma);
        verdict.evidence.add("p_sum_threshold_at_sigma", 1.0 / delay_ratio(sigma));
        verdict.evidence.add("p_sum_threshold_at_sigma_1", 0.25);
      }
      return verdict;
    }
  }

  verdict.tag = VerdictTag::Inconclusive;
  verdict.evidence.add("best_p_sum", best_sum);
  verdict.evidence.add("best_alpha", best_alpha);
  return verdict;
}

// ---------------------------------------------------------------------------
// certificates

double Certificate::u_at(long long n) const {
  if (n >= 0) {
    if (static_cast<std::size_t>(n) >= u.size()) {
      throw AnalysisError("certificate u index " + std::to_string(n) + " out of domain");
    }
    return u[static_cast<std::size_t>(n)];
  }
  std::size_t idx = static_cast<std::size_t>(-n - 1);
  if (idx < u_neg.size()) return u_neg[idx];
  if (!u_neg.empty()) return u_neg.back();
  if (u.empty()) throw AnalysisError("empty certificate");
  return u.front();
}

double Certificate::v_at(long long n) const {
  if (n >= 0) {
    if (static_cast<std::size_t>(n) >= v.size()) {
      throw AnalysisError("certificate V index " + std::to_string(n) + " out of domain");
    }
    return v[static_cast<std::size_t>(n)];
  }
  std::size_t idx = static_cast<std::size_t>(-n - 1);
  if (idx < v_neg.size()) return v_neg[idx];
  if (!v_neg.empty()) return v_neg.back();
  if (v.empty()) throw AnalysisError("empty certificate");
  return v.front();
}

CertificateCheckResult verify_certificate(const Certificate& cert, const EnvelopeTable& env) {
  if (env.mode != EnvelopeMode::Rigorous) {
    throw AnalysisError("certificate verification requires rigorous envelopes");
  }
  const int n_from = std::max(env.n_from, 0);
  const int n_to = env.n_to;
  const int m = static_cast<int>(env.a_low.size());

  CertificateCheckResult res;
  auto fail = [&](const char* cond, long long n, double lhs, double rhs) {
    res.pass = false;
    res.condition = cond;
    res.index = n;
    res.lhs = lhs;
    res.rhs = rhs;
    return res;
  };

  // Positivity and monotonicity, including any explicit tail values.
  for (long long n = -static_cast<long long>(std::max(cert.u_neg.size(), cert.v_neg.size()));
       n <= n_to + 1; ++n) {
    double un = cert.u_at(n), vn = cert.v_at(n);
    if (!(un > 0.0)) return fail("positivity", n, un, 0.0);
    if (!(vn > 0.0)) return fail("positivity", n, vn, 0.0);
    if (n <= n_to) {
      if (cert.u_at(n + 1) > un) return fail("nonincreasing", n, cert.u_at(n + 1), un);
      if (cert.v_at(n + 1) > vn) return fail("nonincreasing", n, cert.v_at(n + 1), vn);
    }
  }

  for (int n = n_from; n <= n_to; ++n) {
    double un = cert.u_at(n), vn = cert.v_at(n);
    if (un > vn) return fail("order", n, un, vn);

    double lower_rhs = un;
    for (int k = 0; k < m; ++k) lower_rhs -= env.ahigh(k, n) * cert.v_at(env.hflow(k, n));
    if (cert.u_at(n + 1) > lower_rhs) return fail("lower-step", n, cert.u_at(n + 1), lower_rhs);

    double upper_rhs = vn;
    for (int k = 0; k < m; ++k) upper_rhs -= env.alow(k, n) * cert.u_at(env.hfhigh(k, n));
    if (cert.v_at(n + 1) < upper_rhs) return fail("upper-step", n, cert.v_at(n + 1), upper_rhs);
  }

  res.pass = true;
  return res;
}

std::pair<Trajectory, BoundsReport> construct_bounded_solution(
    const EquationSpec& spec, const Certificate& cert, int horizon, GridSpec grid,
    const std::optional<Expression>& phi) {
  // History depth: smallest delayed argument reached on the horizon.
  double hmin = 0.0;
  for (int n = 0; n < horizon; ++n) {
    for (int j = 0; j < grid.q; ++j) {
      double t = n + static_cast<double>(j) / grid.q;
      for (const Term& term : spec.terms) hmin = std::min(hmin, term.h.eval(t));
    }
  }
  int history_start = static_cast<int>(std::floor(hmin));

  SimConfig cfg;
  cfg.horizon = horizon;
  cfg.grid = grid;
  std::function<double(double)> history;
  if (phi) {
    history = [e = *phi](double t) { return e.eval(t); };
  } else {
    history = [&cert](double t) {
      return cert.u_at(static_cast<long long>(std::floor(t)));
    };
  }
  Trajectory traj = simulate_with_history(spec, history, history_start, cfg);

  constexpr double kTol = 1e-9;
  BoundsReport rep;
  for (int n = 0; n <= horizon; ++n) {
    BoundsEntry e;
    e.n = n;
    e.piece_min = traj.piece_min(n);
    e.piece_max = traj.piece_max(n);
    e.u = cert.u_at(n);
    e.v = cert.v_at(n);
    e.ok = e.piece_min >= e.u - kTol && e.piece_max <= e.v + kTol;
    if (!e.ok) {
      ++rep.violations;
      rep.worst_violation = std::max(
          {rep.worst_violation, e.u - e.piece_min, e.piece_max - e.v});
    }
    rep.entries.push_back(e);
  }
  return {std::move(traj), std::move(rep)};
}

// ---------------------------------------------------------------------------
// constant-delay criteria

Verdict constant_delay_verdict(const EquationSpec& spec, int n_from, int n_to,
                               GridSpec grid) {
  // Detect h_k(t) = t - sigma_k on the grid.
  std::vector<double> sigma_lo, sigma_hi;
  for (const Term& term : spec.terms) {
    double dmin = std::numeric_limits<double>::infinity();
    double dmax = -std::numeric_limits<double>::infinity();
    for (int n = 0; n <= n_to; ++n) {
      for (int j = 0; j < grid.q; ++j) {
        double t = n + static_cast<double>(j) / grid.q;
        double d = t - term.h.eval(t);
        dmin = std::min(dmin, d);
        dmax = std::max(dmax, d);
      }
    }
    if (dmax - dmin > 1e-9) {
      throw AnalysisError("delay is not constant on the grid (range " + util::fmt_double(dmin) +
                          " .. " + util::fmt_double(dmax) + ")");
    }
    if (!(dmin > 0.0)) throw AnalysisError("constant-delay criteria require sigma > 0");
    sigma_lo.push_back(dmin);
    sigma_hi.push_back(dmax);
  }

  EnvelopeTable env = compute_envelopes(spec, n_from, n_to, 0.0, EnvelopeMode::Rigorous);

  Verdict verdict;
  verdict.method = "constant-delay-criteria";

  DiscreteTestInput input;
  bool usable = true;
  for (int k = 0; k < spec.m(); ++k) {
    double p = std::numeric_limits<double>::infinity();
    for (int n = n_from; n <= n_to; ++n) p = std::min(p, env.alow(k, n));
    if (!(p > 0.0)) {
      usable = false;
      break;
    }
    input.p.push_back(p);
    input.sigma.push_back(sigma_lo[static_cast<std::size_t>(k)]);
  }
  if (usable) {
    DiscreteTestResult test = discrete_oscillation_test(input);
    if (test.oscillatory) {
      verdict.tag = VerdictTag::Oscillatory;
      verdict.evidence.add("fired_by", test.fired_by);
      verdict.evidence.add("sum_test_value", test.sum_test_value);
      verdict.evidence.add("geometric_test_value", test.geometric_test_value);
      for (std::size_t k = 0; k < input.p.size(); ++k) {
        std::string suffix = "[" + std::to_string(k + 1) + "]";
        verdict.evidence.add("p" + suffix, input.p[k]);
        verdict.evidence.add("sigma" + suffix, input.sigma[k]);
      }
      return verdict;
    }
  }

  if (spec.m() == 1) {
    double sigma = sigma_hi[0];
    double threshold = std::pow(sigma, sigma) / std::pow(sigma + 1.0, sigma + 1.0);
    double worst = -std::numeric_limits<double>::infinity();
    for (int n = n_from; n <= n_to; ++n) worst = std::max(worst, env.ahigh(0, n));
    if (worst <= threshold) {
      verdict.tag = VerdictTag::NonOscillatory;
      verdict.evidence.add("sigma", sigma);
      verdict.evidence.add("threshold", threshold);
      verdict.evidence.add("max_a_high", worst);
      verdict.evidence.add("note",
                           "eventual inequality checked over the scanned horizon only");
      return verdict;
    }
  }

  verdict.tag = VerdictTag::Inconclusive;
  return verdict;
}

}  // namespace ctdde
