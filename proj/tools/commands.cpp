#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include "ctdde/analysis.hpp"
#include "ctdde/errors.hpp"
#include "ctdde/spec_file.hpp"

namespace ctdde::cli {

namespace {

namespace fs = std::filesystem;

SpecFile load_spec(const Options& opts) {
  SpecFile spec = SpecFile::load(opts.spec_path);
  if (opts.q_override) spec.sim.Q = *opts.q_override;
  if (opts.t_override) spec.sim.T = *opts.t_override;
  if (opts.alpha_grid_override) spec.analysis.alpha_grid = *opts.alpha_grid_override;
  return spec;
}

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

int exit_for(const std::exception& e) {
  std::cerr << "error: " << e.what() << "\n";
  return dynamic_cast<const SchemaError*>(&e) ? 2 : 1;
}

void add_interpolation_note(Report& rep) {
  rep.add("interpolation",
          "delayed arguments off the grid use intra-piece linear "
          "interpolation/extrapolation (exact for piecewise-affine solutions)");
}

Verdict pick_overall(const std::vector<Verdict>& verdicts) {
  const VerdictTag precedence[] = {
      VerdictTag::PositiveSolutionExists,    VerdictTag::NoPositiveSolutionUnderCond5,
      VerdictTag::Oscillatory,               VerdictTag::NonOscillatory,
      VerdictTag::NoPositiveNonincreasing,
  };
  for (VerdictTag tag : precedence) {
    for (const Verdict& v : verdicts) {
      if (v.tag == tag) return v;
    }
  }
  Verdict inconclusive;
  inconclusive.tag = VerdictTag::Inconclusive;
  inconclusive.method = "all-tests";
  return inconclusive;
}

}  // namespace

int cmd_simulate(const Options& opts) {
  try {
    SpecFile spec = load_spec(opts);
    if (!spec.history) throw Error("simulate requires a 'history' block in the spec");
    EquationSpec eq = spec.equation();
    Trajectory traj = simulate(eq, *spec.initial(), spec.sim_config());

    fs::path out(opts.out_dir);
    fs::create_directories(out);
    {
      std::ofstream csv(out / (spec.label + "_trajectory.csv"));
      if (!csv) throw Error("cannot write trajectory CSV");
      traj.write_csv(csv);
    }

    Report rep;
    rep.add("label", spec.label);
    rep.add("command", "simulate");
    rep.add("Q", spec.sim.Q);
    rep.add("T", spec.sim.T);
    rep.add("coverage_from", static_cast<long long>(traj.start()));
    rep.add("coverage_to", static_cast<long long>(traj.end()));
    add_interpolation_note(rep);

    OscillationReport osc = detect_oscillation(traj, 0.0);
    rep.add("detection.window_start", osc.window_start);
    rep.add("detection.eventually_positive", osc.eventually_positive);
    rep.add("detection.eventually_negative", osc.eventually_negative);
    rep.add("detection.oscillatory_within_horizon", osc.oscillatory_within_horizon);
    rep.add("detection.note", "horizon-limited; no infinite-time claim");
    rep.add("detection.sign_events", static_cast<long long>(osc.events.size()));
    for (std::size_t i = 0; i < osc.events.size() && i < 16; ++i) {
      std::string key = "detection.event[" + std::to_string(i) + "]";
      rep.add(key + ".t_left", osc.events[i].t_left);
      rep.add(key + ".t_right", osc.events[i].t_right);
    }

    SegmentPositivityReport cond5 = check_condition5(traj, spec.sim.T);
    rep.add("cond5.all_positive", cond5.all_positive);
    rep.add("cond5.cond5_suspect", cond5.cond5_suspect);
    rep.add("cond5.first_suspect_n", cond5.first_suspect_n);
    rep.add("cond5.min_y", cond5.min_y);
    for (std::size_t n = 0; n < cond5.y.size(); ++n) {
      rep.add("cond5.y[" + std::to_string(n) + "]", cond5.y[n]);
    }

    write_text(out / (spec.label + "_simulate.txt"), rep.str());
    std::cout << rep.str();
    return 0;
  } catch (const std::exception& e) {
    return exit_for(e);
  }
}

int cmd_analyze(const Options& opts) {
  try {
    SpecFile spec = load_spec(opts);
    EquationSpec eq = spec.equation();
    const auto& an = spec.analysis;

    Report rep;
    rep.add("label", spec.label);
    rep.add("command", "analyze");
    rep.add("n_range", std::to_string(an.n_from) + ".." + std::to_string(an.n_to));
    add_interpolation_note(rep);

    std::vector<Verdict> verdicts;

    // Comparison with the envelope-reduced discrete equation.
    std::vector<double> alphas = spec.alpha_values();
    Verdict comparison = envelope_comparison_verdict(eq, an.n_from, an.n_to, alphas);
    rep.add("comparison.verdict", to_string(comparison.tag));
    rep.extend("comparison.evidence.", comparison.evidence);
    verdicts.push_back(comparison);

    // Certificate, when the spec carries one.
    if (spec.certificate) {
      EnvelopeTable env =
          compute_envelopes(eq, std::max(an.n_from, 0), an.n_to, 0.0, EnvelopeMode::Rigorous);
      Certificate cert =
          spec.certificate_values(std::max<long long>(an.n_to + 1, spec.sim.T + 1));
      CertificateCheckResult check = verify_certificate(cert, env);
      rep.add("certificate.pass", check.pass);
      if (check.pass) {
        auto [traj, bounds] =
            construct_bounded_solution(eq, cert, spec.sim.T, spec.sim_config().grid);
        rep.add("certificate.bounds_violations", static_cast<long long>(bounds.violations));
        Verdict v;
        v.tag = VerdictTag::PositiveSolutionExists;
        v.method = "certificate";
        v.evidence.add("bounds_violations", static_cast<long long>(bounds.violations));
        v.evidence.add("horizon", spec.sim.T);
        verdicts.push_back(v);
      } else {
        rep.add("certificate.failed_condition", check.condition);
        rep.add("certificate.failed_index", check.index);
        rep.add("certificate.lhs", check.lhs);
        rep.add("certificate.rhs", check.rhs);
      }
    }

    // Exclusion of positive non-increasing solutions via the S functional.
    try {
      DelayMajorant g;
      std::string g_source;
      if (auto ge = spec.g_expression()) {
        g = majorant_from(*ge);
        g_source = "exact-expression";
      } else {
        RunningSup rs = running_sup(eq, an.t_scan.to, spec.sim_config().grid);
        g = majorant_from(rs);
        g_source = "grid-running-sup (may undershoot an unattained sup by one grid step)";
      }
      SScanResult scan = s_scan(eq, g, an.t_scan.from, an.t_scan.to, an.t_scan.step);
      rep.add("s_scan.verdict", to_string(scan.verdict.tag));
      rep.add("s_scan.g_source", g_source);
      rep.add("s_scan.sup", scan.sup);
      rep.add("s_scan.argmax_t", scan.arg_t);
      rep.extend("s_scan.evidence.", scan.verdict.evidence);
      verdicts.push_back(scan.verdict);
    } catch (const AnalysisError& e) {
      rep.add("s_scan.error", e.what());
    }

    // Constant-delay criteria, when the delays are constant.
    try {
      Verdict lemma = constant_delay_verdict(eq, an.n_from, an.n_to, spec.sim_config().grid);
      rep.add("constant_delay.verdict", to_string(lemma.tag));
      rep.extend("constant_delay.evidence.", lemma.evidence);
      verdicts.push_back(lemma);
    } catch (const AnalysisError&) {
      rep.add("constant_delay.verdict", "not-applicable (delays not constant)");
    }

    // Coefficient-sum barrier for positive non-increasing solutions.
    if (auto barrier = factor_barrier(eq, 0.0, an.n_to + 1.0, spec.sim_config().grid)) {
      rep.add("factor_barrier.r", *barrier);
      Verdict v;
      v.tag = VerdictTag::NoPositiveNonincreasing;
      v.method = "factor-barrier";
      v.evidence.add("r", *barrier);
      verdicts.push_back(v);
    } else {
      rep.add("factor_barrier.r", "none");
    }

    Verdict overall = pick_overall(verdicts);
    Report head;
    head.add("verdict", to_string(overall.tag));
    head.add("theorem", overall.method);
    head.extend("evidence.", overall.evidence);
    head.extend("", rep);

    fs::create_directories(opts.out_dir);
    write_text(fs::path(opts.out_dir) / (spec.label + "_analysis.txt"), head.str());
    std::cout << head.str();
    return overall.tag == VerdictTag::Inconclusive ? 3 : 0;
  } catch (const std::exception& e) {
    return exit_for(e);
  }
}

int cmd_envelopes(const Options& opts) {
  try {
    SpecFile spec = load_spec(opts);
    EquationSpec eq = spec.equation();
    const auto& an = spec.analysis;
    EnvelopeTable rig = compute_envelopes(eq, an.n_from, an.n_to, opts.alpha,
                                          EnvelopeMode::Rigorous, spec.sim_config().grid);
    EnvelopeTable smp = compute_envelopes(eq, an.n_from, an.n_to, opts.alpha,
                                          EnvelopeMode::Sampled, spec.sim_config().grid);
    fs::create_directories(opts.out_dir);
    fs::path path = fs::path(opts.out_dir) / (spec.label + "_envelopes.csv");
    std::ofstream csv(path);
    if (!csv) throw Error("cannot write " + path.string());
    write_envelope_csv(csv, rig, true);
    write_envelope_csv(csv, smp, false);
    std::cout << "wrote " << path.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    return exit_for(e);
  }
}

int cmd_bound(const Options& opts) {
  try {
    SpecFile spec = load_spec(opts);
    if (!spec.certificate) throw Error("bound requires a 'certificate' block in the spec");
    EquationSpec eq = spec.equation();
    const auto& an = spec.analysis;
    EnvelopeTable env =
        compute_envelopes(eq, std::max(an.n_from, 0), an.n_to, 0.0, EnvelopeMode::Rigorous);
    Certificate cert =
        spec.certificate_values(std::max<long long>(an.n_to + 1, spec.sim.T + 1));
    CertificateCheckResult check = verify_certificate(cert, env);

    Report rep;
    rep.add("label", spec.label);
    rep.add("command", "bound");
    add_interpolation_note(rep);
    rep.add("certificate.pass", check.pass);
    fs::create_directories(opts.out_dir);
    if (!check.pass) {
      rep.add("certificate.failed_condition", check.condition);
      rep.add("certificate.failed_index", check.index);
      write_text(fs::path(opts.out_dir) / (spec.label + "_bounds.txt"), rep.str());
      std::cout << rep.str();
      return 1;
    }
    auto [traj, bounds] = construct_bounded_solution(eq, cert, spec.sim.T, spec.sim_config().grid);
    {
      std::ofstream csv(fs::path(opts.out_dir) / (spec.label + "_bounded.csv"));
      traj.write_csv(csv);
    }
    rep.add("bounds.violations", static_cast<long long>(bounds.violations));
    rep.add("bounds.worst_violation", bounds.worst_violation);
    for (const BoundsEntry& e : bounds.entries) {
      std::string key = "bounds.n[" + std::to_string(e.n) + "]";
      rep.add(key + ".piece_min", e.piece_min);
      rep.add(key + ".piece_max", e.piece_max);
      rep.add(key + ".u", e.u);
      rep.add(key + ".V", e.v);
      rep.add(key + ".ok", e.ok);
    }
    write_text(fs::path(opts.out_dir) / (spec.label + "_bounds.txt"), rep.str());
    std::cout << rep.str();
    return 0;
  } catch (const std::exception& e) {
    return exit_for(e);
  }
}

}  // namespace ctdde::cli
