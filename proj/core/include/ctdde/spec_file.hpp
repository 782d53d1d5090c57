#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ctdde/analysis.hpp"
#include "ctdde/engine.hpp"

namespace ctdde {

/// Equation-spec document (JSON). Schema:
///
///   {
///     "label": string,
///     "terms": [ {"a": expr-string, "h": expr-string}, ... ],   (required)
///     "history": {"expr": expr-string, "start": int <= 0},      (optional)
///     "sim": {"T": int >= 1, "Q": int >= 2},                    (optional)
///     "analysis": {
///       "n_range": [int, int],
///       "alpha_grid": int >= 1,
///       "t_scan": {"from": num, "to": num, "step": num > 0},
///       "g_expr": expr-string                                   (optional)
///     },                                                        (optional)
///     "certificate": {
///       "u": expr-string | [num, ...],
///       "V": expr-string | [num, ...],
///       "u_neg": [num, ...], "V_neg": [num, ...]                (optional)
///     }                                                         (optional)
///   }
///
/// Unknown keys, type mismatches and unparsable expressions throw
/// SchemaError (CLI exit code 2). Cross-field constraints (e.g. history
/// covering every delayed argument) surface at runtime.
struct SpecFile {
  struct TermSpec {
    std::string a, h;
  };
  struct HistorySpec {
    std::string expr;
    int start = 0;
  };
  struct SimSpec {
    int T = 20;
    int Q = 64;
  };
  struct TScanSpec {
    double from = 1.0, to = 20.0, step = 0.5;
  };
  struct AnalysisSpec {
    int n_from = 0, n_to = 30;
    int alpha_grid = 16;
    TScanSpec t_scan;
    std::optional<std::string> g_expr;
  };
  struct CertificateSpec {
    std::variant<std::string, std::vector<double>> u, v;
    std::vector<double> u_neg, v_neg;
  };

  std::string label = "unnamed";
  std::vector<TermSpec> terms;
  std::optional<HistorySpec> history;
  SimSpec sim;
  AnalysisSpec analysis;
  std::optional<CertificateSpec> certificate;

  static SpecFile from_json_text(const std::string& text);
  static SpecFile load(const std::string& path);

  /// Normalized deterministic serialization; parse . to_json_text is
  /// idempotent.
  std::string to_json_text() const;

  EquationSpec equation() const;
  std::optional<InitialCondition> initial() const;
  SimConfig sim_config() const;
  std::vector<double> alpha_values() const;
  std::optional<Expression> g_expression() const;
  /// Certificate values for n = 0..n_max (expressions are evaluated at the
  /// integers; lists must be long enough).
  Certificate certificate_values(long long n_max) const;
};

}  // namespace ctdde
