#include "ctdde/spec_file.hpp"

#include <fstream>
#include <sstream>

#include "ctdde/errors.hpp"
#include "json.hpp"

namespace ctdde {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void schema_fail(const std::string& what) { throw SchemaError(what); }

void check_keys(const ordered_json& obj, const char* where,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        ok = true;
        break;
      }
    }
    if (!ok) schema_fail(std::string("unknown key '") + it.key() + "' in " + where);
  }
}

std::string require_string(const ordered_json& obj, const char* key, const char* where) {
  if (!obj.contains(key) || !obj[key].is_string()) {
    schema_fail(std::string(where) + " requires string field '" + key + "'");
  }
  return obj[key].get<std::string>();
}

double require_number(const ordered_json& obj, const char* key, const char* where) {
  if (!obj.contains(key) || !obj[key].is_number()) {
    schema_fail(std::string(where) + " requires numeric field '" + key + "'");
  }
  return obj[key].get<double>();
}

int require_int(const ordered_json& obj, const char* key, const char* where) {
  if (!obj.contains(key) || !obj[key].is_number_integer()) {
    schema_fail(std::string(where) + " requires integer field '" + key + "'");
  }
  return obj[key].get<int>();
}

// Validates the expression text immediately so schema errors surface at
// load time, not mid-analysis.
std::string checked_expr(const std::string& text, const std::string& where) {
  try {
    parse_expression(text);
  } catch (const ParseError& e) {
    schema_fail("expression in " + where + " does not parse: " + e.what());
  }
  return text;
}

std::vector<double> number_array(const ordered_json& arr, const std::string& where) {
  if (!arr.is_array()) schema_fail(where + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : arr) {
    if (!v.is_number()) schema_fail(where + " must contain numbers only");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

SpecFile SpecFile::from_json_text(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    schema_fail(std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) schema_fail("top level must be an object");
  check_keys(doc, "top level", {"label", "terms", "history", "sim", "analysis", "certificate"});

  SpecFile spec;
  if (doc.contains("label")) {
    if (!doc["label"].is_string()) schema_fail("'label' must be a string");
    spec.label = doc["label"].get<std::string>();
  }

  if (!doc.contains("terms") || !doc["terms"].is_array() || doc["terms"].empty()) {
    schema_fail("'terms' must be a non-empty array");
  }
  for (const auto& t : doc["terms"]) {
    if (!t.is_object()) schema_fail("each term must be an object");
    check_keys(t, "term", {"a", "h"});
    TermSpec ts;
    ts.a = checked_expr(require_string(t, "a", "term"), "term.a");
    ts.h = checked_expr(require_string(t, "h", "term"), "term.h");
    spec.terms.push_back(std::move(ts));
  }

  if (doc.contains("history")) {
    const auto& h = doc["history"];
    if (!h.is_object()) schema_fail("'history' must be an object");
    check_keys(h, "history", {"expr", "start"});
    HistorySpec hs;
    hs.expr = checked_expr(require_string(h, "expr", "history"), "history.expr");
    hs.start = require_int(h, "start", "history");
    if (hs.start > 0) schema_fail("history.start must be <= 0");
    spec.history = std::move(hs);
  }

  if (doc.contains("sim")) {
    const auto& s = doc["sim"];
    if (!s.is_object()) schema_fail("'sim' must be an object");
    check_keys(s, "sim", {"T", "Q"});
    if (s.contains("T")) spec.sim.T = require_int(s, "T", "sim");
    if (s.contains("Q")) spec.sim.Q = require_int(s, "Q", "sim");
    if (spec.sim.T < 1) schema_fail("sim.T must be >= 1");
    if (spec.sim.Q < 2) schema_fail("sim.Q must be >= 2");
  }

  if (doc.contains("analysis")) {
    const auto& a = doc["analysis"];
    if (!a.is_object()) schema_fail("'analysis' must be an object");
    check_keys(a, "analysis", {"n_range", "alpha_grid", "t_scan", "g_expr"});
    if (a.contains("n_range")) {
      if (!a["n_range"].is_array() || a["n_range"].size() != 2 ||
          !a["n_range"][0].is_number_integer() || !a["n_range"][1].is_number_integer()) {
        schema_fail("analysis.n_range must be [int, int]");
      }
      spec.analysis.n_from = a["n_range"][0].get<int>();
      spec.analysis.n_to = a["n_range"][1].get<int>();
      if (spec.analysis.n_from > spec.analysis.n_to) schema_fail("analysis.n_range is empty");
    }
    if (a.contains("alpha_grid")) {
      spec.analysis.alpha_grid = require_int(a, "alpha_grid", "analysis");
      if (spec.analysis.alpha_grid < 1) schema_fail("analysis.alpha_grid must be >= 1");
    }
    if (a.contains("t_scan")) {
      const auto& ts = a["t_scan"];
      if (!ts.is_object()) schema_fail("analysis.t_scan must be an object");
      check_keys(ts, "t_scan", {"from", "to", "step"});
      spec.analysis.t_scan.from = require_number(ts, "from", "t_scan");
      spec.analysis.t_scan.to = require_number(ts, "to", "t_scan");
      spec.analysis.t_scan.step = require_number(ts, "step", "t_scan");
      if (!(spec.analysis.t_scan.step > 0)) schema_fail("t_scan.step must be > 0");
      if (spec.analysis.t_scan.to < spec.analysis.t_scan.from)
        schema_fail("t_scan range is empty");
    }
    if (a.contains("g_expr")) {
      if (!a["g_expr"].is_string()) schema_fail("analysis.g_expr must be a string");
      spec.analysis.g_expr =
          checked_expr(a["g_expr"].get<std::string>(), "analysis.g_expr");
    }
  }

  if (doc.contains("certificate")) {
    const auto& c = doc["certificate"];
    if (!c.is_object()) schema_fail("'certificate' must be an object");
    check_keys(c, "certificate", {"u", "V", "u_neg", "V_neg"});
    CertificateSpec cs;
    auto read_side = [&](const char* key) -> std::variant<std::string, std::vector<double>> {
      if (!c.contains(key)) schema_fail(std::string("certificate requires '") + key + "'");
      if (c[key].is_string()) {
        return checked_expr(c[key].get<std::string>(), std::string("certificate.") + key);
      }
      return number_array(c[key], std::string("certificate.") + key);
    };
    cs.u = read_side("u");
    cs.v = read_side("V");
    if (c.contains("u_neg")) cs.u_neg = number_array(c["u_neg"], "certificate.u_neg");
    if (c.contains("V_neg")) cs.v_neg = number_array(c["V_neg"], "certificate.V_neg");
    spec.certificate = std::move(cs);
  }

  return spec;
}

SpecFile SpecFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open spec file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::string SpecFile::to_json_text() const {
  ordered_json doc;
  doc["label"] = label;
  doc["terms"] = ordered_json::array();
  for (const auto& t : terms) {
    doc["terms"].push_back(ordered_json{{"a", t.a}, {"h", t.h}});
  }
  if (history) {
    doc["history"] = ordered_json{{"expr", history->expr}, {"start", history->start}};
  }
  doc["sim"] = ordered_json{{"T", sim.T}, {"Q", sim.Q}};
  ordered_json a;
  a["n_range"] = ordered_json::array({analysis.n_from, analysis.n_to});
  a["alpha_grid"] = analysis.alpha_grid;
  a["t_scan"] = ordered_json{{"from", analysis.t_scan.from},
                             {"to", analysis.t_scan.to},
                             {"step", analysis.t_scan.step}};
  if (analysis.g_expr) a["g_expr"] = *analysis.g_expr;
  doc["analysis"] = std::move(a);
  if (certificate) {
    ordered_json c;
    auto put_side = [&](const char* key,
                        const std::variant<std::string, std::vector<double>>& side) {
      if (std::holds_alternative<std::string>(side)) {
        c[key] = std::get<std::string>(side);
      } else {
        c[key] = std::get<std::vector<double>>(side);
      }
    };
    put_side("u", certificate->u);
    put_side("V", certificate->v);
    if (!certificate->u_neg.empty()) c["u_neg"] = certificate->u_neg;
    if (!certificate->v_neg.empty()) c["V_neg"] = certificate->v_neg;
    doc["certificate"] = std::move(c);
  }
  return doc.dump(2) + "\n";
}

EquationSpec SpecFile::equation() const {
  EquationSpec eq;
  eq.label = label;
  for (const auto& t : terms) {
    eq.terms.push_back(Term{parse_expression(t.a), parse_expression(t.h)});
  }
  return eq;
}

std::optional<InitialCondition> SpecFile::initial() const {
  if (!history) return std::nullopt;
  InitialCondition init;
  init.history = parse_expression(history->expr);
  init.history_start = history->start;
  return init;
}

SimConfig SpecFile::sim_config() const {
  SimConfig cfg;
  cfg.horizon = sim.T;
  cfg.grid.q = sim.Q;
  return cfg;
}

std::vector<double> SpecFile::alpha_values() const {
  std::vector<double> alphas;
  alphas.reserve(static_cast<std::size_t>(analysis.alpha_grid));
  for (int j = 0; j < analysis.alpha_grid; ++j) {
    alphas.push_back(static_cast<double>(j) / analysis.alpha_grid);
  }
  return alphas;
}

std::optional<Expression> SpecFile::g_expression() const {
  if (!analysis.g_expr) return std::nullopt;
  return parse_expression(*analysis.g_expr);
}

Certificate SpecFile::certificate_values(long long n_max) const {
  if (!certificate) throw AnalysisError("spec file has no certificate");
  Certificate cert;
  auto fill = [&](const std::variant<std::string, std::vector<double>>& side,
                  std::vector<double>& out, const char* name) {
    if (std::holds_alternative<std::string>(side)) {
      Expression e = parse_expression(std::get<std::string>(side));
      for (long long n = 0; n <= n_max; ++n) out.push_back(e.eval(static_cast<double>(n)));
    } else {
      out = std::get<std::vector<double>>(side);
      if (static_cast<long long>(out.size()) <= n_max) {
        throw AnalysisError(std::string("certificate ") + name + " list too short: need " +
                            std::to_string(n_max + 1) + " values");
      }
    }
  };
  fill(certificate->u, cert.u, "u");
  fill(certificate->v, cert.v, "V");
  cert.u_neg = certificate->u_neg;
  cert.v_neg = certificate->v_neg;
  return cert;
}

}  // namespace ctdde
