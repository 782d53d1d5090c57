#include "ctdde/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "ctdde/errors.hpp"
#include "ctdde/util.hpp"

namespace ctdde {

EnvelopeTable compute_envelopes(const EquationSpec& spec, int n_from, int n_to, double alpha,
                                EnvelopeMode mode, GridSpec grid) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw AnalysisError("alpha must lie in [0, 1)");
  if (n_from > n_to) throw AnalysisError("empty envelope range");

  EnvelopeTable table;
  table.n_from = n_from;
  table.n_to = n_to;
  table.alpha = alpha;
  table.mode = mode;
  const int m = spec.m();
  const int count = n_to - n_from + 1;
  table.a_low.assign(m, std::vector<double>(count));
  table.a_high.assign(m, std::vector<double>(count));
  table.hf_low.assign(m, std::vector<long long>(count));
  table.hf_high.assign(m, std::vector<long long>(count));

  for (int k = 0; k < m; ++k) {
    const Term& term = spec.terms[static_cast<std::size_t>(k)];
    for (int n = n_from; n <= n_to; ++n) {
      const std::size_t idx = static_cast<std::size_t>(n - n_from);
      double lo = n + alpha;
      // Largest representable point of the half-open interval
      // [n+alpha, n+1+alpha); keeps floors exact on [n, n+1).
      double hi = std::nextafter(n + 1.0 + alpha, -std::numeric_limits<double>::infinity());
      if (mode == EnvelopeMode::Rigorous) {
        Interval dom(lo, hi);
        Interval ia, ih;
        try {
          ia = term.a.eval_interval(dom);
          ih = term.h.eval_interval(dom);
        } catch (const Error& e) {
          throw AnalysisError("envelope of term " + std::to_string(k + 1) + " on [" +
                              util::fmt_double(lo) + ", " + util::fmt_double(hi) +
                              "] failed: " + e.what());
        }
        table.a_low[static_cast<std::size_t>(k)][idx] = ia.lo;
        table.a_high[static_cast<std::size_t>(k)][idx] = ia.hi;
        table.hf_low[static_cast<std::size_t>(k)][idx] = static_cast<long long>(std::floor(ih.lo));
        table.hf_high[static_cast<std::size_t>(k)][idx] =
            static_cast<long long>(std::floor(ih.hi));
      } else {
        double amin = std::numeric_limits<double>::infinity();
        double amax = -std::numeric_limits<double>::infinity();
        long long hmin = std::numeric_limits<long long>::max();
        long long hmax = std::numeric_limits<long long>::min();
        for (int j = 0; j < grid.q; ++j) {
          double s = n + alpha + static_cast<double>(j) / grid.q;
          double a = term.a.eval(s);
          double hf = std::floor(term.h.eval(s));
          amin = std::min(amin, a);
          amax = std::max(amax, a);
          hmin = std::min(hmin, static_cast<long long>(hf));
          hmax = std::max(hmax, static_cast<long long>(hf));
        }
        table.a_low[static_cast<std::size_t>(k)][idx] = amin;
        table.a_high[static_cast<std::size_t>(k)][idx] = amax;
        table.hf_low[static_cast<std::size_t>(k)][idx] = hmin;
        table.hf_high[static_cast<std::size_t>(k)][idx] = hmax;
      }
      // h_k(t) <= t bounds the floor by n on unshifted intervals.
      if (alpha == 0.0 && table.hf_high[static_cast<std::size_t>(k)][idx] > n) {
        throw AnalysisError("delay floor bound exceeds n for term " + std::to_string(k + 1) +
                            " at n = " + std::to_string(n) + " (h_k(t) <= t violated?)");
      }
    }
  }
  return table;
}

void write_envelope_csv(std::ostream& os, const EnvelopeTable& table, bool header) {
  if (header) os << "n,k,a_low,a_high,hf_low,hf_high,mode,alpha\n";
  const char* mode = table.mode == EnvelopeMode::Rigorous ? "rigorous" : "sampled";
  for (int n = table.n_from; n <= table.n_to; ++n) {
    for (std::size_t k = 0; k < table.a_low.size(); ++k) {
      os << n << ',' << (k + 1) << ',' << util::fmt_double(table.alow(static_cast<int>(k), n))
         << ',' << util::fmt_double(table.ahigh(static_cast<int>(k), n)) << ','
         << table.hflow(static_cast<int>(k), n) << ',' << table.hfhigh(static_cast<int>(k), n)
         << ',' << mode << ',' << util::fmt_double(table.alpha) << '\n';
    }
  }
}

double RunningSup::at(double t) const {
  if (g.empty()) throw AnalysisError("running sup not computed");
  long long i = static_cast<long long>(std::floor(t * grid.q));
  if (i < 0) throw AnalysisError("running sup queried before t = 0");
  i = std::min<long long>(i, static_cast<long long>(g.size()) - 1);
  return g[static_cast<std::size_t>(i)];
}

RunningSup running_sup(const EquationSpec& spec, double t_to, GridSpec grid) {
  if (t_to <= 0) throw AnalysisError("running sup horizon must be positive");
  RunningSup rs;
  rs.grid = grid;
  rs.t_to = t_to;
  const long long count = static_cast<long long>(std::floor(t_to * grid.q)) + 1;
  rs.per_term.assign(static_cast<std::size_t>(spec.m()),
                     std::vector<double>(static_cast<std::size_t>(count)));
  rs.g.assign(static_cast<std::size_t>(count), -std::numeric_limits<double>::infinity());
  for (int k = 0; k < spec.m(); ++k) {
    double run = -std::numeric_limits<double>::infinity();
    for (long long i = 0; i < count; ++i) {
      double t = static_cast<double>(i) / grid.q;
      run = std::max(run, spec.terms[static_cast<std::size_t>(k)].h.eval(t));
      rs.per_term[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = run;
      rs.g[static_cast<std::size_t>(i)] = std::max(rs.g[static_cast<std::size_t>(i)], run);
    }
  }
  return rs;
}

}  // namespace ctdde
