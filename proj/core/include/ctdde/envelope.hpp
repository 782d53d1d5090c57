#pragma once

#include <iosfwd>
#include <vector>

#include "ctdde/engine.hpp"

namespace ctdde {

enum class EnvelopeMode { Rigorous, Sampled };

/// Per-integer-interval lower/upper bounds for the coefficients and for
/// the floors of the delay arguments, over [n+alpha, n+1+alpha).
///
/// Rigorous mode carries interval-arithmetic enclosures: a_low <= inf a_k,
/// a_high >= sup a_k, hf_low <= inf floor(h_k), hf_high >= sup floor(h_k).
/// Sampled mode carries grid extrema, which over-estimate the inf and
/// under-estimate the sup; they are diagnostics and never feed a verdict.
struct EnvelopeTable {
  int n_from = 0;
  int n_to = 0;
  double alpha = 0.0;
  EnvelopeMode mode = EnvelopeMode::Rigorous;

  // Indexed [k][n - n_from].
  std::vector<std::vector<double>> a_low, a_high;
  std::vector<std::vector<long long>> hf_low, hf_high;

  int count() const { return n_to - n_from + 1; }
  double alow(int k, int n) const { return a_low[k][static_cast<std::size_t>(n - n_from)]; }
  double ahigh(int k, int n) const { return a_high[k][static_cast<std::size_t>(n - n_from)]; }
  long long hflow(int k, int n) const { return hf_low[k][static_cast<std::size_t>(n - n_from)]; }
  long long hfhigh(int k, int n) const { return hf_high[k][static_cast<std::size_t>(n - n_from)]; }
};

/// Envelope sequences for n in [n_from, n_to], shifted by alpha in [0, 1).
/// The sampling grid is used by Sampled mode only.
EnvelopeTable compute_envelopes(const EquationSpec& spec, int n_from, int n_to, double alpha,
                                EnvelopeMode mode, GridSpec grid = {});

/// CSV rows `n,k,a_low,a_high,hf_low,hf_high,mode,alpha` (k is 1-based).
void write_envelope_csv(std::ostream& os, const EnvelopeTable& table, bool header = true);

/// Grid-sampled running suprema g_k(t) = sup_{s<=t} h_k(s) and their
/// pointwise max g. Non-decreasing by construction. The grid running max
/// can undershoot an unattained supremum by up to one grid step; exact
/// majorants can be supplied as expressions where that matters.
struct RunningSup {
  GridSpec grid;
  double t_to = 0;
  std::vector<std::vector<double>> per_term;  // g_k at abscissas j/Q
  std::vector<double> g;                      // max over k

  /// Value of g at the greatest grid abscissa <= t.
  double at(double t) const;
};

RunningSup running_sup(const EquationSpec& spec, double t_to, GridSpec grid = {});

}  // namespace ctdde
