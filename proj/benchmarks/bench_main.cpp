#include <benchmark/benchmark.h>

#include "ctdde/analysis.hpp"
#include "ctdde/engine.hpp"
#include "ctdde/envelope.hpp"
#include "ctdde/expr.hpp"

namespace {

using namespace ctdde;

const char* kCoefficient = "1/(2 + 0.5^(floor(t) - 2))";
const char* kDelay = "floor(t) - 0.5^floor(t)*(1 - frac(t))";
const char* kHistory = "(1 + 0.5^floor(t))*(1 - frac(t))";

EquationSpec worked_example() {
  EquationSpec eq;
  eq.label = "bench";
  eq.terms.push_back(Term{parse_expression(kCoefficient), parse_expression(kDelay)});
  return eq;
}

void BM_parse(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_expression(kDelay));
  }
}
BENCHMARK(BM_parse);

void BM_eval_point(benchmark::State& state) {
  Expression e = parse_expression(kCoefficient);
  double t = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(e.eval(t));
    t += 0.0625;
    if (t > 40.0) t = 1.0;
  }
}
BENCHMARK(BM_eval_point);

void BM_eval_interval(benchmark::State& state) {
  Expression e = parse_expression("0.03 + 0.003*cos(3*t)");
  for (auto _ : state) {
    benchmark::DoNotOptimize(e.eval_interval({4.0, 5.0}));
  }
}
BENCHMARK(BM_eval_interval);

void BM_simulate(benchmark::State& state) {
  EquationSpec eq = worked_example();
  InitialCondition init{parse_expression(kHistory), -1};
  SimConfig cfg;
  cfg.horizon = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(eq, init, cfg));
  }
}
BENCHMARK(BM_simulate)->Arg(10)->Arg(30);

void BM_envelopes_rigorous(benchmark::State& state) {
  EquationSpec eq = worked_example();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        compute_envelopes(eq, 1, 40, 0.0, EnvelopeMode::Rigorous));
  }
}
BENCHMARK(BM_envelopes_rigorous);

void BM_s_value(benchmark::State& state) {
  EquationSpec eq;
  eq.terms.push_back(Term{parse_expression("0.3"), parse_expression("t - 10")});
  DelayMajorant g = majorant_from(parse_expression("t - 10"));
  for (auto _ : state) {
    benchmark::DoNotOptimize(s_value(eq, g, 30.0));
  }
}
BENCHMARK(BM_s_value);

}  // namespace

BENCHMARK_MAIN();
