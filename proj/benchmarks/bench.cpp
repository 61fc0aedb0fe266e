#include <benchmark/benchmark.h>

#include <cmath>

#include "cbi/cutpoints.hpp"
#include "cbi/engine.hpp"
#include "cbi/prior.hpp"
#include "cbi/quadrature.hpp"

namespace {

void BM_ConservativeConfidence(benchmark::State& state) {
    const cbi::Prior prior = cbi::Prior::beta(1, 10000);
    const auto n = static_cast<std::int64_t>(state.range(0));
    for (auto _ : state) {
        const auto r = cbi::conservative_confidence({1e-4, n, prior, 0.05, 0.05});
        benchmark::DoNotOptimize(r.conservative_confidence);
    }
}
BENCHMARK(BM_ConservativeConfidence)->Arg(10000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_CutpointSolve(benchmark::State& state) {
    const cbi::Prior prior = cbi::Prior::beta(1, 10000);
    const cbi::GFunctionContext ctx{state.range(0)};
    for (auto _ : state) {
        const auto cp = cbi::solve_cutpoints(prior, ctx, 1e-4, 0.05, 0.05);
        benchmark::DoNotOptimize(cp.c1_low);
    }
}
BENCHMARK(BM_CutpointSolve)->Arg(10000)->Arg(1000000)->Unit(benchmark::kMicrosecond);

void BM_LogQuadratureDeepUnderflow(benchmark::State& state) {
    const double n = 1e7;
    for (auto _ : state) {
        const auto r =
            cbi::integrate_log([n](double x) { return n * std::log1p(-x); }, 0.0, 1.0);
        benchmark::DoNotOptimize(r.log_value);
    }
}
BENCHMARK(BM_LogQuadratureDeepUnderflow)->Unit(benchmark::kMicrosecond);

void BM_IidPosterior(benchmark::State& state) {
    const cbi::Prior prior = cbi::Prior::beta(1, 10000);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cbi::iid_posterior(prior, 1e-4, state.range(0)));
    }
}
BENCHMARK(BM_IidPosterior)->Arg(10000)->Arg(10000000)->Unit(benchmark::kMicrosecond);

}  // namespace
