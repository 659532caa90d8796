// Throughput of the hot paths: field evaluation, the adaptive volume
// integral at several tolerances, the loop quadrature, and a full suite run.

#include <benchmark/benchmark.h>

#include "abphase/consistency.hpp"
#include "abphase/phase.hpp"
#include "abphase/scenario.hpp"

using namespace abphase;

namespace {

Scenario desk() { return default_scenario(); }

void BM_CoulombField(benchmark::State& state) {
    Scenario sc = desk();
    PointCharge ch = sc.trajectory.charge_at(0.0, sc.charge_q);
    Vec3 p{0.3, -0.2, 1.7, Quantity::position};
    for (auto _ : state) {
        benchmark::DoNotOptimize(coulomb_field(ch, p, sc.units, &sc.solenoid));
    }
}
BENCHMARK(BM_CoulombField);

void BM_FieldMomentum(benchmark::State& state) {
    Scenario sc = desk();
    sc.quadrature.rel_tol = 1.0 / static_cast<double>(state.range(0));
    PointCharge ch = sc.trajectory.charge_at(0.0, sc.charge_q);
    std::size_t evals = 0;
    for (auto _ : state) {
        VectorIntegralResult r = field_momentum(sc.solenoid, ch, sc.quadrature, sc.units);
        benchmark::DoNotOptimize(r);
        evals = r.evaluations;
    }
    state.counters["evals"] = static_cast<double>(evals);
}
BENCHMARK(BM_FieldMomentum)->Arg(10000)->Arg(1000000)->Arg(100000000);

void BM_LoopPhaseAB(benchmark::State& state) {
    Scenario sc = desk();
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            phase_ab(sc.trajectory, sc.solenoid, sc.quadrature, sc.units, sc.charge_q));
    }
}
BENCHMARK(BM_LoopPhaseAB);

void BM_ConsistencySuite(benchmark::State& state) {
    Scenario sc = desk();
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_consistency_suite(sc));
    }
}
BENCHMARK(BM_ConsistencySuite);

} // namespace

BENCHMARK_MAIN();
