// Copyright 2026 The QIS Solver Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include <benchmark/benchmark.h>

#include "qis/heuristics.hpp"
#include "qis/instances.hpp"
#include "qis/qis.hpp"

namespace {

// Fixed work per iteration: each run is capped at state.range(0) solver iterations.

const qis::IsingProblem& sk128() {
    static const qis::IsingProblem p = qis::sk_to_ising(qis::sk_generate(128, 0));
    return p;
}

const qis::QuboProblem& sk128_qubo() {
    static const qis::QuboProblem q = qis::ising_to_qubo(sk128());
    return q;
}

qis::RunOptions capped(const benchmark::State& state) {
    return {qis::Budget::iteration_cap(static_cast<std::uint64_t>(state.range(0))), 1, std::nullopt};
}

void report(benchmark::State& state, const qis::SolverResult& r) {
    state.counters["energy"] = r.best_energy;
}

void BM_SimulatedAnnealing(benchmark::State& state) {
    qis::SolverResult r;
    for (auto _ : state) r = qis::simulated_annealing(sk128_qubo(), capped(state));
    report(state, r);
}
BENCHMARK(BM_SimulatedAnnealing)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ParallelTempering(benchmark::State& state) {
    qis::SolverResult r;
    for (auto _ : state) r = qis::parallel_tempering(sk128_qubo(), capped(state));
    report(state, r);
}
BENCHMARK(BM_ParallelTempering)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_GeneticAlgorithm(benchmark::State& state) {
    qis::SolverResult r;
    for (auto _ : state) r = qis::genetic_algorithm(sk128_qubo(), capped(state));
    report(state, r);
}
BENCHMARK(BM_GeneticAlgorithm)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SimulatedBifurcation(benchmark::State& state) {
    qis::SolverResult r;
    for (auto _ : state) r = qis::simulated_bifurcation(sk128(), capped(state));
    report(state, r);
}
BENCHMARK(BM_SimulatedBifurcation)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_CoherentIsingMachine(benchmark::State& state) {
    qis::SolverResult r;
    for (auto _ : state) r = qis::cim_heuristic(sk128(), capped(state));
    report(state, r);
}
BENCHMARK(BM_CoherentIsingMachine)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_QisMode(benchmark::State& state) {
    const auto mode = qis::ModeConfig::from_index(static_cast<std::size_t>(state.range(1)));
    state.SetLabel(mode.id());
    qis::SolverResult r;
    for (auto _ : state) r = qis::run_mode(sk128_qubo(), mode, capped(state));
    report(state, r);
}
BENCHMARK(BM_QisMode)->ArgsProduct({{100}, {0, 1, 2, 3, 4, 5, 6, 7, 8}})->Unit(benchmark::kMillisecond);

void BM_QisSolve(benchmark::State& state) {
    qis::SolverResult r;
    for (auto _ : state) r = qis::qis_solve(sk128_qubo(), capped(state)).result;
    report(state, r);
}
BENCHMARK(BM_QisSolve)->Arg(300)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
