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

#include "qis/exact.hpp"
#include "qis/fields.hpp"
#include "qis/instances.hpp"
#include "qis/relax.hpp"
#include "qis/rng.hpp"

namespace {

qis::QuboProblem sk_qubo(std::size_t n) {
    return qis::ising_to_qubo(qis::sk_to_ising(qis::sk_generate(n, 1)));
}

qis::BinaryAssignment random_bits(std::size_t n, std::uint64_t seed) {
    qis::Rng rng(seed);
    qis::BinaryAssignment x(n);
    for (auto& b : x) b = rng.coin();
    return x;
}

void BM_Evaluate(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto p = sk_qubo(n);
    const auto x = random_bits(n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(qis::evaluate(p, x));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.terms().size()));
}
BENCHMARK(BM_Evaluate)->Arg(128)->Arg(512)->Arg(2000);

void BM_FlipDelta(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto p = sk_qubo(n);
    auto x = random_bits(n, 3);
    qis::QuboFields fields(p, x);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fields.delta(x, i));
        fields.flip(p, x, i);
        i = (i + 7) % n;
    }
}
BENCHMARK(BM_FlipDelta)->Arg(128)->Arg(512);

void BM_SparseMaxCutFlip(benchmark::State& state) {
    const auto g = qis::generate_maxcut(800, 1600, true, 1);
    const auto p = qis::ising_to_qubo(qis::maxcut_to_ising(g));
    auto x = random_bits(800, 4);
    qis::QuboFields fields(p, x);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fields.delta(x, i));
        fields.flip(p, x, i);
        i = (i + 13) % 800;
    }
}
BENCHMARK(BM_SparseMaxCutFlip);

void BM_RelaxedGradient(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto p = sk_qubo(n);
    std::vector<double> y(n, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(qis::relaxed_energy_and_gradient(p, y));
}
BENCHMARK(BM_RelaxedGradient)->Arg(128)->Arg(512);

void BM_BruteForce(benchmark::State& state) {
    const auto p = sk_qubo(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(qis::brute_force(p));
}
BENCHMARK(BM_BruteForce)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_BranchAndBound(benchmark::State& state) {
    const auto p = sk_qubo(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(qis::branch_and_bound(p));
}
BENCHMARK(BM_BranchAndBound)->Arg(16)->Arg(25)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
