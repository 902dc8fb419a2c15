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

#include "qis/result.hpp"

#include <cmath>

#include "qis/error.hpp"

namespace qis {

RunClock::RunClock(const Budget& budget) : start_(std::chrono::steady_clock::now()), budget_(budget) {
    if (!budget_.seconds && !budget_.iterations) throw ConfigError("budget needs a time limit or an iteration cap");
    if (budget_.seconds && !(*budget_.seconds >= 0.0)) throw ConfigError("time budget must be non-negative");
}

double RunClock::elapsed() const noexcept {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

double RunClock::remaining() const noexcept {
    if (!budget_.seconds) return std::numeric_limits<double>::infinity();
    return *budget_.seconds - elapsed();
}

bool RunClock::time_up() const noexcept { return budget_.seconds && elapsed() >= *budget_.seconds; }

bool RunClock::should_stop(std::uint64_t iterations_done) const noexcept {
    if (budget_.iterations && iterations_done >= *budget_.iterations) return true;
    return time_up();
}

bool BestTracker::offer(double energy, std::span<const std::uint8_t> x) {
    // Round-off from incremental updates is not progress.
    const double margin = best_.empty() ? 0.0 : 1e-12 * (1.0 + std::abs(best_energy_));
    if (!(energy < best_energy_ - margin)) return false;
    best_energy_ = energy;
    best_.assign(x.begin(), x.end());
    time_to_best_ = clock_->elapsed();
    trace_.push_back({time_to_best_, energy});
    return true;
}

SolverResult BestTracker::finish(double exact_energy, std::uint64_t evaluations, std::uint64_t iterations) const {
    SolverResult result;
    result.best_energy = exact_energy;
    result.best_assignment = best_;
    result.time_to_best = time_to_best_;
    result.wall_time = clock_->elapsed();
    result.evaluations = evaluations;
    result.iterations = iterations;
    result.trace = trace_;
    // Incremental energies may drift by a few ulps; the trace ends on the exact value.
    if (!result.trace.empty()) {
        result.trace.back().energy = exact_energy;
        while (result.trace.size() >= 2 && !(result.trace[result.trace.size() - 2].energy > exact_energy)) {
            result.trace.erase(result.trace.end() - 2);
        }
    }
    return result;
}

BatchResult run_batch(std::size_t replicas, std::uint64_t seed_base,
                      const std::function<SolverResult(std::uint64_t seed)>& run) {
    if (replicas == 0) throw ConfigError("batch size must be at least 1");
    BatchResult batch;
    batch.members.reserve(replicas);
    for (std::size_t r = 0; r < replicas; ++r) {
        batch.members.push_back(run(seed_base + r));
        if (batch.members.back().best_energy < batch.members[batch.best_index].best_energy) batch.best_index = r;
    }
    batch.best = batch.members[batch.best_index];
    return batch;
}

}  // namespace qis
