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

#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "qis/problem.hpp"

namespace qis {

struct TracePoint {
    double elapsed = 0.0;  // seconds since the run started
    double energy = 0.0;   // best-so-far after this improvement
};

/// Outcome of one solver run.
///
/// `best_assignment` is always binary; spin solvers report x = (1 + s) / 2.
/// Trace energies strictly decrease and the last one equals `best_energy`.
struct SolverResult {
    double best_energy = std::numeric_limits<double>::infinity();
    BinaryAssignment best_assignment;
    double time_to_best = 0.0;
    double wall_time = 0.0;
    std::uint64_t evaluations = 0;
    std::uint64_t iterations = 0;
    std::vector<TracePoint> trace;
};

/// Stopping rule. At least one limit must be set. Iterations are solver
/// specific (sweeps, generations, integrator steps, hybrid steps); with only
/// an iteration cap a run is a pure function of (problem, seed, params).
struct Budget {
    std::optional<double> seconds;
    std::optional<std::uint64_t> iterations;

    static Budget wall(double seconds) { return {seconds, std::nullopt}; }
    static Budget iteration_cap(std::uint64_t iterations) { return {std::nullopt, iterations}; }
    static Budget both(double seconds, std::uint64_t iterations) { return {seconds, iterations}; }
};

struct RunOptions {
    Budget budget = Budget::wall(1.0);
    std::uint64_t seed = 0;
    /// Stop as soon as the best energy is <= target (time-to-target runs).
    std::optional<double> target_energy;
};

/// Monotonic stopwatch bound to a Budget.
class RunClock {
 public:
    explicit RunClock(const Budget& budget);

    double elapsed() const noexcept;
    /// Seconds left, +inf without a time limit.
    double remaining() const noexcept;
    bool time_up() const noexcept;
    bool should_stop(std::uint64_t iterations_done) const noexcept;
    const Budget& budget() const noexcept { return budget_; }

 private:
    std::chrono::steady_clock::time_point start_;
    Budget budget_;
};

/// Keeps the incumbent and the improvement trace of one run.
class BestTracker {
 public:
    BestTracker(const RunClock& clock, std::optional<double> target = std::nullopt)
        : clock_(&clock), target_(target) {}

    /// Record `x` if better than the incumbent by more than 1e-12 relative. Returns true on improvement.
    bool offer(double energy, std::span<const std::uint8_t> x);

    bool has_incumbent() const noexcept { return !best_.empty(); }
    double best_energy() const noexcept { return best_energy_; }
    const BinaryAssignment& best_assignment() const noexcept { return best_; }
    bool target_reached() const noexcept { return target_ && best_energy_ <= *target_; }

    /// Close the run. `exact_energy` is the best assignment re-evaluated from
    /// scratch; it replaces the incrementally tracked value.
    SolverResult finish(double exact_energy, std::uint64_t evaluations, std::uint64_t iterations) const;

 private:
    const RunClock* clock_;
    std::optional<double> target_;
    double best_energy_ = std::numeric_limits<double>::infinity();
    BinaryAssignment best_;
    std::vector<TracePoint> trace_;
    double time_to_best_ = 0.0;
};

struct BatchResult {
    SolverResult best;
    std::vector<SolverResult> members;
    std::size_t best_index = 0;
};

/// Run `replicas` seeded runs (seed_base + r) and keep the minimum-energy
/// member (lowest index on ties).
BatchResult run_batch(std::size_t replicas, std::uint64_t seed_base,
                      const std::function<SolverResult(std::uint64_t seed)>& run);

}  // namespace qis
