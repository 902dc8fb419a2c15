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

#include <cstdint>
#include <span>
#include <vector>

#include "qis/fields.hpp"
#include "qis/params.hpp"
#include "qis/problem.hpp"
#include "qis/result.hpp"
#include "qis/rng.hpp"

namespace qis {

// Baseline solvers. Every solver runs until its Budget (wall clock checked
// once per sweep / generation / integrator step, plus an optional iteration
// cap), is deterministic given (problem, seed, params, iteration cap), and
// returns a monotone improvement trace.

/// Metropolis single-flip annealing over a geometric temperature schedule.
/// One iteration = one sweep. Without an explicit cycle length the schedule
/// is stretched over the whole budget (measured sweep rate, or the cap);
/// leftover time starts a fresh random restart.
SolverResult simulated_annealing(const QuboProblem& problem, const RunOptions& options,
                                 const AnnealingParams& params = {});

/// Replica exchange on a geometric ladder. One iteration = one sweep of every replica.
SolverResult parallel_tempering(const QuboProblem& problem, const RunOptions& options,
                                const TemperingParams& params = {});

/// Tournament selection, uniform crossover, per-bit mutation, elitism.
/// One iteration = one generation.
SolverResult genetic_algorithm(const QuboProblem& problem, const RunOptions& options,
                               const GeneticParams& params = {});

/// Ballistic simulated bifurcation. One iteration = one integrator step.
///
///   y_i += dt * [ -(1 - a(t)) x_i + c0 * (sum_j Jt_ij x_j + ht_i) ]
///   x_i += dt * y_i
///   |x_i| > 1  ->  x_i = sign(x_i), y_i = 0        (inelastic wall)
///
/// with Jt = -J (symmetric) and ht = -h, so that the Ising energy
/// E = sum_{i<j} J_ij s_i s_j + sum h_i s_i is minimised. a(t) rises linearly
/// from pump_start to 1 over `steps_per_run`; spins are sign(x) (0 -> +1).
SolverResult simulated_bifurcation(const IsingProblem& problem, const RunOptions& options,
                                   const BifurcationParams& params = {});

/// Mean-field coherent Ising machine with Euler-Maruyama steps:
///   dx_i = [ (-1 + p(t) - x_i^2) x_i - eps (sum_j J_ij x_j + h_i) ] dt + noise sqrt(dt) N(0,1)
/// One iteration = one step. Amplitudes are clamped to [-clamp, clamp].
SolverResult cim_heuristic(const IsingProblem& problem, const RunOptions& options, const CimParams& params = {});

// ---------------------------------------------------------------------------
// Building blocks shared with the hybrid solver and the tests.
// ---------------------------------------------------------------------------

struct SweepStats {
    std::uint64_t accepted = 0;
    double max_uphill = 0.0;  // largest accepted energy increase
};

/// One in-order Metropolis sweep at temperature T. `energy` is updated in place.
SweepStats metropolis_sweep(const QuboProblem& problem, std::span<std::uint8_t> x, QuboFields& fields,
                            double temperature, Rng& rng, double& energy);

/// Replica swap acceptance min(1, exp((beta_a - beta_b) (E_a - E_b))).
double swap_acceptance(double beta_a, double beta_b, double energy_a, double energy_b) noexcept;

/// K temperatures t_min * (t_max / t_min)^(k / (K - 1)), ascending.
std::vector<double> geometric_ladder(double t_min, double t_max, std::size_t count);

/// Child takes each bit from `a` or `b` with probability 1/2.
BinaryAssignment uniform_crossover(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, Rng& rng);

/// Random binary string.
BinaryAssignment random_assignment(std::size_t n, Rng& rng);

}  // namespace qis
