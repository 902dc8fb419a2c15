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

#include "qis/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qis/error.hpp"

namespace qis {
namespace {

constexpr std::uint64_t kResyncInterval = 1024;

double default_scale(double max_abs) { return max_abs > 0.0 ? max_abs : 1.0; }

SolverResult finish_qubo(const QuboProblem& p, const BestTracker& tracker, std::uint64_t evals, std::uint64_t iters) {
    const double exact = tracker.has_incumbent() ? evaluate(p, tracker.best_assignment()) : p.offset();
    return tracker.finish(exact, evals, iters);
}

SolverResult finish_ising(const IsingProblem& p, const BestTracker& tracker, std::uint64_t evals,
                          std::uint64_t iters) {
    const double exact = tracker.has_incumbent() ? evaluate(p, to_spins(tracker.best_assignment())) : p.offset();
    return tracker.finish(exact, evals, iters);
}

bool done(const RunClock& clock, const BestTracker& tracker, std::uint64_t iterations) {
    return tracker.target_reached() || clock.should_stop(iterations);
}

std::uint64_t remaining_cap(const Budget& budget, std::uint64_t used) {
    if (!budget.iterations) return UINT64_MAX;
    return *budget.iterations > used ? *budget.iterations - used : 0;
}

}  // namespace

BinaryAssignment random_assignment(std::size_t n, Rng& rng) {
    BinaryAssignment x(n);
    std::size_t i = 0;
    while (i < n) {
        std::uint64_t bits = rng.next();
        for (int b = 0; b < 64 && i < n; ++b, ++i) {
            x[i] = static_cast<std::uint8_t>(bits & 1u);
            bits >>= 1;
        }
    }
    return x;
}

SweepStats metropolis_sweep(const QuboProblem& problem, std::span<std::uint8_t> x, QuboFields& fields,
                            double temperature, Rng& rng, double& energy) {
    SweepStats stats;
    const double beta = temperature > 0.0 ? 1.0 / temperature : std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = fields.delta(x, i);
        bool accept = d <= 0.0;
        if (!accept && std::isfinite(beta)) accept = rng.uniform() < std::exp(-d * beta);
        if (accept) {
            fields.flip(problem, x, i);
            energy += d;
            ++stats.accepted;
            stats.max_uphill = std::max(stats.max_uphill, d);
        }
    }
    return stats;
}

double swap_acceptance(double beta_a, double beta_b, double energy_a, double energy_b) noexcept {
    const double exponent = (beta_a - beta_b) * (energy_a - energy_b);
    return exponent >= 0.0 ? 1.0 : std::exp(exponent);
}

std::vector<double> geometric_ladder(double t_min, double t_max, std::size_t count) {
    if (count < 2) throw ConfigError("a temperature ladder needs at least 2 rungs");
    if (!(t_min > 0.0) || !(t_max >= t_min)) throw ConfigError("ladder needs 0 < t_min <= t_max");
    std::vector<double> ladder(count);
    for (std::size_t k = 0; k < count; ++k) {
        ladder[k] = t_min * std::pow(t_max / t_min, static_cast<double>(k) / static_cast<double>(count - 1));
    }
    return ladder;
}

BinaryAssignment uniform_crossover(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, Rng& rng) {
    if (a.size() != b.size()) throw DimensionError("crossover parents differ in length");
    BinaryAssignment child(a.size());
    std::size_t i = 0;
    while (i < a.size()) {
        std::uint64_t mask = rng.next();
        for (int k = 0; k < 64 && i < a.size(); ++k, ++i) {
            child[i] = (mask & 1u) ? a[i] : b[i];
            mask >>= 1;
        }
    }
    return child;
}

// ---------------------------------------------------------------------------
// Simulated annealing
// ---------------------------------------------------------------------------

SolverResult simulated_annealing(const QuboProblem& problem, const RunOptions& options,
                                 const AnnealingParams& params) {
    RunClock clock(options.budget);
    BestTracker tracker(clock, options.target_energy);
    Rng rng(options.seed);
    const std::size_t n = problem.size();

    const double t_start = params.t_start.value_or(2.0 * default_scale(problem.max_abs_coefficient()));
    const double t_end = std::min(params.t_end, 0.5 * t_start);
    const double log_ratio = std::log(t_end / t_start);

    std::uint64_t sweeps = 0;
    std::uint64_t evaluations = 0;

    do {
        BinaryAssignment x = random_assignment(n, rng);
        QuboFields fields(problem, x);
        double energy = evaluate(problem, x);
        ++evaluations;
        tracker.offer(energy, x);

        std::uint64_t length = params.sweeps_per_cycle;
        if (length == 0) {
            if (options.budget.seconds) {
                // Size the schedule from a short calibration at T_start.
                const double t0 = clock.elapsed();
                std::uint64_t probe = 0;
                while (probe < 4 && !done(clock, tracker, sweeps)) {
                    metropolis_sweep(problem, x, fields, t_start, rng, energy);
                    ++probe;
                    ++sweeps;
                    evaluations += n;
                    tracker.offer(energy, x);
                }
                const double per_sweep = std::max(1e-9, (clock.elapsed() - t0) / static_cast<double>(probe ? probe : 1));
                const double affordable = 0.95 * std::max(0.0, clock.remaining()) / per_sweep;
                length = static_cast<std::uint64_t>(std::clamp(affordable, 10.0, 1e12));
            } else {
                length = remaining_cap(options.budget, sweeps);
            }
        }
        length = std::clamp<std::uint64_t>(length, 1, std::max<std::uint64_t>(remaining_cap(options.budget, sweeps), 1));

        const double denom = length > 1 ? static_cast<double>(length - 1) : 1.0;
        for (std::uint64_t k = 0; k < length && !done(clock, tracker, sweeps); ++k) {
            const double temperature = t_start * std::exp(log_ratio * static_cast<double>(k) / denom);
            metropolis_sweep(problem, x, fields, temperature, rng, energy);
            ++sweeps;
            evaluations += n;
            if (sweeps % kResyncInterval == 0) energy = evaluate(problem, x);
            tracker.offer(energy, x);
        }
    } while (!done(clock, tracker, sweeps));

    return finish_qubo(problem, tracker, evaluations, sweeps);
}

// ---------------------------------------------------------------------------
// Parallel tempering
// ---------------------------------------------------------------------------

SolverResult parallel_tempering(const QuboProblem& problem, const RunOptions& options,
                                const TemperingParams& params) {
    if (params.replicas < 2) throw ConfigError("parallel tempering needs at least 2 replicas");
    RunClock clock(options.budget);
    BestTracker tracker(clock, options.target_energy);
    Rng rng(options.seed);
    const std::size_t n = problem.size();
    const std::size_t count = params.replicas;

    const double scale = default_scale(problem.max_abs_coefficient());
    const double t_min = params.t_min.value_or(0.05 * scale);
    const double t_max = std::max(t_min, params.t_max.value_or(2.0 * scale));
    const auto ladder = geometric_ladder(t_min, t_max, count);

    std::vector<BinaryAssignment> states(count);
    std::vector<QuboFields> fields(count);
    std::vector<double> energy(count);
    std::vector<std::size_t> at_rung(count);  // replica currently at ladder rung k
    std::iota(at_rung.begin(), at_rung.end(), 0);
    std::uint64_t evaluations = 0;
    for (std::size_t r = 0; r < count; ++r) {
        states[r] = random_assignment(n, rng);
        fields[r].rebuild(problem, states[r]);
        energy[r] = evaluate(problem, states[r]);
        ++evaluations;
        tracker.offer(energy[r], states[r]);
    }

    std::uint64_t iteration = 0;
    while (!done(clock, tracker, iteration)) {
        for (std::size_t k = 0; k < count; ++k) {
            const std::size_t r = at_rung[k];
            metropolis_sweep(problem, states[r], fields[r], ladder[k], rng, energy[r]);
            evaluations += n;
            tracker.offer(energy[r], states[r]);
        }
        ++iteration;
        if (iteration % kResyncInterval == 0) {
            for (std::size_t r = 0; r < count; ++r) energy[r] = evaluate(problem, states[r]);
        }
        if (iteration % params.swap_interval == 0) {
            const std::size_t parity = (iteration / params.swap_interval) % 2;
            for (std::size_t k = parity; k + 1 < count; k += 2) {
                const std::size_t a = at_rung[k];
                const std::size_t b = at_rung[k + 1];
                const double p = swap_acceptance(1.0 / ladder[k], 1.0 / ladder[k + 1], energy[a], energy[b]);
                if (p >= 1.0 || rng.uniform() < p) std::swap(at_rung[k], at_rung[k + 1]);
            }
        }
    }
    return finish_qubo(problem, tracker, evaluations, iteration);
}

// ---------------------------------------------------------------------------
// Genetic algorithm
// ---------------------------------------------------------------------------

SolverResult genetic_algorithm(const QuboProblem& problem, const RunOptions& options, const GeneticParams& params) {
    if (params.population < 2) throw ConfigError("genetic algorithm needs a population of at least 2");
    if (params.elite > params.population) throw ConfigError("elite count exceeds the population");
    RunClock clock(options.budget);
    BestTracker tracker(clock, options.target_energy);
    Rng rng(options.seed);
    const std::size_t n = problem.size();
    const std::size_t size = params.population;
    const std::size_t tournament = std::max<std::uint64_t>(params.tournament, 1);
    const double mutation = params.mutation_rate.value_or(n ? 1.0 / static_cast<double>(n) : 0.0);
    const double log_keep = mutation < 1.0 ? std::log1p(-mutation) : 0.0;

    struct Member {
        BinaryAssignment genes;
        double energy;
    };
    std::vector<Member> population(size);
    std::uint64_t evaluations = 0;
    for (auto& m : population) {
        m.genes = random_assignment(n, rng);
        m.energy = evaluate(problem, m.genes);
        ++evaluations;
        tracker.offer(m.energy, m.genes);
    }

    auto by_energy = [](const Member& a, const Member& b) { return a.energy < b.energy; };
    auto select = [&]() -> const Member& {
        const Member* winner = &population[rng.below(size)];
        for (std::size_t t = 1; t < tournament; ++t) {
            const Member& challenger = population[rng.below(size)];
            if (challenger.energy < winner->energy) winner = &challenger;
        }
        return *winner;
    };
    auto mutate = [&](BinaryAssignment& genes) {
        if (mutation <= 0.0 || n == 0) return;
        if (mutation >= 1.0) {
            for (auto& g : genes) g ^= 1;
            return;
        }
        // Geometric gaps between mutated positions.
        double pos = std::floor(std::log(rng.uniform_open()) / log_keep);
        while (pos < static_cast<double>(n)) {
            genes[static_cast<std::size_t>(pos)] ^= 1;
            pos += 1.0 + std::floor(std::log(rng.uniform_open()) / log_keep);
        }
    };

    std::uint64_t generation = 0;
    std::vector<Member> next;
    next.reserve(size);
    while (!done(clock, tracker, generation)) {
        std::stable_sort(population.begin(), population.end(), by_energy);
        next.assign(population.begin(), population.begin() + static_cast<std::ptrdiff_t>(params.elite));
        while (next.size() < size) {
            const Member& first = select();
            Member child;
            if (rng.uniform() < params.crossover_rate) {
                const Member& second = select();
                child.genes = uniform_crossover(first.genes, second.genes, rng);
            } else {
                child.genes = first.genes;
            }
            mutate(child.genes);
            child.energy = evaluate(problem, child.genes);
            ++evaluations;
            tracker.offer(child.energy, child.genes);
            next.push_back(std::move(child));
        }
        population.swap(next);
        ++generation;
    }
    return finish_qubo(problem, tracker, evaluations, generation);
}

// ---------------------------------------------------------------------------
// Simulated bifurcation (ballistic)
// ---------------------------------------------------------------------------

namespace {

double coupling_sigma(const IsingProblem& problem) {
    const double n = static_cast<double>(problem.size());
    if (problem.size() < 2) return 0.0;
    double sum = 0.0;
    for (const Term& t : problem.couplings()) sum += t.value * t.value;
    return std::sqrt(2.0 * sum / (n * (n - 1.0)));
}

void read_spins(std::span<const double> x, BinaryAssignment& out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] >= 0.0 ? 1 : 0;
}

double ising_energy_of(const IsingProblem& problem, std::span<const std::uint8_t> bits) {
    double e = problem.offset();
    const auto h = problem.fields();
    for (std::size_t i = 0; i < bits.size(); ++i) e += bits[i] ? h[i] : -h[i];
    for (const Term& t : problem.couplings()) e += (bits[t.i] == bits[t.j]) ? t.value : -t.value;
    return e;
}

}  // namespace

SolverResult simulated_bifurcation(const IsingProblem& problem, const RunOptions& options,
                                   const BifurcationParams& params) {
    RunClock clock(options.budget);
    BestTracker tracker(clock, options.target_energy);
    Rng rng(options.seed);
    const std::size_t n = problem.size();
    const double sigma = coupling_sigma(problem);
    const double c0 = params.coupling.value_or(sigma > 0.0 ? 0.5 / (std::sqrt(static_cast<double>(n)) * sigma) : 0.0);
    const double dt = params.dt;
    const std::uint64_t readout = std::max<std::uint64_t>(params.readout_interval, 1);
    const auto h = problem.fields();

    std::vector<double> x(n), y(n);
    BinaryAssignment bits(n, 1);
    std::uint64_t steps = 0;
    std::uint64_t evaluations = 0;

    if (n == 0) {
        tracker.offer(problem.offset(), bits);
        return finish_ising(problem, tracker, 1, 0);
    }

    do {
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = params.init_amplitude * (2.0 * rng.uniform() - 1.0);
            y[i] = 0.0;
        }
        const std::uint64_t length = std::min(params.steps_per_run, std::max<std::uint64_t>(remaining_cap(options.budget, steps), 1));
        for (std::uint64_t k = 0; k < length && !done(clock, tracker, steps); ++k) {
            const double a = params.pump_start + (1.0 - params.pump_start) * static_cast<double>(k + 1) /
                                                     static_cast<double>(length);
            for (std::size_t i = 0; i < n; ++i) {
                double force = -h[i];
                for (const Neighbor& nb : problem.neighbors(i)) force -= nb.weight * x[nb.index];
                y[i] += dt * (-(1.0 - a) * x[i] + c0 * force);
            }
            for (std::size_t i = 0; i < n; ++i) {
                x[i] += dt * y[i];
                if (std::abs(x[i]) > 1.0) {
                    x[i] = x[i] > 0.0 ? 1.0 : -1.0;
                    y[i] = 0.0;
                }
            }
            ++steps;
            if ((k + 1) % readout == 0 || k + 1 == length) {
                read_spins(x, bits);
                tracker.offer(ising_energy_of(problem, bits), bits);
                ++evaluations;
            }
        }
    } while (!done(clock, tracker, steps));

    return finish_ising(problem, tracker, evaluations, steps);
}

// ---------------------------------------------------------------------------
// Coherent Ising machine (mean field)
// ---------------------------------------------------------------------------

SolverResult cim_heuristic(const IsingProblem& problem, const RunOptions& options, const CimParams& params) {
    RunClock clock(options.budget);
    BestTracker tracker(clock, options.target_energy);
    Rng rng(options.seed);
    const std::size_t n = problem.size();
    // 1/sqrt(n) for unit-variance couplings, rescaled by the coupling spread.
    const double sigma = coupling_sigma(problem);
    const double root_n = std::sqrt(static_cast<double>(n));
    const double eps = params.coupling.value_or(sigma > 0.0 ? 1.0 / (root_n * sigma) : (n ? 1.0 / root_n : 0.0));
    const double dt = params.dt;
    const double noise = params.noise * std::sqrt(dt);
    const std::uint64_t readout = std::max<std::uint64_t>(params.readout_interval, 1);
    const auto h = problem.fields();

    std::vector<double> x(n), drift(n);
    BinaryAssignment bits(n, 1);
    std::uint64_t steps = 0;
    std::uint64_t evaluations = 0;

    if (n == 0) {
        tracker.offer(problem.offset(), bits);
        return finish_ising(problem, tracker, 1, 0);
    }

    do {
        for (auto& v : x) v = params.init_amplitude * (2.0 * rng.uniform() - 1.0);
        const std::uint64_t length = std::min(params.steps_per_run, std::max<std::uint64_t>(remaining_cap(options.budget, steps), 1));
        for (std::uint64_t k = 0; k < length && !done(clock, tracker, steps); ++k) {
            const double pump = params.pump_start + (params.pump_end - params.pump_start) *
                                                        static_cast<double>(k + 1) / static_cast<double>(length);
            for (std::size_t i = 0; i < n; ++i) {
                double local = h[i];
                for (const Neighbor& nb : problem.neighbors(i)) local += nb.weight * x[nb.index];
                drift[i] = (-1.0 + pump - x[i] * x[i]) * x[i] - eps * local;
            }
            for (std::size_t i = 0; i < n; ++i) {
                double next = x[i] + drift[i] * dt;
                if (noise > 0.0) next += noise * rng.normal();
                x[i] = std::clamp(next, -params.clamp, params.clamp);
            }
            ++steps;
            if ((k + 1) % readout == 0 || k + 1 == length) {
                read_spins(x, bits);
                tracker.offer(ising_energy_of(problem, bits), bits);
                ++evaluations;
            }
        }
    } while (!done(clock, tracker, steps));

    return finish_ising(problem, tracker, evaluations, steps);
}

}  // namespace qis
