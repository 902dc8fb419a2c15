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

#include "qis/qis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

#include "qis/error.hpp"
#include "qis/exact.hpp"
#include "qis/heuristics.hpp"
#include "qis/relax.hpp"

namespace qis {

// ---------------------------------------------------------------------------
// Modes
// ---------------------------------------------------------------------------

std::size_t ModeConfig::index() const noexcept {
    return static_cast<std::size_t>(global) * 3 + static_cast<std::size_t>(refine);
}

std::string ModeConfig::id() const {
    return "G" + std::to_string(static_cast<int>(global) + 1) + "-R" + std::to_string(static_cast<int>(refine) + 1);
}

ModeConfig ModeConfig::from_index(std::size_t index) {
    if (index >= kCount) throw ConfigError("mode index out of range: " + std::to_string(index));
    return {static_cast<GlobalStrategy>(index / 3), static_cast<RefineStrategy>(index % 3)};
}

ModeConfig ModeConfig::from_id(std::string_view id) {
    if (id.size() == 5 && id[0] == 'G' && id[2] == '-' && id[3] == 'R' && id[1] >= '1' && id[1] <= '3' &&
        id[4] >= '1' && id[4] <= '3') {
        return from_index(static_cast<std::size_t>(id[1] - '1') * 3 + static_cast<std::size_t>(id[4] - '1'));
    }
    throw ConfigError("unknown mode id '" + std::string(id) + "' (expected G1-R1 ... G3-R3)");
}

std::array<ModeConfig, ModeConfig::kCount> ModeConfig::all() {
    std::array<ModeConfig, kCount> modes;
    for (std::size_t k = 0; k < kCount; ++k) modes[k] = from_index(k);
    return modes;
}

LandscapeStats measure_landscape(std::span<const std::uint8_t> x, const QuboFields& fields) {
    LandscapeStats stats;
    const std::size_t n = x.size();
    if (n == 0) return stats;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += fields.delta(x, i);
    stats.flip_gain_mean = sum / static_cast<double>(n);
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = fields.delta(x, i) - stats.flip_gain_mean;
        sq += d * d;
    }
    stats.flip_gain_variance = sq / static_cast<double>(n);
    return stats;
}

// ---------------------------------------------------------------------------
// Seeding
// ---------------------------------------------------------------------------

namespace {

std::vector<double> projected_descent(const QuboProblem& problem, std::vector<double> y, std::uint64_t steps,
                                      double learning_rate) {
    if (!(learning_rate > 0.0)) return y;
    for (std::uint64_t s = 0; s < steps; ++s) {
        const auto eval = relaxed_energy_and_gradient(problem, y);
        bool moved = false;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double next = std::clamp(y[i] - learning_rate * eval.gradient[i], 0.0, 1.0);
            moved = moved || next != y[i];
            y[i] = next;
        }
        if (!moved) break;
    }
    return y;
}

double unit_step(const QuboProblem& problem) {
    const double bound = problem.row_norm_bound();
    return bound > 0.0 ? 1.0 / bound : 0.0;
}

}  // namespace

BinaryAssignment make_seed(const QuboProblem& problem, SeedStrategy strategy, Rng& rng,
                           const BinaryAssignment* reference) {
    const std::size_t n = problem.size();
    switch (strategy) {
        case SeedStrategy::uniform:
            return random_assignment(n, rng);
        case SeedStrategy::greedy: {
            BinaryAssignment x(n, 0);
            QuboFields fields(problem, x);
            std::vector<std::uint32_t> order(n);
            std::iota(order.begin(), order.end(), 0u);
            rng.shuffle(std::span<std::uint32_t>(order));
            for (const auto i : order) {
                if (fields.delta(x, i) < 0.0) fields.flip(problem, x, i);
            }
            return x;
        }
        case SeedStrategy::relaxation: {
            std::vector<double> y(n);
            for (auto& v : y) v = 0.5 + 0.05 * (2.0 * rng.uniform() - 1.0);
            return round_relaxed(projected_descent(problem, std::move(y), 20, unit_step(problem)));
        }
        case SeedStrategy::antithetic: {
            BinaryAssignment x = reference ? *reference : random_assignment(n, rng);
            check_assignment(n, x);
            for (auto& b : x) b ^= 1;
            return x;
        }
    }
    throw ConfigError("unknown seeding strategy");
}

SeedEnsemble seed_ensemble(const QuboProblem& problem, std::size_t count, const SeederWeights& weights,
                           std::uint64_t seed) {
    if (count < 1) throw ConfigError("seed ensemble needs at least one seed");
    double total = 0.0;
    for (const double w : weights.weight) {
        if (!(w >= 0.0)) throw DomainError("seeder weights must be non-negative");
        total += w;
    }
    if (!(total > 0.0)) throw DomainError("seeder weights sum to zero");

    Rng rng(seed);
    SeedEnsemble out;
    out.weights = weights;
    std::array<double, kSeedStrategies> best;
    best.fill(std::numeric_limits<double>::infinity());
    std::array<bool, kSeedStrategies> drawn{};
    std::size_t best_seed = 0;

    for (std::size_t c = 0; c < count; ++c) {
        double u = rng.uniform() * total;
        std::size_t k = 0;
        for (; k < kSeedStrategies; ++k) {
            if (u < weights.weight[k]) break;
            u -= weights.weight[k];
        }
        if (k == kSeedStrategies) {  // rounding ran past the end
            k = kSeedStrategies - 1;
            while (weights.weight[k] == 0.0) --k;
        }
        const auto strategy = static_cast<SeedStrategy>(k);
        BinaryAssignment x = make_seed(problem, strategy, rng, out.seeds.empty() ? nullptr : &out.seeds[best_seed]);
        const double e = evaluate(problem, x);
        if (out.seeds.empty() || e < out.energies[best_seed]) best_seed = out.seeds.size();
        out.seeds.push_back(std::move(x));
        out.energies.push_back(e);
        out.strategies.push_back(strategy);
        drawn[k] = true;
        best[k] = std::min(best[k], e);
    }

    double mass_before = 0.0;
    double mass_after = 0.0;
    for (std::size_t k = 0; k < kSeedStrategies; ++k) {
        if (!drawn[k]) continue;
        std::size_t rank = 0;
        for (std::size_t j = 0; j < kSeedStrategies; ++j) {
            if (drawn[j] && best[j] < best[k]) ++rank;
        }
        mass_before += out.weights.weight[k];
        out.weights.weight[k] *= std::exp(-0.5 * static_cast<double>(rank));
        mass_after += out.weights.weight[k];
    }
    if (mass_after > 0.0) {
        for (std::size_t k = 0; k < kSeedStrategies; ++k) {
            if (drawn[k]) out.weights.weight[k] *= mass_before / mass_after;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Local refinement and moves
// ---------------------------------------------------------------------------

double steepest_descent(const QuboProblem& problem, BinaryAssignment& x, QuboFields& fields, double energy) {
    const double tolerance = 1e-12 * (1.0 + problem.row_norm_bound());
    for (;;) {
        double best = -tolerance;
        std::size_t pick = x.size();
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = fields.delta(x, i);
            if (d < best) {
                best = d;
                pick = i;
            }
        }
        if (pick == x.size()) return energy;
        fields.flip(problem, x, pick);
        energy += best;
    }
}

BinaryAssignment steepest_descent(const QuboProblem& problem, std::span<const std::uint8_t> x0) {
    BinaryAssignment x(x0.begin(), x0.end());
    QuboFields fields(problem, x);
    steepest_descent(problem, x, fields, 0.0);
    return x;
}

BinaryAssignment refine_gradient(const QuboProblem& problem, std::span<const std::uint8_t> x0, std::uint64_t steps,
                                 double learning_rate) {
    check_assignment(problem.size(), x0);
    std::vector<double> y(x0.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = 0.25 + 0.5 * x0[i];
    BinaryAssignment x = round_relaxed(projected_descent(problem, std::move(y), steps, learning_rate));
    QuboFields fields(problem, x);
    steepest_descent(problem, x, fields, 0.0);
    if (evaluate(problem, x) > evaluate(problem, x0)) return steepest_descent(problem, x0);
    return x;
}

TunnelMove tunnel_move(const QuboProblem& problem, std::span<const std::uint8_t> x, const QuboFields& fields,
                       const LandscapeStats& stats, Rng& rng, const TunnelOptions& options) {
    const std::size_t n = problem.size();
    check_assignment(n, x);
    TunnelMove move;
    move.candidate.assign(x.begin(), x.end());
    if (n == 0) return move;

    std::size_t size = 1;
    if (options.forced_size) {
        size = std::clamp<std::size_t>(*options.forced_size, 1, n);
    } else {
        const double scale = options.stagnation_scale ? static_cast<double>(options.stagnation_scale) : 1.0;
        const double mean = options.cluster_mean * (1.0 + static_cast<double>(stats.stagnation) / scale);
        if (mean > 1.0) {
            const double extra = std::floor(std::log(rng.uniform_open()) / std::log1p(-1.0 / mean));
            size = static_cast<std::size_t>(std::min(extra + 1.0, static_cast<double>(n)));
        }
    }

    // Pivot with probability proportional to |delta| (plus a floor so flat points still move).
    double largest = 0.0;
    for (std::size_t i = 0; i < n; ++i) largest = std::max(largest, std::abs(fields.delta(x, i)));
    const double floor = 1e-9 * (1.0 + largest);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += std::abs(fields.delta(x, i)) + floor;
    double u = rng.uniform() * total;
    std::size_t pivot = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
        u -= std::abs(fields.delta(x, i)) + floor;
        if (u < 0.0) {
            pivot = i;
            break;
        }
    }

    std::vector<std::uint8_t> member(n, 0);
    std::vector<std::uint32_t> frontier;
    auto add = [&](std::size_t v) {
        member[v] = 1;
        move.cluster.push_back(static_cast<std::uint32_t>(v));
        for (const Neighbor& nb : problem.neighbors(v)) {
            if (!member[nb.index]) frontier.push_back(nb.index);
        }
    };
    add(pivot);
    while (move.cluster.size() < size) {
        std::size_t next = n;
        while (!frontier.empty()) {
            const auto k = static_cast<std::size_t>(rng.below(frontier.size()));
            const std::uint32_t v = frontier[k];
            frontier[k] = frontier.back();
            frontier.pop_back();
            if (!member[v]) {
                next = v;
                break;
            }
        }
        if (next == n) {
            std::vector<std::uint32_t> rest;
            for (std::size_t i = 0; i < n; ++i) {
                if (!member[i]) rest.push_back(static_cast<std::uint32_t>(i));
            }
            next = rest[rng.below(rest.size())];
        }
        add(next);
    }
    for (const auto v : move.cluster) move.candidate[v] ^= 1;
    return move;
}

Subproblem decompose_subproblem(const QuboProblem& problem, std::span<const std::uint8_t> x,
                                const QuboFields& fields, std::size_t k, Rng& rng) {
    const std::size_t n = problem.size();
    check_assignment(n, x);
    if (k < 1 || k > std::min(n, kMaxSubproblem)) {
        throw DomainError("subproblem size " + std::to_string(k) + " outside [1, " +
                          std::to_string(std::min(n, kMaxSubproblem)) + "]");
    }
    struct Key {
        double gain;
        std::uint64_t tie;
        std::uint32_t index;
    };
    std::vector<Key> keys(n);
    for (std::size_t i = 0; i < n; ++i) {
        keys[i] = {std::abs(fields.delta(x, i)), rng.next(), static_cast<std::uint32_t>(i)};
    }
    std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(k), keys.end(),
                      [](const Key& a, const Key& b) { return a.gain != b.gain ? a.gain > b.gain : a.tie < b.tie; });

    Subproblem sub;
    sub.variables.resize(k);
    for (std::size_t t = 0; t < k; ++t) sub.variables[t] = keys[t].index;
    std::sort(sub.variables.begin(), sub.variables.end());

    std::vector<std::int32_t> position(n, -1);
    for (std::size_t t = 0; t < k; ++t) position[sub.variables[t]] = static_cast<std::int32_t>(t);

    std::vector<double> linear(k);
    std::vector<Term> terms;
    sub.current.resize(k);
    double inner = 0.0;  // sub-energy of the current restriction, offset excluded
    for (std::size_t t = 0; t < k; ++t) {
        const std::uint32_t i = sub.variables[t];
        sub.current[t] = x[i];
        double lin = fields.field(i);
        for (const Neighbor& nb : problem.neighbors(i)) {
            const std::int32_t u = position[nb.index];
            if (u < 0) continue;
            lin -= nb.weight * x[nb.index];
            if (static_cast<std::size_t>(u) > t) {
                terms.push_back({static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(u), nb.weight});
                if (x[i] && x[nb.index]) inner += nb.weight;
            }
        }
        linear[t] = lin;
        if (x[i]) inner += lin;
    }
    sub.problem = QuboProblem(k, std::move(terms), std::move(linear), evaluate(problem, x) - inner);
    return sub;
}

Subproblem decompose_subproblem(const QuboProblem& problem, std::span<const std::uint8_t> x, std::size_t k,
                                std::uint64_t seed) {
    QuboFields fields(problem, x);
    Rng rng(seed);
    return decompose_subproblem(problem, x, fields, k, rng);
}

void embed(const Subproblem& sub, std::span<const std::uint8_t> sub_x, std::span<std::uint8_t> x) {
    if (sub_x.size() != sub.variables.size()) throw DimensionError("sub-assignment has wrong length");
    for (std::size_t t = 0; t < sub_x.size(); ++t) x[sub.variables[t]] = sub_x[t];
}

// ---------------------------------------------------------------------------
// Mode runner
// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kBarrierWindow = 10;
constexpr std::uint64_t kResync = 256;

class ModeRunner {
 public:
    ModeRunner(const QuboProblem& problem, const ModeConfig& mode, const HybridParams& params, std::uint64_t seed,
               BestTracker& local, BestTracker* shared)
        : problem_(problem), mode_(mode), params_(params), rng_(seed), local_(local), shared_(shared) {
        if (mode_.global == GlobalStrategy::bifurcation) {
            ising_ = qubo_to_ising(problem_);
            const double n = static_cast<double>(ising_.size());
            double sum = 0.0;
            for (const Term& t : ising_.couplings()) sum += t.value * t.value;
            const double sigma = ising_.size() > 1 ? std::sqrt(2.0 * sum / (n * (n - 1.0))) : 0.0;
            double hmax = 0.0;
            for (const double h : ising_.fields()) hmax = std::max(hmax, std::abs(h));
            if (sigma > 0.0) {
                flow_coupling_ = 0.5 / (std::sqrt(n) * sigma);
            } else if (hmax > 0.0) {
                flow_coupling_ = 0.5 / hmax;
            }
        }
    }

    void set_params(const HybridParams& params) { params_ = params; }
    std::uint64_t iterations() const noexcept { return iterations_; }
    std::uint64_t evaluations() const noexcept { return evaluations_; }
    double energy() const noexcept { return energy_; }

    /// Seed (or adopt the incumbent) and offer the starting points.
    void start(const std::optional<BinaryAssignment>& incumbent) {
        if (incumbent) {
            check_assignment(problem_.size(), *incumbent);
            x_ = *incumbent;
            energy_ = evaluate(problem_, x_);
            ++evaluations_;
            offer();
        } else {
            const auto ensemble = seed_ensemble(problem_, params_.seed_count, SeederWeights{}, rng_.next());
            evaluations_ += ensemble.seeds.size();
            std::size_t best = 0;
            for (std::size_t s = 0; s < ensemble.seeds.size(); ++s) {
                offer(ensemble.energies[s], ensemble.seeds[s]);
                if (ensemble.energies[s] < ensemble.energies[best]) best = s;
            }
            x_ = ensemble.seeds[best];
            energy_ = ensemble.energies[best];
        }
        fields_.rebuild(problem_, x_);
        run_best_ = energy_;
        run_best_x_ = x_;
    }

    /// Descend from the starting point (not counted as an iteration).
    void settle() {
        energy_ = steepest_descent(problem_, x_, fields_, energy_);
        offer();
        note_progress();
    }

    void step() {
        const LandscapeStats stats = landscape();
        const double temperature = adaptive_temperature(stats);
        double uphill = 0.0;

        if (mode_.global == GlobalStrategy::thermal) {
            for (std::uint64_t s = 0; s < std::max<std::uint64_t>(params_.thermal_sweeps, 1); ++s) {
                const auto sweep = metropolis_sweep(problem_, x_, fields_, temperature, rng_, energy_);
                uphill = std::max(uphill, sweep.max_uphill);
                evaluations_ += x_.size();
            }
            refine(x_, fields_, energy_);
        } else {
            BinaryAssignment candidate;
            QuboFields candidate_fields;
            double candidate_energy = 0.0;
            if (mode_.global == GlobalStrategy::tunneling) {
                TunnelOptions opts{params_.cluster_mean, params_.stagnation_scale, std::nullopt};
                const TunnelMove move = tunnel_move(problem_, x_, fields_, stats, rng_, opts);
                candidate = x_;
                candidate_fields = fields_;
                candidate_energy = energy_;
                for (const auto v : move.cluster) {
                    candidate_energy += candidate_fields.delta(candidate, v);
                    candidate_fields.flip(problem_, candidate, v);
                }
            } else {
                candidate = bifurcation_burst();
                candidate_fields.rebuild(problem_, candidate);
                candidate_energy = evaluate(problem_, candidate);
            }
            ++evaluations_;
            refine(candidate, candidate_fields, candidate_energy);
            const double change = candidate_energy - energy_;
            if (change <= 0.0 || rng_.uniform() < std::exp(-change / temperature)) {
                uphill = std::max(0.0, change);
                x_ = std::move(candidate);
                fields_ = std::move(candidate_fields);
                energy_ = candidate_energy;
            }
        }

        ++iterations_;
        if (iterations_ % kResync == 0) energy_ = evaluate(problem_, x_);
        barrier_[iterations_ % kBarrierWindow] = uphill;
        offer();
        note_progress();
        if (since_progress_ >= std::max<std::uint64_t>(params_.restart_after, 1)) {
            x_ = run_best_x_;
            energy_ = run_best_;
            fields_.rebuild(problem_, x_);
            since_progress_ = 0;
        }
    }

 private:
    void offer() { offer(energy_, x_); }
    void offer(double energy, std::span<const std::uint8_t> x) {
        local_.offer(energy, x);
        if (shared_) shared_->offer(energy, x);
    }

    void note_progress() {
        if (energy_ < run_best_) {
            run_best_ = energy_;
            run_best_x_ = x_;
            since_progress_ = 0;
        } else {
            ++since_progress_;
        }
    }

    LandscapeStats landscape() const {
        LandscapeStats stats = measure_landscape(x_, fields_);
        stats.barrier_depth = *std::max_element(barrier_.begin(), barrier_.end());
        stats.stagnation = since_progress_;
        return stats;
    }

    double adaptive_temperature(const LandscapeStats& stats) const {
        const double spread = std::abs(stats.flip_gain_mean) + std::sqrt(stats.flip_gain_variance);
        const double scale = params_.stagnation_scale ? static_cast<double>(params_.stagnation_scale) : 1.0;
        const double t = params_.temperature_scale * 0.1 * spread * (1.0 + static_cast<double>(stats.stagnation) / scale);
        return t > 0.0 ? t : 1e-12;
    }

    void refine(BinaryAssignment& x, QuboFields& fields, double& energy) {
        switch (mode_.refine) {
            case RefineStrategy::steepest_descent:
                energy = steepest_descent(problem_, x, fields, energy);
                break;
            case RefineStrategy::gradient_relaxation: {
                const double lr = params_.learning_rate * unit_step(problem_);
                x = refine_gradient(problem_, x, params_.gradient_steps, lr);
                fields.rebuild(problem_, x);
                energy = evaluate(problem_, x);
                ++evaluations_;
                break;
            }
            case RefineStrategy::bnb_microsolve: {
                energy = steepest_descent(problem_, x, fields, energy);
                const std::size_t n = x.size();
                if (n == 0) break;
                const std::size_t k = std::clamp<std::size_t>(params_.subproblem_size, 1, std::min(n, kMaxSubproblem));
                const Subproblem sub = decompose_subproblem(problem_, x, fields, k, rng_);
                BnbOptions opts;
                opts.node_limit = std::max<std::uint64_t>(params_.subproblem_nodes, 1);
                opts.incumbent = sub.current;
                const BnbResult solved = branch_and_bound(sub.problem, opts);
                evaluations_ += solved.result.evaluations;
                if (solved.result.best_assignment != sub.current) {
                    BinaryAssignment trial = x;
                    embed(sub, solved.result.best_assignment, trial);
                    const double trial_energy = evaluate(problem_, trial);
                    if (trial_energy < energy) {
                        x = std::move(trial);
                        fields.rebuild(problem_, x);
                        energy = steepest_descent(problem_, x, fields, trial_energy);
                    }
                }
                break;
            }
        }
    }

    BinaryAssignment bifurcation_burst() {
        const std::size_t n = x_.size();
        std::vector<double> pos(n), vel(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) pos[i] = (x_[i] ? 0.2 : -0.2) + 0.1 * rng_.normal();
        const auto h = ising_.fields();
        const std::uint64_t steps = std::max<std::uint64_t>(params_.flow_steps, 1);
        constexpr double dt = 0.5;
        for (std::uint64_t k = 0; k < steps; ++k) {
            const double a = static_cast<double>(k + 1) / static_cast<double>(steps);
            for (std::size_t i = 0; i < n; ++i) {
                double force = -h[i];
                for (const Neighbor& nb : ising_.neighbors(i)) force -= nb.weight * pos[nb.index];
                vel[i] += dt * (-(1.0 - a) * pos[i] + flow_coupling_ * force);
            }
            for (std::size_t i = 0; i < n; ++i) {
                pos[i] += dt * vel[i];
                if (std::abs(pos[i]) > 1.0) {
                    pos[i] = pos[i] > 0.0 ? 1.0 : -1.0;
                    vel[i] = 0.0;
                }
            }
        }
        BinaryAssignment out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = pos[i] >= 0.0 ? 1 : 0;
        return out;
    }

    const QuboProblem& problem_;
    ModeConfig mode_;
    HybridParams params_;
    Rng rng_;
    BestTracker& local_;
    BestTracker* shared_;

    IsingProblem ising_;
    double flow_coupling_ = 0.0;

    BinaryAssignment x_;
    QuboFields fields_;
    double energy_ = 0.0;
    double run_best_ = 0.0;
    BinaryAssignment run_best_x_;
    std::uint64_t since_progress_ = 0;
    std::array<double, kBarrierWindow> barrier_{};
    std::uint64_t iterations_ = 0;
    std::uint64_t evaluations_ = 0;
};

std::uint64_t runner_seed(std::uint64_t seed, std::size_t slot) {
    return mix_seed(seed ^ mix_seed(static_cast<std::uint64_t>(slot) + 0x51u));
}

/// Drive a runner until `clock` says stop or a target is met.
void drive(ModeRunner& runner, const RunClock& clock, const BestTracker& local, const BestTracker* shared,
           const std::function<void()>& on_step = {}) {
    if (clock.should_stop(0)) return;
    runner.settle();
    while (!clock.should_stop(runner.iterations()) && !local.target_reached() &&
           !(shared && shared->target_reached())) {
        runner.step();
        if (on_step) on_step();
    }
}

SolverResult close(const QuboProblem& problem, const BestTracker& tracker, std::uint64_t evaluations,
                   std::uint64_t iterations) {
    const double exact = tracker.has_incumbent() ? evaluate(problem, tracker.best_assignment()) : problem.offset();
    return tracker.finish(exact, evaluations, iterations);
}

}  // namespace

SolverResult run_mode(const QuboProblem& problem, const ModeConfig& mode, const RunOptions& options,
                      const HybridParams& params, const std::optional<BinaryAssignment>& incumbent) {
    RunClock clock(options.budget);
    BestTracker tracker(clock, options.target_energy);
    ModeRunner runner(problem, mode, params, options.seed, tracker, nullptr);
    runner.start(incumbent);
    drive(runner, clock, tracker, nullptr);
    return close(problem, tracker, runner.evaluations(), runner.iterations());
}

QisResult qis_solve(const QuboProblem& problem, const RunOptions& options, const HybridParams& params,
                    const QisConfig& config) {
    if (!(params.probe_fraction > 0.0 && params.probe_fraction < 1.0)) {
        throw ConfigError("probe_fraction must lie in (0, 1)");
    }
    std::vector<ModeConfig> modes;
    if (config.manual_mode) {
        modes.push_back(ModeConfig::from_id(*config.manual_mode));
    } else {
        for (const ModeConfig& m : ModeConfig::all()) {
            if (config.legacy && m.global == GlobalStrategy::bifurcation) continue;
            modes.push_back(m);
        }
    }

    RunClock clock(options.budget);
    BestTracker global(clock, options.target_energy);
    QisResult out;
    std::uint64_t iterations = 0;
    std::uint64_t evaluations = 0;

    std::size_t winner = 0;
    if (modes.size() > 1) {
        const double share = params.probe_fraction / static_cast<double>(modes.size());
        Budget slice;
        if (options.budget.seconds) slice.seconds = *options.budget.seconds * share;
        if (options.budget.iterations) {
            slice.iterations = std::max<std::uint64_t>(
                1, static_cast<std::uint64_t>(static_cast<double>(*options.budget.iterations) * share));
        }
        for (std::size_t m = 0; m < modes.size(); ++m) {
            RunClock slice_clock(slice);
            BestTracker local(slice_clock, options.target_energy);
            ModeRunner runner(problem, modes[m], params, runner_seed(options.seed, modes[m].index()), local, &global);
            runner.start(std::nullopt);
            drive(runner, slice_clock, local, &global);
            iterations += runner.iterations();
            evaluations += runner.evaluations();
            out.probes.push_back({modes[m].id(), local.best_energy()});
            if (local.best_energy() < out.probes[winner].energy) winner = m;
            if (global.target_reached()) break;
        }
    }
    out.mode_id = modes[winner].id();

    // Phase 2: the selected mode for the remaining budget.
    Budget rest;
    if (options.budget.seconds) rest.seconds = std::max(0.0, clock.remaining());
    if (options.budget.iterations) {
        rest.iterations = *options.budget.iterations > iterations ? *options.budget.iterations - iterations : 0;
    }
    if (!global.target_reached()) {
        RunClock phase_clock(rest);
        BestTracker local(phase_clock, options.target_energy);
        ModeRunner runner(problem, modes[winner], params, runner_seed(options.seed, 100 + modes[winner].index()), local,
                          &global);
        runner.start(global.has_incumbent() ? std::optional<BinaryAssignment>(global.best_assignment())
                                            : std::nullopt);

        std::vector<TuningSample> history;
        HyperCell cell;
        const std::uint64_t window = std::max<std::uint64_t>(params.tuning_window, 1);
        double window_sum = 0.0;
        double window_base = global.best_energy();
        std::uint64_t in_window = 0;
        auto tune = [&]() {
            window_sum += runner.energy();
            if (++in_window < window) return;
            history.push_back({cell, window_sum / static_cast<double>(in_window) - window_base});
            cell = tune_hyperparams(history, runner_seed(options.seed, 1000 + history.size()));
            runner.set_params(apply_cell(params, cell));
            window_sum = 0.0;
            in_window = 0;
            window_base = global.best_energy();
        };
        if (config.legacy) {
            drive(runner, phase_clock, local, &global);
        } else {
            drive(runner, phase_clock, local, &global, tune);
        }
        iterations += runner.iterations();
        evaluations += runner.evaluations();
    }

    out.result = close(problem, global, evaluations, iterations);
    return out;
}

// ---------------------------------------------------------------------------
// Tuning
// ---------------------------------------------------------------------------

HyperCell HyperCell::from_index(std::size_t index) {
    if (index >= kTuningCells) throw DomainError("tuning cell index out of range");
    HyperCell c;
    c.level = {static_cast<std::uint8_t>(index / 9), static_cast<std::uint8_t>((index / 3) % 3),
               static_cast<std::uint8_t>(index % 3)};
    return c;
}

namespace {

constexpr double kShrink = 2.0;
constexpr int kBackfitRounds = 25;

struct CellEstimates {
    std::array<double, kTuningCells> mean{};
    std::array<double, kTuningCells> sigma{};
};

// Cell means shrunk towards an additive main-effects model fitted by
// backfitting; the noise scale is the residual spread of that model.
CellEstimates estimate_cells(std::span<const TuningSample> history) {
    std::array<double, kTuningCells> sum{};
    std::array<double, kTuningCells> count{};
    std::array<std::array<double, 3>, 3> level_count{};
    double total = 0.0;
    for (const TuningSample& s : history) {
        const std::size_t c = s.cell.index();
        sum[c] += s.energy;
        count[c] += 1.0;
        total += s.energy;
        for (std::size_t d = 0; d < 3; ++d) level_count[d][s.cell.level[d]] += 1.0;
    }
    const double samples = static_cast<double>(history.size());
    const double grand = total / samples;

    std::array<std::array<double, 3>, 3> effect{};
    for (int round = 0; round < kBackfitRounds; ++round) {
        for (std::size_t d = 0; d < 3; ++d) {
            std::array<double, 3> partial{};
            for (const TuningSample& s : history) {
                double r = s.energy - grand;
                for (std::size_t e = 0; e < 3; ++e) {
                    if (e != d) r -= effect[e][s.cell.level[e]];
                }
                partial[s.cell.level[d]] += r;
            }
            for (std::size_t l = 0; l < 3; ++l) {
                effect[d][l] = level_count[d][l] > 0.0 ? partial[l] / level_count[d][l] : 0.0;
            }
        }
    }
    auto additive = [&](const HyperCell& cell) {
        double m = grand;
        for (std::size_t d = 0; d < 3; ++d) m += effect[d][cell.level[d]];
        return m;
    };

    double spread_sq = 0.0;
    double residual_sq = 0.0;
    for (const TuningSample& s : history) {
        spread_sq += (s.energy - grand) * (s.energy - grand);
        const double r = s.energy - additive(s.cell);
        residual_sq += r * r;
    }
    std::size_t parameters = 1;
    for (std::size_t d = 0; d < 3; ++d) {
        for (std::size_t l = 0; l < 3; ++l) parameters += level_count[d][l] > 0.0 ? 1 : 0;
    }
    const double spread = std::sqrt(spread_sq / samples);
    const double dof = std::max(1.0, samples - static_cast<double>(parameters));
    const double noise = std::max({std::sqrt(residual_sq / dof), 0.05 * spread, 1e-12 * (1.0 + std::abs(grand))});

    CellEstimates est;
    for (std::size_t c = 0; c < kTuningCells; ++c) {
        const HyperCell cell = HyperCell::from_index(c);
        est.mean[c] = (sum[c] + kShrink * additive(cell)) / (count[c] + kShrink);
        double var = 1.0 / (count[c] + kShrink);
        for (std::size_t d = 0; d < 3; ++d) var += 1.0 / (level_count[d][cell.level[d]] + 1.0);
        est.sigma[c] = noise * std::sqrt(var);
    }
    return est;
}

}  // namespace

HyperCell tune_hyperparams(std::span<const TuningSample> history, std::uint64_t seed) {
    if (history.empty()) return HyperCell{};
    const CellEstimates est = estimate_cells(history);
    const double incumbent = *std::min_element(est.mean.begin(), est.mean.end());

    std::array<double, kTuningCells> score{};
    for (std::size_t c = 0; c < kTuningCells; ++c) {
        const double z = (incumbent - est.mean[c]) / est.sigma[c];
        const double cdf = 0.5 * std::erfc(-z / std::sqrt(2.0));
        const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
        score[c] = est.sigma[c] * (z * cdf + pdf);
    }
    const double top = *std::max_element(score.begin(), score.end());
    std::vector<std::size_t> ties;
    for (std::size_t c = 0; c < kTuningCells; ++c) {
        if (score[c] >= top * (1.0 - 1e-12)) ties.push_back(c);
    }
    Rng rng(seed);
    return HyperCell::from_index(ties[ties.size() == 1 ? 0 : rng.below(ties.size())]);
}

HyperCell recommend_cell(std::span<const TuningSample> history) {
    if (history.empty()) return HyperCell{};
    const CellEstimates est = estimate_cells(history);
    return HyperCell::from_index(
        static_cast<std::size_t>(std::min_element(est.mean.begin(), est.mean.end()) - est.mean.begin()));
}

HybridParams apply_cell(const HybridParams& base, const HyperCell& cell) {
    HybridParams p = base;
    p.temperature_scale = base.temperature_scale * kTuningFactors.at(cell.level[0]);
    p.cluster_mean = base.cluster_mean * kTuningFactors.at(cell.level[1]);
    p.learning_rate = base.learning_rate * kTuningFactors.at(cell.level[2]);
    return p;
}

}  // namespace qis
