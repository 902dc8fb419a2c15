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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qis/fields.hpp"
#include "qis/params.hpp"
#include "qis/problem.hpp"
#include "qis/result.hpp"
#include "qis/rng.hpp"

namespace qis {

// Hybrid solver: seeded ensemble, global moves (thermal sweeps, cluster
// tunnelling, bifurcation bursts), local refinement, an automatic mode
// selector and an on-line tuner for three hyperparameters.

enum class GlobalStrategy : std::uint8_t { thermal, tunneling, bifurcation };
enum class RefineStrategy : std::uint8_t { steepest_descent, gradient_relaxation, bnb_microsolve };

/// One of the nine (global, refine) combinations, named "G{g}-R{r}".
struct ModeConfig {
    GlobalStrategy global = GlobalStrategy::thermal;
    RefineStrategy refine = RefineStrategy::steepest_descent;

    static constexpr std::size_t kCount = 9;

    /// 0-based index (g - 1) * 3 + (r - 1).
    std::size_t index() const noexcept;
    std::string id() const;

    static ModeConfig from_index(std::size_t index);
    /// Throws ConfigError for anything but G1-R1 ... G3-R3.
    static ModeConfig from_id(std::string_view id);
    static std::array<ModeConfig, kCount> all();

    friend bool operator==(const ModeConfig&, const ModeConfig&) = default;
};

struct LandscapeStats {
    double flip_gain_mean = 0.0;      // mean single-flip energy change at the current point
    double flip_gain_variance = 0.0;  // curvature proxy
    double barrier_depth = 0.0;       // largest accepted uphill change over the last 10 iterations
    std::uint64_t stagnation = 0;     // iterations since the last improvement of the best
};

/// Mean and variance of the single-flip deltas held in `fields`.
LandscapeStats measure_landscape(std::span<const std::uint8_t> x, const QuboFields& fields);

// ---------------------------------------------------------------------------
// Seeding
// ---------------------------------------------------------------------------

enum class SeedStrategy : std::uint8_t { uniform, greedy, relaxation, antithetic };
inline constexpr std::size_t kSeedStrategies = 4;

struct SeederWeights {
    std::array<double, kSeedStrategies> weight{0.25, 0.25, 0.25, 0.25};
};

/// One seed from a single strategy. `reference` is the assignment the
/// antithetic strategy complements (uniform draw when absent).
BinaryAssignment make_seed(const QuboProblem& problem, SeedStrategy strategy, Rng& rng,
                           const BinaryAssignment* reference = nullptr);

struct SeedEnsemble {
    std::vector<BinaryAssignment> seeds;
    std::vector<double> energies;
    std::vector<SeedStrategy> strategies;
    SeederWeights weights;  // after the update
};

/// Draw `count` seeds with strategies sampled from `weights`, then apply
/// w_k <- w_k exp(-0.5 rank_k) to the drawn strategies, rank_k being the
/// 0-based competition rank of strategy k's best seed among them. Drawn
/// strategies are renormalised to their previous total mass.
SeedEnsemble seed_ensemble(const QuboProblem& problem, std::size_t count, const SeederWeights& weights,
                           std::uint64_t seed);

// ---------------------------------------------------------------------------
// Local refinement and moves
// ---------------------------------------------------------------------------

/// Flip the most improving variable until none improves. `fields` must track
/// `x`; returns `energy` plus the applied changes.
double steepest_descent(const QuboProblem& problem, BinaryAssignment& x, QuboFields& fields, double energy);
/// Convenience overload; returns the local minimum reached from `x0`.
BinaryAssignment steepest_descent(const QuboProblem& problem, std::span<const std::uint8_t> x0);

/// Lift x0 to 0.25 + 0.5 x0, take `steps` projected gradient steps of size
/// `learning_rate` inside [0,1]^n, round at 0.5 and descend to a 1-flip
/// minimum. Never returns an energy above E(x0): if the relaxed path ends
/// higher, the steepest descent of x0 is returned instead.
BinaryAssignment refine_gradient(const QuboProblem& problem, std::span<const std::uint8_t> x0, std::uint64_t steps,
                                 double learning_rate);

struct TunnelOptions {
    double cluster_mean = 4.0;
    std::uint64_t stagnation_scale = 50;    // mean grows by stagnation / scale
    std::optional<std::size_t> forced_size;  // bypass the geometric draw
};

struct TunnelMove {
    BinaryAssignment candidate;
    std::vector<std::uint32_t> cluster;  // flipped variables, in growth order
};

/// Flip a connected cluster of the interaction graph. The pivot is drawn with
/// weight |delta_i| + tiny; the size is 1 + Geometric with mean
/// cluster_mean * (1 + stagnation / stagnation_scale), capped at n. When the
/// component is exhausted growth continues from a fresh random pivot.
TunnelMove tunnel_move(const QuboProblem& problem, std::span<const std::uint8_t> x, const QuboFields& fields,
                       const LandscapeStats& stats, Rng& rng, const TunnelOptions& options = {});

inline constexpr std::size_t kMaxSubproblem = 25;

struct Subproblem {
    QuboProblem problem;                  // over the chosen variables
    std::vector<std::uint32_t> variables;  // sub index -> full index
    BinaryAssignment current;             // x restricted to `variables`
};

/// The k variables with largest |delta_i| at x (random tie-break), with every
/// other variable frozen. The offset is set so that the sub-energy of any
/// completion equals the full energy after embedding it into x.
/// Throws DomainError unless 1 <= k <= min(n, 25).
Subproblem decompose_subproblem(const QuboProblem& problem, std::span<const std::uint8_t> x,
                                const QuboFields& fields, std::size_t k, Rng& rng);
Subproblem decompose_subproblem(const QuboProblem& problem, std::span<const std::uint8_t> x, std::size_t k,
                                std::uint64_t seed);

/// Write a sub-assignment back into the full assignment.
void embed(const Subproblem& sub, std::span<const std::uint8_t> sub_x, std::span<std::uint8_t> x);

// ---------------------------------------------------------------------------
// Modes and the solver
// ---------------------------------------------------------------------------

/// Run one mode until the budget is spent. With an incumbent the search
/// starts there; otherwise from the best of `seed_count` ensemble seeds.
/// A zero budget returns that starting point.
SolverResult run_mode(const QuboProblem& problem, const ModeConfig& mode, const RunOptions& options,
                      const HybridParams& params = {}, const std::optional<BinaryAssignment>& incumbent = {});

struct QisConfig {
    std::optional<std::string> manual_mode;  // run only this mode
    bool legacy = false;                     // no bifurcation modes, no tuning
};

struct ProbeOutcome {
    std::string mode_id;
    double energy = 0.0;
};

struct QisResult {
    SolverResult result;
    std::string mode_id;                // selected (or manual) mode
    std::vector<ProbeOutcome> probes;   // phase-1 slices, in mode order
};

/// Phase 1 gives probe_fraction of the budget to the candidate modes in equal
/// slices (lowest probe energy wins, lowest index on ties). Phase 2 runs the
/// winner from the incumbent for the rest of the budget, retuning every
/// tuning_window iterations. Throws ConfigError for an unknown manual mode.
QisResult qis_solve(const QuboProblem& problem, const RunOptions& options, const HybridParams& params = {},
                    const QisConfig& config = {});

// ---------------------------------------------------------------------------
// On-line tuning
// ---------------------------------------------------------------------------

/// Levels 0, 1, 2 scale temperature_scale, cluster_mean and learning_rate by
/// 0.5, 1 and 2. Level (1, 1, 1) is the default cell.
struct HyperCell {
    std::array<std::uint8_t, 3> level{1, 1, 1};

    std::size_t index() const noexcept { return level[0] * 9u + level[1] * 3u + level[2]; }
    static HyperCell from_index(std::size_t index);
    friend bool operator==(const HyperCell&, const HyperCell&) = default;
};

inline constexpr std::array<double, 3> kTuningFactors{0.5, 1.0, 2.0};
inline constexpr std::size_t kTuningCells = 27;

/// Observed outcome of running with a cell; lower `energy` is better.
struct TuningSample {
    HyperCell cell;
    double energy = 0.0;
};

/// Next cell to try. Each cell's mean is estimated by shrinking its sample
/// mean towards a backfitted additive per-level model; the acquisition is expected
/// improvement over the best estimate, scaled by the model residuals. Exact ties
/// break at random from `seed`. Empty history gives the default cell.
HyperCell tune_hyperparams(std::span<const TuningSample> history, std::uint64_t seed);

/// Cell with the lowest estimated mean (default cell for an empty history).
HyperCell recommend_cell(std::span<const TuningSample> history);

HybridParams apply_cell(const HybridParams& base, const HyperCell& cell);

}  // namespace qis
