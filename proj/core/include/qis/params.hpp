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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace qis {

// Default hyperparameters. data/params.json mirrors these values and is the
// version-controlled ledger; a test keeps the two in sync.

struct AnnealingParams {
    std::optional<double> t_start;     // unset: 2 * max |coefficient|
    double t_end = 1e-3;
    std::uint64_t sweeps_per_cycle = 0;  // 0: sized from the time budget
};

struct TemperingParams {
    std::uint64_t replicas = 8;
    std::optional<double> t_min;  // unset: 0.05 * max |coefficient|
    std::optional<double> t_max;  // unset: 2 * max |coefficient|
    std::uint64_t swap_interval = 1;
};

struct GeneticParams {
    std::uint64_t population = 64;
    std::uint64_t tournament = 4;
    double crossover_rate = 0.9;
    std::optional<double> mutation_rate;  // unset: 1 / n
    std::uint64_t elite = 2;
};

struct BifurcationParams {
    double dt = 0.5;
    std::optional<double> coupling;  // unset: 0.5 / (sqrt(n) * sigma_J)
    std::uint64_t steps_per_run = 1000;
    double pump_start = 0.0;         // a(t) rises linearly to 1 over a run
    double init_amplitude = 0.1;
    std::uint64_t readout_interval = 10;
};

struct CimParams {
    double dt = 0.05;
    std::optional<double> coupling;  // unset: 1 / (sqrt(n) * sigma_J)
    double pump_start = 0.0;
    double pump_end = 2.0;
    double noise = 0.05;
    std::uint64_t steps_per_run = 1000;
    double init_amplitude = 0.01;
    double clamp = 1.5;
    std::uint64_t readout_interval = 10;
};

struct ScheduleParams {
    AnnealingParams sa;
    TemperingParams pt;
    GeneticParams ga;
    BifurcationParams sb;
    CimParams cim;
};

/// Hybrid solver knobs. The first three are the on-line tuned dimensions.
struct HybridParams {
    double temperature_scale = 1.0;
    double cluster_mean = 4.0;
    double learning_rate = 1.0;       // in units of 1 / row_norm_bound
    std::uint64_t subproblem_size = 20;  // capped at 25
    std::uint64_t subproblem_nodes = 50000;
    std::uint64_t gradient_steps = 20;
    std::uint64_t thermal_sweeps = 1;
    std::uint64_t flow_steps = 50;
    std::uint64_t seed_count = 8;
    std::uint64_t stagnation_scale = 50;
    std::uint64_t restart_after = 400;
    std::uint64_t tuning_window = 16;
    double probe_fraction = 0.3;
};

struct SolverParams {
    ScheduleParams schedule;
    HybridParams hybrid;
};

/// Serialize to / parse from the JSON parameter ledger. Unknown keys are a
/// ConfigError; omitted keys keep their defaults; JSON null means "auto".
std::string params_to_json(const SolverParams& params);
SolverParams params_from_json(std::string_view text);
SolverParams load_params(const std::string& path);

/// Apply "section.key=value" (e.g. "sa.t_end=0.01", "qis.cluster_mean=6").
void apply_param_override(SolverParams& params, std::string_view assignment);

}  // namespace qis
