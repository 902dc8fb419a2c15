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
#include <optional>
#include <vector>

#include "qis/problem.hpp"
#include "qis/result.hpp"

namespace qis {

inline constexpr std::size_t kBruteForceMaxVariables = 24;

struct ExactSolution {
    double energy = 0.0;
    BinaryAssignment assignment;
};

/// Global minimum by Gray-code enumeration (one incremental flip per step).
/// Ties keep the first minimiser in Gray order. Throws CapacityError for n > 24.
ExactSolution brute_force(const QuboProblem& problem);

/// Search node: per-variable state -1 (free), 0 or 1.
struct BnbNode {
    std::vector<std::int8_t> fixed;
    double partial_energy = 0.0;  // energy of the fixed part, offset included
    double lower_bound = 0.0;     // <= energy of every completion
};

/// Build a node from scratch. With c_i = diag_i + sum_{fixed j = 1} q_ij the
/// bound is  partial + sum_{free i} min(0, c_i + 1/2 sum_{free j} min(0, q_ij)),
/// valid because q x_i x_j >= q (x_i + x_j) / 2 whenever q < 0.
BnbNode make_bnb_node(const QuboProblem& problem, std::vector<std::int8_t> fixed);

struct BnbOptions {
    std::optional<double> seconds;
    std::optional<std::uint64_t> node_limit;
    std::optional<BinaryAssignment> incumbent;
    std::optional<double> target_energy;
};

struct BnbResult {
    SolverResult result;
    bool optimal = false;  // search finished; result is a global minimum
    std::uint64_t nodes = 0;
};

/// Depth-first branch and bound. Variables branch in descending
/// sum_j |q_ij| + |diag_i| order; each node tries first the value with the
/// smaller immediate energy increase. Bound state is updated in O(degree) per
/// fixing and restored from a trail on backtrack.
BnbResult branch_and_bound(const QuboProblem& problem, const BnbOptions& options = {});

}  // namespace qis
