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

#include <span>
#include <vector>

#include "qis/problem.hpp"

namespace qis {

struct RelaxedEvaluation {
    double energy = 0.0;
    std::vector<double> gradient;
};

/// The QUBO polynomial and its gradient at a point of the unit box.
///
/// gradient_i = diag_i + sum_{j != i} q_ij x_j. Throws DomainError when a
/// component lies outside [0, 1].
RelaxedEvaluation relaxed_energy_and_gradient(const QuboProblem& problem, std::span<const double> x);

/// bit i = 1 iff x_i > threshold (ties round down). `threshold` in (0, 1).
BinaryAssignment round_relaxed(std::span<const double> x, double threshold = 0.5);

}  // namespace qis
