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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "qis/error.hpp"
#include "qis/problem.hpp"

namespace qis {

/// Per-variable local fields for O(degree) single-flip updates.
///
/// For a QUBO the field of i is  diag_i + sum_j q_ij x_j  and flipping i
/// changes the energy by (1 - 2 x_i) * field_i. For an Ising model it is
/// h_i + sum_j J_ij s_j  and the change is -2 s_i * field_i.
///
/// The cache is a plain value owned by the caller; it tracks one assignment
/// and must be updated through `flip()` whenever that assignment changes.
template <class Problem>
class LocalFields {
 public:
    static_assert(std::is_same_v<Problem, QuboProblem> || std::is_same_v<Problem, IsingProblem>);
    static constexpr bool kBinary = std::is_same_v<Problem, QuboProblem>;
    using Value = std::conditional_t<kBinary, std::uint8_t, std::int8_t>;

    LocalFields() = default;

    LocalFields(const Problem& problem, std::span<const Value> assignment) { rebuild(problem, assignment); }

    void rebuild(const Problem& problem, std::span<const Value> assignment) {
        check_assignment(problem.size(), assignment);
        fields_.resize(problem.size());
        for (std::size_t i = 0; i < fields_.size(); ++i) fields_[i] = recompute(problem, assignment, i);
    }

    std::size_t size() const noexcept { return fields_.size(); }
    double field(std::size_t i) const noexcept { return fields_[i]; }
    std::span<const double> values() const noexcept { return fields_; }

    /// Energy change of flipping variable i. Unchecked hot path.
    double delta(std::span<const Value> assignment, std::size_t i) const noexcept {
        if constexpr (kBinary) {
            return assignment[i] ? -fields_[i] : fields_[i];
        } else {
            return -2.0 * assignment[i] * fields_[i];
        }
    }

    /// Flip variable i in `assignment` and update the neighbours' fields.
    void flip(const Problem& problem, std::span<Value> assignment, std::size_t i) noexcept {
        if constexpr (kBinary) {
            assignment[i] ^= 1;
            const double sign = assignment[i] ? 1.0 : -1.0;
            for (const Neighbor& nb : problem.neighbors(i)) fields_[nb.index] += sign * nb.weight;
        } else {
            assignment[i] = static_cast<std::int8_t>(-assignment[i]);
            const double change = 2.0 * assignment[i];
            for (const Neighbor& nb : problem.neighbors(i)) fields_[nb.index] += change * nb.weight;
        }
    }

    /// Field of i recomputed from scratch in O(degree(i)).
    static double recompute(const Problem& problem, std::span<const Value> assignment, std::size_t i) noexcept {
        double f = problem.linear()[i];
        for (const Neighbor& nb : problem.neighbors(i)) f += nb.weight * assignment[nb.index];
        return f;
    }

    /// Throw ConsistencyError if the field of i disagrees with a recomputation.
    void audit(const Problem& problem, std::span<const Value> assignment, std::size_t i) const {
        const double fresh = recompute(problem, assignment, i);
        const double tolerance = 1e-9 * (1.0 + problem.row_norm_bound());
        if (std::abs(fresh - fields_[i]) > tolerance) {
            throw ConsistencyError("stale local field for variable " + std::to_string(i));
        }
    }

    void audit(const Problem& problem, std::span<const Value> assignment) const {
        if (fields_.size() != problem.size() || assignment.size() != problem.size()) {
            throw ConsistencyError("local field cache size does not match the problem");
        }
        for (std::size_t i = 0; i < fields_.size(); ++i) audit(problem, assignment, i);
    }

 private:
    std::vector<double> fields_;
};

using QuboFields = LocalFields<QuboProblem>;
using IsingFields = LocalFields<IsingProblem>;

/// Energy change of flipping i, with the cache audited at i first.
///
/// Costs O(degree(i)). Solvers call `LocalFields::delta` directly in inner loops.
double delta_flip(const QuboProblem& problem, std::span<const std::uint8_t> x, std::size_t i,
                  const QuboFields& cache);
double delta_flip(const IsingProblem& problem, std::span<const std::int8_t> s, std::size_t i,
                  const IsingFields& cache);

}  // namespace qis
