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
#include <span>
#include <vector>

namespace qis {

/// One quadratic coefficient. Canonical terms satisfy i < j.
struct Term {
    std::uint32_t i = 0;
    std::uint32_t j = 0;
    double value = 0.0;

    friend bool operator==(const Term&, const Term&) = default;
};

/// Entry of a variable's adjacency row.
struct Neighbor {
    std::uint32_t index = 0;
    double weight = 0.0;
};

/// x in {0,1}^n, one byte per variable.
using BinaryAssignment = std::vector<std::uint8_t>;

/// s in {-1,+1}^n, one byte per spin.
using SpinAssignment = std::vector<std::int8_t>;

namespace detail {

/// Sparse quadratic form  offset + sum_i linear_i v_i + sum_{i<j} w_ij v_i v_j.
///
/// Immutable after construction. Terms are stored once in the upper triangle
/// (sorted, duplicates merged, exact zeros dropped) and mirrored into a CSR
/// adjacency for O(degree) local updates.
class PairwiseForm {
 public:
    std::size_t size() const noexcept { return linear_.size(); }
    double offset() const noexcept { return offset_; }
    std::span<const double> linear() const noexcept { return linear_; }
    std::span<const Term> terms() const noexcept { return terms_; }

    std::span<const Neighbor> neighbors(std::size_t i) const noexcept {
        return {adjacency_.data() + row_start_[i], adjacency_.data() + row_start_[i + 1]};
    }
    std::size_t degree(std::size_t i) const noexcept { return row_start_[i + 1] - row_start_[i]; }

    /// Largest |coefficient| over linear and quadratic terms (0 for the empty form).
    double max_abs_coefficient() const noexcept { return max_abs_; }

    /// max_i |linear_i| + sum_j |w_ij|; bounds every single-variable energy change.
    double row_norm_bound() const noexcept { return row_bound_; }

 protected:
    PairwiseForm() = default;

    /// `square_to_linear` selects how diagonal (i, i) entries fold:
    /// into linear_i for binaries (x^2 = x), into the offset for spins (s^2 = 1).
    PairwiseForm(std::size_t n, std::vector<Term> terms, std::vector<double> linear, double offset,
                 bool square_to_linear);

 private:
    std::vector<double> linear_;
    std::vector<Term> terms_;
    std::vector<std::size_t> row_start_{0};
    std::vector<Neighbor> adjacency_;
    double offset_ = 0.0;
    double max_abs_ = 0.0;
    double row_bound_ = 0.0;
};

}  // namespace detail

/// Binary quadratic model  E(x) = offset + sum_i diag_i x_i + sum_{i<j} q_ij x_i x_j.
///
/// Ingestion accepts terms in any orientation: (i, j) and (j, i) are summed
/// into the upper triangle and (i, i) entries fold into the linear part.
class QuboProblem : public detail::PairwiseForm {
 public:
    QuboProblem() = default;
    QuboProblem(std::size_t n, std::vector<Term> terms, std::vector<double> linear = {}, double offset = 0.0);

    /// From a dense row-major n x n matrix Q, so that E(x) = x^T Q x.
    static QuboProblem from_dense(std::size_t n, std::span<const double> matrix);
};

/// Spin model  E(s) = offset + sum_i h_i s_i + sum_{i<j} J_ij s_i s_j.
class IsingProblem : public detail::PairwiseForm {
 public:
    IsingProblem() = default;
    IsingProblem(std::size_t n, std::vector<Term> couplings, std::vector<double> fields = {}, double offset = 0.0);

    std::span<const double> fields() const noexcept { return linear(); }
    std::span<const Term> couplings() const noexcept { return terms(); }
};

double evaluate(const QuboProblem& problem, std::span<const std::uint8_t> x);
double evaluate(const IsingProblem& problem, std::span<const std::int8_t> s);

/// Exact reformulations under s = 2x - 1; energies agree for corresponding assignments.
IsingProblem qubo_to_ising(const QuboProblem& problem);
QuboProblem ising_to_qubo(const IsingProblem& problem);

SpinAssignment to_spins(std::span<const std::uint8_t> x);
BinaryAssignment to_binary(std::span<const std::int8_t> s);

/// Throw DimensionError unless the assignment has length n and a valid alphabet.
void check_assignment(std::size_t n, std::span<const std::uint8_t> x);
void check_assignment(std::size_t n, std::span<const std::int8_t> s);

}  // namespace qis
