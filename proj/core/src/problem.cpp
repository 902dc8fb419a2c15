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

#include "qis/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qis/error.hpp"

namespace qis {
namespace detail {

PairwiseForm::PairwiseForm(std::size_t n, std::vector<Term> terms, std::vector<double> linear, double offset,
                           bool square_to_linear)
    : linear_(std::move(linear)), offset_(offset) {
    if (n > std::numeric_limits<std::uint32_t>::max()) throw CapacityError("variable count exceeds 2^32 - 1");
    if (linear_.empty()) {
        linear_.assign(n, 0.0);
    } else if (linear_.size() != n) {
        throw DimensionError("linear vector has length " + std::to_string(linear_.size()) + ", expected " +
                             std::to_string(n));
    }
    if (!std::isfinite(offset_)) throw DomainError("offset is not finite");
    for (double v : linear_) {
        if (!std::isfinite(v)) throw DomainError("linear coefficient is not finite");
    }

    std::vector<Term> upper;
    upper.reserve(terms.size());
    for (const Term& t : terms) {
        if (t.i >= n || t.j >= n) {
            throw DimensionError("term (" + std::to_string(t.i) + ", " + std::to_string(t.j) +
                                 ") out of range for n = " + std::to_string(n));
        }
        if (!std::isfinite(t.value)) throw DomainError("quadratic coefficient is not finite");
        if (t.i == t.j) {
            if (square_to_linear) {
                linear_[t.i] += t.value;
            } else {
                offset_ += t.value;
            }
            continue;
        }
        upper.push_back({std::min(t.i, t.j), std::max(t.i, t.j), t.value});
    }
    std::sort(upper.begin(), upper.end(),
              [](const Term& a, const Term& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });

    for (const Term& t : upper) {
        if (!terms_.empty() && terms_.back().i == t.i && terms_.back().j == t.j) {
            terms_.back().value += t.value;
        } else {
            terms_.push_back(t);
        }
    }
    std::erase_if(terms_, [](const Term& t) { return t.value == 0.0; });

    std::vector<std::size_t> degree(n, 0);
    for (const Term& t : terms_) {
        ++degree[t.i];
        ++degree[t.j];
    }
    row_start_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) row_start_[i + 1] = row_start_[i] + degree[i];
    adjacency_.resize(row_start_[n]);
    std::vector<std::size_t> cursor(row_start_.begin(), row_start_.end() - 1);
    for (const Term& t : terms_) {
        adjacency_[cursor[t.i]++] = {t.j, t.value};
        adjacency_[cursor[t.j]++] = {t.i, t.value};
    }

    for (std::size_t i = 0; i < n; ++i) {
        double row = std::abs(linear_[i]);
        max_abs_ = std::max(max_abs_, std::abs(linear_[i]));
        for (const Neighbor& nb : neighbors(i)) {
            row += std::abs(nb.weight);
            max_abs_ = std::max(max_abs_, std::abs(nb.weight));
        }
        row_bound_ = std::max(row_bound_, row);
    }
}

}  // namespace detail

QuboProblem::QuboProblem(std::size_t n, std::vector<Term> terms, std::vector<double> linear, double offset)
    : PairwiseForm(n, std::move(terms), std::move(linear), offset, /*square_to_linear=*/true) {}

QuboProblem QuboProblem::from_dense(std::size_t n, std::span<const double> matrix) {
    if (matrix.size() != n * n) throw DimensionError("dense matrix must have n * n entries");
    std::vector<Term> terms;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = matrix[i * n + j];
            if (v != 0.0) terms.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), v});
        }
    }
    return QuboProblem(n, std::move(terms));
}

IsingProblem::IsingProblem(std::size_t n, std::vector<Term> couplings, std::vector<double> fields, double offset)
    : PairwiseForm(n, std::move(couplings), std::move(fields), offset, /*square_to_linear=*/false) {}

void check_assignment(std::size_t n, std::span<const std::uint8_t> x) {
    if (x.size() != n) {
        throw DimensionError("assignment has length " + std::to_string(x.size()) + ", expected " + std::to_string(n));
    }
    for (auto v : x) {
        if (v > 1) throw DimensionError("binary assignment entry outside {0, 1}");
    }
}

void check_assignment(std::size_t n, std::span<const std::int8_t> s) {
    if (s.size() != n) {
        throw DimensionError("assignment has length " + std::to_string(s.size()) + ", expected " + std::to_string(n));
    }
    for (auto v : s) {
        if (v != 1 && v != -1) throw DimensionError("spin assignment entry outside {-1, +1}");
    }
}

double evaluate(const QuboProblem& problem, std::span<const std::uint8_t> x) {
    check_assignment(problem.size(), x);
    double energy = problem.offset();
    const auto linear = problem.linear();
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i]) energy += linear[i];
    }
    for (const Term& t : problem.terms()) {
        if (x[t.i] && x[t.j]) energy += t.value;
    }
    return energy;
}

double evaluate(const IsingProblem& problem, std::span<const std::int8_t> s) {
    check_assignment(problem.size(), s);
    double energy = problem.offset();
    const auto fields = problem.fields();
    for (std::size_t i = 0; i < s.size(); ++i) energy += fields[i] * s[i];
    for (const Term& t : problem.couplings()) energy += t.value * (s[t.i] * s[t.j]);
    return energy;
}

// x = (1 + s) / 2:
//   a x_i        -> a/2 + (a/2) s_i
//   q x_i x_j    -> q/4 (1 + s_i + s_j + s_i s_j)
IsingProblem qubo_to_ising(const QuboProblem& problem) {
    const std::size_t n = problem.size();
    std::vector<double> fields(n, 0.0);
    double offset = problem.offset();
    const auto linear = problem.linear();
    for (std::size_t i = 0; i < n; ++i) {
        fields[i] += 0.5 * linear[i];
        offset += 0.5 * linear[i];
    }
    std::vector<Term> couplings;
    couplings.reserve(problem.terms().size());
    for (const Term& t : problem.terms()) {
        const double q = 0.25 * t.value;
        couplings.push_back({t.i, t.j, q});
        fields[t.i] += q;
        fields[t.j] += q;
        offset += q;
    }
    return IsingProblem(n, std::move(couplings), std::move(fields), offset);
}

// s = 2x - 1:
//   h s_i        -> 2h x_i - h
//   J s_i s_j    -> 4J x_i x_j - 2J x_i - 2J x_j + J
QuboProblem ising_to_qubo(const IsingProblem& problem) {
    const std::size_t n = problem.size();
    std::vector<double> linear(n, 0.0);
    double offset = problem.offset();
    const auto fields = problem.fields();
    for (std::size_t i = 0; i < n; ++i) {
        linear[i] += 2.0 * fields[i];
        offset -= fields[i];
    }
    std::vector<Term> terms;
    terms.reserve(problem.couplings().size());
    for (const Term& t : problem.couplings()) {
        terms.push_back({t.i, t.j, 4.0 * t.value});
        linear[t.i] -= 2.0 * t.value;
        linear[t.j] -= 2.0 * t.value;
        offset += t.value;
    }
    return QuboProblem(n, std::move(terms), std::move(linear), offset);
}

SpinAssignment to_spins(std::span<const std::uint8_t> x) {
    SpinAssignment s(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] ? 1 : -1;
    return s;
}

BinaryAssignment to_binary(std::span<const std::int8_t> s) {
    BinaryAssignment x(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) x[i] = s[i] > 0 ? 1 : 0;
    return x;
}

}  // namespace qis
