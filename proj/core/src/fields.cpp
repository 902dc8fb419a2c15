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

#include "qis/fields.hpp"

namespace qis {
namespace {

template <class Problem, class Value>
double checked_delta(const Problem& problem, std::span<const Value> a, std::size_t i,
                     const LocalFields<Problem>& cache) {
    if (a.size() != problem.size() || cache.size() != problem.size()) {
        throw DimensionError("assignment or cache length does not match the problem");
    }
    if (i >= problem.size()) throw DimensionError("flip index " + std::to_string(i) + " out of range");
    cache.audit(problem, a, i);
    return cache.delta(a, i);
}

}  // namespace

double delta_flip(const QuboProblem& problem, std::span<const std::uint8_t> x, std::size_t i,
                  const QuboFields& cache) {
    return checked_delta(problem, x, i, cache);
}

double delta_flip(const IsingProblem& problem, std::span<const std::int8_t> s, std::size_t i,
                  const IsingFields& cache) {
    return checked_delta(problem, s, i, cache);
}

}  // namespace qis
