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

#include "qis/relax.hpp"

#include <string>

#include "qis/error.hpp"

namespace qis {

RelaxedEvaluation relaxed_energy_and_gradient(const QuboProblem& problem, std::span<const double> x) {
    const std::size_t n = problem.size();
    if (x.size() != n) throw DimensionError("relaxed point has wrong length");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] >= 0.0 && x[i] <= 1.0)) {
            throw DomainError("relaxed component " + std::to_string(i) + " outside [0, 1]");
        }
    }

    RelaxedEvaluation out;
    out.gradient.assign(problem.linear().begin(), problem.linear().end());
    out.energy = problem.offset();
    for (std::size_t i = 0; i < n; ++i) out.energy += problem.linear()[i] * x[i];
    for (const Term& t : problem.terms()) {
        out.energy += t.value * x[t.i] * x[t.j];
        out.gradient[t.i] += t.value * x[t.j];
        out.gradient[t.j] += t.value * x[t.i];
    }
    return out;
}

BinaryAssignment round_relaxed(std::span<const double> x, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) throw DomainError("rounding threshold must lie in (0, 1)");
    BinaryAssignment bits(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) bits[i] = x[i] > threshold ? 1 : 0;
    return bits;
}

}  // namespace qis
