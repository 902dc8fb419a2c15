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
#include <limits>
#include <vector>

#include "qis/problem.hpp"
#include "qis/rng.hpp"

namespace qis::testing {

/// Dense random QUBO: every linear and pair coefficient uniform in [-1, 1].
inline QuboProblem random_qubo(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> linear(n);
    std::vector<Term> terms;
    for (std::size_t i = 0; i < n; ++i) {
        linear[i] = 2.0 * rng.uniform() - 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            terms.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), 2.0 * rng.uniform() - 1.0});
        }
    }
    return QuboProblem(n, std::move(terms), std::move(linear));
}

/// Row-major n x n upper-triangular matrix M with E(x) = offset + x^T M x.
inline std::vector<double> dense_matrix(const QuboProblem& p) {
    const std::size_t n = p.size();
    std::vector<double> m(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m[i * n + i] = p.linear()[i];
    for (const Term& t : p.terms()) m[t.i * n + t.j] += t.value;
    return m;
}

/// Energy by the dense double sum, independent of the sparse evaluator.
inline double dense_energy(const QuboProblem& p, const std::vector<std::uint8_t>& x) {
    const auto m = dense_matrix(p);
    const std::size_t n = p.size();
    double e = p.offset();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) e += m[i * n + j] * x[i] * x[j];
    }
    return e;
}

/// Minimum by plain enumeration over integers (no Gray code, no caches).
inline double enumerate_minimum(const QuboProblem& p) {
    const std::size_t n = p.size();
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::uint8_t> x(n);
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
        for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<std::uint8_t>((k >> i) & 1u);
        double e = p.offset();
        for (std::size_t i = 0; i < n; ++i) e += p.linear()[i] * x[i];
        for (const Term& t : p.terms()) e += t.value * x[t.i] * x[t.j];
        best = std::min(best, e);
    }
    return best;
}

inline std::vector<std::uint8_t> bits_of(std::uint64_t k, std::size_t n) {
    std::vector<std::uint8_t> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<std::uint8_t>((k >> i) & 1u);
    return x;
}

}  // namespace qis::testing
