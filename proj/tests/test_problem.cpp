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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "qis/error.hpp"
#include "qis/fields.hpp"
#include "qis/problem.hpp"
#include "qis/relax.hpp"
#include "support.hpp"

using namespace qis;
using qis::testing::bits_of;
using qis::testing::dense_energy;
using qis::testing::random_qubo;

TEST_CASE("sparse evaluation agrees with the dense double sum") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto p = random_qubo(9, seed);
        Rng rng(seed + 100);
        for (int k = 0; k < 20; ++k) {
            std::vector<std::uint8_t> x(9);
            for (auto& b : x) b = rng.coin();
            REQUIRE(evaluate(p, x) == Catch::Approx(dense_energy(p, x)).margin(1e-12));
        }
    }
}

TEST_CASE("ingestion folds diagonals, merges both orientations and drops zeros") {
    // E = 3 + 2 x0 + (1.5 + 0.5) x0 x1 - x1 x2, with a cancelling pair on (0, 2).
    QuboProblem p(3, {{0, 0, 2.0}, {0, 1, 1.5}, {1, 0, 0.5}, {2, 1, -1.0}, {0, 2, 1.0}, {2, 0, -1.0}}, {}, 3.0);
    REQUIRE(p.terms().size() == 2);
    CHECK(p.terms()[0] == Term{0, 1, 2.0});
    CHECK(p.terms()[1] == Term{1, 2, -1.0});
    CHECK(p.linear()[0] == 2.0);
    CHECK(evaluate(p, std::vector<std::uint8_t>{1, 1, 1}) == Catch::Approx(3.0 + 2.0 + 2.0 - 1.0));
    CHECK(p.degree(0) == 1);
    CHECK(p.degree(1) == 2);
    CHECK(p.max_abs_coefficient() == 2.0);

    IsingProblem s(2, {{0, 0, 1.5}, {0, 1, -1.0}}, {0.5, 0.0}, 1.0);
    CHECK(s.offset() == 2.5);  // s_i^2 = 1
    CHECK(evaluate(s, std::vector<std::int8_t>{1, 1}) == Catch::Approx(2.5 + 0.5 - 1.0));
}

TEST_CASE("dense constructor reproduces x^T Q x") {
    const std::vector<double> q{1.0, 2.0, -1.0, 0.5, -3.0, 0.0, 4.0, 1.0, 2.0};
    const auto p = QuboProblem::from_dense(3, q);
    for (std::uint64_t k = 0; k < 8; ++k) {
        const auto x = bits_of(k, 3);
        double expected = 0.0;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) expected += q[i * 3 + j] * x[i] * x[j];
        }
        CHECK(evaluate(p, x) == Catch::Approx(expected).margin(1e-12));
    }
    CHECK_THROWS_AS(QuboProblem::from_dense(3, std::vector<double>(8)), DimensionError);
}

TEST_CASE("malformed inputs are rejected") {
    CHECK_THROWS_AS(QuboProblem(2, {{0, 2, 1.0}}), DimensionError);
    CHECK_THROWS_AS(QuboProblem(2, {}, {1.0}), DimensionError);
    CHECK_THROWS_AS(QuboProblem(2, {{0, 1, std::nan("")}}), DomainError);
    const QuboProblem p(2, {{0, 1, 1.0}});
    CHECK_THROWS_AS(evaluate(p, std::vector<std::uint8_t>{1}), DimensionError);
    CHECK_THROWS_AS(evaluate(p, std::vector<std::uint8_t>{1, 2}), DimensionError);
    const IsingProblem s(2, {{0, 1, 1.0}});
    CHECK_THROWS_AS(evaluate(s, std::vector<std::int8_t>{1, 0}), DimensionError);
}

TEST_CASE("empty and zero problems") {
    const QuboProblem empty(0, {}, {}, 1.25);
    CHECK(evaluate(empty, std::vector<std::uint8_t>{}) == 1.25);
    const QuboProblem zero(4, {});
    for (std::uint64_t k = 0; k < 16; ++k) CHECK(evaluate(zero, bits_of(k, 4)) == 0.0);
}

TEST_CASE("QUBO and Ising forms agree on every assignment") {
    for (std::size_t n = 1; n <= 10; ++n) {
        const auto p = random_qubo(n, 40 + n);
        const IsingProblem ising = qubo_to_ising(p);
        const QuboProblem back = ising_to_qubo(ising);
        for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
            const auto x = bits_of(k, n);
            const double e = evaluate(p, x);
            REQUIRE(std::abs(evaluate(ising, to_spins(x)) - e) <= 1e-9);
            REQUIRE(std::abs(evaluate(back, x) - e) <= 1e-9);
        }
    }
}

TEST_CASE("spin and binary views are inverse") {
    const std::vector<std::uint8_t> x{0, 1, 1, 0};
    const auto s = to_spins(x);
    CHECK(s == std::vector<std::int8_t>{-1, 1, 1, -1});
    CHECK(to_binary(s) == x);
}

TEST_CASE("local fields give exact flip deltas through a flip sequence") {
    const auto p = random_qubo(12, 5);
    Rng rng(6);
    std::vector<std::uint8_t> x(12);
    for (auto& b : x) b = rng.coin();
    QuboFields fields(p, x);
    for (int step = 0; step < 200; ++step) {
        const auto i = static_cast<std::size_t>(rng.below(12));
        auto y = x;
        y[i] ^= 1;
        const double expected = evaluate(p, y) - evaluate(p, x);
        REQUIRE(fields.delta(x, i) == Catch::Approx(expected).margin(1e-10));
        REQUIRE(delta_flip(p, x, i, fields) == Catch::Approx(expected).margin(1e-10));
        fields.flip(p, x, i);
        REQUIRE(x == y);
    }
    fields.audit(p, x);

    const IsingProblem ising = qubo_to_ising(p);
    auto s = to_spins(x);
    IsingFields sf(ising, s);
    for (std::size_t i = 0; i < 12; ++i) {
        auto t = s;
        t[i] = static_cast<std::int8_t>(-t[i]);
        CHECK(sf.delta(s, i) == Catch::Approx(evaluate(ising, t) - evaluate(ising, s)).margin(1e-10));
    }
}

TEST_CASE("a stale cache is detected") {
    const QuboProblem p(3, {{0, 1, 2.0}, {1, 2, -1.0}});
    std::vector<std::uint8_t> x{0, 0, 0};
    QuboFields fields(p, x);
    x[1] = 1;  // changed behind the cache's back
    CHECK_THROWS_AS(delta_flip(p, x, 0, fields), ConsistencyError);
    CHECK_THROWS_AS(fields.audit(p, x), ConsistencyError);
    CHECK_THROWS_AS(delta_flip(p, x, 7, fields), DimensionError);
}

TEST_CASE("relaxed gradient matches central differences") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto p = random_qubo(16, 300 + seed);
        Rng rng(seed);
        std::vector<double> y(16);
        for (auto& v : y) v = 0.1 + 0.8 * rng.uniform();
        const auto eval = relaxed_energy_and_gradient(p, y);
        const double h = 1e-6;
        for (std::size_t i = 0; i < 16; ++i) {
            auto up = y, down = y;
            up[i] += h;
            down[i] -= h;
            const double fd = (relaxed_energy_and_gradient(p, up).energy - relaxed_energy_and_gradient(p, down).energy) /
                              (2.0 * h);
            REQUIRE(std::abs(fd - eval.gradient[i]) <= 1e-6 * std::max(1.0, std::abs(fd)));
        }
    }
}

TEST_CASE("relaxation agrees with the polynomial at vertices and checks its domain") {
    const auto p = random_qubo(6, 9);
    for (std::uint64_t k = 0; k < 64; ++k) {
        const auto x = bits_of(k, 6);
        const std::vector<double> y(x.begin(), x.end());
        CHECK(relaxed_energy_and_gradient(p, y).energy == Catch::Approx(evaluate(p, x)).margin(1e-12));
    }
    CHECK_THROWS_AS(relaxed_energy_and_gradient(p, std::vector<double>{0, 0, 0, 0, 0, 1.5}), DomainError);
    CHECK_THROWS_AS(relaxed_energy_and_gradient(p, std::vector<double>{0, 0}), DimensionError);
}

TEST_CASE("rounding is strict at the threshold") {
    CHECK(round_relaxed(std::vector<double>{0.5, 0.51, 0.0, 1.0}) == std::vector<std::uint8_t>{0, 1, 0, 1});
    CHECK(round_relaxed(std::vector<double>{0.3}, 0.2) == std::vector<std::uint8_t>{1});
    CHECK_THROWS_AS(round_relaxed(std::vector<double>{0.3}, 1.0), DomainError);
}
