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

#include "qis/error.hpp"
#include "qis/exact.hpp"
#include "qis/instances.hpp"
#include "support.hpp"

using namespace qis;
using qis::testing::enumerate_minimum;
using qis::testing::random_qubo;

TEST_CASE("Gray-code enumeration finds the plain-enumeration minimum") {
    for (std::size_t n = 1; n <= 12; ++n) {
        const auto p = random_qubo(n, 500 + n);
        const ExactSolution s = brute_force(p);
        REQUIRE(s.energy == Catch::Approx(enumerate_minimum(p)).margin(1e-9));
        REQUIRE(evaluate(p, s.assignment) == Catch::Approx(s.energy).margin(1e-9));
    }
}

TEST_CASE("enumeration handles degenerate sizes") {
    const QuboProblem empty(0, {}, {}, 2.0);
    CHECK(brute_force(empty).energy == 2.0);
    const QuboProblem zero(5, {});
    const auto s = brute_force(zero);
    CHECK(s.energy == 0.0);
    CHECK(s.assignment == BinaryAssignment(5, 0));  // first minimiser in Gray order
    CHECK_THROWS_AS(brute_force(QuboProblem(25, {})), CapacityError);
}

TEST_CASE("node bounds never exceed any completion") {
    const auto p = random_qubo(8, 17);
    Rng rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::int8_t> fixed(8);
        for (auto& f : fixed) f = static_cast<std::int8_t>(static_cast<int>(rng.below(3)) - 1);
        const BnbNode node = make_bnb_node(p, fixed);
        double best = std::numeric_limits<double>::infinity();
        for (std::uint64_t k = 0; k < 256; ++k) {
            auto x = testing::bits_of(k, 8);
            bool consistent = true;
            for (std::size_t i = 0; i < 8; ++i) consistent = consistent && (fixed[i] < 0 || x[i] == fixed[i]);
            if (consistent) best = std::min(best, evaluate(p, x));
        }
        REQUIRE(node.lower_bound <= best + 1e-9);
    }
    // Fully fixed: the bound is the energy.
    std::vector<std::int8_t> all{1, 0, 1, 1, 0, 0, 1, 0};
    const BnbNode leaf = make_bnb_node(p, all);
    CHECK(leaf.lower_bound == Catch::Approx(evaluate(p, BinaryAssignment(all.begin(), all.end()))).margin(1e-12));
}

TEST_CASE("branch and bound is exact on small problems") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const std::size_t n = 6 + seed % 9;
        const auto p = random_qubo(n, 900 + seed);
        const BnbResult r = branch_and_bound(p);
        REQUIRE(r.optimal);
        REQUIRE(r.result.best_energy == Catch::Approx(brute_force(p).energy).margin(1e-9));
        REQUIRE(r.nodes > 0);
    }
}

TEST_CASE("branch and bound on a frustrated max-cut instance") {
    const Instance inst = generate_instance(GeneratorSpec{Family::maxcut, 20, 3});
    const QuboProblem q = ising_to_qubo(inst.ising);
    const BnbResult r = branch_and_bound(q);
    REQUIRE(r.optimal);
    CHECK(r.result.best_energy == Catch::Approx(brute_force(q).energy).margin(1e-9));
}

TEST_CASE("branch and bound limits and incumbents") {
    const auto p = random_qubo(22, 4);
    BnbOptions limited;
    limited.node_limit = 10;
    const BnbResult cut = branch_and_bound(p, limited);
    CHECK_FALSE(cut.optimal);
    CHECK(cut.result.best_assignment.size() == 22);
    CHECK(evaluate(p, cut.result.best_assignment) == Catch::Approx(cut.result.best_energy).margin(1e-9));

    const ExactSolution exact = brute_force(p);
    BnbOptions warm;
    warm.incumbent = exact.assignment;
    const BnbResult r = branch_and_bound(p, warm);
    CHECK(r.optimal);
    CHECK(r.result.best_energy == Catch::Approx(exact.energy).margin(1e-9));

    BnbOptions target;
    target.target_energy = 1e9;
    const BnbResult quick = branch_and_bound(p, target);
    CHECK(quick.result.best_energy <= 1e9);
}
