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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "qis/error.hpp"
#include "qis/exact.hpp"
#include "qis/heuristics.hpp"
#include "qis/instances.hpp"
#include "qis/qis.hpp"
#include "support.hpp"

using namespace qis;
using qis::testing::bits_of;
using qis::testing::random_qubo;

namespace {

bool one_flip_optimal(const QuboProblem& p, const BinaryAssignment& x) {
    const QuboFields fields(p, x);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (fields.delta(x, i) < -1e-9) return false;
    }
    return true;
}

std::size_t hamming(const BinaryAssignment& a, const BinaryAssignment& b) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

}  // namespace

TEST_CASE("mode identifiers") {
    const auto all = ModeConfig::all();
    std::set<std::string> ids;
    for (std::size_t k = 0; k < ModeConfig::kCount; ++k) {
        CHECK(all[k].index() == k);
        CHECK(ModeConfig::from_index(k) == all[k]);
        CHECK(ModeConfig::from_id(all[k].id()) == all[k]);
        ids.insert(all[k].id());
    }
    CHECK(ids.size() == 9);
    CHECK(all[0].id() == "G1-R1");
    CHECK(all[5].id() == "G2-R3");
    CHECK(ModeConfig::from_id("G3-R2").global == GlobalStrategy::bifurcation);
    CHECK(ModeConfig::from_id("G3-R2").refine == RefineStrategy::gradient_relaxation);
    for (const char* bad : {"G0-R1", "G4-R1", "G1-R4", "g1-r1", "G1R1", ""}) {
        CHECK_THROWS_AS(ModeConfig::from_id(bad), ConfigError);
    }
}

TEST_CASE("landscape statistics") {
    const QuboProblem p(3, {{0, 1, 2.0}}, {1.0, -1.0, 0.5});
    const BinaryAssignment x{0, 0, 0};
    const LandscapeStats s = measure_landscape(x, QuboFields(p, x));
    CHECK(s.flip_gain_mean == Catch::Approx(0.5 / 3.0));
    const double m = 0.5 / 3.0;
    CHECK(s.flip_gain_variance ==
          Catch::Approx(((1 - m) * (1 - m) + (-1 - m) * (-1 - m) + (0.5 - m) * (0.5 - m)) / 3.0));
}

TEST_CASE("seeding strategies") {
    const auto p = random_qubo(12, 20);
    Rng rng(1);
    const BinaryAssignment greedy = make_seed(p, SeedStrategy::greedy, rng);
    CHECK(greedy.size() == 12);
    const BinaryAssignment ref(12, 1);
    CHECK(make_seed(p, SeedStrategy::antithetic, rng, &ref) == BinaryAssignment(12, 0));

    SeederWeights only_greedy;
    only_greedy.weight = {0.0, 1.0, 0.0, 0.0};
    const SeedEnsemble e = seed_ensemble(p, 10, only_greedy, 3);
    REQUIRE(e.seeds.size() == 10);
    for (const auto s : e.strategies) CHECK(s == SeedStrategy::greedy);
    CHECK(e.weights.weight[1] == Catch::Approx(1.0));
    for (std::size_t k = 0; k < e.seeds.size(); ++k) CHECK(e.energies[k] == evaluate(p, e.seeds[k]));

    CHECK_THROWS_AS(seed_ensemble(p, 0, SeederWeights{}, 0), ConfigError);
    SeederWeights negative;
    negative.weight = {1.0, -0.5, 0.0, 0.5};
    CHECK_THROWS_AS(seed_ensemble(p, 4, negative, 0), DomainError);
    SeederWeights zeros;
    zeros.weight = {0.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(seed_ensemble(p, 4, zeros, 0), DomainError);
}

TEST_CASE("seeder weights stay normalised and ties leave them unchanged") {
    const QuboProblem zero(10, {});
    const SeedEnsemble tie = seed_ensemble(zero, 16, SeederWeights{}, 2);
    for (const double w : tie.weights.weight) CHECK(w == Catch::Approx(0.25));

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const SeedEnsemble e = seed_ensemble(random_qubo(12, seed), 8, SeederWeights{}, seed);
        const double sum = std::accumulate(e.weights.weight.begin(), e.weights.weight.end(), 0.0);
        CHECK(sum == Catch::Approx(1.0).margin(1e-12));
        for (const double w : e.weights.weight) CHECK(w >= 0.0);
    }
}

TEST_CASE("relaxation seeds beat the median uniform seed") {
    int wins = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        const auto p = random_qubo(12, 2000 + trial);
        Rng rng(trial);
        const double relaxed = evaluate(p, make_seed(p, SeedStrategy::relaxation, rng));
        std::vector<double> uniform(21);
        for (auto& e : uniform) e = evaluate(p, make_seed(p, SeedStrategy::uniform, rng));
        std::nth_element(uniform.begin(), uniform.begin() + 10, uniform.end());
        if (relaxed <= uniform[10]) ++wins;
    }
    CHECK(wins >= 70);
}

TEST_CASE("gradient refinement") {
    const QuboProblem pair(2, {{0, 1, -1.0}});
    const BinaryAssignment out = refine_gradient(pair, BinaryAssignment{0, 0}, 20, 0.5);
    CHECK(out == BinaryAssignment{1, 1});
    CHECK(evaluate(pair, out) == -1.0);

    // A zero-gradient start at a local minimum never gets worse.
    const QuboProblem zero(4, {});
    CHECK(evaluate(zero, refine_gradient(zero, BinaryAssignment{1, 0, 1, 0}, 10, 1.0)) == 0.0);

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto p = random_qubo(16, 3000 + seed);
        Rng rng(seed);
        const BinaryAssignment x0 = random_assignment(16, rng);
        const BinaryAssignment x = refine_gradient(p, x0, 20, 1.0 / p.row_norm_bound());
        REQUIRE(one_flip_optimal(p, x));
        REQUIRE(evaluate(p, x) <= evaluate(p, x0) + 1e-12);
    }
}

TEST_CASE("steepest descent reaches a 1-flip minimum") {
    const auto p = random_qubo(20, 21);
    Rng rng(4);
    BinaryAssignment x = random_assignment(20, rng);
    const double start = evaluate(p, x);
    QuboFields fields(p, x);
    const double e = steepest_descent(p, x, fields, start);
    CHECK(e == Catch::Approx(evaluate(p, x)).margin(1e-9));
    CHECK(e <= start);
    CHECK(one_flip_optimal(p, x));
}

TEST_CASE("tunnel moves") {
    const Instance sk = generate_instance(GeneratorSpec{Family::sk, 16, 4});
    const QuboProblem q = ising_to_qubo(sk.ising);
    Rng rng(5);
    const BinaryAssignment x = random_assignment(16, rng);
    const QuboFields fields(q, x);
    const LandscapeStats stats = measure_landscape(x, fields);

    TunnelOptions single;
    single.forced_size = 1;
    const TunnelMove one = tunnel_move(q, x, fields, stats, rng, single);
    REQUIRE(one.cluster.size() == 1);
    auto flipped = x;
    flipped[one.cluster[0]] ^= 1;
    CHECK(one.candidate == flipped);

    TunnelOptions whole;
    whole.forced_size = 16;
    const TunnelMove all = tunnel_move(q, x, fields, stats, rng, whole);
    auto complement = x;
    for (auto& b : complement) b ^= 1;
    CHECK(all.candidate == complement);
    CHECK(evaluate(q, all.candidate) == Catch::Approx(evaluate(q, x)).margin(1e-9));

    for (int k = 0; k < 100; ++k) {
        const TunnelMove m = tunnel_move(q, x, fields, stats, rng);
        const std::set<std::uint32_t> unique(m.cluster.begin(), m.cluster.end());
        REQUIRE(unique.size() == m.cluster.size());
        REQUIRE(hamming(m.candidate, x) == m.cluster.size());
        REQUIRE(m.cluster.size() >= 1);
    }
}

TEST_CASE("tunnel clusters grow with stagnation") {
    const auto p = random_qubo(60, 22);
    Rng rng(6);
    const BinaryAssignment x = random_assignment(60, rng);
    const QuboFields fields(p, x);
    LandscapeStats fresh = measure_landscape(x, fields);
    LandscapeStats stuck = fresh;
    stuck.stagnation = 200;
    double small = 0.0, large = 0.0;
    for (int k = 0; k < 400; ++k) {
        small += static_cast<double>(tunnel_move(p, x, fields, fresh, rng).cluster.size());
        large += static_cast<double>(tunnel_move(p, x, fields, stuck, rng).cluster.size());
    }
    CHECK(small / 400.0 == Catch::Approx(4.0).margin(0.8));
    CHECK(large > 2.5 * small);
}

TEST_CASE("subproblem with every variable reproduces the full energy") {
    const auto p = random_qubo(8, 23);
    Rng rng(7);
    const BinaryAssignment x = random_assignment(8, rng);
    const Subproblem sub = decompose_subproblem(p, x, 8, 1);
    REQUIRE(sub.variables.size() == 8);
    CHECK(evaluate(sub.problem, sub.current) == Catch::Approx(evaluate(p, x)).margin(1e-9));
    for (std::uint64_t k = 0; k < 256; ++k) {
        const auto y = bits_of(k, 8);
        auto full = x;
        embed(sub, y, full);
        REQUIRE(evaluate(sub.problem, y) == Catch::Approx(evaluate(p, full)).margin(1e-9));
    }
}

TEST_CASE("single-variable subproblem is the best single flip of that variable") {
    const auto p = random_qubo(10, 24);
    Rng rng(8);
    const BinaryAssignment x = random_assignment(10, rng);
    const QuboFields fields(p, x);
    const Subproblem sub = decompose_subproblem(p, x, fields, 1, rng);
    REQUIRE(sub.variables.size() == 1);
    const std::uint32_t v = sub.variables[0];
    for (std::size_t i = 0; i < 10; ++i) CHECK(std::abs(fields.delta(x, i)) <= std::abs(fields.delta(x, v)));
    auto flipped = x;
    flipped[v] ^= 1;
    CHECK(brute_force(sub.problem).energy ==
          Catch::Approx(std::min(evaluate(p, x), evaluate(p, flipped))).margin(1e-9));
}

TEST_CASE("subproblem micro-solve is exact and never worsens") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto p = random_qubo(14, 4000 + seed);
        Rng rng(seed);
        const BinaryAssignment x = random_assignment(14, rng);
        const double before = evaluate(p, x);
        const Subproblem sub = decompose_subproblem(p, x, 6, seed);
        REQUIRE(sub.variables.size() == 6);
        REQUIRE(std::is_sorted(sub.variables.begin(), sub.variables.end()));

        double best = std::numeric_limits<double>::infinity();
        for (std::uint64_t k = 0; k < 64; ++k) {
            auto full = x;
            embed(sub, bits_of(k, 6), full);
            best = std::min(best, evaluate(p, full));
        }
        const BnbResult r = branch_and_bound(sub.problem);
        auto adopted = x;
        embed(sub, r.result.best_assignment, adopted);
        const double after = evaluate(p, adopted);
        REQUIRE(after == Catch::Approx(best).margin(1e-9));
        REQUIRE(after <= before + 1e-12);
    }
}

TEST_CASE("subproblem size limits") {
    const auto p = random_qubo(30, 25);
    const BinaryAssignment x(30, 0);
    CHECK_THROWS_AS(decompose_subproblem(p, x, 0, 0), DomainError);
    CHECK_THROWS_AS(decompose_subproblem(p, x, 26, 0), DomainError);
    CHECK_THROWS_AS(decompose_subproblem(random_qubo(5, 1), BinaryAssignment(5, 0), 6, 0), DomainError);
    CHECK(decompose_subproblem(p, x, 25, 0).variables.size() == 25);
}

TEST_CASE("every mode solves small problems") {
    for (const ModeConfig& mode : ModeConfig::all()) {
        int hits = 0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto p = random_qubo(12, 5000 + seed);
            const double opt = brute_force(p).energy;
            const auto r = run_mode(p, mode, RunOptions{Budget::wall(0.3), seed, opt + 1e-9});
            if (r.best_energy <= opt + 1e-9) ++hits;
        }
        INFO(mode.id() << " hits " << hits << "/10");
        CHECK(hits >= 8);
    }
}

TEST_CASE("mode results are 1-flip-optimal and deterministic under a cap") {
    const auto p = random_qubo(40, 26);
    for (const ModeConfig& mode : ModeConfig::all()) {
        INFO(mode.id());
        const auto a = run_mode(p, mode, RunOptions{Budget::iteration_cap(30), 1});
        const auto b = run_mode(p, mode, RunOptions{Budget::iteration_cap(30), 1});
        CHECK(one_flip_optimal(p, a.best_assignment));
        CHECK(a.best_assignment == b.best_assignment);
        CHECK(a.best_energy == b.best_energy);
        CHECK(std::abs(evaluate(p, a.best_assignment) - a.best_energy) <= 1e-9);
    }
}

TEST_CASE("zero budgets and warm incumbents") {
    const auto p = random_qubo(12, 27);
    const ExactSolution opt = brute_force(p);
    Rng rng(9);
    const BinaryAssignment start = random_assignment(12, rng);
    const auto idle = run_mode(p, ModeConfig{}, RunOptions{Budget::iteration_cap(0), 0}, {}, start);
    CHECK(idle.best_assignment == start);
    CHECK(idle.iterations == 0);

    const auto seeded = run_mode(p, ModeConfig{}, RunOptions{Budget::iteration_cap(0), 0});
    CHECK(seeded.best_assignment.size() == 12);
    CHECK(seeded.iterations == 0);

    for (const ModeConfig& mode : ModeConfig::all()) {
        const auto warm = run_mode(p, mode, RunOptions{Budget::iteration_cap(20), 0}, {}, opt.assignment);
        CHECK(warm.best_energy == Catch::Approx(opt.energy).margin(1e-9));
    }
}

TEST_CASE("automatic selection") {
    const QuboProblem zero(10, {});
    const QisResult z = qis_solve(zero, RunOptions{Budget::iteration_cap(90), 0});
    CHECK(z.mode_id == "G1-R1");
    CHECK(z.result.best_energy == 0.0);
    REQUIRE(z.probes.size() == 9);

    const auto p = random_qubo(40, 28);
    const QisResult r = qis_solve(p, RunOptions{Budget::iteration_cap(300), 2});
    REQUIRE(r.probes.size() == 9);
    double probe_best = std::numeric_limits<double>::infinity();
    for (const auto& probe : r.probes) probe_best = std::min(probe_best, probe.energy);
    CHECK(r.result.best_energy <= probe_best + 1e-12);
    ModeConfig::from_id(r.mode_id);

    const QisResult legacy = qis_solve(p, RunOptions{Budget::iteration_cap(300), 2}, {}, QisConfig{std::nullopt, true});
    CHECK(legacy.probes.size() == 6);

    const QisResult manual = qis_solve(p, RunOptions{Budget::iteration_cap(100), 2}, {}, QisConfig{"G2-R3", false});
    CHECK(manual.mode_id == "G2-R3");

    CHECK_THROWS_AS(qis_solve(p, RunOptions{Budget::iteration_cap(10), 0}, {}, QisConfig{"G9-R9", false}), ConfigError);
    HybridParams bad;
    bad.probe_fraction = 1.0;
    CHECK_THROWS_AS(qis_solve(p, RunOptions{Budget::iteration_cap(10), 0}, bad), ConfigError);

    const QisResult again = qis_solve(p, RunOptions{Budget::iteration_cap(300), 2});
    CHECK(again.result.best_assignment == r.result.best_assignment);
    CHECK(again.mode_id == r.mode_id);
}

TEST_CASE("tuner defaults and dominance") {
    CHECK(tune_hyperparams({}, 0) == HyperCell{});
    CHECK(recommend_cell({}) == HyperCell{});
    for (std::size_t k = 0; k < kTuningCells; ++k) CHECK(HyperCell::from_index(k).index() == k);

    std::vector<TuningSample> history;
    Rng rng(1);
    const HyperCell best = HyperCell::from_index(17);
    for (std::size_t cell = 0; cell < kTuningCells; ++cell) {
        for (int s = 0; s < 5; ++s) {
            const double base = cell == best.index() ? -10.0 : 0.0;
            history.push_back({HyperCell::from_index(cell), base + rng.uniform()});
        }
    }
    CHECK(tune_hyperparams(history, 3) == best);
    CHECK(recommend_cell(history) == best);
    CHECK(tune_hyperparams(history, 3) == tune_hyperparams(history, 3));

    HybridParams base;
    const HybridParams scaled = apply_cell(base, HyperCell{{0, 1, 2}});
    CHECK(scaled.temperature_scale == 0.5 * base.temperature_scale);
    CHECK(scaled.cluster_mean == base.cluster_mean);
    CHECK(scaled.learning_rate == 2.0 * base.learning_rate);
}

TEST_CASE("tuner recovers the best cell of a noisy bandit") {
    int recovered = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        Rng env(trial);
        std::array<std::uint8_t, 3> target{};
        for (auto& t : target) t = static_cast<std::uint8_t>(env.below(3));
        auto mean = [&](const HyperCell& c) {
            double m = 0.0;
            for (int d = 0; d < 3; ++d) m += std::abs(static_cast<int>(c.level[d]) - static_cast<int>(target[d]));
            return m;
        };
        std::vector<TuningSample> history;
        for (int pull = 0; pull < 30; ++pull) {
            const HyperCell c = tune_hyperparams(history, trial * 1000 + pull);
            history.push_back({c, mean(c) + 0.3 * env.normal()});
        }
        if (recommend_cell(history) == HyperCell{target}) ++recovered;
    }
    INFO("recovered " << recovered << "/100");
    CHECK(recovered >= 90);
}

TEST_CASE("rerunning the selected mode manually matches the probe phase") {
    int wins = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto p = random_qubo(30, 6000 + seed);
        const RunOptions options{Budget::iteration_cap(120), seed};
        const QisResult automatic = qis_solve(p, options);
        double probe_best = std::numeric_limits<double>::infinity();
        for (const auto& probe : automatic.probes) probe_best = std::min(probe_best, probe.energy);
        const QisResult manual = qis_solve(p, options, {}, QisConfig{automatic.mode_id, false});
        if (manual.result.best_energy <= probe_best + 1e-9) ++wins;
    }
    INFO("wins " << wins << "/100");
    CHECK(wins >= 60);
}
