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

#include "qis/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "qis/error.hpp"
#include "qis/fields.hpp"

namespace qis {

ExactSolution brute_force(const QuboProblem& problem) {
    const std::size_t n = problem.size();
    if (n > kBruteForceMaxVariables) {
        throw CapacityError("brute force limited to " + std::to_string(kBruteForceMaxVariables) + " variables, got " +
                            std::to_string(n));
    }
    BinaryAssignment x(n, 0);
    QuboFields fields(problem, x);
    double energy = problem.offset();
    ExactSolution best{energy, x};
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < count; ++k) {
        const auto bit = static_cast<std::size_t>(std::countr_zero(k));
        energy += fields.delta(x, bit);
        fields.flip(problem, x, bit);
        if (energy < best.energy) {
            best.energy = energy;
            best.assignment = x;
        }
    }
    best.energy = evaluate(problem, best.assignment);
    return best;
}

BnbNode make_bnb_node(const QuboProblem& problem, std::vector<std::int8_t> fixed) {
    const std::size_t n = problem.size();
    if (fixed.size() != n) throw DimensionError("node state has wrong length");
    BnbNode node;
    node.partial_energy = problem.offset();
    std::vector<double> marginal(problem.linear().begin(), problem.linear().end());
    std::vector<double> negative(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (fixed[i] == 1) node.partial_energy += problem.linear()[i];
    }
    for (const Term& t : problem.terms()) {
        const auto a = fixed[t.i];
        const auto b = fixed[t.j];
        if (a >= 0 && b >= 0) {
            if (a == 1 && b == 1) node.partial_energy += t.value;
        } else if (a < 0 && b < 0) {
            negative[t.i] += 0.5 * std::min(0.0, t.value);
            negative[t.j] += 0.5 * std::min(0.0, t.value);
        } else if (a == 1) {
            marginal[t.j] += t.value;
        } else if (b == 1) {
            marginal[t.i] += t.value;
        }
    }
    node.lower_bound = node.partial_energy;
    for (std::size_t i = 0; i < n; ++i) {
        if (fixed[i] < 0) node.lower_bound += std::min(0.0, marginal[i] + negative[i]);
    }
    node.fixed = std::move(fixed);
    return node;
}

namespace {

class BranchAndBound {
 public:
    BranchAndBound(const QuboProblem& problem, const BnbOptions& options)
        : problem_(problem),
          options_(options),
          n_(problem.size()),
          value_(n_, -1),
          marginal_(problem.linear().begin(), problem.linear().end()),
          negative_(n_, 0.0),
          order_(n_) {
        for (const Term& t : problem.terms()) {
            negative_[t.i] += 0.5 * std::min(0.0, t.value);
            negative_[t.j] += 0.5 * std::min(0.0, t.value);
        }
        partial_ = problem.offset();
        for (std::size_t i = 0; i < n_; ++i) bound_sum_ += std::min(0.0, marginal_[i] + negative_[i]);

        std::vector<double> influence(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            influence[i] = std::abs(problem.linear()[i]);
            for (const Neighbor& nb : problem.neighbors(i)) influence[i] += std::abs(nb.weight);
        }
        std::iota(order_.begin(), order_.end(), 0u);
        std::stable_sort(order_.begin(), order_.end(),
                         [&](std::uint32_t a, std::uint32_t b) { return influence[a] > influence[b]; });
    }

    BnbResult run() {
        RunClock clock(Budget{options_.seconds, options_.node_limit ? options_.node_limit
                                                                    : std::optional<std::uint64_t>{UINT64_MAX}});
        BestTracker tracker(clock, options_.target_energy);
        std::uint64_t evaluations = 0;

        BinaryAssignment seed = options_.incumbent ? *options_.incumbent : BinaryAssignment(n_, 0);
        check_assignment(n_, seed);
        tracker.offer(evaluate(problem_, seed), seed);
        ++evaluations;

        bool complete = search(clock, tracker, evaluations);

        BnbResult out;
        out.nodes = nodes_;
        out.optimal = complete;
        out.result = tracker.finish(evaluate(problem_, tracker.best_assignment()), evaluations, nodes_);
        return out;
    }

 private:
    struct Saved {
        std::uint32_t index;
        double marginal;
        double negative;
    };
    struct Frame {
        std::int8_t first = 0;
        std::uint8_t tried = 0;
        std::size_t trail_mark = 0;
        double partial = 0.0;
        double bound_sum = 0.0;
    };

    std::int8_t preferred_value(std::uint32_t k) const { return marginal_[k] < 0.0 ? 1 : 0; }

    void fix(std::uint32_t k, std::int8_t v) {
        bound_sum_ -= std::min(0.0, marginal_[k] + negative_[k]);
        if (v == 1) partial_ += marginal_[k];
        value_[k] = v;
        for (const Neighbor& nb : problem_.neighbors(k)) {
            const auto j = nb.index;
            if (value_[j] >= 0) continue;
            trail_.push_back({j, marginal_[j], negative_[j]});
            const double before = std::min(0.0, marginal_[j] + negative_[j]);
            if (v == 1) marginal_[j] += nb.weight;
            negative_[j] -= 0.5 * std::min(0.0, nb.weight);
            bound_sum_ += std::min(0.0, marginal_[j] + negative_[j]) - before;
        }
    }

    void unfix(std::uint32_t k, const Frame& frame) {
        while (trail_.size() > frame.trail_mark) {
            const Saved& s = trail_.back();
            marginal_[s.index] = s.marginal;
            negative_[s.index] = s.negative;
            trail_.pop_back();
        }
        value_[k] = -1;
        partial_ = frame.partial;
        bound_sum_ = frame.bound_sum;
    }

    bool out_of_budget(const RunClock& clock, const BestTracker& tracker) const {
        if (tracker.target_reached()) return true;
        if (options_.node_limit && nodes_ >= *options_.node_limit) return true;
        return (nodes_ & 1023) == 0 && clock.time_up();
    }

    // Returns true when the whole tree was explored.
    bool search(const RunClock& clock, BestTracker& tracker, std::uint64_t& evaluations) {
        if (n_ == 0) return true;
        if (partial_ + bound_sum_ >= tracker.best_energy()) return true;

        std::vector<Frame> frames(n_);
        BinaryAssignment leaf(n_, 0);
        std::size_t depth = 0;
        frames[0] = {preferred_value(order_[0]), 0, trail_.size(), partial_, bound_sum_};

        for (;;) {
            Frame& frame = frames[depth];
            const std::uint32_t k = order_[depth];
            if (frame.tried == 2) {
                if (depth == 0) return true;
                --depth;
                unfix(order_[depth], frames[depth]);
                continue;
            }
            if (out_of_budget(clock, tracker)) return false;

            const std::int8_t v = frame.tried == 0 ? frame.first : static_cast<std::int8_t>(1 - frame.first);
            ++frame.tried;
            fix(k, v);
            ++nodes_;

            if (depth + 1 == n_) {
                ++evaluations;
                if (partial_ < tracker.best_energy()) {
                    for (std::size_t i = 0; i < n_; ++i) leaf[i] = static_cast<std::uint8_t>(value_[i]);
                    tracker.offer(partial_, leaf);
                }
                unfix(k, frame);
                continue;
            }
            if (partial_ + bound_sum_ >= tracker.best_energy()) {
                unfix(k, frame);
                continue;
            }
            ++depth;
            frames[depth] = {preferred_value(order_[depth]), 0, trail_.size(), partial_, bound_sum_};
        }
    }

    const QuboProblem& problem_;
    const BnbOptions& options_;
    std::size_t n_;
    std::vector<std::int8_t> value_;
    std::vector<double> marginal_;
    std::vector<double> negative_;
    std::vector<std::uint32_t> order_;
    std::vector<Saved> trail_;
    double partial_ = 0.0;
    double bound_sum_ = 0.0;
    std::uint64_t nodes_ = 0;
};

}  // namespace

BnbResult branch_and_bound(const QuboProblem& problem, const BnbOptions& options) {
    return BranchAndBound(problem, options).run();
}

}  // namespace qis
