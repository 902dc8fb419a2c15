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

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qis/problem.hpp"

namespace qis {

// ---------------------------------------------------------------------------
// Max-Cut (G-Set)
// ---------------------------------------------------------------------------

struct WeightedEdge {
    std::uint32_t i = 0;  // 0-based, i < j
    std::uint32_t j = 0;
    std::int64_t weight = 0;

    friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

struct GsetGraph {
    std::size_t n = 0;
    std::vector<WeightedEdge> edges;

    std::int64_t total_weight() const noexcept;
};

/// Read the G-Set text format: header "n m", then m lines "i j w" with
/// 1-based vertices. Throws ParseError (with line number) on malformed lines,
/// out-of-range vertices, self-loops, duplicate edges, or a wrong edge count.
GsetGraph parse_gset(std::istream& in);
void write_gset(std::ostream& out, const GsetGraph& graph);

/// Uniform random simple graph with `m` distinct edges; weights are +1, or
/// +/-1 with equal probability when `signed_weights` is set.
GsetGraph generate_maxcut(std::size_t n, std::size_t m, bool signed_weights, std::uint64_t seed);

/// J_ij = w_ij, no fields, no offset: E(s) = sum w_ij s_i s_j.
/// The cut satisfies cut(s) = (W_total - E(s)) / 2.
IsingProblem maxcut_to_ising(const GsetGraph& graph);

/// Total weight of edges whose endpoints carry different spins.
std::int64_t cut_value(const GsetGraph& graph, std::span<const std::int8_t> s);

// ---------------------------------------------------------------------------
// NAE-3SAT
// ---------------------------------------------------------------------------

struct Literal {
    std::uint32_t variable = 0;
    std::int8_t sign = 1;  // -1 marks a negated variable

    friend bool operator==(const Literal&, const Literal&) = default;
};

using Clause = std::array<Literal, 3>;

struct NaeFormula {
    std::size_t n = 0;
    std::vector<Clause> clauses;
};

/// Random formula with m = round_half_up(ratio * n) clauses. Each clause
/// draws three distinct variables (rejection on below(n)) and then three
/// independent fair signs from one Rng stream.
NaeFormula nae3sat_generate(std::size_t n, double ratio, std::uint64_t seed);

/// H(s) = 1/4 sum_m (z1 z2 s1 s2 + z2 z3 s2 s3 + z3 z1 s3 s1 + 1); equals the
/// number of clauses whose three signed literals are all equal.
IsingProblem nae3sat_to_ising(const NaeFormula& formula);

std::size_t unsat_count(const NaeFormula& formula, std::span<const std::int8_t> s);

// ---------------------------------------------------------------------------
// Sherrington-Kirkpatrick
// ---------------------------------------------------------------------------

/// Dense couplings already scaled by 1/sqrt(n), stored row by row over the
/// upper triangle: (0,1), (0,2), ..., (0,n-1), (1,2), ...
struct SkInstance {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::vector<double> couplings;

    double coupling(std::size_t i, std::size_t j) const;
};

/// J_ij = Z_ij / sqrt(n), Z_ij drawn with Rng(seed).normal() in the storage order.
SkInstance sk_generate(std::size_t n, std::uint64_t seed);
IsingProblem sk_to_ising(const SkInstance& instance);

// ---------------------------------------------------------------------------
// Benchmark instances and their files
// ---------------------------------------------------------------------------

enum class Family { maxcut, nae3sat, sk, qubo };

std::string_view to_string(Family family);
std::optional<Family> parse_family(std::string_view name);

/// A named instance in canonical Ising form plus the family-specific source
/// needed for reporting.
struct Instance {
    std::string name;
    Family family = Family::qubo;
    IsingProblem ising;

    std::optional<GsetGraph> graph;
    std::optional<NaeFormula> formula;
    std::optional<SkInstance> sk;
    std::optional<QuboProblem> qubo;
    std::optional<double> ratio;
    std::optional<std::uint64_t> seed;

    /// Value reported in tables for a given Ising energy:
    /// maxcut -> -cut, nae3sat -> violated clauses H, sk/qubo -> the energy.
    double objective_from_energy(double ising_energy) const;

    /// Ising energy without the constant term (the raw NAE objective).
    double raw_energy(double ising_energy) const { return ising_energy - ising.offset(); }
};

struct GeneratorSpec {
    Family family = Family::sk;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double ratio = 2.11;          // nae3sat clauses per variable
    std::size_t edges = 0;        // maxcut edge count, 0 -> 2n
    bool signed_weights = true;   // maxcut +/-1 weights
};

Instance generate_instance(const GeneratorSpec& spec, std::string name = {});

/// Load a native JSON instance or a G-Set text file (detected by content).
/// Throws InstanceIoError when unreadable and ParseError when malformed.
Instance load_instance(const std::string& path);

/// Native instance document. Generated families keep their parameters;
/// explicit data (edges, clauses, couplings) is written when `explicit_data`.
std::string serialize_instance(const Instance& instance, bool explicit_data = true);
Instance parse_instance_json(std::string_view text, std::string fallback_name = {});

}  // namespace qis
