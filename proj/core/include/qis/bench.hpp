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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qis/instances.hpp"
#include "qis/params.hpp"
#include "qis/result.hpp"

namespace qis {

// ---------------------------------------------------------------------------
// Solver registry
// ---------------------------------------------------------------------------

/// Runnable solver ids: ga, cim, sb, pt, sa, qis (alias qis3), qis2 (legacy
/// catalogue without tuning) and bnb. neal and gurobi are accepted only as
/// column names of reference tables.
std::vector<std::string> runnable_solvers();
bool is_runnable_solver(std::string_view id);

/// Column label used in tables: "GA", "QIS3", "Neal", ...
std::string solver_label(std::string_view id);

struct SolveRequest {
    std::string solver;
    SolverParams params;
    std::optional<std::string> mode;  // qis only: manual mode
};

/// One run of a solver on an instance. The returned best_energy is the
/// canonical Ising energy of the returned assignment. Throws ConfigError for
/// an unknown solver or a mode given to a non-qis solver.
SolverResult run_solver(const Instance& instance, const SolveRequest& request, const RunOptions& options,
                        std::string* selected_mode = nullptr);

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

struct SuiteInstance {
    std::optional<std::string> path;       // G-Set text or native JSON
    std::optional<GeneratorSpec> generator;
    std::string name;                      // generator instances; files use their own name
};

struct SuiteSolver {
    std::string id;
    std::string label;                     // column name, defaults to solver_label(id)
    std::vector<std::string> overrides;    // "section.key=value"
    std::optional<std::string> mode;
};

struct BenchSuite {
    std::vector<SuiteInstance> instances;
    std::vector<SuiteSolver> solvers;
    std::optional<double> budget_seconds;
    std::optional<std::uint64_t> iteration_cap;
    std::uint64_t batch = 1;
    std::uint64_t seed_base = 0;
    std::string output = "bench_out";
    unsigned workers = 1;
    SolverParams params;
};

/// Suite document:
///   {"instances": [{"path": "g.txt"} | {"family": "sk", "n": 64, "seed": 0, "name": "..."}],
///    "solvers": [{"id": "sa", "set": ["sa.t_end=0.01"], "mode": "G1-R1", "label": "..."}],
///    "budget_s": 1.0, "iteration_cap": 1000, "batch": 8, "seed_base": 0,
///    "output": "dir", "workers": 1, "params": "params.json"}
/// Relative paths resolve against `base_dir`. Throws ConfigError.
BenchSuite parse_suite(std::string_view text, const std::string& base_dir = ".");
BenchSuite load_suite(const std::string& path);

struct RunRecord {
    std::string instance;
    std::string solver;  // label
    std::uint64_t seed = 0;
    double best_energy = 0.0;
    double objective = 0.0;
    double time_to_best = 0.0;
    double wall_time = 0.0;
    std::uint64_t evaluations = 0;
    std::uint64_t iterations = 0;
    std::string mode;  // selected qis mode, empty otherwise
    std::vector<TracePoint> trace;
};

struct ReportCell {
    double energy = 0.0;     // batch best
    double objective = 0.0;  // table value of the batch best
    std::vector<double> member_energies;
};

/// Instance x solver matrix with optional cells.
struct BenchReport {
    std::vector<std::string> instances;
    std::vector<std::string> solvers;
    std::vector<std::vector<std::optional<ReportCell>>> cells;  // [instance][solver]
    std::vector<std::pair<std::string, std::string>> errors;    // (instance, message)
};

/// Batch-best aggregation of run records (order independent).
BenchReport aggregate_runs(const std::vector<RunRecord>& runs, const std::vector<std::string>& instances,
                           const std::vector<std::string>& solvers);

struct SuiteOutcome {
    BenchReport report;
    std::vector<RunRecord> runs;
};

/// Execute every (instance, solver) batch. Unknown solver ids fail with
/// ConfigError before anything runs; instance load failures are recorded in
/// the report and the suite continues. When `out_dir` is non-empty, writes
/// runs/<instance>__<solver>__<seed>.json, runs.csv, report.csv and report.md.
SuiteOutcome run_suite(const BenchSuite& suite, const std::string& out_dir);

/// Reload the run records written by run_suite.
std::vector<RunRecord> load_runs(const std::string& out_dir);
std::string run_to_json(const RunRecord& run);
RunRecord run_from_json(std::string_view text);

// ---------------------------------------------------------------------------
// Ranking and tables
// ---------------------------------------------------------------------------

/// 1-based competition ranks ("1224"): equal values share the smallest position.
/// Values within 1e-9 relative are equal.
std::vector<int> competition_ranks(const std::vector<double>& values);

struct RankTable {
    std::vector<std::string> instances;
    std::vector<std::string> solvers;
    std::vector<std::vector<std::optional<int>>> ranks;  // [instance][solver]
    std::vector<std::optional<double>> averages;         // mean over rows where ranked
    std::vector<std::string> warnings;                   // missing entries
};

/// Rank every report row by objective (lower is better). Missing cells are
/// excluded from their row with a warning.
RankTable compute_ranks(const BenchReport& report);

/// "csv" (instance,solver,objective,energy,rank,best), "md" (best in bold)
/// or "text" (aligned, best marked with *). Throws ConfigError otherwise.
std::string emit_table(const BenchReport& report, std::string_view format);

/// Parse the CSV emitted above. Empty energy fields are allowed (reference
/// matrices that carry objectives only); rank and best columns are ignored.
BenchReport parse_report_csv(std::string_view text);
BenchReport load_report(const std::string& path);

// ---------------------------------------------------------------------------
// Reference verification
// ---------------------------------------------------------------------------

/// Reference rows "table,instance,solver,value,bold" with table in
/// {maxcut_energy, maxcut_rank, maxcut_rank_avg, nae3sat_energy, sk_energy}.
struct ReferenceCell {
    std::string table;
    std::string instance;
    std::string solver;
    double value = 0.0;
    bool bold = false;
};
std::vector<ReferenceCell> parse_reference(std::string_view text);
std::vector<ReferenceCell> load_reference(const std::string& path);

struct VerifyItem {
    std::string kind;  // "rank", "best", "average"
    std::string instance;
    std::string solver;
    double expected = 0.0;
    double actual = 0.0;
    bool match = false;
};

struct VerifySummary {
    std::vector<VerifyItem> items;
    std::size_t rank_rows_total = 0;
    std::size_t rank_rows_matched = 0;

    std::size_t matches() const;
    std::size_t mismatches() const;
    std::string to_text() const;
};

/// Compare our ranks with maxcut_rank, our best markers with maxcut_energy's bold set and
/// our column averages with maxcut_rank_avg (tolerance 0.01). Solvers match by
/// label, case-insensitively. Discrepancies are reported, never thrown.
VerifySummary verify_reference(const BenchReport& report, const std::vector<ReferenceCell>& reference);

}  // namespace qis
