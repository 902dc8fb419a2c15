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

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qis/bench.hpp"
#include "qis/error.hpp"
#include "qis/instances.hpp"
#include "qis/params.hpp"
#include "qis/qis.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitInstance = 2;

struct ParamOptions {
    std::string file;
    std::vector<std::string> overrides;

    qis::SolverParams resolve() const {
        qis::SolverParams p = file.empty() ? qis::SolverParams{} : qis::load_params(file);
        for (const auto& o : overrides) qis::apply_param_override(p, o);
        return p;
    }
};

void add_param_options(CLI::App* cmd, ParamOptions& opts) {
    cmd->add_option("--params", opts.file, "Parameter ledger (JSON)");
    cmd->add_option("--set", opts.overrides, "Override section.key=value (repeatable)");
}

std::string timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QUBO / Ising solver suite"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Write a generated instance");
    std::string family_name;
    std::size_t gen_n = 0;
    std::uint64_t gen_seed = 0;
    double gen_ratio = 2.11;
    std::size_t gen_edges = 0;
    bool gen_unsigned = false;
    std::string gen_out;
    std::string gen_format = "json";
    std::string gen_name;
    gen->add_option("--family", family_name, "maxcut | nae3sat | sk")->required();
    gen->add_option("--n", gen_n, "Number of variables")->required();
    gen->add_option("--seed", gen_seed, "Generator seed");
    gen->add_option("--ratio", gen_ratio, "Clauses per variable (nae3sat)");
    gen->add_option("--edges", gen_edges, "Edge count (maxcut, default 2n)");
    gen->add_flag("--unsigned", gen_unsigned, "Unit weights instead of +/-1 (maxcut)");
    gen->add_option("--name", gen_name, "Instance name");
    gen->add_option("--format", gen_format, "json | gset")->check(CLI::IsMember({"json", "gset"}));
    gen->add_option("--out", gen_out, "Output path (stdout when omitted)");

    // solve
    auto* solve = app.add_subcommand("solve", "Run one solver on one instance");
    std::string instance_path;
    std::string solver_id = "qis";
    double budget_ms = 1000.0;
    std::uint64_t batch = 1;
    std::uint64_t seed = 0;
    std::string mode;
    std::uint64_t iters = 0;
    double probe_fraction = 0.0;
    std::optional<double> target;
    ParamOptions solve_params;
    solve->add_option("--instance", instance_path, "Instance file (G-Set text or JSON)")->required();
    solve->add_option("--solver", solver_id, "ga | cim | sb | pt | sa | qis | qis2 | bnb");
    auto* budget_opt = solve->add_option("--budget-ms", budget_ms, "Wall-clock budget per run");
    solve->add_option("--batch", batch, "Seeded runs; the best is reported")->check(CLI::PositiveNumber);
    solve->add_option("--seed", seed, "Base seed (replica r uses seed + r)");
    solve->add_option("--mode", mode, "Manual qis mode G1-R1 ... G3-R3");
    auto* iters_opt = solve->add_option("--iters", iters, "Iteration cap per run");
    auto* probe_opt = solve->add_option("--probe-fraction", probe_fraction, "qis probe share of the budget");
    solve->add_option("--target", target, "Stop once this energy is reached");
    add_param_options(solve, solve_params);

    // bench
    auto* bench = app.add_subcommand("bench", "Run a benchmark suite");
    std::string suite_path;
    std::string bench_out;
    unsigned workers = 0;
    bool no_timestamp = false;
    bench->add_option("--suite", suite_path, "Suite file (JSON)")->required();
    bench->add_option("--out", bench_out, "Output root (default: the suite's output)");
    bench->add_option("--workers", workers, "Concurrent cells (default: the suite's workers)");
    bench->add_flag("--no-timestamp", no_timestamp, "Write directly into --out");

    // rank
    auto* rank = app.add_subcommand("rank", "Rank a report.csv");
    std::string rank_report;
    std::string rank_format = "text";
    rank->add_option("--report", rank_report, "report.csv")->required();
    rank->add_option("--format", rank_format, "text | md | csv");

    // verify
    auto* verify = app.add_subcommand("verify", "Compare a report with the reference tables");
    std::string verify_report;
    std::string verify_reference;
    verify->add_option("--report", verify_report, "report.csv")->required();
    verify->add_option("--reference", verify_reference, "Reference table file")->required();

    // params
    auto* params_cmd = app.add_subcommand("params", "Print the effective parameter ledger");
    ParamOptions shown_params;
    add_param_options(params_cmd, shown_params);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*gen) {
            const auto family = qis::parse_family(family_name);
            if (!family || *family == qis::Family::qubo) throw qis::ConfigError("--family must be maxcut, nae3sat or sk");
            qis::GeneratorSpec spec{*family, gen_n, gen_seed, gen_ratio, gen_edges, !gen_unsigned};
            const qis::Instance inst = qis::generate_instance(spec, gen_name);
            std::string text;
            if (gen_format == "gset") {
                if (!inst.graph) throw qis::ConfigError("--format gset needs --family maxcut");
                std::ostringstream os;
                qis::write_gset(os, *inst.graph);
                text = os.str();
            } else {
                text = qis::serialize_instance(inst);
            }
            if (gen_out.empty()) {
                std::cout << text;
            } else {
                std::ofstream out(gen_out, std::ios::binary);
                if (!out) throw qis::InstanceIoError("cannot write '" + gen_out + "'");
                out << text;
                fmt::print("wrote {} ({} variables)\n", gen_out, inst.ising.size());
            }
            return 0;
        }

        if (*solve) {
            qis::SolveRequest request{solver_id, solve_params.resolve(), std::nullopt};
            if (!mode.empty()) {
                qis::ModeConfig::from_id(mode);
                request.mode = mode;
            }
            if (probe_opt->count()) qis::apply_param_override(request.params, "qis.probe_fraction=" + std::to_string(probe_fraction));
            qis::Budget budget;
            if (budget_opt->count() || !iters_opt->count()) {
                if (!(budget_ms > 0.0)) throw qis::ConfigError("--budget-ms must be positive");
                budget.seconds = budget_ms / 1000.0;
            }
            if (iters_opt->count()) {
                if (iters == 0) throw qis::ConfigError("--iters must be positive");
                budget.iterations = iters;
            }
            const qis::Instance inst = qis::load_instance(instance_path);

            std::vector<std::string> modes(batch);
            const qis::BatchResult result = qis::run_batch(batch, seed, [&](std::uint64_t s) {
                std::string selected;
                auto r = qis::run_solver(inst, request, qis::RunOptions{budget, s, target}, &selected);
                modes[s - seed] = selected;
                return r;
            });
            const qis::SolverResult& best = result.best;
            fmt::print("instance      {} ({}, n={})\n", inst.name, qis::to_string(inst.family), inst.ising.size());
            fmt::print("solver        {}\n", qis::solver_label(solver_id));
            if (!modes[result.best_index].empty()) fmt::print("mode          {}\n", modes[result.best_index]);
            fmt::print("seed          {} (best of {})\n", seed + result.best_index, batch);
            fmt::print("energy        {}\n", best.best_energy);
            fmt::print("objective     {}\n", inst.objective_from_energy(best.best_energy));
            fmt::print("time_to_best  {:.4f} s\n", best.time_to_best);
            fmt::print("wall          {:.4f} s\n", best.wall_time);
            fmt::print("iterations    {}\n", best.iterations);
            fmt::print("evaluations   {}\n", best.evaluations);
            return 0;
        }

        if (*bench) {
            qis::BenchSuite suite = qis::load_suite(suite_path);
            if (workers > 0) suite.workers = workers;
            std::filesystem::path root = bench_out.empty() ? std::filesystem::path(suite.output) : std::filesystem::path(bench_out);
            if (!no_timestamp) root /= timestamp();
            const auto outcome = qis::run_suite(suite, root.string());
            fmt::print("{}", qis::emit_table(outcome.report, "text"));
            for (const auto& [inst, msg] : outcome.report.errors) fmt::print(stderr, "instance error: {}: {}\n", inst, msg);
            fmt::print("{} runs written to {}\n", outcome.runs.size(), root.string());
            return 0;
        }

        if (*rank) {
            const qis::BenchReport report = qis::load_report(rank_report);
            const qis::RankTable table = qis::compute_ranks(report);
            for (const auto& w : table.warnings) fmt::print(stderr, "warning: {}\n", w);
            if (rank_format != "text") {
                fmt::print("{}", qis::emit_table(report, rank_format));
                return 0;
            }
            fmt::print("{:<10}", "instance");
            for (const auto& s : table.solvers) fmt::print("{:>7}", s);
            fmt::print("\n");
            for (std::size_t i = 0; i < table.instances.size(); ++i) {
                fmt::print("{:<10}", table.instances[i]);
                for (const auto& r : table.ranks[i]) fmt::print("{:>7}", r ? std::to_string(*r) : "-");
                fmt::print("\n");
            }
            fmt::print("{:<10}", "average");
            for (const auto& a : table.averages) fmt::print("{:>7}", a ? fmt::format("{:.2f}", *a) : "-");
            fmt::print("\n");
            return 0;
        }

        if (*verify) {
            const qis::BenchReport report = qis::load_report(verify_report);
            const auto reference = qis::load_reference(verify_reference);
            const qis::VerifySummary summary = qis::verify_reference(report, reference);
            fmt::print("{}", summary.to_text());
            fmt::print("{} matches, {} mismatches\n", summary.matches(), summary.mismatches());
            return 0;
        }

        if (*params_cmd) {
            fmt::print("{}", qis::params_to_json(shown_params.resolve()));
            return 0;
        }
    } catch (const qis::ConfigError& e) {
        fmt::print(stderr, "configuration error: {}\n", e.what());
        return kExitConfig;
    } catch (const qis::ParseError& e) {
        fmt::print(stderr, "instance error: {}\n", e.what());
        return kExitInstance;
    } catch (const qis::InstanceIoError& e) {
        fmt::print(stderr, "instance error: {}\n", e.what());
        return kExitInstance;
    } catch (const std::invalid_argument& e) {
        fmt::print(stderr, "configuration error: {}\n", e.what());
        return kExitConfig;
    } catch (const std::domain_error& e) {
        fmt::print(stderr, "configuration error: {}\n", e.what());
        return kExitConfig;
    }
    return 0;
}
