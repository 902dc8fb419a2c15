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

#include "qis/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "qis/error.hpp"
#include "qis/exact.hpp"
#include "qis/heuristics.hpp"
#include "qis/qis.hpp"

namespace qis {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string read_file(const std::string& path, bool config) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        if (config) throw ConfigError("cannot open '" + path + "'");
        throw InstanceIoError("cannot open '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InstanceIoError("cannot write '" + path.string() + "'");
    out << text;
}

std::string number(double v) { return fmt::format("{}", v); }

// Table display: integers as such, everything else with 4 decimals.
std::string display(double v) {
    if (v == std::round(v) && std::abs(v) < 1e15) return fmt::format("{}", static_cast<long long>(v));
    return fmt::format("{:.4f}", v);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        parts.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) return parts;
        start = pos + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> out;
    for (auto line : split(text, '\n')) {
        line = trim(line);
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

bool same_value(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

std::string file_token(std::string_view s) {
    std::string out(s);
    for (auto& c : out) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-' && c != '_') c = '_';
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Solver registry
// ---------------------------------------------------------------------------

std::vector<std::string> runnable_solvers() { return {"ga", "cim", "sb", "pt", "sa", "qis2", "qis", "qis3", "bnb"}; }

bool is_runnable_solver(std::string_view id) {
    const auto all = runnable_solvers();
    return std::find(all.begin(), all.end(), lower(id)) != all.end();
}

std::string solver_label(std::string_view id) {
    static const std::map<std::string, std::string> labels{
        {"ga", "GA"},     {"cim", "CIM"},   {"sb", "SB"},     {"pt", "PT"},     {"sa", "SA"},
        {"qis2", "QIS2"}, {"qis", "QIS3"},  {"qis3", "QIS3"}, {"bnb", "BnB"},   {"neal", "Neal"},
        {"gurobi", "Gurobi"}};
    const auto it = labels.find(lower(id));
    return it == labels.end() ? std::string(id) : it->second;
}

SolverResult run_solver(const Instance& instance, const SolveRequest& request, const RunOptions& options,
                        std::string* selected_mode) {
    const std::string id = lower(request.solver);
    if (!is_runnable_solver(id)) {
        throw ConfigError("unknown solver '" + request.solver + "' (runnable: ga, cim, sb, pt, sa, qis, qis2, bnb)");
    }
    const bool hybrid = id == "qis" || id == "qis3" || id == "qis2";
    if (request.mode && !hybrid) throw ConfigError("--mode applies to the qis solvers only");
    const auto& schedule = request.params.schedule;

    SolverResult result;
    if (id == "sb") {
        result = simulated_bifurcation(instance.ising, options, schedule.sb);
    } else if (id == "cim") {
        result = cim_heuristic(instance.ising, options, schedule.cim);
    } else {
        const QuboProblem qubo = ising_to_qubo(instance.ising);
        if (id == "sa") {
            result = simulated_annealing(qubo, options, schedule.sa);
        } else if (id == "pt") {
            result = parallel_tempering(qubo, options, schedule.pt);
        } else if (id == "ga") {
            result = genetic_algorithm(qubo, options, schedule.ga);
        } else if (id == "bnb") {
            BnbOptions opts;
            opts.seconds = options.budget.seconds;
            opts.node_limit = options.budget.iterations;
            opts.target_energy = options.target_energy;
            result = branch_and_bound(qubo, opts).result;
        } else {
            QisConfig config;
            config.manual_mode = request.mode;
            config.legacy = id == "qis2";
            QisResult q = qis_solve(qubo, options, request.params.hybrid, config);
            if (selected_mode) *selected_mode = q.mode_id;
            result = std::move(q.result);
        }
    }
    result.best_energy = evaluate(instance.ising, to_spins(result.best_assignment));
    if (!result.trace.empty()) result.trace.back().energy = result.best_energy;
    return result;
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

BenchSuite parse_suite(std::string_view text, const std::string& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("suite is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("suite must be a JSON object");
    auto resolve = [&](const std::string& p) {
        const fs::path path(p);
        return path.is_absolute() ? path.string() : (fs::path(base_dir) / path).lexically_normal().string();
    };

    BenchSuite suite;
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "instances") {
                for (const json& item : value) {
                    SuiteInstance inst;
                    if (item.contains("path")) {
                        inst.path = resolve(item.at("path").get<std::string>());
                    } else {
                        GeneratorSpec spec;
                        const auto family = parse_family(item.at("family").get<std::string>());
                        if (!family) throw ConfigError("unknown family in suite: " + item.at("family").dump());
                        spec.family = *family;
                        spec.n = item.at("n").get<std::size_t>();
                        spec.seed = item.value("seed", std::uint64_t{0});
                        spec.ratio = item.value("ratio", spec.ratio);
                        spec.edges = item.value("edges", std::size_t{0});
                        spec.signed_weights = item.value("signed", true);
                        inst.generator = spec;
                    }
                    inst.name = item.value("name", std::string{});
                    suite.instances.push_back(std::move(inst));
                }
            } else if (key == "solvers") {
                for (const json& item : value) {
                    SuiteSolver s;
                    if (item.is_string()) {
                        s.id = item.get<std::string>();
                    } else {
                        s.id = item.at("id").get<std::string>();
                        s.overrides = item.value("set", std::vector<std::string>{});
                        if (item.contains("mode")) s.mode = item.at("mode").get<std::string>();
                        s.label = item.value("label", std::string{});
                    }
                    if (s.label.empty()) s.label = solver_label(s.id);
                    suite.solvers.push_back(std::move(s));
                }
            } else if (key == "budget_s") {
                suite.budget_seconds = value.get<double>();
            } else if (key == "iteration_cap") {
                suite.iteration_cap = value.get<std::uint64_t>();
            } else if (key == "batch") {
                suite.batch = value.get<std::uint64_t>();
            } else if (key == "seed_base") {
                suite.seed_base = value.get<std::uint64_t>();
            } else if (key == "output") {
                suite.output = resolve(value.get<std::string>());
            } else if (key == "workers") {
                suite.workers = value.get<unsigned>();
            } else if (key == "params") {
                suite.params = load_params(resolve(value.get<std::string>()));
            } else if (key != "comment") {
                throw ConfigError("unknown suite key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed suite: ") + e.what());
    }
    if (suite.budget_seconds && !(*suite.budget_seconds > 0.0)) throw ConfigError("budget_s must be positive");
    if (!suite.budget_seconds && !suite.iteration_cap) throw ConfigError("suite needs budget_s or iteration_cap");
    if (suite.iteration_cap && *suite.iteration_cap == 0) throw ConfigError("iteration_cap must be positive");
    if (suite.batch < 1) throw ConfigError("batch must be at least 1");
    if (suite.workers < 1) suite.workers = 1;
    return suite;
}

BenchSuite load_suite(const std::string& path) {
    return parse_suite(read_file(path, true), fs::path(path).parent_path().string().empty()
                                                  ? std::string(".")
                                                  : fs::path(path).parent_path().string());
}

std::string run_to_json(const RunRecord& run) {
    json trace = json::array();
    for (const TracePoint& p : run.trace) trace.push_back({p.elapsed, p.energy});
    json doc = {{"instance", run.instance},       {"solver", run.solver},         {"seed", run.seed},
                {"best_energy", run.best_energy}, {"objective", run.objective},   {"time_to_best_s", run.time_to_best},
                {"wall_s", run.wall_time},        {"evaluations", run.evaluations}, {"iterations", run.iterations},
                {"mode", run.mode},               {"trace", trace}};
    return doc.dump(2) + "\n";
}

RunRecord run_from_json(std::string_view text) {
    try {
        const json doc = json::parse(text);
        RunRecord r;
        r.instance = doc.at("instance").get<std::string>();
        r.solver = doc.at("solver").get<std::string>();
        r.seed = doc.at("seed").get<std::uint64_t>();
        r.best_energy = doc.at("best_energy").get<double>();
        r.objective = doc.at("objective").get<double>();
        r.time_to_best = doc.at("time_to_best_s").get<double>();
        r.wall_time = doc.at("wall_s").get<double>();
        r.evaluations = doc.at("evaluations").get<std::uint64_t>();
        r.iterations = doc.at("iterations").get<std::uint64_t>();
        r.mode = doc.value("mode", std::string{});
        for (const json& p : doc.at("trace")) r.trace.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        return r;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed run record: ") + e.what(), 0);
    }
}

BenchReport aggregate_runs(const std::vector<RunRecord>& runs, const std::vector<std::string>& instances,
                           const std::vector<std::string>& solvers) {
    BenchReport report;
    report.instances = instances;
    report.solvers = solvers;
    report.cells.assign(instances.size(), std::vector<std::optional<ReportCell>>(solvers.size()));

    std::vector<const RunRecord*> sorted;
    for (const RunRecord& r : runs) sorted.push_back(&r);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const RunRecord* a, const RunRecord* b) { return a->seed < b->seed; });
    for (const RunRecord* r : sorted) {
        const auto i = std::find(instances.begin(), instances.end(), r->instance) - instances.begin();
        const auto s = std::find(solvers.begin(), solvers.end(), r->solver) - solvers.begin();
        if (i == static_cast<std::ptrdiff_t>(instances.size()) || s == static_cast<std::ptrdiff_t>(solvers.size())) {
            continue;
        }
        auto& cell = report.cells[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)];
        if (!cell || r->best_energy < cell->energy) {
            std::vector<double> members = cell ? cell->member_energies : std::vector<double>{};
            cell = ReportCell{r->best_energy, r->objective, std::move(members)};
        }
        cell->member_energies.push_back(r->best_energy);
    }
    return report;
}

namespace {

Instance materialize(const SuiteInstance& item) {
    if (item.path) return load_instance(*item.path);
    Instance inst = generate_instance(*item.generator, item.name);
    return inst;
}

std::string runs_csv(const std::vector<RunRecord>& runs) {
    std::string out = "instance,solver,seed,best_energy,time_to_best_s,wall_s,evaluations\n";
    for (const RunRecord& r : runs) {
        out += fmt::format("{},{},{},{},{},{},{}\n", r.instance, r.solver, r.seed, number(r.best_energy),
                           number(r.time_to_best), number(r.wall_time), r.evaluations);
    }
    return out;
}

}  // namespace

SuiteOutcome run_suite(const BenchSuite& suite, const std::string& out_dir) {
    // Resolve every solver configuration before any run.
    std::vector<SolveRequest> requests;
    std::vector<std::string> labels;
    for (const SuiteSolver& s : suite.solvers) {
        if (!is_runnable_solver(s.id)) {
            throw ConfigError("unknown or reference-only solver id '" + s.id + "'");
        }
        SolveRequest req{s.id, suite.params, s.mode};
        for (const auto& o : s.overrides) apply_param_override(req.params, o);
        if (s.mode) {
            ModeConfig::from_id(*s.mode);
            const auto id = lower(s.id);
            if (id != "qis" && id != "qis3" && id != "qis2") throw ConfigError("mode given to non-qis solver " + s.id);
        }
        requests.push_back(std::move(req));
        labels.push_back(s.label);
    }
    if (requests.empty()) throw ConfigError("suite lists no solvers");

    SuiteOutcome outcome;
    std::vector<Instance> loaded;
    std::vector<std::string> names;
    for (const SuiteInstance& item : suite.instances) {
        const std::string what = item.path ? *item.path : item.name;
        try {
            loaded.push_back(materialize(item));
            names.push_back(loaded.back().name);
        } catch (const InstanceIoError& e) {
            outcome.report.errors.emplace_back(what, e.what());
        } catch (const ParseError& e) {
            outcome.report.errors.emplace_back(what, e.what());
        }
    }

    Budget budget{suite.budget_seconds, suite.iteration_cap};
    struct Task {
        std::size_t instance;
        std::size_t solver;
        std::vector<RunRecord> records;
    };
    std::vector<Task> tasks;
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        for (std::size_t s = 0; s < requests.size(); ++s) tasks.push_back({i, s, {}});
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= tasks.size()) return;
            Task& task = tasks[k];
            try {
                const Instance& inst = loaded[task.instance];
                for (std::uint64_t r = 0; r < suite.batch; ++r) {
                    RunOptions options{budget, suite.seed_base + r, std::nullopt};
                    std::string mode;
                    const SolverResult res = run_solver(inst, requests[task.solver], options, &mode);
                    task.records.push_back({inst.name, labels[task.solver], options.seed, res.best_energy,
                                            inst.objective_from_energy(res.best_energy), res.time_to_best,
                                            res.wall_time, res.evaluations, res.iterations, mode, res.trace});
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const unsigned count = std::max(1u, std::min<unsigned>(suite.workers, static_cast<unsigned>(tasks.size())));
    if (count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    for (Task& task : tasks) {
        for (RunRecord& r : task.records) outcome.runs.push_back(std::move(r));
    }
    auto errors = std::move(outcome.report.errors);
    outcome.report = aggregate_runs(outcome.runs, names, labels);
    outcome.report.errors = std::move(errors);

    if (!out_dir.empty()) {
        const fs::path root(out_dir);
        fs::create_directories(root / "runs");
        for (const RunRecord& r : outcome.runs) {
            const std::string file = file_token(r.instance) + "__" + file_token(r.solver) + "__" +
                                     std::to_string(r.seed) + ".json";
            write_file(root / "runs" / file, run_to_json(r));
        }
        write_file(root / "runs.csv", runs_csv(outcome.runs));
        write_file(root / "report.csv", emit_table(outcome.report, "csv"));
        std::string md = emit_table(outcome.report, "md");
        if (!outcome.report.errors.empty()) {
            md += "\nInstance errors:\n\n";
            for (const auto& [inst, msg] : outcome.report.errors) md += "- " + inst + ": " + msg + "\n";
        }
        write_file(root / "report.md", md);
    }
    return outcome;
}

std::vector<RunRecord> load_runs(const std::string& out_dir) {
    std::vector<fs::path> files;
    const fs::path dir = fs::path(out_dir) / "runs";
    if (!fs::is_directory(dir)) throw InstanceIoError("no runs directory under '" + out_dir + "'");
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<RunRecord> runs;
    for (const auto& f : files) runs.push_back(run_from_json(read_file(f.string(), false)));
    return runs;
}

// ---------------------------------------------------------------------------
// Ranking and tables
// ---------------------------------------------------------------------------

std::vector<int> competition_ranks(const std::vector<double>& values) {
    std::vector<int> ranks(values.size(), 1);
    for (std::size_t i = 0; i < values.size(); ++i) {
        for (std::size_t j = 0; j < values.size(); ++j) {
            if (values[j] < values[i] && !same_value(values[i], values[j])) ++ranks[i];
        }
    }
    return ranks;
}

RankTable compute_ranks(const BenchReport& report) {
    RankTable table;
    table.instances = report.instances;
    table.solvers = report.solvers;
    table.ranks.assign(report.instances.size(), std::vector<std::optional<int>>(report.solvers.size()));
    std::vector<double> sum(report.solvers.size(), 0.0);
    std::vector<std::size_t> rows(report.solvers.size(), 0);
    for (std::size_t i = 0; i < report.instances.size(); ++i) {
        std::vector<double> values;
        std::vector<std::size_t> columns;
        for (std::size_t s = 0; s < report.solvers.size(); ++s) {
            if (const auto& cell = report.cells[i][s]) {
                values.push_back(cell->objective);
                columns.push_back(s);
            } else {
                table.warnings.push_back(report.instances[i] + ": no entry for " + report.solvers[s] +
                                         ", excluded from the row");
            }
        }
        const auto ranks = competition_ranks(values);
        for (std::size_t k = 0; k < columns.size(); ++k) {
            table.ranks[i][columns[k]] = ranks[k];
            sum[columns[k]] += ranks[k];
            ++rows[columns[k]];
        }
    }
    for (std::size_t s = 0; s < report.solvers.size(); ++s) {
        table.averages.push_back(rows[s] ? std::optional<double>(sum[s] / static_cast<double>(rows[s]))
                                         : std::nullopt);
    }
    return table;
}

std::string emit_table(const BenchReport& report, std::string_view format) {
    if (format != "csv" && format != "md" && format != "text") {
        throw ConfigError("unknown table format '" + std::string(format) + "' (csv, md, text)");
    }
    const RankTable ranks = compute_ranks(report);
    const std::size_t rows = report.instances.size();
    const std::size_t cols = report.solvers.size();
    auto is_best = [&](std::size_t i, std::size_t s) { return ranks.ranks[i][s] && *ranks.ranks[i][s] == 1; };

    std::string out;
    if (format == "csv") {
        out = "instance,solver,objective,energy,rank,best\n";
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t s = 0; s < cols; ++s) {
                const auto& cell = report.cells[i][s];
                if (!cell) continue;
                out += fmt::format("{},{},{},{},{},{}\n", report.instances[i], report.solvers[s],
                                   number(cell->objective), number(cell->energy), *ranks.ranks[i][s],
                                   is_best(i, s) ? 1 : 0);
            }
        }
        return out;
    }

    // Grid of formatted cells, header first, average-rank row last.
    std::vector<std::vector<std::string>> grid;
    std::vector<std::string> header{"instance"};
    for (const auto& s : report.solvers) header.push_back(s);
    grid.push_back(header);
    for (std::size_t i = 0; i < rows; ++i) {
        std::vector<std::string> line{report.instances[i]};
        for (std::size_t s = 0; s < cols; ++s) {
            const auto& cell = report.cells[i][s];
            if (!cell) {
                line.push_back("-");
            } else if (format == "md") {
                line.push_back(is_best(i, s) ? "**" + display(cell->objective) + "**" : display(cell->objective));
            } else {
                line.push_back(display(cell->objective) + (is_best(i, s) ? "*" : ""));
            }
        }
        grid.push_back(line);
    }
    std::vector<std::string> avg{"average rank"};
    for (const auto& a : ranks.averages) avg.push_back(a ? fmt::format("{:.2f}", *a) : "-");
    grid.push_back(avg);

    if (format == "md") {
        auto row = [](const std::vector<std::string>& cells) {
            std::string line = "|";
            for (const auto& c : cells) line += " " + c + " |";
            return line + "\n";
        };
        out += row(grid[0]);
        out += "|";
        for (std::size_t c = 0; c < grid[0].size(); ++c) out += c == 0 ? " --- |" : " ---: |";
        out += "\n";
        for (std::size_t r = 1; r < grid.size(); ++r) out += row(grid[r]);
        return out;
    }
    std::vector<std::size_t> width(grid[0].size(), 0);
    for (const auto& line : grid) {
        for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
    }
    for (const auto& line : grid) {
        std::string text;
        for (std::size_t c = 0; c < line.size(); ++c) {
            text += c == 0 ? fmt::format("{:<{}}", line[c], width[c]) : fmt::format("  {:>{}}", line[c], width[c]);
        }
        out += text + "\n";
    }
    return out;
}

BenchReport parse_report_csv(std::string_view text) {
    const auto lines = lines_of(text);
    if (lines.empty()) throw ParseError("empty report", 1);
    const auto header = split(lines[0], ',');
    auto column = [&](std::string_view name) -> std::optional<std::size_t> {
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (trim(header[c]) == name) return c;
        }
        return std::nullopt;
    };
    const auto ci = column("instance");
    const auto cs = column("solver");
    const auto co = column("objective");
    const auto ce = column("energy");
    if (!ci || !cs || !co) throw ParseError("report header needs instance, solver and objective columns", 1);

    struct Row {
        std::string instance, solver;
        double objective, energy;
    };
    std::vector<Row> rows;
    std::vector<std::string> instances, solvers;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto parts = split(lines[k], ',');
        if (parts.size() != header.size()) throw ParseError("wrong number of fields", k + 1);
        const auto objective = parse_double(parts[*co]);
        if (!objective) throw ParseError("objective is not a number", k + 1);
        std::optional<double> energy = ce ? parse_double(parts[*ce]) : std::nullopt;
        if (ce && !energy && !trim(parts[*ce]).empty()) throw ParseError("energy is not a number", k + 1);
        Row row{std::string(trim(parts[*ci])), std::string(trim(parts[*cs])), *objective, energy.value_or(*objective)};
        if (std::find(instances.begin(), instances.end(), row.instance) == instances.end()) {
            instances.push_back(row.instance);
        }
        if (std::find(solvers.begin(), solvers.end(), row.solver) == solvers.end()) solvers.push_back(row.solver);
        rows.push_back(std::move(row));
    }
    BenchReport report;
    report.instances = instances;
    report.solvers = solvers;
    report.cells.assign(instances.size(), std::vector<std::optional<ReportCell>>(solvers.size()));
    for (const Row& r : rows) {
        const auto i = static_cast<std::size_t>(std::find(instances.begin(), instances.end(), r.instance) -
                                                instances.begin());
        const auto s =
            static_cast<std::size_t>(std::find(solvers.begin(), solvers.end(), r.solver) - solvers.begin());
        report.cells[i][s] = ReportCell{r.energy, r.objective, {r.energy}};
    }
    return report;
}

BenchReport load_report(const std::string& path) { return parse_report_csv(read_file(path, false)); }

// ---------------------------------------------------------------------------
// Reference verification
// ---------------------------------------------------------------------------

std::vector<ReferenceCell> parse_reference(std::string_view text) {
    const auto lines = lines_of(text);
    if (lines.empty() || lines[0] != "table,instance,solver,value,bold") {
        throw ParseError("reference header must be 'table,instance,solver,value,bold'", 1);
    }
    static const std::vector<std::string_view> tables{"maxcut_energy", "maxcut_rank", "maxcut_rank_avg", "nae3sat_energy", "sk_energy"};
    std::vector<ReferenceCell> cells;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        if (lines[k].front() == '#') continue;
        const auto parts = split(lines[k], ',');
        if (parts.size() != 5) throw ParseError("expected 5 fields", k + 1);
        ReferenceCell c;
        c.table = std::string(trim(parts[0]));
        if (std::find(tables.begin(), tables.end(), c.table) == tables.end()) {
            throw ParseError("unknown table '" + c.table + "'", k + 1);
        }
        c.instance = std::string(trim(parts[1]));
        c.solver = std::string(trim(parts[2]));
        const auto value = parse_double(parts[3]);
        if (!value) throw ParseError("value is not a number", k + 1);
        c.value = *value;
        const auto bold = trim(parts[4]);
        if (bold != "0" && bold != "1") throw ParseError("bold flag must be 0 or 1", k + 1);
        c.bold = bold == "1";
        cells.push_back(std::move(c));
    }
    return cells;
}

std::vector<ReferenceCell> load_reference(const std::string& path) { return parse_reference(read_file(path, false)); }

std::size_t VerifySummary::matches() const {
    return static_cast<std::size_t>(std::count_if(items.begin(), items.end(), [](const VerifyItem& i) { return i.match; }));
}

std::size_t VerifySummary::mismatches() const { return items.size() - matches(); }

std::string VerifySummary::to_text() const {
    std::string out = fmt::format("rank rows matched: {}/{}\n", rank_rows_matched, rank_rows_total);
    std::map<std::string, std::pair<std::size_t, std::size_t>> per_kind;
    for (const auto& item : items) {
        auto& [ok, total] = per_kind[item.kind];
        ++total;
        if (item.match) ++ok;
    }
    for (const auto& [kind, counts] : per_kind) {
        out += fmt::format("{} cells matched: {}/{}\n", kind, counts.first, counts.second);
    }
    for (const auto& item : items) {
        if (item.kind == "average") {
            out += fmt::format("average {} {}: reference {:.2f}, computed {:.4f}{}\n", item.solver,
                               item.match ? "match" : "MISMATCH", item.expected, item.actual,
                               item.match ? "" : fmt::format(" (off by {:.4f})", item.actual - item.expected));
        } else if (!item.match) {
            out += fmt::format("{} MISMATCH {} {}: reference {}, computed {}\n", item.kind, item.instance,
                               item.solver, number(item.expected), number(item.actual));
        }
    }
    return out;
}

VerifySummary verify_reference(const BenchReport& report, const std::vector<ReferenceCell>& reference) {
    auto key = [](std::string_view solver) { return lower(solver_label(lower(solver))); };
    std::map<std::string, std::size_t> column;
    for (std::size_t s = 0; s < report.solvers.size(); ++s) column[key(report.solvers[s])] = s;
    std::map<std::string, std::size_t> row;
    for (std::size_t i = 0; i < report.instances.size(); ++i) row[report.instances[i]] = i;

    const RankTable ranks = compute_ranks(report);
    VerifySummary summary;
    std::map<std::string, bool> row_ok;
    for (const ReferenceCell& c : reference) {
        const auto sc = column.find(key(c.solver));
        if (sc == column.end()) continue;
        if (c.table == "maxcut_rank_avg") {
            const auto& avg = ranks.averages[sc->second];
            if (!avg) continue;
            summary.items.push_back({"average", c.instance, c.solver, c.value, *avg,
                                     std::abs(*avg - c.value) <= 0.01 + 1e-9});
            continue;
        }
        const auto ri = row.find(c.instance);
        if (ri == row.end()) continue;
        const auto& rank = ranks.ranks[ri->second][sc->second];
        if (!rank) continue;
        if (c.table == "maxcut_rank") {
            const bool match = static_cast<double>(*rank) == c.value;
            summary.items.push_back({"rank", c.instance, c.solver, c.value, static_cast<double>(*rank), match});
            auto [it, fresh] = row_ok.emplace(c.instance, match);
            if (!fresh) it->second = it->second && match;
        } else if (c.table == "maxcut_energy") {
            const double ours = *rank == 1 ? 1.0 : 0.0;
            summary.items.push_back({"best", c.instance, c.solver, c.bold ? 1.0 : 0.0, ours, ours == (c.bold ? 1.0 : 0.0)});
        }
    }
    summary.rank_rows_total = row_ok.size();
    summary.rank_rows_matched =
        static_cast<std::size_t>(std::count_if(row_ok.begin(), row_ok.end(), [](const auto& p) { return p.second; }));
    return summary;
}

}  // namespace qis
