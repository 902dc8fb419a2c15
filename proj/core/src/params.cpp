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

#include "qis/params.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "qis/error.hpp"

namespace qis {
namespace {

using json = nlohmann::json;

using FieldRef = std::variant<double*, std::optional<double>*, std::uint64_t*>;

struct Field {
    std::string_view section;
    std::string_view key;
    FieldRef ref;
};

// Single source for the ledger layout.
std::vector<Field> fields_of(SolverParams& p) {
    auto& s = p.schedule;
    auto& h = p.hybrid;
    return {
        {"sa", "t_start", &s.sa.t_start},
        {"sa", "t_end", &s.sa.t_end},
        {"sa", "sweeps_per_cycle", &s.sa.sweeps_per_cycle},
        {"pt", "replicas", &s.pt.replicas},
        {"pt", "t_min", &s.pt.t_min},
        {"pt", "t_max", &s.pt.t_max},
        {"pt", "swap_interval", &s.pt.swap_interval},
        {"ga", "population", &s.ga.population},
        {"ga", "tournament", &s.ga.tournament},
        {"ga", "crossover_rate", &s.ga.crossover_rate},
        {"ga", "mutation_rate", &s.ga.mutation_rate},
        {"ga", "elite", &s.ga.elite},
        {"sb", "dt", &s.sb.dt},
        {"sb", "coupling", &s.sb.coupling},
        {"sb", "steps_per_run", &s.sb.steps_per_run},
        {"sb", "pump_start", &s.sb.pump_start},
        {"sb", "init_amplitude", &s.sb.init_amplitude},
        {"sb", "readout_interval", &s.sb.readout_interval},
        {"cim", "dt", &s.cim.dt},
        {"cim", "coupling", &s.cim.coupling},
        {"cim", "pump_start", &s.cim.pump_start},
        {"cim", "pump_end", &s.cim.pump_end},
        {"cim", "noise", &s.cim.noise},
        {"cim", "steps_per_run", &s.cim.steps_per_run},
        {"cim", "init_amplitude", &s.cim.init_amplitude},
        {"cim", "clamp", &s.cim.clamp},
        {"cim", "readout_interval", &s.cim.readout_interval},
        {"qis", "temperature_scale", &h.temperature_scale},
        {"qis", "cluster_mean", &h.cluster_mean},
        {"qis", "learning_rate", &h.learning_rate},
        {"qis", "subproblem_size", &h.subproblem_size},
        {"qis", "subproblem_nodes", &h.subproblem_nodes},
        {"qis", "gradient_steps", &h.gradient_steps},
        {"qis", "thermal_sweeps", &h.thermal_sweeps},
        {"qis", "flow_steps", &h.flow_steps},
        {"qis", "seed_count", &h.seed_count},
        {"qis", "stagnation_scale", &h.stagnation_scale},
        {"qis", "restart_after", &h.restart_after},
        {"qis", "tuning_window", &h.tuning_window},
        {"qis", "probe_fraction", &h.probe_fraction},
    };
}

void assign(const Field& field, const json& value) {
    const std::string where = std::string(field.section) + "." + std::string(field.key);
    try {
        std::visit(
            [&](auto* target) {
                using T = std::remove_pointer_t<decltype(target)>;
                if constexpr (std::is_same_v<T, std::optional<double>>) {
                    if (value.is_null()) {
                        target->reset();
                    } else {
                        *target = value.get<double>();
                    }
                } else if constexpr (std::is_same_v<T, double>) {
                    *target = value.get<double>();
                } else {
                    if (!value.is_number_unsigned()) throw ConfigError(where + " must be a non-negative integer");
                    *target = value.get<T>();
                }
            },
            field.ref);
    } catch (const json::exception&) {
        throw ConfigError("bad value for " + where + ": " + value.dump());
    }
}

void validate(const SolverParams& p) {
    const auto& s = p.schedule;
    if (s.sa.t_start && !(*s.sa.t_start > s.sa.t_end)) throw ConfigError("sa.t_start must exceed sa.t_end");
    if (!(s.sa.t_end > 0.0)) throw ConfigError("sa.t_end must be positive");
    if (s.pt.replicas < 2) throw ConfigError("pt.replicas must be at least 2");
    if (s.pt.t_min && !(*s.pt.t_min > 0.0)) throw ConfigError("pt.t_min must be positive");
    if (s.pt.swap_interval == 0) throw ConfigError("pt.swap_interval must be positive");
    if (s.ga.population < 2) throw ConfigError("ga.population must be at least 2");
    if (s.ga.tournament < 1) throw ConfigError("ga.tournament must be positive");
    if (s.ga.elite > s.ga.population) throw ConfigError("ga.elite cannot exceed ga.population");
    if (!(s.sb.dt > 0.0) || s.sb.steps_per_run == 0) throw ConfigError("sb.dt and sb.steps_per_run must be positive");
    if (!(s.cim.dt > 0.0) || s.cim.steps_per_run == 0) throw ConfigError("cim.dt and cim.steps_per_run must be positive");
    const auto& h = p.hybrid;
    if (!(h.probe_fraction > 0.0 && h.probe_fraction < 1.0)) throw ConfigError("qis.probe_fraction must lie in (0, 1)");
    if (h.subproblem_size < 1 || h.subproblem_size > 25) throw ConfigError("qis.subproblem_size must lie in [1, 25]");
    if (h.seed_count < 1) throw ConfigError("qis.seed_count must be positive");
}

}  // namespace

std::string params_to_json(const SolverParams& params) {
    SolverParams copy = params;
    json doc = json::object();
    for (const Field& f : fields_of(copy)) {
        json value;
        std::visit(
            [&](auto* target) {
                using T = std::remove_pointer_t<decltype(target)>;
                if constexpr (std::is_same_v<T, std::optional<double>>) {
                    value = *target ? json(**target) : json(nullptr);
                } else {
                    value = *target;
                }
            },
            f.ref);
        doc[std::string(f.section)][std::string(f.key)] = value;
    }
    return doc.dump(2) + "\n";
}

SolverParams params_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("parameter ledger is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("parameter ledger must be a JSON object");
    SolverParams params;
    auto fields = fields_of(params);
    for (const auto& [section, entries] : doc.items()) {
        if (section == "comment") continue;
        if (std::none_of(fields.begin(), fields.end(), [&](const Field& f) { return f.section == section; })) {
            throw ConfigError("unknown parameter section '" + section + "'");
        }
        if (!entries.is_object()) throw ConfigError("ledger section '" + section + "' must be an object");
        for (const auto& [key, value] : entries.items()) {
            auto it = std::find_if(fields.begin(), fields.end(),
                                   [&](const Field& f) { return f.section == section && f.key == key; });
            if (it == fields.end()) throw ConfigError("unknown parameter " + section + "." + key);
            assign(*it, value);
        }
    }
    validate(params);
    return params;
}

SolverParams load_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open parameter ledger '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return params_from_json(buffer.str());
}

void apply_param_override(SolverParams& params, std::string_view assignment) {
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq) {
        throw ConfigError("override must look like section.key=value, got '" + std::string(assignment) + "'");
    }
    const auto section = assignment.substr(0, dot);
    const auto key = assignment.substr(dot + 1, eq - dot - 1);
    const auto text = std::string(assignment.substr(eq + 1));
    json value;
    if (text == "auto" || text == "null") {
        value = nullptr;
    } else {
        try {
            value = json::parse(text);
        } catch (const json::exception&) {
            throw ConfigError("override value is not a number: '" + text + "'");
        }
    }
    auto fields = fields_of(params);
    auto it = std::find_if(fields.begin(), fields.end(),
                           [&](const Field& f) { return f.section == section && f.key == key; });
    if (it == fields.end()) throw ConfigError("unknown parameter " + std::string(section) + "." + std::string(key));
    assign(*it, value);
    validate(params);
}

}  // namespace qis
