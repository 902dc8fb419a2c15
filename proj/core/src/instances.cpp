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

#include "qis/instances.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "qis/error.hpp"
#include "qis/rng.hpp"

namespace qis {
namespace {

using json = nlohmann::json;

std::uint64_t edge_key(std::uint64_t i, std::uint64_t j) { return (i << 32) | j; }

// Whitespace-separated integers of one line.
std::vector<std::int64_t> read_integers(const std::string& line, std::size_t line_no) {
    std::vector<std::int64_t> values;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
        while (p < end && std::isspace(static_cast<unsigned char>(*p))) ++p;
        if (p == end) break;
        if (*p == '+') ++p;
        std::int64_t v = 0;
        auto [next, ec] = std::from_chars(p, end, v);
        if (ec != std::errc() || (next < end && !std::isspace(static_cast<unsigned char>(*next)))) {
            throw ParseError("expected integers, got '" + line + "'", line_no);
        }
        values.push_back(v);
        p = next;
    }
    return values;
}

}  // namespace

std::int64_t GsetGraph::total_weight() const noexcept {
    std::int64_t total = 0;
    for (const auto& e : edges) total += e.weight;
    return total;
}

GsetGraph parse_gset(std::istream& in) {
    GsetGraph graph;
    std::string line;
    std::size_t line_no = 0;
    std::size_t expected = 0;
    bool have_header = false;
    std::unordered_set<std::uint64_t> seen;

    while (std::getline(in, line)) {
        ++line_no;
        auto fields = read_integers(line, line_no);
        if (fields.empty()) continue;
        if (!have_header) {
            if (fields.size() != 2 || fields[0] < 1 || fields[1] < 0) {
                throw ParseError("header must be 'n m' with n >= 1", line_no);
            }
            graph.n = static_cast<std::size_t>(fields[0]);
            expected = static_cast<std::size_t>(fields[1]);
            graph.edges.reserve(expected);
            have_header = true;
            continue;
        }
        if (fields.size() != 3) throw ParseError("edge line must be 'i j w'", line_no);
        const auto n = static_cast<std::int64_t>(graph.n);
        if (fields[0] < 1 || fields[0] > n || fields[1] < 1 || fields[1] > n) {
            throw ParseError("vertex index out of range [1, " + std::to_string(n) + "]", line_no);
        }
        if (fields[0] == fields[1]) throw ParseError("self-loop on vertex " + std::to_string(fields[0]), line_no);
        if (graph.edges.size() == expected) throw ParseError("more edges than the header declares", line_no);
        const auto a = static_cast<std::uint32_t>(std::min(fields[0], fields[1]) - 1);
        const auto b = static_cast<std::uint32_t>(std::max(fields[0], fields[1]) - 1);
        if (!seen.insert(edge_key(a, b)).second) {
            throw ParseError("duplicate edge " + std::to_string(a + 1) + "-" + std::to_string(b + 1), line_no);
        }
        graph.edges.push_back({a, b, fields[2]});
    }
    if (!have_header) throw ParseError("empty G-Set input", line_no);
    if (graph.edges.size() != expected) {
        throw ParseError("header declares " + std::to_string(expected) + " edges, found " +
                             std::to_string(graph.edges.size()),
                         line_no);
    }
    return graph;
}

void write_gset(std::ostream& out, const GsetGraph& graph) {
    out << graph.n << ' ' << graph.edges.size() << '\n';
    for (const auto& e : graph.edges) out << e.i + 1 << ' ' << e.j + 1 << ' ' << e.weight << '\n';
}

GsetGraph generate_maxcut(std::size_t n, std::size_t m, bool signed_weights, std::uint64_t seed) {
    if (n < 2) throw DomainError("max-cut graph needs at least 2 vertices");
    if (m > n * (n - 1) / 2) throw DomainError("more edges requested than a simple graph can hold");
    Rng rng(seed);
    GsetGraph graph{n, {}};
    graph.edges.reserve(m);
    std::unordered_set<std::uint64_t> seen;
    while (graph.edges.size() < m) {
        auto a = static_cast<std::uint32_t>(rng.below(n));
        auto b = static_cast<std::uint32_t>(rng.below(n));
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        if (!seen.insert(edge_key(a, b)).second) continue;
        const std::int64_t w = signed_weights && rng.coin() ? -1 : 1;
        graph.edges.push_back({a, b, w});
    }
    return graph;
}

IsingProblem maxcut_to_ising(const GsetGraph& graph) {
    std::vector<Term> couplings;
    couplings.reserve(graph.edges.size());
    for (const auto& e : graph.edges) couplings.push_back({e.i, e.j, static_cast<double>(e.weight)});
    return IsingProblem(graph.n, std::move(couplings));
}

std::int64_t cut_value(const GsetGraph& graph, std::span<const std::int8_t> s) {
    check_assignment(graph.n, s);
    std::int64_t cut = 0;
    for (const auto& e : graph.edges) {
        if (s[e.i] != s[e.j]) cut += e.weight;
    }
    return cut;
}

NaeFormula nae3sat_generate(std::size_t n, double ratio, std::uint64_t seed) {
    if (n < 3) throw DomainError("NAE-3SAT needs at least 3 variables");
    if (!(ratio > 0.0) || !std::isfinite(ratio)) throw DomainError("clause ratio must be positive");
    const auto m = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n) + 0.5));
    Rng rng(seed);
    NaeFormula formula{n, {}};
    formula.clauses.reserve(m);
    for (std::size_t c = 0; c < m; ++c) {
        Clause clause{};
        const auto v0 = static_cast<std::uint32_t>(rng.below(n));
        auto v1 = v0;
        while (v1 == v0) v1 = static_cast<std::uint32_t>(rng.below(n));
        auto v2 = v0;
        while (v2 == v0 || v2 == v1) v2 = static_cast<std::uint32_t>(rng.below(n));
        clause[0].variable = v0;
        clause[1].variable = v1;
        clause[2].variable = v2;
        for (auto& lit : clause) lit.sign = rng.coin() ? -1 : 1;
        formula.clauses.push_back(clause);
    }
    return formula;
}

IsingProblem nae3sat_to_ising(const NaeFormula& formula) {
    std::vector<Term> couplings;
    couplings.reserve(3 * formula.clauses.size());
    for (const Clause& clause : formula.clauses) {
        for (std::size_t a = 0; a < 3; ++a) {
            const Literal& p = clause[a];
            const Literal& q = clause[(a + 1) % 3];
            if (p.variable >= formula.n || q.variable >= formula.n || p.variable == q.variable) {
                throw DomainError("clause variables must be distinct and in range");
            }
            couplings.push_back({p.variable, q.variable, 0.25 * p.sign * q.sign});
        }
    }
    return IsingProblem(formula.n, std::move(couplings), {}, 0.25 * static_cast<double>(formula.clauses.size()));
}

std::size_t unsat_count(const NaeFormula& formula, std::span<const std::int8_t> s) {
    check_assignment(formula.n, s);
    std::size_t count = 0;
    for (const Clause& clause : formula.clauses) {
        const int a = clause[0].sign * s[clause[0].variable];
        const int b = clause[1].sign * s[clause[1].variable];
        const int c = clause[2].sign * s[clause[2].variable];
        if (a == b && b == c) ++count;
    }
    return count;
}

double SkInstance::coupling(std::size_t i, std::size_t j) const {
    if (i == j || i >= n || j >= n) throw DimensionError("SK coupling index out of range");
    if (i > j) std::swap(i, j);
    // Row i starts after sum_{r<i} (n - 1 - r) entries.
    const std::size_t row = i * (2 * n - i - 1) / 2;
    return couplings[row + (j - i - 1)];
}

SkInstance sk_generate(std::size_t n, std::uint64_t seed) {
    if (n < 2) throw DomainError("SK instance needs at least 2 spins");
    Rng rng(seed);
    SkInstance sk{n, seed, {}};
    sk.couplings.resize(n * (n - 1) / 2);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& c : sk.couplings) c = rng.normal() * scale;
    return sk;
}

IsingProblem sk_to_ising(const SkInstance& instance) {
    std::vector<Term> couplings;
    couplings.reserve(instance.couplings.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < instance.n; ++i) {
        for (std::size_t j = i + 1; j < instance.n; ++j) {
            couplings.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), instance.couplings[k++]});
        }
    }
    return IsingProblem(instance.n, std::move(couplings));
}

// ---------------------------------------------------------------------------

std::string_view to_string(Family family) {
    switch (family) {
        case Family::maxcut: return "maxcut";
        case Family::nae3sat: return "nae3sat";
        case Family::sk: return "sk";
        case Family::qubo: return "qubo";
    }
    return "qubo";
}

std::optional<Family> parse_family(std::string_view name) {
    if (name == "maxcut") return Family::maxcut;
    if (name == "nae3sat") return Family::nae3sat;
    if (name == "sk") return Family::sk;
    if (name == "qubo") return Family::qubo;
    return std::nullopt;
}

double Instance::objective_from_energy(double ising_energy) const {
    if (family == Family::maxcut && graph) {
        return 0.5 * (ising_energy - static_cast<double>(graph->total_weight()));
    }
    return ising_energy;
}

Instance generate_instance(const GeneratorSpec& spec, std::string name) {
    Instance inst;
    inst.family = spec.family;
    switch (spec.family) {
        case Family::maxcut: {
            inst.graph = generate_maxcut(spec.n, spec.edges ? spec.edges : 2 * spec.n, spec.signed_weights, spec.seed);
            inst.seed = spec.seed;
            inst.ising = maxcut_to_ising(*inst.graph);
            if (name.empty()) name = "maxcut-n" + std::to_string(spec.n) + "-s" + std::to_string(spec.seed);
            break;
        }
        case Family::nae3sat: {
            inst.formula = nae3sat_generate(spec.n, spec.ratio, spec.seed);
            inst.ratio = spec.ratio;
            inst.seed = spec.seed;
            inst.ising = nae3sat_to_ising(*inst.formula);
            if (name.empty()) name = "nae3sat-n" + std::to_string(spec.n) + "-s" + std::to_string(spec.seed);
            break;
        }
        case Family::sk: {
            inst.sk = sk_generate(spec.n, spec.seed);
            inst.seed = spec.seed;
            inst.ising = sk_to_ising(*inst.sk);
            if (name.empty()) name = "sk-n" + std::to_string(spec.n) + "-s" + std::to_string(spec.seed);
            break;
        }
        case Family::qubo:
            throw ConfigError("the qubo family has no generator; supply an instance file");
    }
    inst.name = std::move(name);
    return inst;
}

namespace {

std::uint32_t index_field(const json& v, std::size_t n) {
    const auto i = v.get<std::int64_t>();
    if (i < 0 || static_cast<std::size_t>(i) >= n) throw ParseError("index out of range in instance document", 0);
    return static_cast<std::uint32_t>(i);
}

Instance from_document(const json& doc, std::string fallback_name) {
    if (!doc.is_object()) throw ParseError("instance document must be a JSON object", 0);
    const auto family_name = doc.value("family", std::string{});
    const auto family = parse_family(family_name);
    if (!family) throw ParseError("unknown instance family '" + family_name + "'", 0);
    if (!doc.contains("n")) throw ParseError("instance document lacks 'n'", 0);
    const auto n = doc.at("n").get<std::size_t>();
    std::string name = doc.value("name", fallback_name);

    Instance inst;
    inst.family = *family;
    switch (*family) {
        case Family::maxcut: {
            if (!doc.contains("edges")) throw ParseError("maxcut document lacks 'edges'", 0);
            std::stringstream text;
            text << n << ' ' << doc.at("edges").size() << '\n';
            for (const auto& e : doc.at("edges")) {
                if (!e.is_array() || e.size() != 3) throw ParseError("edge must be [i, j, w]", 0);
                text << e[0].get<std::int64_t>() + 1 << ' ' << e[1].get<std::int64_t>() + 1 << ' '
                     << e[2].get<std::int64_t>() << '\n';
            }
            inst.graph = parse_gset(text);
            inst.ising = maxcut_to_ising(*inst.graph);
            break;
        }
        case Family::nae3sat: {
            const double ratio = doc.value("ratio", 2.11);
            inst.ratio = ratio;
            if (doc.contains("clauses")) {
                NaeFormula f{n, {}};
                for (const auto& c : doc.at("clauses")) {
                    if (!c.is_array() || c.size() != 3) throw ParseError("clause must hold three literals", 0);
                    Clause clause{};
                    for (std::size_t l = 0; l < 3; ++l) {
                        clause[l].variable = index_field(c[l].at(0), n);
                        const auto sign = c[l].at(1).get<int>();
                        if (sign != 1 && sign != -1) throw ParseError("literal sign must be +1 or -1", 0);
                        clause[l].sign = static_cast<std::int8_t>(sign);
                    }
                    f.clauses.push_back(clause);
                }
                inst.formula = std::move(f);
            } else {
                inst.formula = nae3sat_generate(n, ratio, doc.value("seed", std::uint64_t{0}));
            }
            if (doc.contains("seed")) inst.seed = doc.at("seed").get<std::uint64_t>();
            inst.ising = nae3sat_to_ising(*inst.formula);
            break;
        }
        case Family::sk: {
            const auto seed = doc.value("seed", std::uint64_t{0});
            inst.seed = seed;
            if (doc.contains("couplings")) {
                SkInstance sk{n, seed, std::vector<double>(n * (n - 1) / 2, 0.0)};
                for (const auto& c : doc.at("couplings")) {
                    auto i = index_field(c.at(0), n);
                    auto j = index_field(c.at(1), n);
                    if (i == j) throw ParseError("SK coupling on the diagonal", 0);
                    if (i > j) std::swap(i, j);
                    sk.couplings[i * (2 * n - i - 1) / 2 + (j - i - 1)] = c.at(2).get<double>();
                }
                inst.sk = std::move(sk);
            } else {
                inst.sk = sk_generate(n, seed);
            }
            inst.ising = sk_to_ising(*inst.sk);
            break;
        }
        case Family::qubo: {
            std::vector<Term> terms;
            for (const auto& t : doc.value("quadratic", json::array())) {
                terms.push_back({index_field(t.at(0), n), index_field(t.at(1), n), t.at(2).get<double>()});
            }
            auto linear = doc.value("linear", std::vector<double>{});
            inst.qubo = QuboProblem(n, std::move(terms), std::move(linear), doc.value("offset", 0.0));
            inst.ising = qubo_to_ising(*inst.qubo);
            break;
        }
    }
    inst.name = name.empty() ? std::string(to_string(*family)) : name;
    return inst;
}

}  // namespace

Instance parse_instance_json(std::string_view text, std::string fallback_name) {
    json doc;
    try {
        doc = json::parse(text);
        return from_document(doc, std::move(fallback_name));
    } catch (const json::exception& e) {
        throw ParseError(std::string("instance document: ") + e.what(), 0);
    } catch (const DimensionError& e) {
        throw ParseError(e.what(), 0);
    } catch (const DomainError& e) {
        throw ParseError(e.what(), 0);
    }
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InstanceIoError("cannot open instance file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    const std::string stem = std::filesystem::path(path).stem().string();

    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return parse_instance_json(text, stem);

    std::istringstream gset(text);
    Instance inst;
    inst.name = stem;
    inst.family = Family::maxcut;
    inst.graph = parse_gset(gset);
    inst.ising = maxcut_to_ising(*inst.graph);
    return inst;
}

std::string serialize_instance(const Instance& instance, bool explicit_data) {
    json doc;
    doc["format"] = "qis-instance";
    doc["version"] = 1;
    doc["name"] = instance.name;
    doc["family"] = std::string(to_string(instance.family));
    doc["n"] = instance.ising.size();
    switch (instance.family) {
        case Family::maxcut: {
            json edges = json::array();
            for (const auto& e : instance.graph->edges) edges.push_back({e.i, e.j, e.weight});
            doc["edges"] = std::move(edges);
            break;
        }
        case Family::nae3sat: {
            doc["ratio"] = instance.ratio.value_or(2.11);
            if (instance.seed) doc["seed"] = *instance.seed;
            if (explicit_data || !instance.seed) {
                json clauses = json::array();
                for (const auto& c : instance.formula->clauses) {
                    json clause = json::array();
                    for (const auto& lit : c) clause.push_back({lit.variable, lit.sign});
                    clauses.push_back(std::move(clause));
                }
                doc["clauses"] = std::move(clauses);
            }
            break;
        }
        case Family::sk: {
            doc["seed"] = instance.sk->seed;
            if (explicit_data) {
                json couplings = json::array();
                for (const Term& t : instance.ising.couplings()) couplings.push_back({t.i, t.j, t.value});
                doc["couplings"] = std::move(couplings);
            }
            break;
        }
        case Family::qubo: {
            const QuboProblem& q = *instance.qubo;
            doc["linear"] = std::vector<double>(q.linear().begin(), q.linear().end());
            json quadratic = json::array();
            for (const Term& t : q.terms()) quadratic.push_back({t.i, t.j, t.value});
            doc["quadratic"] = std::move(quadratic);
            doc["offset"] = q.offset();
            break;
        }
    }
    return doc.dump(1) + "\n";
}

}  // namespace qis
