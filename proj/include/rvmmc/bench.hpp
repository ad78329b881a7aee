// Copyright 2026 The rvmmc Authors.
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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "anneal.hpp"
#include "embedded_ising.hpp"
#include "embedding.hpp"
#include "error.hpp"
#include "exact.hpp"
#include "hardware_graph.hpp"
#include "instance.hpp"
#include "json.hpp"
#include "qubo.hpp"
#include "solvers.hpp"

namespace rvmmc {

struct SuiteEntry {
    std::string id;
    int num_vertices = 0;
    int num_pairs = 0;
    std::uint64_t seed = 0;
};

/// Nine sizes interpolated geometrically between (|V|, |H|) = (24, 3) and (450, 100).
inline std::vector<SuiteEntry> default_suite() {
    std::vector<SuiteEntry> out;
    for (int i = 0; i < 9; ++i) {
        const double f = i / 8.0;
        out.push_back({fmt::format("I{}", i + 1), static_cast<int>(std::lround(24.0 * std::pow(450.0 / 24.0, f))),
                       static_cast<int>(std::lround(3.0 * std::pow(100.0 / 3.0, f))), static_cast<std::uint64_t>(i + 1)});
    }
    return out;
}

struct BenchSolver {
    enum class Kind { sa, exact, race, pipeline };
    Kind kind = Kind::sa;
    SaSchedule schedule;
    int shots = 100;
    // race
    std::vector<SolverConfig> members;
    double time_budget_s = 60.0;
    // pipeline
    std::vector<int> chimera{16, 16, 4};
    std::optional<double> chain_strength;  // uniform torque compensation when unset
    bool clamp_couplers = false;
    int embed_tries = 4;

    std::string id() const {
        switch (kind) {
            case Kind::sa: return fmt::format("sa-{}-x{}", schedule.label(), shots);
            case Kind::exact: return "exact";
            case Kind::race: return fmt::format("race-{}", members.size());
            case Kind::pipeline:
                return fmt::format("pipeline-chimera-{}-{}-{}-{}-x{}", chimera[0], chimera[1], chimera[2],
                                   schedule.label(), shots);
        }
        return "?";
    }
};

struct ExperimentSpec {
    std::vector<SuiteEntry> suite = default_suite();
    std::vector<Encoding> encodings{Encoding::slack};
    std::vector<BenchSolver> solvers{BenchSolver{}};
    std::vector<std::uint64_t> seeds{1};
    bool fix_terminals = true;
    SlackSign slack_sign = SlackSign::corrected;
    std::optional<PenaltyWeights> penalties;  // default_penalties per instance when unset
    long node_budget = 10'000'000;
    int threads = 1;

    void validate() const {
        if (suite.empty()) throw ParameterError("spec: suite is empty");
        if (solvers.empty()) throw ParameterError("spec: solver list is empty");
        if (encodings.empty()) throw ParameterError("spec: encoding list is empty");
        if (seeds.empty()) throw ParameterError("spec: no seeds");
        if (threads < 1) throw ParameterError("spec: threads must be >= 1");
        for (const auto& s : solvers) {
            if (s.kind == BenchSolver::Kind::race && s.members.empty()) {
                throw ParameterError("spec: race solver without members");
            }
            if (s.kind == BenchSolver::Kind::pipeline && s.chimera.size() != 3) {
                throw ParameterError("spec: pipeline chimera must be [m, n, t]");
            }
        }
    }
};

/// One benchmark row.
struct MetricsRecord {
    std::string instance_id;
    int num_vertices = 0;
    int num_pairs = 0;
    std::string encoding;
    std::string solver;
    std::uint64_t seed = 0;
    std::optional<double> best_energy;
    std::optional<int> cutset_size;
    bool feasible = false;
    std::optional<double> gap_percent;
    double build_s = 0.0;
    double embed_s = 0.0;
    double sample_s = 0.0;
    double unembed_s = 0.0;
    std::optional<ChainStats> chains;
    std::string status = "ok";
    int logical_vars = 0;
    std::optional<int> physical_qubits;

    /// Equality ignoring the wall-time columns.
    bool same_outcome(const MetricsRecord& o) const {
        auto key = [](const MetricsRecord& r) {
            return std::tie(r.instance_id, r.num_vertices, r.num_pairs, r.encoding, r.solver, r.seed, r.best_energy,
                            r.cutset_size, r.feasible, r.gap_percent, r.status, r.logical_vars, r.physical_qubits);
        };
        return key(*this) == key(o);
    }
};

namespace detail {

inline double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

inline void score(MetricsRecord& row, const SampleSet& ss, const TreeInstance& instance, const Qubo& q,
                  std::optional<int> optimum) {
    const auto& best = ss.best();
    const auto x = as_binary(best.values, ss.vartype);
    const auto cut = extract_cutset(q, x);
    row.best_energy = qubo_energy(q, x);
    row.cutset_size = static_cast<int>(cut.size());
    row.feasible = check_feasibility(instance, cut).ok();
    if (optimum) row.gap_percent = optimality_gap(static_cast<double>(cut.size()), *optimum);
}

inline void run_pipeline(MetricsRecord& row, const BenchSolver& solver, const HardwareGraph& hw, const Qubo& q,
                         std::uint64_t seed, const TreeInstance& instance, std::optional<int> optimum) {
    auto t = Clock::now();
    FindEmbeddingOptions opt;
    opt.seed = seed;
    opt.max_tries = solver.embed_tries;
    auto found = find_embedding(q.num_vars, interaction_edges(q), hw, opt);
    row.embed_s = seconds_since(t);
    if (!found.ok()) {
        row.status = "embed_failed";
        return;
    }
    const auto logical = to_ising(q);
    const double cs = solver.chain_strength.value_or(
        uniform_torque_chain_strength(logical, mean_logical_degree(logical)));
    auto embedded = embed_ising(logical, *found.embedding, hw, cs);
    if (solver.clamp_couplers) clamp_couplers(embedded);
    t = Clock::now();
    auto physical = simulated_annealing(embedded.physical, solver.schedule, solver.shots, seed);
    row.sample_s = seconds_since(t);
    t = Clock::now();
    auto decoded = unembed(physical, *found.embedding, hw, logical);
    auto binary = to_binary_samples(decoded.logical, q);
    row.unembed_s = seconds_since(t);
    row.chains = decoded.stats;
    row.physical_qubits = static_cast<int>(found.embedding->num_qubits_used());
    score(row, binary, instance, q, optimum);
}

}  // namespace detail

/// Runs the full (instance x encoding x solver x seed) cross product.
/// Cell failures become rows with a non-"ok" status. Rows are returned in
/// canonical order regardless of `threads`.
inline std::vector<MetricsRecord> run_suite(const ExperimentSpec& spec) {
    spec.validate();
    struct Prepared {
        SuiteEntry entry;
        std::optional<TreeInstance> instance;
        std::string error;
        std::optional<int> optimum;
    };
    std::vector<Prepared> prepared;
    for (const auto& e : spec.suite) {
        Prepared p{e, std::nullopt, {}, std::nullopt};
        try {
            p.instance = generate_tree_instance(e.num_vertices, e.num_pairs, e.seed);
            if (auto cut = exact_multicut_bnb(*p.instance, spec.node_budget)) p.optimum = static_cast<int>(cut->size());
        } catch (const std::exception& ex) {
            p.error = ex.what();
        }
        prepared.push_back(std::move(p));
    }
    std::map<std::vector<int>, HardwareGraph> hardware;
    for (const auto& s : spec.solvers) {
        if (s.kind == BenchSolver::Kind::pipeline && !hardware.count(s.chimera)) {
            hardware.emplace(s.chimera, chimera_graph(s.chimera[0], s.chimera[1], s.chimera[2]));
        }
    }

    struct Cell {
        std::size_t instance, encoding, solver, seed;
    };
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < prepared.size(); ++i)
        for (std::size_t e = 0; e < spec.encodings.size(); ++e)
            for (std::size_t s = 0; s < spec.solvers.size(); ++s)
                for (std::size_t k = 0; k < spec.seeds.size(); ++k) cells.push_back({i, e, s, k});

    std::vector<MetricsRecord> rows(cells.size());
    auto run_cell = [&](std::size_t c) {
        const auto& cell = cells[c];
        const auto& p = prepared[cell.instance];
        const auto& solver = spec.solvers[cell.solver];
        MetricsRecord& row = rows[c];
        row.instance_id = p.entry.id;
        row.num_vertices = p.entry.num_vertices;
        row.num_pairs = p.entry.num_pairs;
        row.encoding = to_string(spec.encodings[cell.encoding]);
        row.solver = solver.id();
        row.seed = spec.seeds[cell.seed];
        if (!p.instance) {
            row.status = "error: " + p.error;
            return;
        }
        try {
            auto t = Clock::now();
            const auto weights = spec.penalties.value_or(default_penalties(*p.instance));
            const Qubo q = build_qubo(*p.instance, weights,
                                      {spec.encodings[cell.encoding], spec.fix_terminals, spec.slack_sign});
            row.build_s = detail::seconds_since(t);
            row.logical_vars = q.num_vars;
            t = Clock::now();
            switch (solver.kind) {
                case BenchSolver::Kind::sa: {
                    auto ss = simulated_annealing(q, solver.schedule, solver.shots, row.seed);
                    row.sample_s = detail::seconds_since(t);
                    detail::score(row, ss, *p.instance, q, p.optimum);
                    break;
                }
                case BenchSolver::Kind::exact: {
                    if (q.num_vars > kBruteforceMaxVars) {
                        row.status = "too_large";
                        break;
                    }
                    auto ss = run_solver(q, SolverConfig{SolverConfig::Kind::exact, {}, 1, {}}, row.seed);
                    row.sample_s = detail::seconds_since(t);
                    detail::score(row, ss, *p.instance, q, p.optimum);
                    break;
                }
                case BenchSolver::Kind::race: {
                    auto ss = racing_solve(q, solver.members, solver.time_budget_s, row.seed);
                    row.sample_s = detail::seconds_since(t);
                    detail::score(row, ss, *p.instance, q, p.optimum);
                    break;
                }
                case BenchSolver::Kind::pipeline:
                    detail::run_pipeline(row, solver, hardware.at(solver.chimera), q, row.seed, *p.instance,
                                         p.optimum);
                    break;
            }
        } catch (const SizeLimitError&) {
            row.status = "too_large";
        } catch (const std::exception& ex) {
            row.status = std::string("error: ") + ex.what();
        }
    };

    if (spec.threads == 1) {
        for (std::size_t c = 0; c < cells.size(); ++c) run_cell(c);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        for (int w = 0; w < spec.threads; ++w) {
            workers.emplace_back([&] {
                for (std::size_t c = next++; c < cells.size(); c = next++) run_cell(c);
            });
        }
        for (auto& w : workers) w.join();
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Reports

inline const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols{
        "instance_id", "V",       "H",         "encoding",  "solver",    "seed",      "best_energy",
        "cutset_size", "feasible", "gap_percent", "build_s", "embed_s",  "sample_s",  "unembed_s",
        "chain_max",   "chain_mean", "break_fraction", "overhead_ratio", "status"};
    return cols;
}

/// Columns holding wall-clock measurements.
inline bool is_timing_column(const std::string& name) {
    return name == "build_s" || name == "embed_s" || name == "sample_s" || name == "unembed_s";
}

namespace detail {

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

template <typename T>
std::string opt_field(const std::optional<T>& v) {
    return v ? fmt::format("{}", *v) : std::string();
}

inline std::string seconds_field(double s) { return fmt::format("{:.6f}", s); }

}  // namespace detail

inline std::string records_to_csv(const std::vector<MetricsRecord>& records) {
    std::string out;
    const auto& cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
    out += "\n";
    for (const auto& r : records) {
        std::vector<std::string> f{
            r.instance_id,
            std::to_string(r.num_vertices),
            std::to_string(r.num_pairs),
            r.encoding,
            detail::csv_escape(r.solver),
            std::to_string(r.seed),
            detail::opt_field(r.best_energy),
            detail::opt_field(r.cutset_size),
            r.cutset_size ? (r.feasible ? "true" : "false") : "",
            r.gap_percent ? fmt::format("{:.6f}", *r.gap_percent) : "",
            detail::seconds_field(r.build_s),
            detail::seconds_field(r.embed_s),
            detail::seconds_field(r.sample_s),
            detail::seconds_field(r.unembed_s),
            r.chains ? std::to_string(r.chains->max_len) : "",
            r.chains ? fmt::format("{:.6f}", r.chains->mean_len) : "",
            r.chains ? fmt::format("{:.6f}", r.chains->break_fraction) : "",
            r.chains ? fmt::format("{:.6f}", r.chains->overhead_ratio) : "",
            detail::csv_escape(r.status)};
        for (std::size_t i = 0; i < f.size(); ++i) out += (i ? "," : "") + f[i];
        out += "\n";
    }
    return out;
}

inline nlohmann::ordered_json records_to_json(const std::vector<MetricsRecord>& records) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : records) {
        nlohmann::ordered_json j;
        j["instance_id"] = r.instance_id;
        j["V"] = r.num_vertices;
        j["H"] = r.num_pairs;
        j["encoding"] = r.encoding;
        j["solver"] = r.solver;
        j["seed"] = r.seed;
        j["best_energy"] = r.best_energy ? nlohmann::ordered_json(*r.best_energy) : nullptr;
        j["cutset_size"] = r.cutset_size ? nlohmann::ordered_json(*r.cutset_size) : nullptr;
        j["feasible"] = r.feasible;
        j["gap_percent"] = r.gap_percent ? nlohmann::ordered_json(*r.gap_percent) : nullptr;
        j["build_s"] = r.build_s;
        j["embed_s"] = r.embed_s;
        j["sample_s"] = r.sample_s;
        j["unembed_s"] = r.unembed_s;
        if (r.chains) {
            j["chain_max"] = r.chains->max_len;
            j["chain_mean"] = r.chains->mean_len;
            j["break_fraction"] = r.chains->break_fraction;
            j["overhead_ratio"] = r.chains->overhead_ratio;
        }
        j["status"] = r.status;
        j["logical_vars"] = r.logical_vars;
        j["physical_qubits"] = r.physical_qubits ? nlohmann::ordered_json(*r.physical_qubits) : nullptr;
        arr.push_back(std::move(j));
    }
    return arr;
}

inline std::vector<MetricsRecord> records_from_json(const nlohmann::json& arr) {
    if (!arr.is_array()) throw ParseError("records: expected a JSON array");
    std::vector<MetricsRecord> out;
    try {
        for (const auto& j : arr) {
            MetricsRecord r;
            r.instance_id = j.at("instance_id").get<std::string>();
            r.num_vertices = j.at("V").get<int>();
            r.num_pairs = j.at("H").get<int>();
            r.encoding = j.at("encoding").get<std::string>();
            r.solver = j.at("solver").get<std::string>();
            r.seed = j.at("seed").get<std::uint64_t>();
            if (!j.at("best_energy").is_null()) r.best_energy = j["best_energy"].get<double>();
            if (!j.at("cutset_size").is_null()) r.cutset_size = j["cutset_size"].get<int>();
            r.feasible = j.at("feasible").get<bool>();
            if (!j.at("gap_percent").is_null()) r.gap_percent = j["gap_percent"].get<double>();
            r.build_s = j.at("build_s").get<double>();
            r.embed_s = j.at("embed_s").get<double>();
            r.sample_s = j.at("sample_s").get<double>();
            r.unembed_s = j.at("unembed_s").get<double>();
            if (j.contains("chain_max")) {
                r.chains = ChainStats{j["chain_max"].get<std::size_t>(), j.at("chain_mean").get<double>(),
                                      j.at("break_fraction").get<double>(), j.at("overhead_ratio").get<double>()};
            }
            r.status = j.at("status").get<std::string>();
            r.logical_vars = j.value("logical_vars", 0);
            if (j.contains("physical_qubits") && !j["physical_qubits"].is_null()) {
                r.physical_qubits = j["physical_qubits"].get<int>();
            }
            out.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("records: ") + e.what());
    }
    return out;
}

/// Plot-data tables keyed by file stem.
inline std::map<std::string, std::string> plot_data(const std::vector<MetricsRecord>& records) {
    std::map<std::string, std::string> files;
    std::string energy = "instance_id,V,H,encoding,solver,seed,best_energy\n";
    std::string cutset = "instance_id,V,H,encoding,solver,seed,cutset_size,feasible\n";
    std::string runtime = "instance_id,encoding,solver,seed,build_s,embed_s,sample_s,unembed_s\n";
    std::map<int, std::vector<int>> physical_by_logical;
    for (const auto& r : records) {
        const auto prefix = fmt::format("{},{},{},{},{},{}", r.instance_id, r.num_vertices, r.num_pairs, r.encoding,
                                        detail::csv_escape(r.solver), r.seed);
        if (r.best_energy) energy += fmt::format("{},{}\n", prefix, *r.best_energy);
        if (r.cutset_size) cutset += fmt::format("{},{},{}\n", prefix, *r.cutset_size, r.feasible ? "true" : "false");
        runtime += fmt::format("{},{},{},{},{},{},{},{}\n", r.instance_id, r.encoding, detail::csv_escape(r.solver),
                               r.seed, detail::seconds_field(r.build_s), detail::seconds_field(r.embed_s),
                               detail::seconds_field(r.sample_s), detail::seconds_field(r.unembed_s));
        if (r.physical_qubits) physical_by_logical[r.logical_vars].push_back(*r.physical_qubits);
    }
    std::string overhead = "logical_vars,physical_qubits_median,samples\n";
    for (auto& [logical, phys] : physical_by_logical) {
        std::sort(phys.begin(), phys.end());
        const std::size_t m = phys.size();
        const double median = m % 2 ? phys[m / 2] : 0.5 * (phys[m / 2 - 1] + phys[m / 2]);
        overhead += fmt::format("{},{},{}\n", logical, median, m);
    }
    files["energy_vs_instance"] = std::move(energy);
    files["cutset_vs_instance"] = std::move(cutset);
    files["runtime_breakdown"] = std::move(runtime);
    files["overhead_vs_logical"] = std::move(overhead);
    return files;
}

// ---------------------------------------------------------------------------
// Spec files

namespace detail {

inline SaSchedule schedule_from_json(const nlohmann::json& j, const std::string& where) {
    SaSchedule s;
    const auto kind = j.value("schedule", std::string("geometric"));
    if (kind == "geometric") s.kind = SaSchedule::Kind::geometric;
    else if (kind == "linear") s.kind = SaSchedule::Kind::linear;
    else throw ParseError(where + ".schedule: expected geometric|linear, got '" + kind + "'");
    s.beta_min = j.value("beta_min", s.beta_min);
    s.beta_max = j.value("beta_max", s.beta_max);
    s.sweeps = j.value("sweeps", s.sweeps);
    try {
        s.validate();
    } catch (const ParameterError& e) {
        throw ParseError(where + ": " + e.what());
    }
    return s;
}

inline SolverConfig member_from_json(const nlohmann::json& j, const std::string& where) {
    SolverConfig c;
    const auto type = j.at("type").get<std::string>();
    if (type == "exact") {
        c.kind = SolverConfig::Kind::exact;
    } else if (type == "sa") {
        c.schedule = schedule_from_json(j, where);
        c.shots = j.value("shots", c.shots);
    } else {
        throw ParseError(where + ".type: race members must be sa|exact");
    }
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    return c;
}

}  // namespace detail

/// Parses a JSON experiment spec; absent fields keep their defaults.
/// Errors name the offending field.
inline ExperimentSpec parse_experiment_spec(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("spec: expected a JSON object");
    static const std::set<std::string> known{"suite",       "encodings", "solvers",   "seeds",    "repetitions",
                                             "fix_terminals", "slack_sign", "penalties", "node_budget", "threads"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.count(it.key())) throw ParseError("spec: unknown field '" + it.key() + "'");
    }
    ExperimentSpec spec;
    std::string where;
    try {
        if (j.contains("suite") && !(j["suite"].is_string() && j["suite"] == "default")) {
            where = "suite";
            spec.suite.clear();
            const auto& arr = j["suite"];
            if (!arr.is_array()) throw ParseError("suite: expected an array or \"default\"");
            for (std::size_t i = 0; i < arr.size(); ++i) {
                where = fmt::format("suite[{}]", i);
                const auto& e = arr[i];
                SuiteEntry s;
                s.num_vertices = e.at("V").get<int>();
                s.num_pairs = e.at("H").get<int>();
                s.seed = e.value("seed", static_cast<std::uint64_t>(i + 1));
                s.id = e.value("id", fmt::format("I{}", i + 1));
                spec.suite.push_back(s);
            }
        }
        if (j.contains("encodings")) {
            where = "encodings";
            spec.encodings.clear();
            for (const auto& e : j["encodings"]) spec.encodings.push_back(parse_encoding(e.get<std::string>()));
        }
        if (j.contains("solvers")) {
            spec.solvers.clear();
            const auto& arr = j["solvers"];
            if (!arr.is_array()) throw ParseError("solvers: expected an array");
            for (std::size_t i = 0; i < arr.size(); ++i) {
                where = fmt::format("solvers[{}]", i);
                const auto& e = arr[i];
                BenchSolver s;
                const auto type = e.at("type").get<std::string>();
                if (type == "sa") {
                    s.kind = BenchSolver::Kind::sa;
                } else if (type == "exact") {
                    s.kind = BenchSolver::Kind::exact;
                } else if (type == "race") {
                    s.kind = BenchSolver::Kind::race;
                    s.time_budget_s = e.value("time_budget_s", s.time_budget_s);
                    const auto& members = e.at("members");
                    for (std::size_t k = 0; k < members.size(); ++k) {
                        s.members.push_back(detail::member_from_json(members[k], fmt::format("{}.members[{}]", where, k)));
                    }
                } else if (type == "pipeline") {
                    s.kind = BenchSolver::Kind::pipeline;
                    if (e.contains("chimera")) s.chimera = e["chimera"].get<std::vector<int>>();
                    if (e.contains("chain_strength") && e["chain_strength"].is_number()) {
                        s.chain_strength = e["chain_strength"].get<double>();
                    }
                    s.clamp_couplers = e.value("clamp_couplers", false);
                    s.embed_tries = e.value("embed_tries", s.embed_tries);
                } else {
                    throw ParseError(where + ".type: expected sa|exact|race|pipeline, got '" + type + "'");
                }
                if (s.kind == BenchSolver::Kind::sa || s.kind == BenchSolver::Kind::pipeline) {
                    s.schedule = detail::schedule_from_json(e, where);
                    s.shots = e.value("shots", s.shots);
                }
                spec.solvers.push_back(std::move(s));
            }
        }
        if (j.contains("seeds")) {
            where = "seeds";
            spec.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
        } else if (j.contains("repetitions")) {
            where = "repetitions";
            const int reps = j["repetitions"].get<int>();
            if (reps < 1) throw ParseError("repetitions: must be >= 1");
            spec.seeds.clear();
            for (int r = 1; r <= reps; ++r) spec.seeds.push_back(static_cast<std::uint64_t>(r));
        }
        where = "fix_terminals";
        spec.fix_terminals = j.value("fix_terminals", spec.fix_terminals);
        if (j.contains("slack_sign")) {
            where = "slack_sign";
            const auto s = j["slack_sign"].get<std::string>();
            if (s == "paper") spec.slack_sign = SlackSign::paper;
            else if (s == "corrected") spec.slack_sign = SlackSign::corrected;
            else throw ParseError("slack_sign: expected paper|corrected");
        }
        if (j.contains("penalties")) {
            where = "penalties";
            spec.penalties = PenaltyWeights{j["penalties"].at("m1").get<double>(), j["penalties"].at("m2").get<double>()};
        }
        where = "node_budget";
        spec.node_budget = j.value("node_budget", spec.node_budget);
        where = "threads";
        spec.threads = j.value("threads", spec.threads);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(where + ": " + e.what());
    } catch (const ParameterError& e) {
        throw ParseError(where + ": " + e.what());
    }
    try {
        spec.validate();
    } catch (const ParameterError& e) {
        throw ParseError(e.what());
    }
    return spec;
}

}  // namespace rvmmc
