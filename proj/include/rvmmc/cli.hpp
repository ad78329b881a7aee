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

// Command-line front end. `run_cli` is the whole program; tools/rvmmc.cpp only
// forwards argv to it.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "rvmmc.hpp"

namespace rvmmc::cli {

enum ExitCode : int { ok = 0, runtime_error = 1, usage_error = 2, size_limit = 3, embedding_failed = 4 };

/// Raised by command handlers to leave with a specific exit code.
struct Exit : std::runtime_error {
    int code;
    Exit(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Exit(usage_error, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_output(const std::string& path, const std::string& data, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << data;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Exit(runtime_error, "cannot write '" + path + "'");
    f << data;
}

struct SaFlags {
    std::string schedule = "geometric";
    double beta_min = 0.1;
    double beta_max = 10.0;
    int sweeps = 1000;
    int shots = 100;

    void add_to(CLI::App* app) {
        app->add_option("--schedule", schedule, "Cooling schedule")->check(CLI::IsMember({"geometric", "linear"}));
        app->add_option("--beta-min", beta_min, "Initial inverse temperature");
        app->add_option("--beta-max", beta_max, "Final inverse temperature");
        app->add_option("--sweeps", sweeps, "Metropolis sweeps per shot");
        app->add_option("--shots", shots, "Independent annealing runs");
    }

    SaSchedule to_schedule() const {
        SaSchedule s;
        s.kind = schedule == "linear" ? SaSchedule::Kind::linear : SaSchedule::Kind::geometric;
        s.beta_min = beta_min;
        s.beta_max = beta_max;
        s.sweeps = sweeps;
        s.validate();
        return s;
    }
};

inline Qubo load_qubo(const std::string& path, const std::string& labels_path) {
    Qubo q = parse_qubo(read_file(path));
    std::string lp = labels_path;
    if (lp.empty() && std::filesystem::exists(path + ".labels")) lp = path + ".labels";
    if (!lp.empty()) apply_labels(q, read_file(lp));
    return q;
}

struct HardwareFlags {
    std::string file;
    std::vector<int> chimera;

    void add_to(CLI::App* app) {
        auto* f = app->add_option("--hardware", file, "Hardware adjacency file");
        auto* c = app->add_option("--chimera", chimera, "Chimera dimensions m n t")->expected(3);
        f->excludes(c);
    }

    HardwareGraph load(std::ostream& err) const {
        if (!file.empty()) {
            std::vector<std::string> warnings;
            auto g = load_hardware_graph(read_file(file), &warnings);
            for (const auto& w : warnings) err << "warning: " << w << "\n";
            return g;
        }
        if (chimera.size() == 3) return chimera_graph(chimera[0], chimera[1], chimera[2]);
        throw Exit(usage_error, "one of --hardware or --chimera is required");
    }
};

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Restricted vertex multicut on trees: instances, QUBO models, samplers and an annealer pipeline simulator"};
    app.require_subcommand(1);
    app.fallthrough();
    std::uint64_t seed = 0;
    std::string output = "-";
    std::string format = "csv";
    app.add_option("--seed", seed, "Random seed")->capture_default_str();
    app.add_option("-o,--output", output, "Output path ('-' for stdout)");
    app.add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}));

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a random tree instance");
    int gen_n = 0, gen_k = 0;
    gen->add_option("--n", gen_n, "Number of vertices")->required();
    gen->add_option("--k", gen_k, "Number of terminal pairs")->required();

    // build
    auto* build = app.add_subcommand("build", "Build a QUBO from an instance");
    std::string build_instance, build_encoding = "slack", build_fix = "auto", build_sign = "corrected", build_labels;
    std::optional<double> build_m1, build_m2;
    build->add_option("instance", build_instance, "Instance file")->required();
    build->add_option("--encoding", build_encoding, "literal|slack");
    build->add_option("--m1", build_m1, "Terminal penalty (default: scaled to the instance)");
    build->add_option("--m2", build_m2, "Path penalty (default: scaled to the instance)");
    build->add_option("--fix-terminals", build_fix, "auto|true|false; auto fixes terminals for slack only")
        ->check(CLI::IsMember({"auto", "true", "false"}));
    build->add_option("--slack-sign", build_sign, "corrected|paper")->check(CLI::IsMember({"corrected", "paper"}));
    build->add_option("--labels", build_labels, "Label sidecar path (default: <output>.labels)");

    // solve
    auto* solve = app.add_subcommand("solve", "Sample or solve a QUBO");
    std::string solve_qubo, solve_solver = "sa", solve_labels;
    double solve_budget = 60.0;
    int race_members = 2;
    bool no_timing = false;
    detail::SaFlags solve_sa;
    solve->add_option("qubo", solve_qubo, "QUBO file")->required();
    solve->add_option("--solver", solve_solver, "sa|exact|race");
    solve_sa.add_to(solve);
    solve->add_option("--time-budget", solve_budget, "Racing wall-clock budget in seconds");
    solve->add_option("--race-sa", race_members, "Number of annealing members in a race");
    solve->add_flag("--no-timing", no_timing, "Omit wall_time_s for byte-stable output");

    // embed
    auto* embed = app.add_subcommand("embed", "Minor-embed a QUBO's interaction graph");
    std::string embed_qubo;
    int embed_tries = 10;
    detail::HardwareFlags embed_hw;
    embed->add_option("qubo", embed_qubo, "QUBO file")->required();
    embed_hw.add_to(embed);
    embed->add_option("--tries", embed_tries, "Randomized restarts");

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "Embed, anneal the physical model and unembed");
    std::string pipe_qubo, pipe_cs = "auto", pipe_stats;
    int pipe_tries = 10;
    bool pipe_clamp = false, pipe_no_timing = false;
    detail::HardwareFlags pipe_hw;
    detail::SaFlags pipe_sa;
    pipe->add_option("qubo", pipe_qubo, "QUBO file")->required();
    pipe_hw.add_to(pipe);
    pipe->add_option("--chain-strength", pipe_cs, "'auto' (uniform torque compensation) or a positive value");
    pipe->add_option("--tries", pipe_tries, "Embedding restarts");
    pipe->add_option("--stats", pipe_stats, "Chain statistics output (JSON)");
    pipe->add_flag("--clamp", pipe_clamp, "Clamp physical couplings to [-2, 1]");
    pipe->add_flag("--no-timing", pipe_no_timing, "Omit wall_time_s for byte-stable output");
    pipe_sa.add_to(pipe);

    // bench
    auto* bench = app.add_subcommand("bench", "Run an experiment suite");
    std::string bench_spec, bench_plot;
    int bench_threads = 0;
    bench->add_option("spec", bench_spec, "Experiment spec (JSON); the default suite when omitted");
    bench->add_option("--plotdata", bench_plot, "Directory for plot-data tables");
    bench->add_option("--threads", bench_threads, "Worker threads (overrides the spec)");

    // report
    auto* report = app.add_subcommand("report", "Render bench records (JSON) as CSV/JSON and plot data");
    std::string report_input, report_plot;
    report->add_option("records", report_input, "Records file written by 'bench --format json'")->required();
    report->add_option("--plotdata", report_plot, "Directory for plot-data tables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    }

    auto write_plotdata = [&](const std::string& dir, const std::vector<MetricsRecord>& rows) {
        if (dir.empty()) return;
        std::filesystem::create_directories(dir);
        for (const auto& [name, data] : plot_data(rows)) detail::write_output(dir + "/" + name + ".csv", data, out);
    };
    auto render_records = [&](const std::vector<MetricsRecord>& rows) {
        if (rows.empty()) throw Exit(runtime_error, "no records to report");
        detail::write_output(output, format == "json" ? records_to_json(rows).dump(2) + "\n" : records_to_csv(rows), out);
    };

    try {
        if (gen->parsed()) {
            if (gen_n < 3) throw Exit(usage_error, "n must be ≥ 3");
            if (gen_k < 1) throw Exit(usage_error, "k must be ≥ 1");
            detail::write_output(output, serialize_instance(generate_tree_instance(gen_n, gen_k, seed)), out);
        } else if (build->parsed()) {
            const auto instance = parse_instance(detail::read_file(build_instance));
            const auto enc = parse_encoding(build_encoding);
            EncodingOptions opt{enc, build_fix == "auto" ? enc == Encoding::slack : build_fix == "true",
                                build_sign == "paper" ? SlackSign::paper : SlackSign::corrected};
            auto w = default_penalties(instance);
            if (build_m1) w.m1 = *build_m1;
            if (build_m2) w.m2 = *build_m2;
            const Qubo q = build_qubo(instance, w, opt);
            detail::write_output(output, serialize_qubo(q), out);
            std::string labels = build_labels;
            if (labels.empty() && output != "-") labels = output + ".labels";
            if (!labels.empty()) detail::write_output(labels, serialize_labels(q), out);
        } else if (solve->parsed()) {
            const Qubo q = detail::load_qubo(solve_qubo, "");
            SampleSet ss;
            if (solve_solver == "sa") {
                ss = run_solver(q, {SolverConfig::Kind::sa, solve_sa.to_schedule(), solve_sa.shots, {}}, seed);
            } else if (solve_solver == "exact") {
                ss = run_solver(q, {SolverConfig::Kind::exact, {}, 1, {}}, seed);
            } else if (solve_solver == "race") {
                std::vector<SolverConfig> members;
                for (int k = 0; k < race_members; ++k) {
                    members.push_back({SolverConfig::Kind::sa, solve_sa.to_schedule(), solve_sa.shots, {}});
                }
                if (q.num_vars <= kBruteforceMaxVars) members.push_back({SolverConfig::Kind::exact, {}, 1, {}});
                ss = racing_solve(q, members, solve_budget, seed);
            } else {
                throw Exit(usage_error, "unknown solver '" + solve_solver + "' (expected sa|exact|race)");
            }
            detail::write_output(output, to_json(ss, !no_timing).dump(2) + "\n", out);
        } else if (embed->parsed()) {
            const Qubo q = detail::load_qubo(embed_qubo, "");
            const auto hw = embed_hw.load(err);
            FindEmbeddingOptions opt;
            opt.seed = seed;
            opt.max_tries = embed_tries;
            auto found = find_embedding(std::max(1, q.num_vars), interaction_edges(q), hw, opt);
            if (!found.ok()) throw Exit(embedding_failed, "embedding failed: " + found.message);
            detail::write_output(output, embedding_to_json(*found.embedding).dump() + "\n", out);
        } else if (pipe->parsed()) {
            const Qubo q = detail::load_qubo(pipe_qubo, "");
            const auto hw = pipe_hw.load(err);
            const auto schedule = pipe_sa.to_schedule();
            FindEmbeddingOptions opt;
            opt.seed = seed;
            opt.max_tries = pipe_tries;
            auto found = find_embedding(std::max(1, q.num_vars), interaction_edges(q), hw, opt);
            if (!found.ok()) throw Exit(embedding_failed, "embedding failed: " + found.message);
            const auto logical = to_ising(q);
            std::vector<std::string> warnings;
            double cs;
            if (pipe_cs == "auto") {
                cs = uniform_torque_chain_strength(logical, mean_logical_degree(logical), 1.414, &warnings);
            } else {
                try {
                    std::size_t pos = 0;
                    cs = std::stod(pipe_cs, &pos);
                    if (pos != pipe_cs.size()) throw std::invalid_argument("trailing");
                } catch (const std::exception&) {
                    throw Exit(usage_error, "--chain-strength must be 'auto' or a number");
                }
                if (!(cs > 0.0)) throw Exit(usage_error, "--chain-strength must be positive");
            }
            for (const auto& w : warnings) err << "warning: " << w << "\n";
            auto embedded = embed_ising(logical, *found.embedding, hw, cs);
            if (pipe_clamp) clamp_couplers(embedded);
            auto physical = simulated_annealing(embedded.physical, schedule, pipe_sa.shots, seed);
            auto decoded = unembed(physical, *found.embedding, hw, logical);
            auto samples = to_binary_samples(decoded.logical, q);
            samples.solver_id = "pipeline";
            detail::write_output(output, to_json(samples, !pipe_no_timing).dump(2) + "\n", out);
            nlohmann::ordered_json stats;
            stats["topology"] = hw.tag();
            stats["chain_strength"] = cs;
            stats["chain_strength_mode"] = pipe_cs == "auto" ? "uniform_torque_compensation" : "fixed";
            stats["max_len"] = decoded.stats.max_len;
            stats["mean_len"] = decoded.stats.mean_len;
            stats["break_fraction"] = decoded.stats.break_fraction;
            stats["overhead_ratio"] = decoded.stats.overhead_ratio;
            stats["logical_vars"] = q.num_vars;
            stats["physical_qubits"] = found.embedding->num_qubits_used();
            stats["clamped_couplers"] = embedded.clamped_couplers;
            stats["embedding_tries"] = found.tries;
            if (!pipe_stats.empty()) detail::write_output(pipe_stats, stats.dump(2) + "\n", out);
            else err << stats.dump() << "\n";
        } else if (bench->parsed()) {
            ExperimentSpec spec;
            if (!bench_spec.empty()) {
                nlohmann::json j;
                try {
                    j = nlohmann::json::parse(detail::read_file(bench_spec));
                } catch (const nlohmann::json::parse_error& e) {
                    throw ParseError(std::string("spec: ") + e.what());
                }
                spec = parse_experiment_spec(j);
            }
            if (bench_threads > 0) spec.threads = bench_threads;
            const auto rows = run_suite(spec);
            render_records(rows);
            write_plotdata(bench_plot, rows);
        } else if (report->parsed()) {
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(detail::read_file(report_input));
            } catch (const nlohmann::json::parse_error& e) {
                throw ParseError(std::string("records: ") + e.what());
            }
            const auto rows = records_from_json(j);
            render_records(rows);
            write_plotdata(report_plot, rows);
        }
    } catch (const Exit& e) {
        err << "error: " << e.what() << "\n";
        return e.code;
    } catch (const SizeLimitError& e) {
        err << "error: " << e.what() << "\n";
        return size_limit;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return runtime_error;
    }
    return ok;
}

}  // namespace rvmmc::cli
