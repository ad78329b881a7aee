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

#include <chrono>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "anneal.hpp"
#include "error.hpp"
#include "exact.hpp"
#include "instance.hpp"
#include "qubo.hpp"
#include "random.hpp"
#include "sample_set.hpp"

namespace rvmmc {

enum class Encoding { literal, slack };

inline const char* to_string(Encoding e) { return e == Encoding::literal ? "literal" : "slack"; }

inline Encoding parse_encoding(const std::string& s) {
    if (s == "literal") return Encoding::literal;
    if (s == "slack") return Encoding::slack;
    throw ParameterError("unknown encoding '" + s + "' (expected literal|slack)");
}

struct EncodingOptions {
    Encoding encoding = Encoding::slack;
    bool fix_terminals = true;
    SlackSign slack_sign = SlackSign::corrected;
};

inline Qubo build_qubo(const TreeInstance& instance, PenaltyWeights w, const EncodingOptions& opt) {
    if (opt.encoding == Encoding::literal) return build_penalty_qubo(instance, w.m1, w.m2, opt.fix_terminals);
    return build_slack_qubo(instance, w.m1, w.m2, opt.fix_terminals, opt.slack_sign);
}

/// One member of a racing portfolio (or a standalone solver run).
struct SolverConfig {
    enum class Kind { sa, exact };
    Kind kind = Kind::sa;
    SaSchedule schedule;
    int shots = 100;
    std::optional<std::uint64_t> seed;  // derived from the race seed when unset

    std::string id() const {
        if (kind == Kind::exact) return "exact";
        return fmt::format("sa-{}-x{}", schedule.label(), shots);
    }
};

/// Runs one configuration. Exact runs produce a single record.
inline SampleSet run_solver(const Qubo& q, const SolverConfig& cfg, std::uint64_t seed,
                            std::optional<Clock::time_point> deadline = std::nullopt) {
    if (cfg.kind == SolverConfig::Kind::sa) {
        auto ss = simulated_annealing(q, cfg.schedule, cfg.shots, seed, deadline);
        ss.solver_id = cfg.id();
        return ss;
    }
    const auto start = Clock::now();
    auto r = exact_bruteforce(q);
    SampleSet ss;
    ss.vartype = Vartype::binary;
    ss.solver_id = cfg.id();
    ss.seed = seed;
    ss.shots = 1;
    ss.records.push_back({Assignment(r.assignment.begin(), r.assignment.end()), r.energy, 1, {}});
    ss.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
    return ss;
}

/// Runs every configuration concurrently and merges each member's
/// lowest-energy records, tagged with the member id.
///
/// Members check the shared wall-clock budget between shots. The merge is a
/// pure function of member outputs, so completion order never shows in the
/// result. Member exceptions are recorded in `failures`; the race throws only
/// when every member fails.
inline SampleSet racing_solve(const Qubo& q, const std::vector<SolverConfig>& configs, double time_budget_s,
                              std::uint64_t seed) {
    if (configs.empty()) throw ParameterError("racing requires at least one solver configuration");
    if (!(time_budget_s > 0.0)) throw ParameterError("time budget must be positive");
    const auto start = Clock::now();
    const auto deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(time_budget_s));

    std::vector<std::future<SampleSet>> futures;
    for (std::size_t k = 0; k < configs.size(); ++k) {
        const auto member_seed = configs[k].seed.value_or(derive_seed(seed, k));
        futures.push_back(std::async(std::launch::async, [&q, &cfg = configs[k], member_seed, deadline] {
            return run_solver(q, cfg, member_seed, deadline);
        }));
    }

    SampleSet merged;
    merged.vartype = Vartype::binary;
    merged.solver_id = "race";
    merged.seed = seed;
    for (std::size_t k = 0; k < futures.size(); ++k) {
        const std::string member = fmt::format("{}#{}", configs[k].id(), k);
        try {
            SampleSet ss = futures[k].get();
            if (ss.empty()) continue;
            const double best = ss.best_energy();
            for (auto& r : ss.records) {
                if (r.energy != best) break;
                r.source = member;
                merged.shots += r.occurrences;
                merged.records.push_back(std::move(r));
            }
        } catch (const std::exception& e) {
            merged.failures.push_back(member + ": " + e.what());
        }
    }
    if (merged.records.empty()) {
        std::string msg = "all racing members failed";
        for (const auto& f : merged.failures) msg += "; " + f;
        throw Error(msg);
    }
    merged.sort_records();
    merged.info["members"] = std::to_string(configs.size());
    merged.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
    return merged;
}

/// Fraction of samples (weighted by occurrences) whose cutset is feasible.
inline double feasibility_rate(const SampleSet& samples, const TreeInstance& instance, const Qubo& q) {
    long feasible = 0, total = 0;
    for (const auto& r : samples.records) {
        total += r.occurrences;
        if (check_feasibility(instance, extract_cutset(q, as_binary(r.values, samples.vartype))).ok()) {
            feasible += r.occurrences;
        }
    }
    if (total == 0) throw ParameterError("empty sample set");
    return static_cast<double>(feasible) / static_cast<double>(total);
}

/// (found - optimal) / optimal * 100.
inline double optimality_gap(double found_cost, double optimal_cost) {
    if (!(optimal_cost > 0.0)) throw ParameterError("optimal cost must be positive");
    return (found_cost - optimal_cost) / optimal_cost * 100.0;
}

struct GridPoint {
    double m1 = 1.0;
    double m2 = 1.0;
};

struct GridSearchConfig {
    EncodingOptions encoding;
    SaSchedule schedule;
    int shots = 100;
    int replications = 1;  // Monte Carlo repeats with independent seeds
};

struct GridResult {
    double m1 = 0.0;
    double m2 = 0.0;
    double feasibility_rate = 0.0;       // mean over replications
    std::optional<double> best_gap;      // smallest gap of any feasible sample
};

/// Anneals the chosen encoding at every penalty pair and scores feasibility
/// and gap against the exact optimum. Replication r uses the same seed at
/// every grid point.
inline std::vector<GridResult> grid_search_penalties(const TreeInstance& instance, const std::vector<GridPoint>& grid,
                                                     const GridSearchConfig& config, std::uint64_t seed) {
    if (grid.empty()) throw ParameterError("penalty grid is empty");
    if (config.replications < 1) throw ParameterError("replications must be >= 1");
    const double optimum = static_cast<double>(exact_multicut_bnb(instance).size());
    std::vector<GridResult> out;
    for (const auto& point : grid) {
        const Qubo q = build_qubo(instance, {point.m1, point.m2}, config.encoding);
        GridResult row{point.m1, point.m2, 0.0, std::nullopt};
        for (int r = 0; r < config.replications; ++r) {
            const auto ss = simulated_annealing(q, config.schedule, config.shots, derive_seed(seed, r));
            row.feasibility_rate += feasibility_rate(ss, instance, q);
            for (const auto& rec : ss.records) {
                const auto cut = extract_cutset(q, as_binary(rec.values, ss.vartype));
                if (!check_feasibility(instance, cut).ok()) continue;
                const double gap = optimality_gap(static_cast<double>(cut.size()), optimum);
                if (!row.best_gap || gap < *row.best_gap) row.best_gap = gap;
            }
        }
        row.feasibility_rate /= config.replications;
        out.push_back(row);
    }
    return out;
}

}  // namespace rvmmc
