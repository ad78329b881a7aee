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
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "error.hpp"
#include "qubo.hpp"
#include "random.hpp"
#include "sample_set.hpp"

namespace rvmmc {

/// Inverse-temperature schedule for simulated annealing.
struct SaSchedule {
    enum class Kind { geometric, linear };
    Kind kind = Kind::geometric;
    double beta_min = 0.1;
    double beta_max = 10.0;
    int sweeps = 1000;

    void validate() const {
        if (!(beta_min > 0.0) || !std::isfinite(beta_max) || !(beta_min < beta_max)) {
            throw ParameterError("schedule requires 0 < beta_min < beta_max");
        }
        if (sweeps < 1) throw ParameterError("schedule requires sweeps >= 1");
    }

    /// Beta used during sweep t in [0, sweeps). A single-sweep schedule runs at beta_max.
    double beta_at(int t) const {
        if (sweeps == 1) return beta_max;
        const double frac = static_cast<double>(t) / (sweeps - 1);
        if (kind == Kind::geometric) return beta_min * std::pow(beta_max / beta_min, frac);
        return beta_min + frac * (beta_max - beta_min);
    }

    std::string label() const {
        return fmt::format("{}-{}-{}-{}", kind == Kind::geometric ? "geometric" : "linear", beta_min, beta_max, sweeps);
    }
};

inline const char* to_string(SaSchedule::Kind k) { return k == SaSchedule::Kind::geometric ? "geometric" : "linear"; }

namespace detail {

/// Compressed adjacency form of a quadratic model, in its own vartype.
struct CompiledModel {
    Vartype vartype = Vartype::binary;
    int num_vars = 0;
    std::vector<double> linear;
    std::vector<int> row_start;
    std::vector<int> neighbor;
    std::vector<double> weight;
    std::vector<int> active;  // variables with at least one nonzero term

    template <typename Terms>
    void build(int n, const std::map<int, double>& lin, const Terms& quad) {
        num_vars = n;
        linear.assign(n, 0.0);
        for (auto [i, u] : lin) linear[i] = u;
        std::vector<int> degree(n, 0);
        for (auto& [ij, w] : quad) {
            ++degree[ij.first];
            ++degree[ij.second];
        }
        row_start.assign(n + 1, 0);
        for (int i = 0; i < n; ++i) row_start[i + 1] = row_start[i] + degree[i];
        neighbor.resize(row_start[n]);
        weight.resize(row_start[n]);
        std::vector<int> fill(row_start.begin(), row_start.end() - 1);
        for (auto& [ij, w] : quad) {
            neighbor[fill[ij.first]] = ij.second;
            weight[fill[ij.first]++] = w;
            neighbor[fill[ij.second]] = ij.first;
            weight[fill[ij.second]++] = w;
        }
        for (int i = 0; i < n; ++i) {
            if (linear[i] != 0.0 || degree[i] > 0) active.push_back(i);
        }
    }
};

inline CompiledModel compile(const Qubo& q) {
    CompiledModel c;
    c.vartype = Vartype::binary;
    c.build(q.num_vars, q.linear, q.quadratic);
    return c;
}

inline CompiledModel compile(const IsingModel& m) {
    CompiledModel c;
    c.vartype = Vartype::spin;
    c.build(m.num_vars, m.h, m.J);
    return c;
}

/// One annealing run. Inactive variables stay at 0 (binary) or -1 (spin).
inline Assignment anneal_once(const CompiledModel& c, const SaSchedule& schedule, Rng& rng) {
    const bool spin = c.vartype == Vartype::spin;
    Assignment state(c.num_vars, spin ? -1 : 0);
    for (int i : c.active) {
        const bool up = rng() >> 63;
        state[i] = spin ? (up ? 1 : -1) : (up ? 1 : 0);
    }
    // field[i] = linear_i + sum_j w_ij * state_j
    std::vector<double> field(c.linear);
    for (int i : c.active) {
        for (int k = c.row_start[i]; k < c.row_start[i + 1]; ++k) field[i] += c.weight[k] * state[c.neighbor[k]];
    }
    for (int t = 0; t < schedule.sweeps; ++t) {
        const double beta = schedule.beta_at(t);
        for (int i : c.active) {
            const double delta = spin ? -2.0 * state[i] * field[i] : (1 - 2 * state[i]) * field[i];
            if (delta > 0.0 && uniform_real(rng) >= std::exp(-beta * delta)) continue;
            const int change = spin ? -2 * state[i] : 1 - 2 * state[i];
            state[i] = static_cast<std::int8_t>(state[i] + change);
            for (int k = c.row_start[i]; k < c.row_start[i + 1]; ++k) field[c.neighbor[k]] += c.weight[k] * change;
        }
    }
    return state;
}

}  // namespace detail

using Clock = std::chrono::steady_clock;

/// Single-site Metropolis annealing from uniformly random initial states.
///
/// Shot s draws from its own stream derive_seed(seed, s), so the first k shots
/// of a run with more shots are the same k shots. When a deadline is given it
/// is checked between shots; at least one shot is always completed.
template <typename Model>
SampleSet simulated_annealing(const Model& model, const SaSchedule& schedule, int shots, std::uint64_t seed,
                              std::optional<Clock::time_point> deadline = std::nullopt) {
    schedule.validate();
    if (shots < 1) throw ParameterError("shots must be >= 1");
    if (model.num_vars < 1) throw ParameterError("cannot anneal an empty model");
    const auto start = Clock::now();
    const auto compiled = detail::compile(model);
    std::vector<Assignment> results;
    results.reserve(shots);
    for (int s = 0; s < shots; ++s) {
        if (s > 0 && deadline && Clock::now() >= *deadline) break;
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
        results.push_back(detail::anneal_once(compiled, schedule, rng));
    }
    SampleSet ss = aggregate_samples(model, compiled.vartype, results);
    ss.solver_id = "sa";
    ss.seed = seed;
    ss.info["schedule"] = to_string(schedule.kind);
    ss.info["beta_range"] = fmt::format("{},{}", schedule.beta_min, schedule.beta_max);
    ss.info["sweeps"] = std::to_string(schedule.sweeps);
    ss.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
    return ss;
}

}  // namespace rvmmc
