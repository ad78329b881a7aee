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
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "embedding.hpp"
#include "error.hpp"
#include "hardware_graph.hpp"
#include "qubo.hpp"
#include "sample_set.hpp"

namespace rvmmc {

/// Physical spin model produced by embedding a logical one.
///
/// For every chain-consistent physical state,
/// physical energy = logical energy + chain_offset.
struct EmbeddedIsing {
    IsingModel physical;
    double chain_strength = 0.0;
    std::vector<VarPair> chain_edges;
    double chain_offset = 0.0;
    int clamped_couplers = 0;
};

struct ChainStats {
    std::size_t max_len = 0;
    double mean_len = 0.0;
    double break_fraction = 0.0;
    double overhead_ratio = 1.0;
};

/// Mean number of couplings per variable that takes part in at least one coupling.
inline double mean_logical_degree(const IsingModel& m) {
    std::set<int> touched;
    for (const auto& [ij, j] : m.J) {
        touched.insert(ij.first);
        touched.insert(ij.second);
    }
    if (touched.empty()) return 0.0;
    return 2.0 * static_cast<double>(m.J.size()) / static_cast<double>(touched.size());
}

/// prefactor * RMS(J) * sqrt(mean degree). Degenerate inputs are reported
/// through `warnings`: no couplers gives 1.0, an all-zero result is raised to 1e-6.
inline double uniform_torque_chain_strength(const IsingModel& m, double logical_degree_mean, double prefactor = 1.414,
                                            std::vector<std::string>* warnings = nullptr) {
    if (m.J.empty()) {
        if (warnings) warnings->push_back("model has no couplers; chain strength defaults to 1.0");
        return 1.0;
    }
    double sum_sq = 0.0;
    for (const auto& [ij, j] : m.J) sum_sq += j * j;
    const double rms = std::sqrt(sum_sq / static_cast<double>(m.J.size()));
    const double value = prefactor * rms * std::sqrt(std::max(0.0, logical_degree_mean));
    if (!(value > 1e-6)) {
        if (warnings) warnings->push_back("chain strength evaluated to ~0; clamped to 1e-6");
        return 1e-6;
    }
    return value;
}

/// Maps a logical Ising model onto the hardware through `emb`.
///
/// Each h_i is split evenly over chain(i); each J_ij evenly over every coupler
/// joining chain(i) and chain(j); every coupler inside a chain gets
/// -chain_strength.
inline EmbeddedIsing embed_ising(const IsingModel& m, const Embedding& emb, const HardwareGraph& hw,
                                 double chain_strength) {
    if (!(chain_strength > 0.0) || !std::isfinite(chain_strength)) {
        throw ParameterError("chain strength must be positive");
    }
    std::vector<int> required(m.num_vars);
    for (int i = 0; i < m.num_vars; ++i) required[i] = i;
    auto verdict = validate_embedding(interaction_edges(m), hw, emb, required);
    if (!verdict.valid()) throw EmbeddingError("invalid embedding: " + verdict.diagnostics.front());

    EmbeddedIsing out;
    out.chain_strength = chain_strength;
    out.physical.num_vars = hw.num_qubits();
    out.physical.offset = m.offset;
    for (const auto& [i, h] : m.h) {
        const auto& chain = emb.chains.at(i);
        for (Qubit q : chain) out.physical.add_field(q, h / static_cast<double>(chain.size()));
    }
    for (const auto& [ij, j] : m.J) {
        std::vector<VarPair> couplers;
        for (Qubit a : emb.chains.at(ij.first)) {
            for (Qubit b : emb.chains.at(ij.second)) {
                if (hw.has_edge(a, b)) couplers.emplace_back(a, b);
            }
        }
        for (auto [a, b] : couplers) out.physical.add_coupling(a, b, j / static_cast<double>(couplers.size()));
    }
    for (const auto& [v, chain] : emb.chains) {
        for (std::size_t x = 0; x < chain.size(); ++x) {
            for (std::size_t y = x + 1; y < chain.size(); ++y) {
                if (!hw.has_edge(chain[x], chain[y])) continue;
                out.chain_edges.emplace_back(std::min(chain[x], chain[y]), std::max(chain[x], chain[y]));
                out.physical.add_coupling(chain[x], chain[y], -chain_strength);
            }
        }
    }
    std::sort(out.chain_edges.begin(), out.chain_edges.end());
    out.chain_offset = -chain_strength * static_cast<double>(out.chain_edges.size());
    out.physical.canonicalize();
    return out;
}

/// Clamps every physical coupling into [lo, hi]; returns how many were changed.
/// Clamping breaks the energy identity with the logical model.
inline int clamp_couplers(EmbeddedIsing& e, double lo = -2.0, double hi = 1.0) {
    int count = 0;
    for (auto& [ij, j] : e.physical.J) {
        const double c = std::clamp(j, lo, hi);
        if (c != j) {
            j = c;
            ++count;
        }
    }
    e.clamped_couplers += count;
    return count;
}

struct UnembedResult {
    SampleSet logical;  // spin vartype, energies from the logical model
    ChainStats stats;
};

/// Majority-vote decoding of physical samples. A chain whose spins sum to zero
/// decodes to -1. Chain breaks are counted per (sample, chain), weighted by
/// occurrences.
inline UnembedResult unembed(const SampleSet& physical, const Embedding& emb, const HardwareGraph& hw,
                             const IsingModel& logical_model) {
    if (emb.chains.empty()) throw ParameterError("empty embedding");
    for (int v = 0; v < logical_model.num_vars; ++v) {
        if (!emb.chains.count(v)) throw ParameterError(fmt::format("no chain for logical variable {}", v));
    }
    UnembedResult out;
    std::size_t total_len = 0;
    for (const auto& [v, chain] : emb.chains) {
        out.stats.max_len = std::max(out.stats.max_len, chain.size());
        total_len += chain.size();
        for (Qubit q : chain) {
            if (q < 0 || q >= hw.num_qubits()) throw ParameterError(fmt::format("qubit {} not in hardware graph", q));
        }
    }
    out.stats.mean_len = static_cast<double>(total_len) / static_cast<double>(emb.chains.size());
    out.stats.overhead_ratio = embedding_overhead(emb);

    std::map<Assignment, long> counts;
    long broken = 0, observed = 0;
    for (const auto& rec : physical.records) {
        const auto spins = as_spin(rec.values, physical.vartype);
        Assignment logical(logical_model.num_vars, -1);
        for (const auto& [v, chain] : emb.chains) {
            int sum = 0;
            for (Qubit q : chain) {
                if (static_cast<std::size_t>(q) >= spins.size()) {
                    throw ParameterError(fmt::format("sample does not cover qubit {}", q));
                }
                sum += spins[q];
            }
            if (std::abs(sum) != static_cast<int>(chain.size())) broken += rec.occurrences;
            observed += rec.occurrences;
            if (v < logical_model.num_vars) logical[v] = sum > 0 ? 1 : -1;
        }
        counts[logical] += rec.occurrences;
    }
    out.stats.break_fraction = observed ? static_cast<double>(broken) / static_cast<double>(observed) : 0.0;

    SampleSet& ls = out.logical;
    ls.vartype = Vartype::spin;
    ls.solver_id = physical.solver_id;
    ls.seed = physical.seed;
    ls.shots = physical.shots;
    ls.wall_time_s = physical.wall_time_s;
    ls.info = physical.info;
    for (auto& [a, n] : counts) ls.records.push_back({a, energy_of(logical_model, a, Vartype::spin), n, {}});
    ls.sort_records();
    return out;
}

/// Re-expresses a spin sample set as binary with energies from the QUBO.
inline SampleSet to_binary_samples(const SampleSet& spins, const Qubo& q) {
    SampleSet out = spins;
    out.vartype = Vartype::binary;
    for (auto& r : out.records) {
        auto x = as_binary(r.values, Vartype::spin);
        r.values.assign(x.begin(), x.end());
        r.energy = qubo_energy(q, x);
    }
    out.sort_records();
    return out;
}

}  // namespace rvmmc
