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
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "error.hpp"

namespace rvmmc {

using Qubit = int;

/// Simple undirected qubit connectivity graph with dense ids.
class HardwareGraph {
  public:
    HardwareGraph() = default;

    /// Edges are normalized to (min, max), sorted and deduplicated; the number of
    /// dropped duplicates is available from duplicates_removed().
    HardwareGraph(int num_qubits, std::vector<std::pair<Qubit, Qubit>> edges, std::string tag)
            : num_qubits_(num_qubits), edges_(std::move(edges)), tag_(std::move(tag)) {
        if (num_qubits_ < 0) throw ParameterError("negative qubit count");
        for (auto& [u, v] : edges_) {
            if (u < 0 || v < 0 || u >= num_qubits_ || v >= num_qubits_) {
                throw ParameterError(fmt::format("edge ({}, {}) has a qubit id outside [0, {})", u, v, num_qubits_));
            }
            if (u == v) throw ParameterError(fmt::format("self loop at qubit {}", u));
            if (u > v) std::swap(u, v);
        }
        std::sort(edges_.begin(), edges_.end());
        const auto before = edges_.size();
        edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
        duplicates_ = before - edges_.size();
        adjacency_.assign(num_qubits_, {});
        for (auto [u, v] : edges_) {
            adjacency_[u].push_back(v);
            adjacency_[v].push_back(u);
        }
        for (auto& a : adjacency_) std::sort(a.begin(), a.end());
    }

    int num_qubits() const { return num_qubits_; }
    const std::vector<std::pair<Qubit, Qubit>>& edges() const { return edges_; }
    const std::vector<Qubit>& neighbors(Qubit q) const { return adjacency_[q]; }
    const std::string& tag() const { return tag_; }
    std::size_t duplicates_removed() const { return duplicates_; }

    bool has_edge(Qubit u, Qubit v) const {
        if (u < 0 || u >= num_qubits_) return false;
        return std::binary_search(adjacency_[u].begin(), adjacency_[u].end(), v);
    }

    /// Same qubits and couplers; the tag is not compared.
    bool same_graph(const HardwareGraph& o) const { return num_qubits_ == o.num_qubits_ && edges_ == o.edges_; }

  private:
    int num_qubits_ = 0;
    std::vector<std::pair<Qubit, Qubit>> edges_;
    std::string tag_;
    std::size_t duplicates_ = 0;
    std::vector<std::vector<Qubit>> adjacency_;
};

/// Chimera C(m, n, t): an m x n grid of K_{t,t} cells.
///
/// Qubit ((row * n) + col) * 2t + side * t + k, side 0 vertical, 1 horizontal.
/// Vertical qubits couple to the same (col, k) one row down, horizontal qubits
/// to the same (row, k) one column right.
inline HardwareGraph chimera_graph(int m, int n, int t) {
    if (m < 1 || n < 1 || t < 1) throw ParameterError("chimera dimensions must be >= 1");
    auto id = [&](int row, int col, int side, int k) { return ((row * n) + col) * 2 * t + side * t + k; };
    std::vector<std::pair<Qubit, Qubit>> edges;
    for (int row = 0; row < m; ++row) {
        for (int col = 0; col < n; ++col) {
            for (int a = 0; a < t; ++a) {
                for (int b = 0; b < t; ++b) edges.emplace_back(id(row, col, 0, a), id(row, col, 1, b));
                if (row + 1 < m) edges.emplace_back(id(row, col, 0, a), id(row + 1, col, 0, a));
                if (col + 1 < n) edges.emplace_back(id(row, col, 1, a), id(row, col + 1, 1, a));
            }
        }
    }
    return HardwareGraph(m * n * 2 * t, std::move(edges), fmt::format("chimera-{}-{}-{}", m, n, t));
}

/// Line 1 `num_qubits`, then `u v` per coupler with u < v, ascending.
inline std::string serialize_hardware_graph(const HardwareGraph& g) {
    std::string out = fmt::format("{}\n", g.num_qubits());
    for (auto [u, v] : g.edges()) out += fmt::format("{} {}\n", u, v);
    return out;
}

/// Parses the adjacency format. Duplicate couplers are dropped and reported
/// through `warnings` when given.
inline HardwareGraph load_hardware_graph(std::string_view text, std::vector<std::string>* warnings = nullptr) {
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    auto fail = [&](const std::string& msg) -> void {
        throw ParseError(fmt::format("hardware graph: line {}: {}", line_no, msg));
    };
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
        }
        return false;
    };
    if (!next_line()) fail("missing qubit count");
    int num_qubits = -1;
    {
        std::istringstream ls(line);
        std::string extra;
        if (!(ls >> num_qubits) || num_qubits < 0 || (ls >> extra)) fail("expected a non-negative qubit count");
    }
    std::vector<std::pair<Qubit, Qubit>> edges;
    while (next_line()) {
        std::istringstream ls(line);
        long u, v;
        std::string extra;
        if (!(ls >> u >> v) || (ls >> extra)) fail("expected 'u v'");
        if (u < 0 || v < 0 || u >= num_qubits || v >= num_qubits) {
            fail(fmt::format("qubit id out of range [0, {})", num_qubits));
        }
        if (u == v) fail("self loop");
        edges.emplace_back(static_cast<Qubit>(u), static_cast<Qubit>(v));
    }
    HardwareGraph g(num_qubits, std::move(edges), "imported");
    if (g.duplicates_removed() > 0 && warnings) {
        warnings->push_back(fmt::format("removed {} duplicate coupler line(s)", g.duplicates_removed()));
    }
    return g;
}

}  // namespace rvmmc
