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
#include <cstdint>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "random.hpp"

namespace rvmmc {

using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;
using TerminalPair = std::pair<Vertex, Vertex>;

/// Vertex sequence of a simple path, first element the source, last the target.
struct Path {
    std::vector<Vertex> vertices;

    std::size_t size() const { return vertices.size(); }
    Vertex front() const { return vertices.front(); }
    Vertex back() const { return vertices.back(); }
    bool operator==(const Path&) const = default;
};

/// An undirected tree with terminal pairs to be separated.
///
/// Construction validates the tree and terminal invariants and puts the edge
/// list in canonical form (each edge as (min, max), list sorted). Terminal pairs
/// keep the order they were given in. Instances are immutable afterwards.
class TreeInstance {
  public:
    TreeInstance(int num_vertices, std::vector<Edge> edges, std::vector<TerminalPair> terminal_pairs,
                 std::uint64_t seed = 0)
            : num_vertices_(num_vertices), edges_(std::move(edges)), pairs_(std::move(terminal_pairs)), seed_(seed) {
        if (num_vertices_ < 1) throw ParameterError("num_vertices must be positive");
        for (auto& [u, v] : edges_) {
            if (u < 0 || v < 0 || u >= num_vertices_ || v >= num_vertices_) {
                throw ParameterError("edge endpoint out of range");
            }
            if (u == v) throw ParameterError("not a tree: self loop at vertex " + std::to_string(u));
            if (u > v) std::swap(u, v);
        }
        std::sort(edges_.begin(), edges_.end());
        if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
            throw ParameterError("not a tree: duplicate edge");
        }
        if (edges_.size() != static_cast<std::size_t>(num_vertices_) - 1) {
            throw ParameterError("not a tree: expected " + std::to_string(num_vertices_ - 1) + " edges, found " +
                                 std::to_string(edges_.size()));
        }
        adjacency_.assign(num_vertices_, {});
        for (auto [u, v] : edges_) {
            adjacency_[u].push_back(v);
            adjacency_[v].push_back(u);
        }
        for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
        root_at_zero();

        is_terminal_.assign(num_vertices_, false);
        std::set<std::pair<Vertex, Vertex>> seen;
        for (std::size_t i = 0; i < pairs_.size(); ++i) {
            auto [s, t] = pairs_[i];
            const std::string where = "terminal pair " + std::to_string(i);
            if (s < 0 || t < 0 || s >= num_vertices_ || t >= num_vertices_) {
                throw ParameterError(where + ": vertex out of range");
            }
            if (s == t) throw ParameterError(where + ": identical terminals");
            if (!seen.emplace(std::min(s, t), std::max(s, t)).second) {
                throw ParameterError(where + ": duplicate pair");
            }
            if (adjacent(s, t)) throw ParameterError(where + ": adjacent terminals");
            is_terminal_[s] = is_terminal_[t] = true;
        }
    }

    int num_vertices() const { return num_vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<TerminalPair>& terminal_pairs() const { return pairs_; }
    std::size_t num_pairs() const { return pairs_.size(); }
    std::uint64_t seed() const { return seed_; }

    const std::vector<Vertex>& neighbors(Vertex v) const { return adjacency_.at(v); }

    bool adjacent(Vertex u, Vertex v) const {
        const auto& nbrs = adjacency_[u];
        return std::binary_search(nbrs.begin(), nbrs.end(), v);
    }

    bool is_terminal(Vertex v) const { return is_terminal_.at(v); }

    /// Sorted list of all vertices appearing in some terminal pair.
    std::vector<Vertex> terminal_vertices() const {
        std::vector<Vertex> out;
        for (Vertex v = 0; v < num_vertices_; ++v) {
            if (is_terminal_[v]) out.push_back(v);
        }
        return out;
    }

    /// The unique u-v path.
    Path unique_path(Vertex u, Vertex v) const {
        if (u < 0 || v < 0 || u >= num_vertices_ || v >= num_vertices_) {
            throw ParameterError("invalid vertex id in path query");
        }
        if (u == v) throw ParameterError("path endpoints must differ");
        std::vector<Vertex> head, tail;
        Vertex a = u, b = v;
        while (depth_[a] > depth_[b]) head.push_back(std::exchange(a, parent_[a]));
        while (depth_[b] > depth_[a]) tail.push_back(std::exchange(b, parent_[b]));
        while (a != b) {
            head.push_back(std::exchange(a, parent_[a]));
            tail.push_back(std::exchange(b, parent_[b]));
        }
        head.push_back(a);
        head.insert(head.end(), tail.rbegin(), tail.rend());
        return Path{std::move(head)};
    }

    bool operator==(const TreeInstance& other) const {
        return num_vertices_ == other.num_vertices_ && edges_ == other.edges_ && pairs_ == other.pairs_ &&
               seed_ == other.seed_;
    }

  private:
    void root_at_zero() {
        parent_.assign(num_vertices_, -1);
        depth_.assign(num_vertices_, -1);
        std::vector<Vertex> stack{0};
        depth_[0] = 0;
        int reached = 1;
        while (!stack.empty()) {
            Vertex v = stack.back();
            stack.pop_back();
            for (Vertex w : adjacency_[v]) {
                if (depth_[w] >= 0) continue;
                depth_[w] = depth_[v] + 1;
                parent_[w] = v;
                ++reached;
                stack.push_back(w);
            }
        }
        if (reached != num_vertices_) throw ParameterError("not a tree: graph is disconnected");
    }

    int num_vertices_;
    std::vector<Edge> edges_;
    std::vector<TerminalPair> pairs_;
    std::uint64_t seed_;

    std::vector<std::vector<Vertex>> adjacency_;
    std::vector<Vertex> parent_;
    std::vector<int> depth_;
    std::vector<bool> is_terminal_;
};

inline Path unique_path(const TreeInstance& instance, Vertex u, Vertex v) { return instance.unique_path(u, v); }

/// One path per terminal pair, in pair order.
inline std::vector<Path> enumerate_constraint_paths(const TreeInstance& instance) {
    std::vector<Path> paths;
    paths.reserve(instance.num_pairs());
    for (auto [s, t] : instance.terminal_pairs()) paths.push_back(instance.unique_path(s, t));
    return paths;
}

/// Decodes a Prüfer sequence over [0, n) into the edge list of its labeled tree.
inline std::vector<Edge> prufer_to_edges(const std::vector<Vertex>& sequence, int n) {
    std::vector<int> degree(n, 1);
    for (Vertex v : sequence) ++degree[v];
    std::priority_queue<Vertex, std::vector<Vertex>, std::greater<>> leaves;
    for (Vertex v = 0; v < n; ++v) {
        if (degree[v] == 1) leaves.push(v);
    }
    std::vector<Edge> edges;
    edges.reserve(n - 1);
    for (Vertex v : sequence) {
        Vertex leaf = leaves.top();
        leaves.pop();
        edges.emplace_back(leaf, v);
        if (--degree[v] == 1) leaves.push(v);
    }
    Vertex a = leaves.top();
    leaves.pop();
    Vertex b = leaves.top();
    edges.emplace_back(a, b);
    return edges;
}

/// Uniformly random labeled tree on n vertices plus k terminal pairs.
///
/// Pairs are drawn by rejection: a candidate is discarded if its endpoints are
/// adjacent, it duplicates an earlier pair, or accepting it would leave some
/// pair's path without a non-terminal internal vertex. At most 1000*k
/// candidates are drawn.
inline TreeInstance generate_tree_instance(int n, int k, std::uint64_t seed) {
    if (n < 3) throw ParameterError("n must be >= 3");
    if (k < 1) throw ParameterError("k must be >= 1");
    Rng rng(seed);
    std::vector<Vertex> sequence(n - 2);
    for (auto& v : sequence) v = static_cast<Vertex>(uniform_index(rng, n));
    const TreeInstance tree(n, prufer_to_edges(sequence, n), {});

    std::vector<TerminalPair> pairs;
    std::vector<Path> paths;
    std::vector<bool> terminal(n, false);
    std::set<std::pair<Vertex, Vertex>> chosen;
    auto has_free_interior = [&](const Path& p) {
        return std::any_of(p.vertices.begin() + 1, p.vertices.end() - 1, [&](Vertex v) { return !terminal[v]; });
    };

    const long budget = 1000L * k;
    for (long attempt = 0; attempt < budget && static_cast<int>(pairs.size()) < k; ++attempt) {
        Vertex s = static_cast<Vertex>(uniform_index(rng, n));
        Vertex t = static_cast<Vertex>(uniform_index(rng, n));
        if (s == t || tree.adjacent(s, t)) continue;
        if (chosen.count({std::min(s, t), std::max(s, t)})) continue;
        Path p = tree.unique_path(s, t);
        const bool s_was = terminal[s], t_was = terminal[t];
        terminal[s] = terminal[t] = true;
        bool ok = has_free_interior(p) && std::all_of(paths.begin(), paths.end(), has_free_interior);
        if (!ok) {
            terminal[s] = s_was;
            terminal[t] = t_was;
            continue;
        }
        chosen.emplace(std::min(s, t), std::max(s, t));
        pairs.emplace_back(s, t);
        paths.push_back(std::move(p));
    }
    if (static_cast<int>(pairs.size()) < k) {
        throw GenerationError("could not place " + std::to_string(k) + " terminal pairs on a tree with " +
                              std::to_string(n) + " vertices within " + std::to_string(budget) + " draws");
    }
    return TreeInstance(n, tree.edges(), std::move(pairs), seed);
}

}  // namespace rvmmc
