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
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "error.hpp"
#include "instance.hpp"
#include "qubo.hpp"

namespace rvmmc {

inline constexpr int kBruteforceMaxVars = 25;

struct ExactResult {
    std::vector<std::uint8_t> assignment;
    double energy = 0.0;
};

/// Global minimum by Gray-code enumeration of all 2^n assignments. Among
/// minimizers (energies within 1e-9 relative) the lexicographically smallest
/// assignment wins. The returned energy is recomputed directly.
inline ExactResult exact_bruteforce(const Qubo& q, int max_vars = kBruteforceMaxVars) {
    const int n = q.num_vars;
    if (n > max_vars) {
        throw SizeLimitError("model has " + std::to_string(n) + " variables, exceeds brute-force limit of " +
                             std::to_string(max_vars));
    }
    if (n == 0) return {{}, q.offset};

    std::vector<double> lin(n, 0.0);
    for (auto [i, u] : q.linear) lin[i] = u;
    std::vector<std::vector<std::pair<int, double>>> adj(n);
    for (auto [ij, w] : q.quadratic) {
        adj[ij.first].emplace_back(ij.second, w);
        adj[ij.second].emplace_back(ij.first, w);
    }

    std::vector<std::uint8_t> x(n, 0);
    std::vector<double> field(lin);  // u_i + sum_j w_ij x_j
    double energy = q.offset;
    // key orders assignments lexicographically: x_0 is the most significant bit
    std::uint64_t key = 0;
    double best = energy;
    std::uint64_t best_key = 0;
    auto resync = [&] {
        energy = qubo_energy(q, x);
        field = lin;
        for (int i = 0; i < n; ++i) {
            if (!x[i]) continue;
            for (auto [j, w] : adj[i]) field[j] += w;
        }
    };

    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t step = 1; step < total; ++step) {
        const int i = std::countr_zero(step);
        const double sign = x[i] ? -1.0 : 1.0;
        energy += sign * field[i];
        x[i] ^= 1;
        key ^= std::uint64_t{1} << (n - 1 - i);
        for (auto [j, w] : adj[i]) field[j] += sign * w;
        if ((step & 0xffff) == 0) resync();
        const double tol = 1e-9 * std::max(1.0, std::abs(best));
        if (energy < best - tol || (energy <= best + tol && key < best_key)) {
            best = std::min(best, energy);
            best_key = key;
        }
    }
    ExactResult r;
    r.assignment.resize(n);
    for (int i = 0; i < n; ++i) r.assignment[i] = (best_key >> (n - 1 - i)) & 1;
    r.energy = qubo_energy(q, r.assignment);
    return r;
}

namespace detail {

/// Hitting-set branch and bound over terminal-pair paths.
class MulticutBnb {
  public:
    MulticutBnb(const TreeInstance& instance, std::optional<long> node_budget)
            : n_(instance.num_vertices()), budget_(node_budget) {
        for (const auto& p : enumerate_constraint_paths(instance)) {
            std::vector<Vertex> cand;
            for (Vertex v : p.vertices) {
                if (!instance.is_terminal(v)) cand.push_back(v);
            }
            if (cand.empty()) {
                throw InfeasibleError("path " + std::to_string(paths_.size()) +
                                      " has no non-terminal vertex; no feasible cutset exists");
            }
            std::sort(cand.begin(), cand.end());
            paths_.push_back(std::move(cand));
        }
        paths_of_.assign(n_, {});
        for (std::size_t p = 0; p < paths_.size(); ++p) {
            for (Vertex v : paths_[p]) paths_of_[v].push_back(static_cast<int>(p));
        }
        hits_.assign(paths_.size(), 0);
        forbidden_.assign(n_, false);
        mark_.assign(n_, 0);
    }

    std::optional<Cutset> solve() {
        incumbent_ = greedy();
        best_size_ = incumbent_.size();
        if (!search()) return std::nullopt;
        std::sort(incumbent_.begin(), incumbent_.end());
        return Cutset{incumbent_};
    }

    long nodes() const { return nodes_; }

  private:
    std::vector<Vertex> greedy() const {
        std::vector<int> hits(paths_.size(), 0);
        std::vector<Vertex> chosen;
        while (true) {
            std::vector<int> gain(n_, 0);
            bool any = false;
            for (std::size_t p = 0; p < paths_.size(); ++p) {
                if (hits[p]) continue;
                any = true;
                for (Vertex v : paths_[p]) ++gain[v];
            }
            if (!any) break;
            Vertex v = static_cast<Vertex>(std::max_element(gain.begin(), gain.end()) - gain.begin());
            chosen.push_back(v);
            for (int p : paths_of_[v]) ++hits[p];
        }
        return chosen;
    }

    void choose(Vertex v) {
        current_.push_back(v);
        for (int p : paths_of_[v]) ++hits_[p];
    }

    void unchoose(Vertex v) {
        current_.pop_back();
        for (int p : paths_of_[v]) --hits_[p];
    }

    int allowed_count(int p) const {
        int c = 0;
        for (Vertex v : paths_[p]) c += !forbidden_[v];
        return c;
    }

    /// False when the node budget ran out.
    bool search() {
        if (budget_ && ++nodes_ > *budget_) return false;
        if (!budget_) ++nodes_;

        std::vector<std::pair<int, int>> open;  // (allowed candidates, path)
        for (std::size_t p = 0; p < paths_.size(); ++p) {
            if (hits_[p]) continue;
            const int c = allowed_count(static_cast<int>(p));
            if (c == 0) return true;  // dead end under the current exclusions
            open.emplace_back(c, static_cast<int>(p));
        }
        if (open.empty()) {
            if (current_.size() < best_size_) {
                best_size_ = current_.size();
                incumbent_ = current_;
            }
            return true;
        }
        std::sort(open.begin(), open.end());

        // Greedy packing of uncovered paths with pairwise disjoint candidates.
        ++stamp_;
        std::size_t packed = 0;
        for (auto [c, p] : open) {
            bool disjoint = true;
            for (Vertex v : paths_[p]) {
                if (!forbidden_[v] && mark_[v] == stamp_) {
                    disjoint = false;
                    break;
                }
            }
            if (!disjoint) continue;
            ++packed;
            for (Vertex v : paths_[p]) mark_[v] = stamp_;
        }
        if (current_.size() + packed >= best_size_) return true;

        // Branch i takes the i-th candidate and excludes the earlier ones.
        const int branch_path = open.front().second;
        std::vector<Vertex> excluded;
        bool complete = true;
        for (Vertex v : paths_[branch_path]) {
            if (forbidden_[v]) continue;
            choose(v);
            complete = search();
            unchoose(v);
            if (!complete) break;
            forbidden_[v] = true;
            excluded.push_back(v);
        }
        for (Vertex v : excluded) forbidden_[v] = false;
        return complete;
    }

    int n_;
    std::optional<long> budget_;
    std::vector<std::vector<Vertex>> paths_;
    std::vector<std::vector<int>> paths_of_;
    std::vector<int> hits_;
    std::vector<bool> forbidden_;
    std::vector<unsigned> mark_;
    unsigned stamp_ = 0;
    std::vector<Vertex> current_;
    std::vector<Vertex> incumbent_;
    std::size_t best_size_ = 0;
    long nodes_ = 0;
};

}  // namespace detail

/// Minimum-cardinality feasible cutset, or nullopt when more than
/// `node_budget` search nodes would be needed.
inline std::optional<Cutset> exact_multicut_bnb(const TreeInstance& instance, long node_budget) {
    detail::MulticutBnb bnb(instance, node_budget);
    return bnb.solve();
}

/// Minimum-cardinality feasible cutset without a node limit.
inline Cutset exact_multicut_bnb(const TreeInstance& instance) {
    detail::MulticutBnb bnb(instance, std::nullopt);
    return *bnb.solve();
}

}  // namespace rvmmc
