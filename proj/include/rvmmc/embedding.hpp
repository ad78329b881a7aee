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
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "error.hpp"
#include "hardware_graph.hpp"
#include "json.hpp"
#include "qubo.hpp"
#include "random.hpp"

namespace rvmmc {

/// Logical variable -> chain of physical qubits.
struct Embedding {
    std::map<int, std::vector<Qubit>> chains;

    std::size_t num_qubits_used() const {
        std::size_t n = 0;
        for (const auto& [v, c] : chains) n += c.size();
        return n;
    }

    std::size_t max_chain_length() const {
        std::size_t m = 0;
        for (const auto& [v, c] : chains) m = std::max(m, c.size());
        return m;
    }

    bool operator==(const Embedding&) const = default;
};

/// Logical interaction graph of a model: all pairs with a nonzero coupling.
inline std::vector<VarPair> interaction_edges(const Qubo& q) {
    std::vector<VarPair> out;
    for (const auto& [ij, w] : q.quadratic) out.push_back(ij);
    return out;
}

inline std::vector<VarPair> interaction_edges(const IsingModel& m) {
    std::vector<VarPair> out;
    for (const auto& [ij, w] : m.J) out.push_back(ij);
    return out;
}

struct EmbeddingVerdict {
    std::vector<std::string> diagnostics;
    bool valid() const { return diagnostics.empty(); }
};

/// Checks chain disjointness, chain connectivity and coverage of every logical
/// edge by at least one coupler. Variables in `required` must have a chain even
/// when they take part in no edge.
inline EmbeddingVerdict validate_embedding(const std::vector<VarPair>& logical_edges, const HardwareGraph& hw,
                                           const Embedding& emb, const std::vector<int>& required = {}) {
    EmbeddingVerdict out;
    auto& diag = out.diagnostics;
    std::map<Qubit, int> owner;
    for (const auto& [var, chain] : emb.chains) {
        if (chain.empty()) {
            diag.push_back(fmt::format("empty chain for variable {}", var));
            continue;
        }
        bool in_range = true;
        for (Qubit q : chain) {
            if (q < 0 || q >= hw.num_qubits()) {
                diag.push_back(fmt::format("invalid qubit {} in chain of variable {}", q, var));
                in_range = false;
                continue;
            }
            auto [it, inserted] = owner.emplace(q, var);
            if (!inserted) {
                diag.push_back(fmt::format("overlap: qubit {} is in the chains of variables {} and {}", q,
                                           it->second == var ? var : it->second, var));
            }
        }
        if (!in_range) continue;
        // connectivity via DFS restricted to chain members
        std::set<Qubit> members(chain.begin(), chain.end());
        std::set<Qubit> seen{chain.front()};
        std::vector<Qubit> stack{chain.front()};
        while (!stack.empty()) {
            Qubit q = stack.back();
            stack.pop_back();
            for (Qubit r : hw.neighbors(q)) {
                if (members.count(r) && seen.insert(r).second) stack.push_back(r);
            }
        }
        if (seen.size() != members.size()) diag.push_back(fmt::format("disconnected chain for variable {}", var));
    }
    auto has_chain = [&](int v) {
        auto it = emb.chains.find(v);
        return it != emb.chains.end() && !it->second.empty();
    };
    std::set<int> reported;
    auto require = [&](int v) {
        if (!has_chain(v) && reported.insert(v).second) diag.push_back(fmt::format("missing chain for variable {}", v));
    };
    for (int v : required) require(v);
    for (auto [u, v] : logical_edges) {
        require(u);
        require(v);
        if (!has_chain(u) || !has_chain(v)) continue;
        bool covered = false;
        for (Qubit a : emb.chains.at(u)) {
            for (Qubit b : emb.chains.at(v)) {
                if (hw.has_edge(a, b)) {
                    covered = true;
                    break;
                }
            }
            if (covered) break;
        }
        if (!covered) diag.push_back(fmt::format("missing coupler for logical edge ({}, {})", u, v));
    }
    return out;
}

struct FindEmbeddingOptions {
    int max_tries = 10;
    std::uint64_t seed = 0;
    int patience = 40;       // rounds without overlap reduction before a restart
    int max_rounds = 400;    // rip-up rounds per try
    int shrink_rounds = 8;   // chain-length polishing rounds after success
};

struct FindEmbeddingResult {
    std::optional<Embedding> embedding;
    int tries = 0;
    std::string message;

    bool ok() const { return embedding.has_value(); }
};

namespace detail {

/// Chain-growing minor embedder: occupancy-weighted shortest paths plus
/// iterative rip-up and reroute. Qubits that stay overused accumulate a
/// history cost, which breaks the deadlocks where every single reroute is
/// already locally optimal.
class ChainEmbedder {
  public:
    ChainEmbedder(int num_vars, const std::vector<VarPair>& edges, const HardwareGraph& hw, std::uint64_t seed)
            : n_(num_vars), nq_(hw.num_qubits()), hw_(hw), rng_(seed) {
        adj_.assign(n_, {});
        for (auto [u, v] : edges) {
            if (u == v) continue;
            adj_[u].push_back(v);
            adj_[v].push_back(u);
        }
        for (auto& a : adj_) {
            std::sort(a.begin(), a.end());
            a.erase(std::unique(a.begin(), a.end()), a.end());
        }
        chains_.assign(n_, {});
        usage_.assign(nq_, 0);
        history_.assign(nq_, 0.0);
        weight_.assign(nq_, 1.0);
        last_total_.assign(n_, std::numeric_limits<double>::infinity());
    }

    std::optional<std::vector<std::vector<Qubit>>> run(const FindEmbeddingOptions& opt) {
        std::vector<int> order = traversal_order();
        set_base(2.0);
        for (int v : order) reroute(v);

        long best = overlap();
        int stale = 0;
        for (int round = 0; round < opt.max_rounds && best > 0; ++round) {
            for (Qubit q = 0; q < nq_; ++q) {
                if (usage_[q] > 1) history_[q] += usage_[q] - 1;
            }
            set_base(std::min(base_ * 1.2, 1e6));
            shuffle(order, rng_);
            // most-overlapping variables first
            std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return chain_overlap(a) > chain_overlap(b); });
            for (int v : order) reroute(v);
            const long ov = overlap();
            if (ov < best) {
                best = ov;
                stale = 0;
            } else if (++stale >= opt.patience) {
                break;
            }
        }
        if (overlap() > 0) return std::nullopt;

        for (int v : order) trim(v);
        // Polish: plain shortest chains, any overlap forbidden.
        shrinking_ = true;
        std::fill(history_.begin(), history_.end(), 0.0);
        set_base(1e9);
        for (int round = 0; round < opt.shrink_rounds; ++round) {
            bool improved = false;
            shuffle(order, rng_);
            for (int v : order) {
                auto old = chains_[v];
                reroute(v);
                if (chain_overlap(v) > 0 || chains_[v].size() > old.size()) {
                    assign(v, std::move(old));
                } else if (chains_[v].size() < old.size()) {
                    improved = true;
                }
            }
            if (!improved) break;
        }
        for (int v : order) trim(v);
        return chains_;
    }

  private:
    std::vector<int> traversal_order() {
        // breadth-first from a random start keeps neighbours close in the insertion order
        std::vector<int> order;
        std::vector<bool> seen(n_, false);
        std::vector<int> starts(n_);
        for (int i = 0; i < n_; ++i) starts[i] = i;
        shuffle(starts, rng_);
        for (int s : starts) {
            if (seen[s]) continue;
            std::queue<int> q;
            q.push(s);
            seen[s] = true;
            while (!q.empty()) {
                int v = q.front();
                q.pop();
                order.push_back(v);
                for (int w : adj_[v]) {
                    if (!seen[w]) {
                        seen[w] = true;
                        q.push(w);
                    }
                }
            }
        }
        return order;
    }

    void refresh(Qubit q) { weight_[q] = (1.0 + history_[q]) * std::pow(base_, std::min(usage_[q], 12)); }

    void set_base(double b) {
        base_ = b;
        for (Qubit q = 0; q < nq_; ++q) refresh(q);
    }

    long overlap() const {
        long total = 0;
        for (int u : usage_) total += std::max(0, u - 1);
        return total;
    }

    long chain_overlap(int v) const {
        long total = 0;
        for (Qubit q : chains_[v]) total += usage_[q] - 1;
        return total;
    }

    void assign(int v, std::vector<Qubit> chain) {
        for (Qubit q : chains_[v]) {
            --usage_[q];
            refresh(q);
        }
        chains_[v] = std::move(chain);
        for (Qubit q : chains_[v]) {
            ++usage_[q];
            refresh(q);
        }
    }

    /// Node-weighted distances to chain(v): the cost of a path is the summed
    /// weight of its qubits; a qubit of chain(v) or next to it costs just its
    /// own weight. Qubits farther than `cap` are left at infinity.
    void distances_from(int v, double cap, std::vector<double>& dist, std::vector<Qubit>& parent) {
        dist.assign(nq_, std::numeric_limits<double>::infinity());
        parent.assign(nq_, -1);
        heap_.clear();
        auto push = [&](double d, Qubit q) {
            heap_.emplace_back(d, q);
            std::push_heap(heap_.begin(), heap_.end(), std::greater<>{});
        };
        auto seed = [&](Qubit q) {
            if (weight_[q] < dist[q] && weight_[q] <= cap) {
                dist[q] = weight_[q];
                push(dist[q], q);
            }
        };
        for (Qubit c : chains_[v]) {
            seed(c);
            for (Qubit q : hw_.neighbors(c)) seed(q);
        }
        while (!heap_.empty()) {
            std::pop_heap(heap_.begin(), heap_.end(), std::greater<>{});
            auto [d, q] = heap_.back();
            heap_.pop_back();
            if (d > dist[q]) continue;
            for (Qubit r : hw_.neighbors(q)) {
                const double nd = d + weight_[r];
                if (nd < dist[r] && nd <= cap) {
                    dist[r] = nd;
                    parent[r] = q;
                    push(nd, r);
                }
            }
        }
    }

    /// Drops chain qubits one at a time while the chain stays connected and
    /// still touches every neighbouring chain.
    void trim(int v) {
        bool changed = true;
        while (changed && chains_[v].size() > 1) {
            changed = false;
            for (std::size_t i = 0; i < chains_[v].size(); ++i) {
                std::vector<Qubit> rest = chains_[v];
                rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
                if (connected(rest) && touches_all(v, rest)) {
                    assign(v, std::move(rest));
                    changed = true;
                    break;
                }
            }
        }
    }

    bool connected(const std::vector<Qubit>& chain) const {
        std::set<Qubit> members(chain.begin(), chain.end()), seen{chain.front()};
        std::vector<Qubit> stack{chain.front()};
        while (!stack.empty()) {
            Qubit q = stack.back();
            stack.pop_back();
            for (Qubit r : hw_.neighbors(q))
                if (members.count(r) && seen.insert(r).second) stack.push_back(r);
        }
        return seen.size() == members.size();
    }

    bool touches_all(int v, const std::vector<Qubit>& chain) const {
        for (int w : adj_[v]) {
            bool hit = false;
            for (Qubit a : chain) {
                for (Qubit b : chains_[w]) {
                    if (hw_.has_edge(a, b)) {
                        hit = true;
                        break;
                    }
                }
                if (hit) break;
            }
            if (!hit) return false;
        }
        return true;
    }

    template <class Score>
    Qubit pick_min(const Score& score, double* best_out = nullptr) {
        double best = std::numeric_limits<double>::infinity();
        std::vector<Qubit> ties;
        for (Qubit q = 0; q < nq_; ++q) {
            const double s = score(q);
            if (!std::isfinite(s)) continue;
            if (s < best * (1 - 1e-12)) {
                best = s;
                ties.assign(1, q);
            } else if (s <= best * (1 + 1e-12)) {
                ties.push_back(q);
            }
        }
        if (best_out) *best_out = best;
        if (ties.empty()) return -1;
        return ties[uniform_index(rng_, ties.size())];
    }

    void reroute(int u) {
        assign(u, {});
        std::vector<int> placed;
        for (int v : adj_[u]) {
            if (!chains_[v].empty()) placed.push_back(v);
        }
        if (placed.empty()) {
            assign(u, {pick_min([&](Qubit q) { return weight_[q]; })});
            return;
        }

        dist_.resize(placed.size());
        parent_.resize(placed.size());
        // Every path includes the root, which is paid for once. A root's total
        // is at least each of its path costs, so searches capped at `cap` are
        // exact whenever the best total found does not exceed the cap.
        const double extra = static_cast<double>(placed.size() - 1);
        const double inf = std::numeric_limits<double>::infinity();
        double cap = std::isfinite(last_total_[u]) ? 1.5 * last_total_[u] + 4.0 : 4.0 * static_cast<double>(placed.size());
        Qubit root = -1;
        while (true) {
            for (std::size_t k = 0; k < placed.size(); ++k) distances_from(placed[k], cap, dist_[k], parent_[k]);
            double best = inf;
            root = pick_min([&](Qubit q) {
                double total = -extra * weight_[q];
                for (const auto& d : dist_) total += d[q];
                return total;
            }, &best);
            if (best <= cap || cap == inf) {
                last_total_[u] = best;
                break;
            }
            cap = cap > 1e15 ? inf : cap * 4.0;
        }
        if (root < 0) {
            // neighbours sit in another connected component of the hardware graph
            root = static_cast<Qubit>(uniform_index(rng_, nq_));
        }
        std::set<Qubit> chain{root};
        for (std::size_t k = 0; k < placed.size(); ++k) {
            for (Qubit q = root; q >= 0; q = parent_[k][q]) chain.insert(q);
        }
        if (!shrinking_) grow_for_degree(u, chain);
        assign(u, std::vector<Qubit>(chain.begin(), chain.end()));
    }

    // A chain needs room on its boundary for every logical neighbour; a hub
    // squeezed into one qubit walls its neighbours in. Extend along the
    // cheapest adjacent qubits until the boundary is large enough.
    void grow_for_degree(int u, std::set<Qubit>& chain) {
        const std::size_t need = adj_[u].size();
        auto boundary = [&] {
            std::set<Qubit> b;
            for (Qubit c : chain)
                for (Qubit r : hw_.neighbors(c))
                    if (!chain.count(r)) b.insert(r);
            return b;
        };
        for (auto b = boundary(); b.size() < need; b = boundary()) {
            double best = std::numeric_limits<double>::infinity();
            std::vector<Qubit> ties;
            for (Qubit q : b) {
                std::size_t gain = 0;
                for (Qubit r : hw_.neighbors(q)) gain += !chain.count(r) && !b.count(r);
                if (gain == 0) continue;
                const double cost = weight_[q] / static_cast<double>(gain);
                if (cost < best * (1 - 1e-12)) {
                    best = cost;
                    ties.assign(1, q);
                } else if (cost <= best * (1 + 1e-12)) {
                    ties.push_back(q);
                }
            }
            if (ties.empty()) break;
            chain.insert(ties[uniform_index(rng_, ties.size())]);
        }
    }

    int n_;
    int nq_;
    const HardwareGraph& hw_;
    Rng rng_;
    double base_ = 2.0;
    bool shrinking_ = false;
    std::vector<std::vector<int>> adj_;
    std::vector<std::vector<Qubit>> chains_;
    std::vector<int> usage_;
    std::vector<double> history_;
    std::vector<double> weight_;
    std::vector<std::vector<double>> dist_;
    std::vector<std::vector<Qubit>> parent_;
    std::vector<std::pair<double, Qubit>> heap_;
    std::vector<double> last_total_;
};

}  // namespace detail

/// Heuristic minor embedding of variables 0..num_vars-1 with the given
/// logical edges. Returns a failure verdict (not an exception) when no valid
/// embedding was found within max_tries randomized restarts; the first
/// success is returned.
inline FindEmbeddingResult find_embedding(int num_vars, const std::vector<VarPair>& logical_edges,
                                          const HardwareGraph& hw, const FindEmbeddingOptions& opt = {}) {
    FindEmbeddingResult result;
    if (num_vars < 1) throw ParameterError("logical graph is empty");
    for (auto [u, v] : logical_edges) {
        if (u < 0 || v < 0 || u >= num_vars || v >= num_vars) throw ParameterError("logical edge out of range");
    }
    if (num_vars > hw.num_qubits()) {
        result.message = fmt::format("{} logical variables exceed {} physical qubits", num_vars, hw.num_qubits());
        return result;
    }
    for (int attempt = 0; attempt < std::max(1, opt.max_tries); ++attempt) {
        ++result.tries;
        detail::ChainEmbedder embedder(num_vars, logical_edges, hw, derive_seed(opt.seed, attempt));
        auto chains = embedder.run(opt);
        if (!chains) continue;
        Embedding emb;
        for (int v = 0; v < num_vars; ++v) emb.chains[v] = (*chains)[v];
        result.embedding = std::move(emb);
        break;
    }
    if (!result.embedding) {
        result.message = fmt::format("embedding failed after {} tries", result.tries);
    }
    return result;
}

/// Sum of chain lengths divided by the number of logical variables.
inline double embedding_overhead(const Embedding& emb) {
    if (emb.chains.empty()) throw ParameterError("empty embedding");
    return static_cast<double>(emb.num_qubits_used()) / static_cast<double>(emb.chains.size());
}

inline nlohmann::ordered_json embedding_to_json(const Embedding& emb) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [v, chain] : emb.chains) j[std::to_string(v)] = chain;
    return j;
}

inline Embedding embedding_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("embedding: expected a JSON object");
    Embedding emb;
    for (auto it = j.begin(); it != j.end(); ++it) {
        int v;
        try {
            std::size_t pos = 0;
            v = std::stoi(it.key(), &pos);
            if (pos != it.key().size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ParseError("embedding: key '" + it.key() + "' is not a variable id");
        }
        if (!it.value().is_array()) throw ParseError("embedding: chain of " + it.key() + " is not an array");
        try {
            emb.chains[v] = it.value().get<std::vector<Qubit>>();
        } catch (const nlohmann::json::exception&) {
            throw ParseError("embedding: chain of " + it.key() + " must contain integers");
        }
    }
    return emb;
}

}  // namespace rvmmc
