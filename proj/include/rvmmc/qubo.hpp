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

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "instance.hpp"

namespace rvmmc {

/// Meaning of a QUBO variable: a vertex removal indicator or one bit of a path slack.
struct VarLabel {
    enum class Kind { vertex, slack };
    Kind kind = Kind::vertex;
    int vertex = -1;
    int path = -1;
    int bit = -1;

    static VarLabel of_vertex(int v) { return {Kind::vertex, v, -1, -1}; }
    static VarLabel of_slack(int path, int bit) { return {Kind::slack, -1, path, bit}; }

    bool is_vertex() const { return kind == Kind::vertex; }

    std::string to_string() const {
        if (is_vertex()) return "vertex:" + std::to_string(vertex);
        return "slack:" + std::to_string(path) + ":" + std::to_string(bit);
    }

    bool operator==(const VarLabel&) const = default;
};

using VarPair = std::pair<int, int>;

/// Sparse quadratic pseudo-Boolean function offset + sum u_i x_i + sum_{i<j} w_ij x_i x_j.
struct Qubo {
    int num_vars = 0;
    std::vector<VarLabel> labels;
    std::map<int, double> linear;
    std::map<VarPair, double> quadratic;
    double offset = 0.0;

    void add_linear(int i, double value) { linear[i] += value; }

    void add_quadratic(int i, int j, double value) {
        if (i == j) {
            add_linear(i, value);  // x^2 = x
            return;
        }
        if (i > j) std::swap(i, j);
        quadratic[{i, j}] += value;
    }

    /// Drops zero entries and checks the structural invariants.
    void canonicalize() {
        std::erase_if(linear, [](const auto& kv) { return kv.second == 0.0; });
        std::erase_if(quadratic, [](const auto& kv) { return kv.second == 0.0; });
        for (auto& [i, u] : linear) {
            if (i < 0 || i >= num_vars || !std::isfinite(u)) throw ParameterError("invalid linear term");
        }
        for (auto& [ij, w] : quadratic) {
            if (ij.first < 0 || ij.first >= ij.second || ij.second >= num_vars || !std::isfinite(w)) {
                throw ParameterError("invalid quadratic term");
            }
        }
        if (!std::isfinite(offset)) throw ParameterError("non-finite offset");
    }

    double linear_at(int i) const {
        auto it = linear.find(i);
        return it == linear.end() ? 0.0 : it->second;
    }

    bool operator==(const Qubo&) const = default;
};

/// Spin model offset + sum h_i s_i + sum_{i<j} J_ij s_i s_j over s in {-1,+1}^n.
struct IsingModel {
    int num_vars = 0;
    std::map<int, double> h;
    std::map<VarPair, double> J;
    double offset = 0.0;

    void add_field(int i, double value) { h[i] += value; }

    void add_coupling(int i, int j, double value) {
        if (i == j) {
            offset += value;  // s^2 = 1
            return;
        }
        if (i > j) std::swap(i, j);
        J[{i, j}] += value;
    }

    void canonicalize() {
        std::erase_if(h, [](const auto& kv) { return kv.second == 0.0; });
        std::erase_if(J, [](const auto& kv) { return kv.second == 0.0; });
    }

    bool operator==(const IsingModel&) const = default;
};

/// Vertices selected for removal, sorted ascending.
struct Cutset {
    std::vector<Vertex> vertices;

    std::size_t size() const { return vertices.size(); }
    bool contains(Vertex v) const { return std::binary_search(vertices.begin(), vertices.end(), v); }
    bool operator==(const Cutset&) const = default;
};

enum class SlackSign {
    corrected,  // (sum x - sum 2^j y - 1)^2: zero iff sum x = 1 + slack
    paper,      // (sum x + sum 2^j y - 1)^2, admits sum x = 0
};

struct PenaltyWeights {
    double m1 = 1.0;  // terminal constraint
    double m2 = 1.0;  // path constraints
};

namespace detail {

/// Adds weight * (constant + sum coeff_i x_i)^2 to q, expanded with x^2 = x.
inline void add_squared_form(Qubo& q, double weight, double constant, const std::map<int, double>& terms) {
    q.offset += weight * constant * constant;
    for (auto it = terms.begin(); it != terms.end(); ++it) {
        const auto [i, a] = *it;
        q.add_linear(i, weight * (2.0 * constant * a + a * a));
        for (auto jt = std::next(it); jt != terms.end(); ++jt) {
            q.add_quadratic(i, jt->first, 2.0 * weight * a * jt->second);
        }
    }
}

/// Allocates vertex variables: all vertices, or only non-terminals when terminals are fixed to 0.
inline std::vector<int> allocate_vertex_vars(const TreeInstance& instance, bool fix_terminals, Qubo& q) {
    std::vector<int> index(instance.num_vertices(), -1);
    for (Vertex v = 0; v < instance.num_vertices(); ++v) {
        if (fix_terminals && instance.is_terminal(v)) continue;
        index[v] = q.num_vars++;
        q.labels.push_back(VarLabel::of_vertex(v));
    }
    return index;
}

inline void add_objective_and_terminal_penalty(const TreeInstance& instance, const std::vector<int>& index,
                                               double m1, bool fix_terminals, Qubo& q) {
    for (Vertex v = 0; v < instance.num_vertices(); ++v) {
        if (index[v] >= 0) q.add_linear(index[v], 1.0);
    }
    if (!fix_terminals) {
        std::map<int, double> terms;
        for (Vertex v : instance.terminal_vertices()) terms[index[v]] += 1.0;
        add_squared_form(q, m1, 0.0, terms);
    }
}

inline void check_penalties(double m1, double m2) {
    if (!(m1 > 0.0) || !(m2 > 0.0) || !std::isfinite(m1) || !std::isfinite(m2)) {
        throw ParameterError("penalty coefficients must be positive and finite");
    }
}

}  // namespace detail

/// Number of slack bits for a path of `path_vertices` nodes: ceil(log2(path_vertices)).
inline int slack_bits(std::size_t path_vertices) {
    int bits = 0;
    while ((std::size_t{1} << bits) < path_vertices) ++bits;
    return bits;
}

/// Penalty model sum x_v + M1 (sum_{V_H} x_v)^2 + M2 sum_paths (sum_{v in path} (1 - x_v))^2.
///
/// With fix_terminals the terminal variables are substituted by 0 and removed,
/// so the M1 term vanishes. Note that the path term is minimized by removing
/// every vertex of a path, not just one of them.
inline Qubo build_penalty_qubo(const TreeInstance& instance, double m1, double m2, bool fix_terminals) {
    detail::check_penalties(m1, m2);
    Qubo q;
    auto index = detail::allocate_vertex_vars(instance, fix_terminals, q);
    detail::add_objective_and_terminal_penalty(instance, index, m1, fix_terminals, q);
    for (const Path& path : enumerate_constraint_paths(instance)) {
        std::map<int, double> terms;
        for (Vertex v : path.vertices) {
            if (index[v] >= 0) terms[index[v]] -= 1.0;
        }
        detail::add_squared_form(q, m2, static_cast<double>(path.size()), terms);
    }
    q.canonicalize();
    return q;
}

/// Penalty model with binary slack bits turning each "at least one path vertex
/// removed" constraint into a squared equality. Slack variables follow the
/// vertex variables, ordered by path then bit.
inline Qubo build_slack_qubo(const TreeInstance& instance, double m1, double m2, bool fix_terminals,
                             SlackSign sign = SlackSign::corrected) {
    detail::check_penalties(m1, m2);
    Qubo q;
    auto index = detail::allocate_vertex_vars(instance, fix_terminals, q);
    detail::add_objective_and_terminal_penalty(instance, index, m1, fix_terminals, q);
    const auto paths = enumerate_constraint_paths(instance);
    const double slack_coeff = sign == SlackSign::corrected ? -1.0 : 1.0;
    for (std::size_t p = 0; p < paths.size(); ++p) {
        std::map<int, double> terms;
        for (Vertex v : paths[p].vertices) {
            if (index[v] >= 0) terms[index[v]] += 1.0;
        }
        const int bits = slack_bits(paths[p].size());
        for (int j = 0; j < bits; ++j) {
            const int var = q.num_vars++;
            q.labels.push_back(VarLabel::of_slack(static_cast<int>(p), j));
            terms[var] = slack_coeff * static_cast<double>(1 << j);
        }
        detail::add_squared_form(q, m2, -1.0, terms);
    }
    q.canonicalize();
    return q;
}

inline double qubo_energy(const Qubo& q, std::span<const std::uint8_t> x) {
    if (x.size() != static_cast<std::size_t>(q.num_vars)) {
        throw ParameterError("assignment length " + std::to_string(x.size()) + " does not match " +
                             std::to_string(q.num_vars) + " variables");
    }
    double e = q.offset;
    for (auto [i, u] : q.linear) {
        if (x[i]) e += u;
    }
    for (auto [ij, w] : q.quadratic) {
        if (x[ij.first] && x[ij.second]) e += w;
    }
    return e;
}

/// Substitutes x_i = (1 + s_i) / 2.
inline IsingModel to_ising(const Qubo& q) {
    IsingModel m;
    m.num_vars = q.num_vars;
    m.offset = q.offset;
    for (auto [i, u] : q.linear) {
        m.offset += u / 2.0;
        m.add_field(i, u / 2.0);
    }
    for (auto [ij, w] : q.quadratic) {
        m.offset += w / 4.0;
        m.add_field(ij.first, w / 4.0);
        m.add_field(ij.second, w / 4.0);
        m.add_coupling(ij.first, ij.second, w / 4.0);
    }
    m.canonicalize();
    return m;
}

/// Substitutes s_i = 2 x_i - 1.
inline Qubo to_qubo(const IsingModel& m) {
    Qubo q;
    q.num_vars = m.num_vars;
    q.offset = m.offset;
    for (auto [i, h] : m.h) {
        q.offset -= h;
        q.add_linear(i, 2.0 * h);
    }
    for (auto [ij, j] : m.J) {
        q.offset += j;
        q.add_linear(ij.first, -2.0 * j);
        q.add_linear(ij.second, -2.0 * j);
        q.add_quadratic(ij.first, ij.second, 4.0 * j);
    }
    for (int i = 0; i < q.num_vars; ++i) q.labels.push_back(VarLabel::of_vertex(i));
    q.canonicalize();
    return q;
}

inline double ising_energy(const IsingModel& m, std::span<const std::int8_t> s) {
    if (s.size() != static_cast<std::size_t>(m.num_vars)) {
        throw ParameterError("spin vector length " + std::to_string(s.size()) + " does not match " +
                             std::to_string(m.num_vars) + " variables");
    }
    for (auto v : s) {
        if (v != 1 && v != -1) throw ParameterError("spin values must be -1 or +1");
    }
    double e = m.offset;
    for (auto [i, h] : m.h) e += h * s[i];
    for (auto [ij, j] : m.J) e += j * s[ij.first] * s[ij.second];
    return e;
}

inline std::vector<std::int8_t> to_spins(std::span<const std::uint8_t> x) {
    std::vector<std::int8_t> s(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] ? 1 : -1;
    return s;
}

inline std::vector<std::uint8_t> to_binary(std::span<const std::int8_t> s) {
    std::vector<std::uint8_t> x(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) x[i] = s[i] > 0 ? 1 : 0;
    return x;
}

/// Vertex-labeled variables set to 1. Slack bits are ignored.
inline Cutset extract_cutset(const Qubo& q, std::span<const std::uint8_t> x) {
    if (x.size() != static_cast<std::size_t>(q.num_vars)) throw ParameterError("assignment length mismatch");
    Cutset c;
    for (int i = 0; i < q.num_vars; ++i) {
        if (x[i] && q.labels.at(i).is_vertex()) c.vertices.push_back(q.labels[i].vertex);
    }
    std::sort(c.vertices.begin(), c.vertices.end());
    return c;
}

struct Feasibility {
    enum class Status { ok, violates_c1, violates_c2 };
    Status status = Status::ok;
    int witness_path = -1;     // first uncovered path for violates_c2
    Vertex witness_vertex = -1;  // first removed terminal for violates_c1

    bool ok() const { return status == Status::ok; }

    std::string to_string() const {
        switch (status) {
            case Status::ok: return "ok";
            case Status::violates_c1: return "violates C1 (terminal " + std::to_string(witness_vertex) + " removed)";
            case Status::violates_c2: return "violates C2 (path " + std::to_string(witness_path) + " intact)";
        }
        return "?";
    }
};

/// A cutset is feasible iff it removes no terminal and hits every terminal-pair path.
inline Feasibility check_feasibility(const TreeInstance& instance, const Cutset& c) {
    for (Vertex v : c.vertices) {
        if (v < 0 || v >= instance.num_vertices()) throw ParameterError("cutset vertex out of range");
        if (instance.is_terminal(v)) return {Feasibility::Status::violates_c1, -1, v};
    }
    const auto paths = enumerate_constraint_paths(instance);
    for (std::size_t p = 0; p < paths.size(); ++p) {
        const auto& vs = paths[p].vertices;
        if (std::none_of(vs.begin(), vs.end(), [&](Vertex v) { return c.contains(v); })) {
            return {Feasibility::Status::violates_c2, static_cast<int>(p), -1};
        }
    }
    return {};
}

/// M2 = |V| + 1 so that one unit of path violation outweighs removing every
/// vertex; M1 = M2 * L^2 with L the longest constraint path (in vertices).
inline PenaltyWeights default_penalties(const TreeInstance& instance) {
    std::size_t longest = 0;
    for (const auto& p : enumerate_constraint_paths(instance)) longest = std::max(longest, p.size());
    const double m2 = instance.num_vertices() + 1.0;
    const double l = static_cast<double>(longest);
    return {m2 * l * l, m2};
}

}  // namespace rvmmc
