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

// Text formats for instances and QUBOs.

#include <fmt/format.h>

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "instance.hpp"
#include "json.hpp"
#include "qubo.hpp"

namespace rvmmc {

/// One-line JSON object with keys in fixed order, newline terminated.
inline std::string serialize_instance(const TreeInstance& instance) {
    nlohmann::ordered_json j;
    j["num_vertices"] = instance.num_vertices();
    auto edges = nlohmann::ordered_json::array();
    for (auto [u, v] : instance.edges()) edges.push_back({u, v});
    j["edges"] = std::move(edges);
    auto pairs = nlohmann::ordered_json::array();
    for (auto [s, t] : instance.terminal_pairs()) pairs.push_back({s, t});
    j["terminal_pairs"] = std::move(pairs);
    j["seed"] = instance.seed();
    return j.dump() + "\n";
}

namespace detail {

inline std::vector<std::pair<int, int>> parse_int_pairs(const nlohmann::json& j, const char* field) {
    if (!j.contains(field)) throw ParseError(std::string("missing field '") + field + "'");
    const auto& arr = j.at(field);
    if (!arr.is_array()) throw ParseError(std::string("field '") + field + "': expected an array");
    std::vector<std::pair<int, int>> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto& e = arr[i];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
            throw ParseError(fmt::format("field '{}[{}]': expected a pair of integers", field, i));
        }
        out.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return out;
}

}  // namespace detail

inline TreeInstance parse_instance(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("instance: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("instance: expected a JSON object");
    if (!j.contains("num_vertices") || !j["num_vertices"].is_number_integer()) {
        throw ParseError("field 'num_vertices': missing or not an integer");
    }
    std::uint64_t seed = 0;
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
            throw ParseError("field 'seed': not an integer");
        }
        seed = j["seed"].get<std::uint64_t>();
    }
    auto edges = detail::parse_int_pairs(j, "edges");
    auto pairs = detail::parse_int_pairs(j, "terminal_pairs");
    try {
        return TreeInstance(j["num_vertices"].get<int>(), std::move(edges), std::move(pairs), seed);
    } catch (const ParameterError& e) {
        throw ParseError(std::string("instance: ") + e.what());
    }
}

/// `n m offset`, then n lines `i u_i`, then m lines `i j w_ij`, indices ascending.
inline std::string serialize_qubo(const Qubo& q) {
    std::string out = fmt::format("{} {} {}\n", q.num_vars, q.quadratic.size(), q.offset);
    for (int i = 0; i < q.num_vars; ++i) out += fmt::format("{} {}\n", i, q.linear_at(i));
    for (auto [ij, w] : q.quadratic) out += fmt::format("{} {} {}\n", ij.first, ij.second, w);
    return out;
}

/// One `i label` line per variable.
inline std::string serialize_labels(const Qubo& q) {
    std::string out;
    for (int i = 0; i < q.num_vars; ++i) out += fmt::format("{} {}\n", i, q.labels.at(i).to_string());
    return out;
}

namespace detail {

class LineReader {
  public:
    explicit LineReader(std::string_view text, std::string what) : in_(std::string(text)), what_(std::move(what)) {}

    /// Next non-blank line split into a stream; throws at end of input.
    std::istringstream next(const char* expecting) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (line.find_first_not_of(" \t\r") != std::string::npos) return std::istringstream(line);
        }
        fail(std::string("unexpected end of input, expecting ") + expecting);
    }

    bool at_end() {
        std::string line;
        auto pos = in_.tellg();
        int saved = line_no_;
        while (std::getline(in_, line)) {
            if (line.find_first_not_of(" \t\r") != std::string::npos) {
                in_.clear();
                in_.seekg(pos);
                line_no_ = saved;
                return false;
            }
        }
        return true;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(fmt::format("{}: line {}: {}", what_, line_no_, msg));
    }

    template <typename... Ts>
    void read(std::istringstream& ls, const char* fields, Ts&... values) {
        if (!((ls >> values) && ...)) fail(std::string("expected ") + fields);
        std::string extra;
        if (ls >> extra) fail("trailing data '" + extra + "'");
    }

  private:
    std::istringstream in_;
    std::string what_;
    int line_no_ = 0;
};

}  // namespace detail

/// Parses the QUBO text format. Labels default to vertex:i when not supplied.
inline Qubo parse_qubo(std::string_view text) {
    detail::LineReader reader(text, "qubo");
    Qubo q;
    std::size_t m = 0;
    {
        auto ls = reader.next("header");
        reader.read(ls, "'n m offset'", q.num_vars, m, q.offset);
    }
    if (q.num_vars < 0) reader.fail("negative variable count");
    for (int k = 0; k < q.num_vars; ++k) {
        auto ls = reader.next("linear term");
        int i;
        double u;
        reader.read(ls, "'i u_i'", i, u);
        if (i != k) reader.fail(fmt::format("linear terms must be listed in order, expected index {}", k));
        if (!std::isfinite(u)) reader.fail("non-finite coefficient");
        if (u != 0.0) q.linear[i] = u;
    }
    VarPair last{-1, -1};
    for (std::size_t k = 0; k < m; ++k) {
        auto ls = reader.next("quadratic term");
        int i, j;
        double w;
        reader.read(ls, "'i j w_ij'", i, j, w);
        if (i < 0 || i >= j || j >= q.num_vars) reader.fail(fmt::format("invalid pair ({}, {})", i, j));
        if (VarPair{i, j} <= last) reader.fail("quadratic terms must be strictly ascending");
        if (!std::isfinite(w)) reader.fail("non-finite coefficient");
        last = {i, j};
        if (w != 0.0) q.quadratic[{i, j}] = w;
    }
    if (!reader.at_end()) reader.fail("trailing lines after quadratic terms");
    for (int i = 0; i < q.num_vars; ++i) q.labels.push_back(VarLabel::of_vertex(i));
    return q;
}

inline VarLabel parse_label(std::string_view token) {
    auto fail = [&] { throw ParseError("invalid label '" + std::string(token) + "'"); };
    auto to_int = [&](std::string_view s) {
        if (s.empty()) fail();
        int v = 0;
        for (char c : s) {
            if (c < '0' || c > '9') fail();
            v = v * 10 + (c - '0');
        }
        return v;
    };
    if (token.starts_with("vertex:")) return VarLabel::of_vertex(to_int(token.substr(7)));
    if (token.starts_with("slack:")) {
        auto rest = token.substr(6);
        auto colon = rest.find(':');
        if (colon == std::string_view::npos) fail();
        return VarLabel::of_slack(to_int(rest.substr(0, colon)), to_int(rest.substr(colon + 1)));
    }
    fail();
    return {};
}

/// Applies a label sidecar to q; every variable must be labeled exactly once.
inline void apply_labels(Qubo& q, std::string_view text) {
    detail::LineReader reader(text, "labels");
    std::vector<bool> seen(q.num_vars, false);
    for (int k = 0; k < q.num_vars; ++k) {
        auto ls = reader.next("label line");
        int i;
        std::string token;
        reader.read(ls, "'i label'", i, token);
        if (i < 0 || i >= q.num_vars || seen[i]) reader.fail(fmt::format("bad or repeated index {}", i));
        seen[i] = true;
        try {
            q.labels[i] = parse_label(token);
        } catch (const ParseError& e) {
            reader.fail(e.what());
        }
    }
    if (!reader.at_end()) reader.fail("more labels than variables");
}

}  // namespace rvmmc
