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

#include <cmath>
#include <random>

#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "rvmmc/exact.hpp"
#include "rvmmc/io.hpp"
#include "rvmmc/qubo.hpp"

using namespace rvmmc;
using Catch::Approx;

namespace {

TreeInstance path3() { return TreeInstance(3, {{0, 1}, {1, 2}}, {{0, 2}}); }

std::vector<std::uint8_t> bits(std::uint32_t mask, int n) {
    std::vector<std::uint8_t> x(n);
    for (int i = 0; i < n; ++i) x[i] = (mask >> i) & 1;
    return x;
}

/// Unexpanded penalty objective evaluated on a full vertex assignment.
double literal_direct(const TreeInstance& t, const std::vector<int>& x, double m1, double m2) {
    double obj = 0;
    for (int v : x) obj += v;
    double term = 0;
    for (int v : t.terminal_vertices()) term += x[v];
    double paths = 0;
    for (const auto& p : enumerate_constraint_paths(t)) {
        double s = 0;
        for (int v : p.vertices) s += 1 - x[v];
        paths += s * s;
    }
    return obj + m1 * term * term + m2 * paths;
}

Qubo random_qubo(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> coef(-5.0, 5.0);
    Qubo q;
    q.num_vars = n;
    for (int i = 0; i < n; ++i) {
        q.labels.push_back(VarLabel::of_vertex(i));
        if (rng() % 4) q.linear[i] = coef(rng);
        for (int j = i + 1; j < n; ++j) {
            if (rng() % 2) q.quadratic[{i, j}] = coef(rng);
        }
    }
    q.offset = coef(rng);
    return q;
}

}  // namespace

TEST_CASE("build_penalty_qubo on the 3-vertex path") {
    const auto t = path3();
    const Qubo q = build_penalty_qubo(t, 10, 10, false);
    REQUIRE(q.num_vars == 3);
    CHECK(qubo_energy(q, std::vector<std::uint8_t>{0, 1, 0}) == 41.0);
    CHECK(qubo_energy(q, std::vector<std::uint8_t>{0, 0, 0}) == 90.0);
    CHECK(qubo_energy(q, std::vector<std::uint8_t>{1, 1, 0}) == 22.0);
    CHECK(qubo_energy(q, std::vector<std::uint8_t>{0, 1, 1}) == 22.0);

    SECTION("matches the unexpanded objective on all 8 assignments") {
        double lowest = 1e300;
        for (std::uint32_t m = 0; m < 8; ++m) {
            auto x = bits(m, 3);
            std::vector<int> xi(x.begin(), x.end());
            const double direct = literal_direct(t, xi, 10, 10);
            CHECK(qubo_energy(q, x) == direct);
            lowest = std::min(lowest, direct);
        }
        CHECK(lowest == 22.0);
    }
    SECTION("ground state removes a terminal") {
        auto r = exact_bruteforce(q);
        CHECK(r.energy == 22.0);
        CHECK(check_feasibility(t, extract_cutset(q, r.assignment)).status == Feasibility::Status::violates_c1);
    }
    SECTION("terminal presolve leaves only x_1") {
        const Qubo f = build_penalty_qubo(t, 10, 10, true);
        REQUIRE(f.num_vars == 1);
        CHECK(f.labels[0] == VarLabel::of_vertex(1));
        CHECK(qubo_energy(f, std::vector<std::uint8_t>{1}) == 1 + 10 * 4);
        CHECK(qubo_energy(f, std::vector<std::uint8_t>{0}) == 10 * 9);
    }
    SECTION("non-positive penalties") {
        CHECK_THROWS_AS(build_penalty_qubo(t, 0, 1, false), ParameterError);
        CHECK_THROWS_AS(build_penalty_qubo(t, 1, -1, false), ParameterError);
    }
}

TEST_CASE("build_slack_qubo") {
    const auto t = path3();
    SECTION("3-vertex path, terminals fixed") {
        const Qubo q = build_slack_qubo(t, 36, 10, true);
        REQUIRE(q.num_vars == 3);
        CHECK(q.labels[0] == VarLabel::of_vertex(1));
        CHECK(q.labels[1] == VarLabel::of_slack(0, 0));
        CHECK(q.labels[2] == VarLabel::of_slack(0, 1));
        CHECK(qubo_energy(q, std::vector<std::uint8_t>{1, 0, 0}) == 1.0);
        CHECK(qubo_energy(q, std::vector<std::uint8_t>{0, 0, 0}) == 10.0);
        // direct evaluation of x + M2 (x - y0 - 2 y1 - 1)^2 on all 8 states
        int minimizers = 0;
        for (std::uint32_t m = 0; m < 8; ++m) {
            auto x = bits(m, 3);
            const double r = x[0] - x[1] - 2.0 * x[2] - 1.0;
            const double direct = x[0] + 10.0 * r * r;
            CHECK(qubo_energy(q, x) == direct);
            minimizers += direct == 1.0;
        }
        CHECK(minimizers == 1);
        auto r = exact_bruteforce(q);
        CHECK(r.energy == 1.0);
        CHECK(extract_cutset(q, r.assignment).vertices == std::vector<Vertex>{1});
    }
    SECTION("printed sign keeps the zero-removal state at zero penalty") {
        const Qubo q = build_slack_qubo(t, 36, 10, true, SlackSign::paper);
        // x = 0, y0 = 1: (0 + 1 - 1)^2 = 0
        CHECK(qubo_energy(q, std::vector<std::uint8_t>{0, 1, 0}) == 0.0);
        CHECK(exact_bruteforce(q).energy == 0.0);
    }
    SECTION("slack bit counts") {
        CHECK(slack_bits(3) == 2);
        CHECK(slack_bits(4) == 2);
        CHECK(slack_bits(5) == 3);
        CHECK(slack_bits(8) == 3);
        CHECK(slack_bits(9) == 4);
        auto g = generate_tree_instance(40, 4, 3);
        auto q = build_slack_qubo(g, 1, 1, true);
        int expected = 0;
        for (const auto& p : enumerate_constraint_paths(g)) expected += slack_bits(p.size());
        int slack = 0;
        for (const auto& l : q.labels) slack += !l.is_vertex();
        CHECK(slack == expected);
        // slack variables come after every vertex variable
        bool seen_slack = false;
        for (const auto& l : q.labels) {
            if (!l.is_vertex()) seen_slack = true;
            else CHECK_FALSE(seen_slack);
        }
    }
    SECTION("without presolve the terminal penalty is present") {
        const Qubo q = build_slack_qubo(t, 36, 10, false);
        REQUIRE(q.num_vars == 5);
        // removing terminal 0 alone satisfies the path but pays M1
        CHECK(qubo_energy(q, std::vector<std::uint8_t>{1, 0, 0, 0, 0}) == 1 + 36);
    }
}

TEST_CASE("slack model zero-penalty completion at feasible cutsets") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto t = generate_tree_instance(12, 3, seed);
        const auto w = default_penalties(t);
        const Qubo q = build_slack_qubo(t, w.m1, w.m2, true);
        const auto paths = enumerate_constraint_paths(t);
        // feasible cutset: every non-terminal vertex
        std::vector<std::uint8_t> x(q.num_vars, 0);
        int size = 0;
        for (int i = 0; i < q.num_vars; ++i) {
            if (q.labels[i].is_vertex()) {
                x[i] = 1;
                ++size;
            }
        }
        for (int i = 0; i < q.num_vars; ++i) {
            const auto& l = q.labels[i];
            if (l.is_vertex()) continue;
            int removed = 0;
            for (Vertex v : paths[l.path].vertices) removed += !t.is_terminal(v);
            x[i] = ((removed - 1) >> l.bit) & 1;
        }
        CHECK(qubo_energy(q, x) == Approx(size));
    }
}

TEST_CASE("presolve changes no energy on terminal-free assignments") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto t = generate_tree_instance(10, 2, seed);
        for (bool slack : {false, true}) {
            const Qubo full = slack ? build_slack_qubo(t, 50, 11, false) : build_penalty_qubo(t, 50, 11, false);
            const Qubo fixed = slack ? build_slack_qubo(t, 50, 11, true) : build_penalty_qubo(t, 50, 11, true);
            std::mt19937_64 rng(seed);
            for (int trial = 0; trial < 50; ++trial) {
                std::vector<std::uint8_t> xf(fixed.num_vars);
                for (auto& b : xf) b = rng() & 1;
                std::vector<std::uint8_t> xa(full.num_vars, 0);
                // map by label
                for (int i = 0; i < full.num_vars; ++i) {
                    for (int k = 0; k < fixed.num_vars; ++k) {
                        if (full.labels[i] == fixed.labels[k]) xa[i] = xf[k];
                    }
                }
                CHECK(qubo_energy(full, xa) == Approx(qubo_energy(fixed, xf)));
            }
        }
    }
}

TEST_CASE("qubo_energy") {
    Qubo q;
    q.num_vars = 2;
    q.linear = {{0, 1.0}, {1, 1.0}};
    q.quadratic = {{{0, 1}, 2.0}};
    CHECK(qubo_energy(q, std::vector<std::uint8_t>{1, 1}) == 4.0);
    q.offset = 3.5;
    CHECK(qubo_energy(q, std::vector<std::uint8_t>{0, 0}) == 3.5);
    CHECK_THROWS_AS(qubo_energy(q, std::vector<std::uint8_t>{0}), ParameterError);

    SECTION("matches the dense matrix form") {
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 200; ++trial) {
            const int n = 1 + static_cast<int>(rng() % 10);
            auto r = random_qubo(rng, n);
            std::vector<std::vector<double>> Q(n, std::vector<double>(n, 0.0));
            for (auto [i, u] : r.linear) Q[i][i] = u;
            for (auto [ij, w] : r.quadratic) Q[ij.first][ij.second] = w;
            std::vector<std::uint8_t> x(n);
            for (auto& b : x) b = rng() & 1;
            std::vector<int> xi(x.begin(), x.end());
            CHECK(std::abs(qubo_energy(r, x) - oracle::dense_qubo(Q, r.offset, xi)) <= 1e-12);
        }
    }
}

TEST_CASE("to_ising") {
    SECTION("worked example") {
        Qubo q;
        q.num_vars = 2;
        q.linear = {{0, 1.0}};
        q.quadratic = {{{0, 1}, 1.0}};
        const auto m = to_ising(q);
        CHECK(m.h.at(0) == 0.75);
        CHECK(m.h.at(1) == 0.25);
        CHECK(m.J.at({0, 1}) == 0.25);
        CHECK(m.offset == 0.75);
        for (std::uint32_t mask = 0; mask < 4; ++mask) {
            auto x = bits(mask, 2);
            CHECK(ising_energy(m, to_spins(x)) == qubo_energy(q, x));
        }
    }
    SECTION("zero model") {
        Qubo q;
        q.num_vars = 3;
        const auto m = to_ising(q);
        CHECK(m.h.empty());
        CHECK(m.J.empty());
        CHECK(m.offset == 0.0);
    }
    SECTION("round trip through to_qubo preserves energies") {
        std::mt19937_64 rng(5);
        for (int trial = 0; trial < 100; ++trial) {
            const int n = 1 + static_cast<int>(rng() % 8);
            auto q = random_qubo(rng, n);
            auto back = to_qubo(to_ising(q));
            for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
                auto x = bits(mask, n);
                CHECK(qubo_energy(back, x) == Approx(qubo_energy(q, x)).margin(1e-9));
            }
        }
    }
}

TEST_CASE("ising_energy") {
    IsingModel m;
    m.num_vars = 1;
    m.h = {{0, 1.0}};
    m.offset = 2.0;
    CHECK(ising_energy(m, std::vector<std::int8_t>{-1}) == 1.0);

    IsingModel c;
    c.num_vars = 2;
    c.J = {{{0, 1}, 1.0}};
    CHECK(ising_energy(c, std::vector<std::int8_t>{1, -1}) == -1.0);
    CHECK_THROWS_AS(ising_energy(c, std::vector<std::int8_t>{1, 0}), ParameterError);
    CHECK_THROWS_AS(ising_energy(c, std::vector<std::int8_t>{1}), ParameterError);

    SECTION("matches dense evaluation") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> coef(-2, 2);
        for (int trial = 0; trial < 200; ++trial) {
            const int n = 1 + static_cast<int>(rng() % 10);
            IsingModel r;
            r.num_vars = n;
            r.offset = coef(rng);
            std::vector<double> h(n, 0.0);
            std::vector<std::vector<double>> J(n, std::vector<double>(n, 0.0));
            for (int i = 0; i < n; ++i) {
                h[i] = coef(rng);
                r.h[i] = h[i];
                for (int j = i + 1; j < n; ++j) {
                    J[i][j] = coef(rng);
                    r.J[{i, j}] = J[i][j];
                }
            }
            std::vector<std::int8_t> s(n);
            std::vector<int> si(n);
            for (int i = 0; i < n; ++i) si[i] = s[i] = (rng() & 1) ? 1 : -1;
            CHECK(std::abs(ising_energy(r, s) - oracle::dense_ising(h, J, r.offset, si)) <= 1e-12);
        }
    }
}

TEST_CASE("extract_cutset and check_feasibility") {
    const auto t = path3();
    const Qubo q = build_slack_qubo(t, 36, 4, true);
    CHECK(extract_cutset(q, std::vector<std::uint8_t>{1, 0, 0}).vertices == std::vector<Vertex>{1});
    CHECK(extract_cutset(q, std::vector<std::uint8_t>{0, 0, 0}).vertices.empty());
    CHECK(extract_cutset(q, std::vector<std::uint8_t>{0, 1, 1}).vertices.empty());

    CHECK(check_feasibility(t, Cutset{{1}}).ok());
    auto c1 = check_feasibility(t, Cutset{{0}});
    CHECK(c1.status == Feasibility::Status::violates_c1);
    CHECK(c1.witness_vertex == 0);
    auto c2 = check_feasibility(t, Cutset{});
    CHECK(c2.status == Feasibility::Status::violates_c2);
    CHECK(c2.witness_path == 0);
}

TEST_CASE("default_penalties") {
    auto w = default_penalties(path3());
    CHECK(w.m2 == 4.0);
    CHECK(w.m1 == 36.0);

    // longest path of 5 vertices on 24 vertices
    std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 3}, {3, 4}};
    for (int v = 5; v < 24; ++v) edges.emplace_back(2, v);
    TreeInstance t24(24, edges, {{0, 4}, {5, 6}});
    auto w24 = default_penalties(t24);
    CHECK(w24.m2 == 25.0);
    CHECK(w24.m1 == 625.0);

    double last = 0;
    for (int n = 5; n < 40; n += 5) {
        auto m2 = default_penalties(generate_tree_instance(n, 1, 1)).m2;
        CHECK(m2 > last);
        last = m2;
    }
}

TEST_CASE("qubo text format") {
    const auto q = build_slack_qubo(path3(), 36, 4, true);
    const auto text = serialize_qubo(q);
    CHECK(text.substr(0, text.find('\n')) == fmt::format("3 {} {}", q.quadratic.size(), q.offset));
    auto back = parse_qubo(text);
    apply_labels(back, serialize_labels(q));
    CHECK(back == q);
    CHECK(serialize_labels(q) == "0 vertex:1\n1 slack:0:0\n2 slack:0:1\n");

    SECTION("round trip over random models") {
        std::mt19937_64 rng(8);
        for (int trial = 0; trial < 50; ++trial) {
            auto r = random_qubo(rng, 1 + static_cast<int>(rng() % 12));
            r.canonicalize();
            CHECK(parse_qubo(serialize_qubo(r)) == r);
        }
    }
    SECTION("malformed input") {
        CHECK_THROWS_WITH(parse_qubo("2 1 0\n0 1\n"), Catch::Matchers::ContainsSubstring("line 2"));
        CHECK_THROWS_AS(parse_qubo("2 1 0\n0 1\n1 1\n1 0 3\n"), ParseError);
        CHECK_THROWS_AS(parse_qubo("1 0 0\n0 x\n"), ParseError);
        CHECK_THROWS_AS(parse_label("slack:1"), ParseError);
    }
}
