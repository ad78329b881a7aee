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

#include <random>

#include "catch_amalgamated.hpp"
#include "rvmmc/anneal.hpp"
#include "rvmmc/embedded_ising.hpp"
#include "rvmmc/embedding.hpp"
#include "rvmmc/hardware_graph.hpp"

using namespace rvmmc;

namespace {

std::vector<VarPair> clique(int n) {
    std::vector<VarPair> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) e.push_back({i, j});
    return e;
}

// Tries every map of hardware qubits to {unused, 0..k-1} (labels taken in first-use
// order to skip relabelings); true when some map is a minor embedding of `edges`.
// Bitmask based, so only for graphs of at most 16 qubits.
bool has_minor(const HardwareGraph& hw, int k, const std::vector<VarPair>& edges) {
    const int n = hw.num_qubits();
    std::vector<unsigned> adj(n, 0);
    for (auto [u, v] : hw.edges()) {
        adj[u] |= 1u << v;
        adj[v] |= 1u << u;
    }
    auto connected = [&](unsigned mask) {
        unsigned seen = mask & -mask, frontier = seen;
        while (frontier) {
            unsigned next = 0;
            for (int q = 0; q < n; ++q)
                if (frontier >> q & 1) next |= adj[q];
            frontier = next & mask & ~seen;
            seen |= frontier;
        }
        return seen == mask;
    };
    auto touches = [&](unsigned a, unsigned b) {
        for (int q = 0; q < n; ++q)
            if ((a >> q & 1) && (adj[q] & b)) return true;
        return false;
    };
    std::vector<unsigned> chain(k, 0);
    std::function<bool(int, int)> rec = [&](int q, int used) -> bool {
        if (q == n) {
            if (used < k) return false;
            for (int c = 0; c < k; ++c)
                if (!connected(chain[c])) return false;
            for (auto [u, v] : edges)
                if (!touches(chain[u], chain[v])) return false;
            return true;
        }
        if (n - q < k - used) return false;
        if (rec(q + 1, used)) return true;
        for (int c = 0; c < std::min(used + 1, k); ++c) {
            chain[c] |= 1u << q;
            const bool found = rec(q + 1, std::max(used, c + 1));
            chain[c] &= ~(1u << q);
            if (found) return true;
        }
        return false;
    };
    return rec(0, 0);
}

std::vector<VarPair> random_graph(std::mt19937_64& rng, int n, double density) {
    std::vector<VarPair> e;
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (u(rng) < density) e.push_back({i, j});
    return e;
}

IsingModel example_model() {
    IsingModel m;
    m.num_vars = 2;
    m.h = {{0, 0.5}, {1, -0.5}};
    m.J = {{{0, 1}, 0.25}};
    return m;
}

}  // namespace

TEST_CASE("chimera_graph") {
    auto c1 = chimera_graph(1, 1, 4);
    CHECK(c1.num_qubits() == 8);
    CHECK(c1.edges().size() == 16);
    for (int v = 0; v < 4; ++v)
        for (int h = 4; h < 8; ++h) CHECK(c1.has_edge(v, h));
    CHECK_FALSE(c1.has_edge(0, 1));

    auto c2 = chimera_graph(2, 2, 4);
    CHECK(c2.neighbors(0) == std::vector<Qubit>{4, 5, 6, 7, 16});
    CHECK(c2.has_edge(4, 12));
    CHECK_FALSE(c2.has_edge(4, 16));

    auto big = chimera_graph(16, 16, 4);
    CHECK(big.num_qubits() == 2048);
    // 256 cells * 16 + vertical 15*16*4 + horizontal 16*15*4
    CHECK(big.edges().size() == 256 * 16 + 2 * 15 * 16 * 4);
    CHECK(big.tag() == "chimera-16-16-4");

    CHECK_THROWS_AS(chimera_graph(0, 1, 4), ParameterError);
}

TEST_CASE("hardware graph files") {
    auto g = chimera_graph(1, 1, 4);
    std::vector<std::string> warnings;
    auto back = load_hardware_graph(serialize_hardware_graph(g), &warnings);
    CHECK(back.same_graph(g));
    CHECK(warnings.empty());

    CHECK_THROWS_AS(load_hardware_graph("3\n0 1\n1 3\n"), ParseError);
    CHECK_THROWS_AS(load_hardware_graph("3\n0 x\n"), ParseError);

    auto dup = load_hardware_graph("3\n0 1\n1 0\n1 2\n0 1\n", &warnings);
    CHECK(dup.edges().size() == 2);
    CHECK(dup.duplicates_removed() == 2);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("duplicate") != std::string::npos);
}

TEST_CASE("validate_embedding") {
    auto hw = chimera_graph(2, 2, 4);
    Embedding ok{{{0, {0}}, {1, {4, 12}}}};
    CHECK(validate_embedding({{0, 1}}, hw, ok).valid());

    Embedding overlap{{{0, {0, 4}}, {1, {4}}}};
    auto v1 = validate_embedding({{0, 1}}, hw, overlap);
    REQUIRE_FALSE(v1.valid());
    CHECK(v1.diagnostics[0].find("overlap") != std::string::npos);

    Embedding split{{{0, {0, 12}}}};
    auto v2 = validate_embedding({}, hw, split);
    REQUIRE_FALSE(v2.valid());
    CHECK(v2.diagnostics[0].find("disconnected chain") != std::string::npos);

    Embedding far{{{0, {0}}, {1, {12}}}};
    auto v3 = validate_embedding({{0, 1}}, hw, far);
    REQUIRE_FALSE(v3.valid());
    CHECK(v3.diagnostics[0].find("missing coupler") != std::string::npos);

    auto v4 = validate_embedding({{0, 2}}, hw, ok);
    CHECK_FALSE(v4.valid());

    Embedding bad{{{0, {99}}, {1, {}}}};
    auto v5 = validate_embedding({}, hw, bad);
    CHECK(v5.diagnostics.size() == 2);
}

TEST_CASE("find_embedding") {
    auto cell = chimera_graph(1, 1, 4);

    SECTION("K3 needs one chain of length 2") {
        CHECK(has_minor(cell, 3, clique(3)));
        // no 1-per-variable embedding: every 3-subset of the cell lacks a triangle
        bool triangle = false;
        for (int a = 0; a < 8; ++a)
            for (int b = a + 1; b < 8; ++b)
                for (int c = b + 1; c < 8; ++c)
                    triangle |= cell.has_edge(a, b) && cell.has_edge(b, c) && cell.has_edge(a, c);
        CHECK_FALSE(triangle);

        FindEmbeddingOptions opt;
        opt.seed = 1;
        auto r = find_embedding(3, clique(3), cell, opt);
        REQUIRE(r.ok());
        CHECK(validate_embedding(clique(3), cell, *r.embedding, {0, 1, 2}).valid());
        CHECK(r.embedding->max_chain_length() == 2);
        CHECK(embedding_overhead(*r.embedding) == Catch::Approx(4.0 / 3.0));
    }
    SECTION("single isolated variable") {
        auto r = find_embedding(1, {}, cell, {});
        REQUIRE(r.ok());
        CHECK(r.embedding->chains.size() == 1);
        CHECK(r.embedding->chains.at(0).size() == 1);
    }
    SECTION("K6 does not fit a single cell") {
        CHECK_FALSE(has_minor(cell, 6, clique(6)));
        CHECK(has_minor(cell, 5, clique(5)));
        FindEmbeddingOptions opt;
        opt.max_tries = 3;
        auto r = find_embedding(6, clique(6), cell, opt);
        CHECK_FALSE(r.ok());
        CHECK(r.tries == 3);
        CHECK_FALSE(r.message.empty());
    }
    SECTION("more variables than qubits fails without searching") {
        auto r = find_embedding(9, {}, cell, {});
        CHECK_FALSE(r.ok());
    }
    SECTION("determinism") {
        auto hw = chimera_graph(4, 4, 4);
        FindEmbeddingOptions opt;
        opt.seed = 42;
        auto a = find_embedding(10, clique(10), hw, opt);
        auto b = find_embedding(10, clique(10), hw, opt);
        REQUIRE(a.ok());
        CHECK(a.embedding->chains == b.embedding->chains);
    }
    SECTION("every success on random graphs validates") {
        auto hw = chimera_graph(16, 16, 4);
        std::mt19937_64 rng(5);
        int successes = 0;
        for (int trial = 0; trial < 25; ++trial) {
            const int n = 2 + static_cast<int>(rng() % 30);
            const double d = std::uniform_real_distribution<double>(0.05, 0.5)(rng);
            auto edges = random_graph(rng, n, d);
            FindEmbeddingOptions opt;
            opt.seed = trial;
            opt.max_tries = 2;
            auto r = find_embedding(n, edges, hw, opt);
            if (!r.ok()) continue;
            ++successes;
            std::vector<int> req(n);
            std::iota(req.begin(), req.end(), 0);
            auto verdict = validate_embedding(edges, hw, *r.embedding, req);
            INFO(trial);
            CHECK(verdict.valid());
            CHECK(embedding_overhead(*r.embedding) >= 1.0);
        }
        CHECK(successes >= 23);
    }
}

TEST_CASE("embedding json round trip") {
    Embedding e{{{0, {0}}, {1, {4, 12}}}};
    CHECK(embedding_from_json(nlohmann::json::parse(embedding_to_json(e).dump())).chains == e.chains);
}

TEST_CASE("uniform_torque_chain_strength") {
    IsingModel m;
    m.num_vars = 2;
    m.J = {{{0, 1}, 0.25}};
    CHECK(uniform_torque_chain_strength(m, 1.0) == Catch::Approx(0.3535));
    CHECK(mean_logical_degree(m) == 1.0);

    std::vector<std::string> w;
    IsingModel zero = m;
    zero.J[{0, 1}] = 0.0;
    CHECK(uniform_torque_chain_strength(zero, 1.0, 1.414, &w) == 1e-6);
    CHECK(w.size() == 1);

    IsingModel none;
    none.num_vars = 1;
    w.clear();
    CHECK(uniform_torque_chain_strength(none, 0.0, 1.414, &w) == 1.0);
    CHECK(w.size() == 1);

    std::mt19937_64 rng(6);
    IsingModel r;
    r.num_vars = 10;
    for (auto [i, j] : random_graph(rng, 10, 0.4)) r.J[{i, j}] = std::uniform_real_distribution<double>(-2, 2)(rng);
    IsingModel r2 = r;
    for (auto& [ij, j] : r2.J) j *= 2;
    const double deg = mean_logical_degree(r);
    CHECK(uniform_torque_chain_strength(r2, deg) == Catch::Approx(2 * uniform_torque_chain_strength(r, deg)));
}

TEST_CASE("embed_ising") {
    auto hw = chimera_graph(2, 2, 4);
    const auto m = example_model();

    SECTION("splitting rule") {
        Embedding emb{{{0, {0}}, {1, {4, 12}}}};
        auto e = embed_ising(m, emb, hw, 1.0);
        CHECK(e.physical.num_vars == 32);
        CHECK(e.physical.h.at(0) == 0.5);
        CHECK(e.physical.h.at(4) == -0.25);
        CHECK(e.physical.h.at(12) == -0.25);
        CHECK(e.physical.J.at({4, 12}) == -1.0);
        CHECK(e.physical.J.at({0, 4}) == 0.25);
        CHECK(e.physical.J.size() == 2);
        CHECK(e.chain_offset == -1.0);
    }
    SECTION("coupler split over every available hardware coupler") {
        Embedding emb{{{0, {0, 4}}, {1, {1, 5}}}};
        auto e = embed_ising(m, emb, hw, 2.0);
        CHECK(e.physical.J.at({0, 5}) == 0.125);
        CHECK(e.physical.J.at({1, 4}) == 0.125);
        CHECK(e.physical.J.at({0, 4}) == -2.0);
        CHECK(e.physical.J.at({1, 5}) == -2.0);
        CHECK(e.physical.J.size() == 4);
        CHECK(e.chain_offset == -4.0);
    }
    SECTION("identity embedding") {
        Embedding emb{{{0, {0}}, {1, {4}}}};
        auto e = embed_ising(m, emb, hw, 1.0);
        CHECK(e.physical.h.at(0) == 0.5);
        CHECK(e.physical.h.at(4) == -0.5);
        CHECK(e.physical.J.size() == 1);
        CHECK(e.chain_offset == 0.0);
    }
    SECTION("energy identity on every chain-consistent state") {
        IsingModel k3;
        k3.num_vars = 3;
        k3.h = {{0, 0.3}, {1, -0.7}, {2, 0.1}};
        k3.J = {{{0, 1}, 0.5}, {{1, 2}, -1.25}, {{0, 2}, 0.75}};
        auto cell = chimera_graph(1, 1, 4);
        auto r = find_embedding(3, clique(3), cell, {});
        REQUIRE(r.ok());
        auto e = embed_ising(k3, *r.embedding, cell, 1.7);
        for (int mask = 0; mask < 8; ++mask) {
            Assignment logical(3), physical(8, -1);
            for (int v = 0; v < 3; ++v) {
                logical[v] = (mask >> v) & 1 ? 1 : -1;
                for (Qubit q : r.embedding->chains.at(v)) physical[q] = logical[v];
            }
            CHECK(ising_energy(e.physical, physical) ==
                  Catch::Approx(ising_energy(k3, logical) + e.chain_offset));
        }
    }
    SECTION("errors") {
        CHECK_THROWS_AS(embed_ising(m, Embedding{{{0, {0}}}}, hw, 1.0), EmbeddingError);
        CHECK_THROWS_AS(embed_ising(m, Embedding{{{0, {0}}, {1, {12}}}}, hw, 1.0), EmbeddingError);
        CHECK_THROWS_AS(embed_ising(m, Embedding{{{0, {0}}, {1, {4}}}}, hw, 0.0), ParameterError);
    }
    SECTION("clamp") {
        Embedding emb{{{0, {0}}, {1, {4, 12}}}};
        auto e = embed_ising(m, emb, hw, 3.0);
        CHECK(clamp_couplers(e) == 1);
        CHECK(e.physical.J.at({4, 12}) == -2.0);
        CHECK(e.clamped_couplers == 1);
    }
}

TEST_CASE("unembed") {
    auto hw = chimera_graph(2, 2, 4);
    IsingModel m;
    m.num_vars = 2;
    m.h = {{0, 1.0}};
    m.J = {{{0, 1}, -0.5}};
    Embedding emb{{{0, {0, 4, 5}}, {1, {1, 6}}}};

    auto sample = [](std::map<Qubit, int> spins, long occ = 1) {
        SampleRecord r;
        r.values.assign(32, -1);
        for (auto [q, s] : spins) r.values[q] = static_cast<std::int8_t>(s);
        r.occurrences = occ;
        return r;
    };

    SECTION("majority and tie") {
        SampleSet ss;
        ss.vartype = Vartype::spin;
        ss.records = {sample({{0, 1}, {4, 1}, {5, -1}, {1, 1}, {6, -1}})};
        auto r = unembed(ss, emb, hw, m);
        REQUIRE(r.logical.records.size() == 1);
        CHECK(r.logical.records[0].values == Assignment{1, -1});
        CHECK(r.logical.records[0].energy == 1.5);
        CHECK(r.stats.break_fraction == 1.0);
        CHECK(r.stats.max_len == 3);
        CHECK(r.stats.mean_len == 2.5);
        CHECK(r.stats.overhead_ratio == 2.5);
    }
    SECTION("uniform chains decode exactly") {
        SampleSet ss;
        ss.vartype = Vartype::spin;
        ss.records = {sample({{0, 1}, {4, 1}, {5, 1}}, 3), sample({{1, 1}, {6, 1}, {5, -1}, {0, 1}, {4, -1}}, 1)};
        auto r = unembed(ss, emb, hw, m);
        CHECK(r.stats.break_fraction == Catch::Approx(1.0 / 8.0));
        CHECK(r.logical.total_occurrences() == 4);
        CHECK(r.logical.best().values == Assignment{-1, 1});
        CHECK(r.logical.best_energy() == -0.5);
    }
    SECTION("logical energy equals physical energy minus the chain offset") {
        auto e = embed_ising(m, emb, hw, 1.0);
        auto phys = simulated_annealing(e.physical, SaSchedule{}, 20, 3);
        auto r = unembed(phys, emb, hw, m);
        for (const auto& rec : phys.records) {
            Assignment logical(2);
            bool uniform = true;
            for (const auto& [v, chain] : emb.chains) {
                logical[v] = rec.values[chain[0]];
                for (Qubit q : chain) uniform &= rec.values[q] == logical[v];
            }
            if (uniform) CHECK(rec.energy - e.chain_offset == Catch::Approx(ising_energy(m, logical)));
        }
        CHECK(r.stats.break_fraction >= 0.0);
        CHECK(r.stats.break_fraction <= 1.0);
    }
    SECTION("missing qubits") {
        SampleSet ss;
        ss.vartype = Vartype::spin;
        ss.records = {{{1, 1}, 0.0, 1, {}}};
        CHECK_THROWS_AS(unembed(ss, emb, hw, m), ParameterError);
    }
}

TEST_CASE("embedding_overhead") {
    CHECK(embedding_overhead(Embedding{{{0, {0}}, {1, {4}}}}) == 1.0);
    CHECK(embedding_overhead(Embedding{{{0, {0}}, {1, {4}}, {2, {5, 1}}}}) == Catch::Approx(4.0 / 3.0));
}
