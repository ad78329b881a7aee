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
#include <map>
#include <string>
#include <vector>

#include "error.hpp"
#include "json.hpp"
#include "qubo.hpp"

namespace rvmmc {

enum class Vartype { binary, spin };

inline const char* to_string(Vartype v) { return v == Vartype::binary ? "binary" : "spin"; }

/// Binary values are 0/1, spin values -1/+1.
using Assignment = std::vector<std::int8_t>;

struct SampleRecord {
    Assignment values;
    double energy = 0.0;
    long occurrences = 1;
    std::string source;  // member solver id in merged sets, empty otherwise

    bool operator==(const SampleRecord&) const = default;
};

/// Aggregated sampler output. Records are kept in canonical order: energy
/// ascending, then source, then assignment lexicographically.
struct SampleSet {
    Vartype vartype = Vartype::binary;
    std::vector<SampleRecord> records;
    std::string solver_id;
    std::uint64_t seed = 0;
    long shots = 0;
    double wall_time_s = 0.0;
    std::map<std::string, std::string> info;
    std::vector<std::string> failures;

    bool empty() const { return records.empty(); }
    const SampleRecord& best() const { return records.at(0); }
    double best_energy() const { return best().energy; }

    void sort_records() {
        std::sort(records.begin(), records.end(), [](const SampleRecord& a, const SampleRecord& b) {
            if (a.energy != b.energy) return a.energy < b.energy;
            if (a.source != b.source) return a.source < b.source;
            return a.values < b.values;
        });
    }

    long total_occurrences() const {
        long n = 0;
        for (const auto& r : records) n += r.occurrences;
        return n;
    }

    /// Equality of everything except wall time.
    bool same_content(const SampleSet& o) const {
        return vartype == o.vartype && records == o.records && solver_id == o.solver_id && seed == o.seed &&
               shots == o.shots && info == o.info && failures == o.failures;
    }
};

inline std::vector<std::uint8_t> as_binary(const Assignment& a, Vartype vt) {
    std::vector<std::uint8_t> x(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) x[i] = vt == Vartype::binary ? static_cast<std::uint8_t>(a[i]) : a[i] > 0;
    return x;
}

inline std::vector<std::int8_t> as_spin(const Assignment& a, Vartype vt) {
    if (vt == Vartype::spin) return a;
    std::vector<std::int8_t> s(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) s[i] = a[i] ? 1 : -1;
    return s;
}

inline double energy_of(const Qubo& q, const Assignment& a, Vartype vt) {
    auto x = as_binary(a, vt);
    return qubo_energy(q, x);
}

inline double energy_of(const IsingModel& m, const Assignment& a, Vartype vt) {
    auto s = as_spin(a, vt);
    return ising_energy(m, s);
}

/// Groups identical assignments, evaluates each once against `model` and sorts.
template <typename Model>
SampleSet aggregate_samples(const Model& model, Vartype vt, const std::vector<Assignment>& shots) {
    std::map<Assignment, long> counts;
    for (const auto& a : shots) ++counts[a];
    SampleSet ss;
    ss.vartype = vt;
    ss.shots = static_cast<long>(shots.size());
    for (auto& [a, n] : counts) ss.records.push_back({a, energy_of(model, a, vt), n, {}});
    ss.sort_records();
    return ss;
}

/// Every record's energy matches the model within tol.
template <typename Model>
bool energies_consistent(const Model& model, const SampleSet& ss, double tol = 1e-9) {
    for (const auto& r : ss.records) {
        if (std::abs(energy_of(model, r.values, ss.vartype) - r.energy) > tol) return false;
    }
    return true;
}

inline std::string bitstring(const Assignment& a, Vartype vt) {
    std::string s(a.size(), '0');
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (vt == Vartype::binary ? a[i] != 0 : a[i] > 0) s[i] = '1';
    }
    return s;
}

inline Assignment from_bitstring(const std::string& s, Vartype vt) {
    Assignment a(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1') throw ParseError("invalid character in bitstring");
        const bool one = s[i] == '1';
        a[i] = vt == Vartype::binary ? one : (one ? 1 : -1);
    }
    return a;
}

/// JSON form. `include_timing=false` omits wall_time_s, giving a byte-stable
/// rendering for fixed seeds.
inline nlohmann::ordered_json to_json(const SampleSet& ss, bool include_timing = true) {
    nlohmann::ordered_json j;
    j["solver_id"] = ss.solver_id;
    j["seed"] = ss.seed;
    j["shots"] = ss.shots;
    if (include_timing) j["wall_time_s"] = ss.wall_time_s;
    j["vartype"] = to_string(ss.vartype);
    if (!ss.info.empty()) j["info"] = ss.info;
    if (!ss.failures.empty()) j["failures"] = ss.failures;
    auto recs = nlohmann::ordered_json::array();
    for (const auto& r : ss.records) {
        nlohmann::ordered_json jr;
        jr["x"] = bitstring(r.values, ss.vartype);
        jr["energy"] = r.energy;
        jr["occurrences"] = r.occurrences;
        if (!r.source.empty()) jr["source"] = r.source;
        recs.push_back(std::move(jr));
    }
    j["records"] = std::move(recs);
    return j;
}

inline SampleSet sample_set_from_json(const nlohmann::json& j) {
    try {
        SampleSet ss;
        ss.solver_id = j.at("solver_id").get<std::string>();
        ss.seed = j.at("seed").get<std::uint64_t>();
        ss.shots = j.at("shots").get<long>();
        ss.wall_time_s = j.value("wall_time_s", 0.0);
        ss.vartype = j.value("vartype", std::string("binary")) == "spin" ? Vartype::spin : Vartype::binary;
        if (j.contains("info")) ss.info = j["info"].get<std::map<std::string, std::string>>();
        if (j.contains("failures")) ss.failures = j["failures"].get<std::vector<std::string>>();
        for (const auto& jr : j.at("records")) {
            SampleRecord r;
            r.values = from_bitstring(jr.at("x").get<std::string>(), ss.vartype);
            r.energy = jr.at("energy").get<double>();
            r.occurrences = jr.at("occurrences").get<long>();
            r.source = jr.value("source", std::string());
            ss.records.push_back(std::move(r));
        }
        return ss;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("sample set: ") + e.what());
    }
}

}  // namespace rvmmc
