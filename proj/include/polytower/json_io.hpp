// json_io.hpp
// -----------------------------------------------------------------
// JSON (de)serialization of the report types. Big integers travel as
// decimal strings so nothing silently truncates. Every to_json has a
// from_json that reconstructs an equal value.
// -----------------------------------------------------------------
#pragma once

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

#include "dynamics.hpp"
#include "integer.hpp"
#include "limits.hpp"
#include "periods.hpp"
#include "polynomial.hpp"
#include "stability.hpp"

namespace polytower {

using nlohmann::json;

inline json int_to_json(const Int& x) { return x.str(); }

inline Int int_from_json(const json& j) {
    if (j.is_number_integer()) return Int(j.get<long long>());
    return Int(j.get<std::string>());
}

inline void to_json(json& j, const Polynomial& f) { j = to_string(f); }
inline void from_json(const json& j, Polynomial& f) {
    f = parse_polynomial(j.get<std::string>());
}

inline void to_json(json& j, const PrimePower& pp) {
    j = json{{"prime", int_to_json(pp.prime)}, {"exponent", pp.exponent}};
}
inline void from_json(const json& j, PrimePower& pp) {
    pp.prime = int_from_json(j.at("prime"));
    pp.exponent = j.at("exponent").get<unsigned>();
}

inline void to_json(json& j, const OrbitShape& s) {
    j = json{{"modulus", int_to_json(s.modulus)},
             {"start", int_to_json(s.start)},
             {"tail", s.tail},
             {"cycle", s.cycle},
             {"entry_value", int_to_json(s.entry_value)}};
}
inline void from_json(const json& j, OrbitShape& s) {
    s.modulus = int_from_json(j.at("modulus"));
    s.start = int_from_json(j.at("start"));
    s.tail = j.at("tail").get<std::uint64_t>();
    s.cycle = j.at("cycle").get<std::uint64_t>();
    s.entry_value = int_from_json(j.at("entry_value"));
    s.cache_small.reset();
    s.cache_big.reset();
}

inline void to_json(json& j, const GraphSummary& g) {
    json inv = json::array();
    for (const auto& [len, count] : g.cycle_inventory)
        inv.push_back(json{{"length", len}, {"count", count}});
    j = json{{"modulus", int_to_json(g.modulus)},
             {"preperiod", g.preperiod},
             {"period", int_to_json(g.period)},
             {"tails", g.tails},
             {"cycles", g.cycles},
             {"cycle_inventory", inv}};
}
inline void from_json(const json& j, GraphSummary& g) {
    g = GraphSummary{};
    g.modulus = int_from_json(j.at("modulus"));
    g.preperiod = j.at("preperiod").get<std::uint64_t>();
    g.period = int_from_json(j.at("period"));
    g.tails = j.at("tails").get<std::vector<std::uint32_t>>();
    g.cycles = j.at("cycles").get<std::vector<std::uint32_t>>();
    for (const auto& item : j.at("cycle_inventory"))
        g.cycle_inventory[item.at("length").get<std::uint64_t>()] =
            item.at("count").get<std::uint64_t>();
    for (const auto& [len, count] : g.cycle_inventory) {
        (void)count;
        for (const auto& pp : factorize(Int(len))) {
            auto p = to_u64(pp.prime);
            auto it = g.period_factors.find(p);
            if (it == g.period_factors.end())
                g.period_factors.emplace(p, pp.exponent);
            else
                it->second = std::max(it->second, pp.exponent);
        }
    }
}

inline Provenance provenance_from_label(const std::string& s) {
    if (s == "enumeration") return Provenance::enumeration;
    if (s == "multiplier-lift") return Provenance::multiplier_lift;
    if (s == "crt-combine") return Provenance::crt_combine;
    if (s == "lcm-power-chain") return Provenance::lcm_power_chain;
    if (s == "linear-closed-form") return Provenance::linear_closed_form;
    throw std::invalid_argument("unknown provenance label: " + s);
}

inline void to_json(json& j, const PeriodCertificate& c) {
    j = json{{"modulus", int_to_json(c.modulus)},
             {"period_multiple", int_to_json(c.period_multiple)},
             {"exact", c.exact},
             {"tail_bound", int_to_json(c.tail_bound)},
             {"provenance", to_label(c.provenance)}};
    if (c.start) j["start"] = int_to_json(*c.start);
}
inline void from_json(const json& j, PeriodCertificate& c) {
    c.modulus = int_from_json(j.at("modulus"));
    c.period_multiple = int_from_json(j.at("period_multiple"));
    c.exact = j.at("exact").get<bool>();
    c.tail_bound = int_from_json(j.at("tail_bound"));
    c.provenance = provenance_from_label(j.at("provenance").get<std::string>());
    if (j.contains("start"))
        c.start = int_from_json(j.at("start"));
    else
        c.start.reset();
}

inline void to_json(json& j, const Multiplier& m) {
    j = json{{"prime", int_to_json(m.prime)},
             {"start", int_to_json(m.start)},
             {"tail_p", m.tail_p},
             {"cycle_p", m.cycle_p},
             {"value", int_to_json(m.value)}};
}
inline void from_json(const json& j, Multiplier& m) {
    m.prime = int_from_json(j.at("prime"));
    m.start = int_from_json(j.at("start"));
    m.tail_p = j.at("tail_p").get<std::uint64_t>();
    m.cycle_p = j.at("cycle_p").get<std::uint64_t>();
    m.value = int_from_json(j.at("value"));
}

inline StabilityVerdict verdict_from_label(const std::string& s) {
    if (s == "stable-certified") return StabilityVerdict::stable_certified;
    if (s == "stable-up-to-bound") return StabilityVerdict::stable_up_to_bound;
    if (s == "unstable") return StabilityVerdict::unstable;
    throw std::invalid_argument("unknown verdict label: " + s);
}

inline void to_json(json& j, const StabilityReport& r) {
    json verdicts = json::array();
    for (const auto& v : r.per_prime)
        verdicts.push_back(json{{"prime", int_to_json(v.prime)}, {"p_cycle", v.p_cycle}});
    j = json{{"map", r.map},
             {"checked_prime_bound", r.checked_prime_bound},
             {"per_prime", verdicts},
             {"verdict", to_label(r.verdict)}};
    if (r.collision)
        j["collision"] = json::array(
            {int_to_json(r.collision->first), int_to_json(r.collision->second)});
    if (r.fixed_point) j["fixed_point"] = int_to_json(*r.fixed_point);
    if (r.witness) j["witness"] = int_to_json(*r.witness);
}
inline void from_json(const json& j, StabilityReport& r) {
    r = StabilityReport{};
    r.map = j.at("map").get<Polynomial>();
    r.checked_prime_bound = j.at("checked_prime_bound").get<std::uint64_t>();
    for (const auto& item : j.at("per_prime"))
        r.per_prime.push_back({int_from_json(item.at("prime")), item.at("p_cycle").get<bool>()});
    r.verdict = verdict_from_label(j.at("verdict").get<std::string>());
    if (j.contains("collision"))
        r.collision = std::make_pair(int_from_json(j.at("collision")[0]),
                                     int_from_json(j.at("collision")[1]));
    if (j.contains("fixed_point")) r.fixed_point = int_from_json(j.at("fixed_point"));
    if (j.contains("witness")) r.witness = int_from_json(j.at("witness"));
}

inline void to_json(json& j, const PreperiodicWitness& w) {
    j = json{{"start", int_to_json(w.start)},
             {"tail", w.tail},
             {"cycle", w.cycle},
             {"repeated_value", int_to_json(w.repeated_value)}};
}
inline void from_json(const json& j, PreperiodicWitness& w) {
    w.start = int_from_json(j.at("start"));
    w.tail = j.at("tail").get<std::uint64_t>();
    w.cycle = j.at("cycle").get<std::uint64_t>();
    w.repeated_value = int_from_json(j.at("repeated_value"));
}

inline json ints_to_json(const std::vector<Int>& v) {
    json out = json::array();
    for (const Int& x : v) out.push_back(int_to_json(x));
    return out;
}
inline std::vector<Int> ints_from_json(const json& j) {
    std::vector<Int> out;
    for (const auto& item : j) out.push_back(int_from_json(item));
    return out;
}

inline void to_json(json& j, const DigitStream& s) {
    j = json{{"map", s.map},
             {"start", int_to_json(s.start)},
             {"base", int_to_json(s.base)},
             {"digits", ints_to_json(s.digits)},
             {"partial_sums", ints_to_json(s.partial_sums)},
             {"solutions", ints_to_json(s.solutions)},
             {"verified", s.verified},
             {"base_f_valid", s.base_f_valid}};
}
inline void from_json(const json& j, DigitStream& s) {
    s.map = j.at("map").get<Polynomial>();
    s.start = int_from_json(j.at("start"));
    s.base = int_from_json(j.at("base"));
    s.digits = ints_from_json(j.at("digits"));
    s.partial_sums = ints_from_json(j.at("partial_sums"));
    s.solutions = ints_from_json(j.at("solutions"));
    s.verified = j.at("verified").get<std::vector<bool>>();
    s.base_f_valid = j.at("base_f_valid").get<bool>();
}

inline void to_json(json& j, const TowerTrace& t) {
    j = json{{"seed", int_to_json(t.seed)},
             {"modulus", int_to_json(t.modulus)},
             {"values", ints_to_json(t.values)}};
    if (t.stabilization_index) j["stabilization_index"] = *t.stabilization_index;
}
inline void from_json(const json& j, TowerTrace& t) {
    t.seed = int_from_json(j.at("seed"));
    t.modulus = int_from_json(j.at("modulus"));
    t.values = ints_from_json(j.at("values"));
    if (j.contains("stabilization_index"))
        t.stabilization_index = j.at("stabilization_index").get<std::size_t>();
    else
        t.stabilization_index.reset();
}

}  // namespace polytower
