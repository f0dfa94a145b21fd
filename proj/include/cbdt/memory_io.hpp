#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cbdt/case_memory.hpp"

namespace cbdt {

// Memory document layout (see docs/format.md): three sections.
//   features: ordered list of {id, name, values, default_rank};
//             the order of `values` is the linear order and is significant.
//   actions:  list of action ids.
//   cases:    ordered list of {problem: {feature-id: value-label},
//             action, result}. Results are exact: integers stay JSON
//             numbers, anything else is a "num/den" or decimal string.

namespace detail {

inline Rational parse_result(const nlohmann::json& j, const std::string& where) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number_float()) return Rational::from_double(j.get<double>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    throw Error(where + ": result must be a number or a 'num/den' / decimal string");
}

inline nlohmann::json render_result(const Rational& r) {
    if (r.is_integer()) return r.num();
    return r.str();
}

} // namespace detail

inline Memory load_memory(const nlohmann::json& doc, std::vector<std::string>* warnings = nullptr) {
    if (!doc.is_object()) throw Error("memory document must be a JSON object");
    for (const char* section : {"features", "actions", "cases"})
        if (!doc.contains(section) || !doc.at(section).is_array())
            throw Error(std::string("memory document needs a '") + section + "' array");

    Memory memory;
    for (const auto& jf : doc.at("features")) {
        if (jf.contains("continuous") || jf.contains("range"))
            throw Error("feature '" + jf.value("id", std::string("?")) +
                        "' is continuous; pre-discretize its range into an ordered 'values' list");
        Feature f;
        f.id = jf.value("id", std::string());
        f.name = jf.value("name", std::string());
        if (!jf.contains("values") || !jf.at("values").is_array())
            throw Error("feature '" + f.id + "' needs an ordered 'values' array");
        for (const auto& v : jf.at("values"))
            f.values.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        f.default_rank = jf.value("default_rank", std::size_t{0});
        memory.space.features.push_back(std::move(f));
    }
    for (const auto& ja : doc.at("actions")) {
        if (!ja.is_string()) throw Error("actions must be strings");
        if (ja.get<std::string>().empty()) throw Error("empty action id");
        memory.actions.insert(ActionId{ja.get<std::string>()});
    }
    std::size_t index = 0;
    for (const auto& jc : doc.at("cases")) {
        const std::string where = "case " + std::to_string(index);
        Case c;
        if (!jc.contains("problem") || !jc.at("problem").is_object())
            throw Error(where + ": needs a 'problem' object of feature-id: value-label");
        for (const auto& [fid, label] : jc.at("problem").items())
            c.problem.coordinates.emplace(fid,
                                          label.is_string() ? label.get<std::string>() : label.dump());
        c.action = ActionId{jc.value("action", std::string())};
        if (!jc.contains("result")) throw Error(where + ": needs a 'result'");
        c.result = Outcome{detail::parse_result(jc.at("result"), where)};
        if (warnings && (c.result.value < Rational(0) || c.result.value > Rational(10)))
            warnings->push_back(where + ": result " + c.result.value.str() +
                                " lies outside the usual satisfaction range [0,10]");
        memory.cases.push_back(std::move(c));
        ++index;
    }
    validate(memory);
    return memory;
}

inline nlohmann::json save_memory(const Memory& memory) {
    nlohmann::json doc;
    doc["features"] = nlohmann::json::array();
    for (const auto& f : memory.space.features)
        doc["features"].push_back({{"id", f.id},
                                   {"name", f.name},
                                   {"values", f.values},
                                   {"default_rank", f.default_rank}});
    doc["actions"] = nlohmann::json::array();
    for (const auto& a : memory.actions) doc["actions"].push_back(a.id);
    doc["cases"] = nlohmann::json::array();
    for (const auto& c : memory.cases) {
        nlohmann::json jc;
        jc["problem"] = nlohmann::json::object();
        for (const auto& [fid, label] : c.problem.coordinates) jc["problem"][fid] = label;
        jc["action"] = c.action.id;
        jc["result"] = detail::render_result(c.result.value);
        doc["cases"].push_back(std::move(jc));
    }
    return doc;
}

inline Memory load_memory_file(const std::string& path, std::vector<std::string>* warnings = nullptr) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open memory file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error("malformed memory file '" + path + "': " + e.what());
    }
    return load_memory(doc, warnings);
}

inline void save_memory_file(const Memory& memory, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write memory file '" + path + "'");
    out << save_memory(memory).dump(2) << "\n";
}

} // namespace cbdt
