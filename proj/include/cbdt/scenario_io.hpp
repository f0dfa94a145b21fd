#pragma once

#include <fstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "cbdt/learning.hpp"

namespace cbdt {

// Scenario document layout (see docs/format.md): wait horizon, anticipated
// novelty, the problem expected then, the discount, and the rates to price
// the novelty with. Rates may instead come from a separate snapshot file.

inline RateModel load_rates(const nlohmann::json& doc) {
    RateModel model;
    if (doc.contains("values"))
        for (const auto& [fid, v] : doc.at("values").items())
            model.lambda_values.emplace(fid, v.get<double>());
    model.lambda_features = doc.value("features", 0.0);
    model.batch_size = doc.value("batch_size", 1L);
    model.observations = doc.value("observations", 0L);
    if (doc.contains("pending")) {
        const auto& p = doc.at("pending");
        if (p.contains("values"))
            for (const auto& [fid, v] : p.at("values").items())
                model.pending_new_values.emplace(fid, v.get<long>());
        model.pending_new_features = p.value("features", 0L);
        model.pending_problems = p.value("problems", 0L);
    }
    for (const auto& [fid, lambda] : model.lambda_values)
        if (lambda < 0) throw Error("negative rate for feature '" + fid + "'");
    if (model.lambda_features < 0) throw Error("negative new-feature rate");
    return model;
}

inline nlohmann::json save_rates(const RateModel& model) {
    nlohmann::json doc;
    doc["values"] = nlohmann::json::object();
    for (const auto& [fid, lambda] : model.lambda_values) doc["values"][fid] = lambda;
    doc["features"] = model.lambda_features;
    doc["batch_size"] = model.batch_size;
    doc["observations"] = model.observations;
    // Deltas still waiting for the next batch boundary; kept so a snapshot
    // can resume mid-window.
    doc["pending"] = nlohmann::json::object();
    doc["pending"]["values"] = nlohmann::json::object();
    for (const auto& [fid, count] : model.pending_new_values)
        doc["pending"]["values"][fid] = count;
    doc["pending"]["features"] = model.pending_new_features;
    doc["pending"]["problems"] = model.pending_problems;
    return doc;
}

inline std::pair<WaitScenario, RateModel> load_scenario(const nlohmann::json& doc) {
    if (!doc.is_object()) throw Error("scenario document must be a JSON object");
    WaitScenario sc;
    sc.now = doc.value("now", 0L);
    if (!doc.contains("wait_until")) throw Error("scenario needs 'wait_until'");
    sc.wait_until = doc.at("wait_until").get<long>();
    sc.discount = doc.value("discount", 1.0);
    if (sc.discount <= 0) throw Error("discount must be positive");
    const std::string mode = doc.value("mode", std::string("compound"));
    if (mode == "compound")
        sc.mode = DiscountMode::compound;
    else if (mode == "single-factor")
        sc.mode = DiscountMode::single_factor;
    else
        throw Error("unknown discount mode '" + mode + "' (compound | single-factor)");

    if (doc.contains("anticipated_values"))
        for (const auto& jv : doc.at("anticipated_values")) {
            AnticipatedValues av;
            av.feature_id = jv.at("feature").get<std::string>();
            for (const auto& l : jv.at("labels")) av.labels.push_back(l.get<std::string>());
            if (av.labels.empty()) throw Error("anticipated value list for feature '" +
                                               av.feature_id + "' is empty");
            sc.new_values.push_back(std::move(av));
        }
    if (doc.contains("anticipated_features"))
        for (const auto& jf : doc.at("anticipated_features")) {
            Feature f;
            f.id = jf.at("id").get<std::string>();
            f.name = jf.value("name", std::string());
            for (const auto& v : jf.at("values")) f.values.push_back(v.get<std::string>());
            f.default_rank = jf.value("default_rank", std::size_t{0});
            validate(f);
            sc.new_features.push_back(std::move(f));
        }
    if (!doc.contains("anticipated_problem"))
        throw Error("scenario needs an 'anticipated_problem'");
    for (const auto& [fid, label] : doc.at("anticipated_problem").items())
        sc.anticipated_problem.coordinates.emplace(
            fid, label.is_string() ? label.get<std::string>() : label.dump());
    if (doc.contains("action")) sc.focus_action = ActionId{doc.at("action").get<std::string>()};
    if (doc.contains("event_probability_override"))
        sc.probability_override = doc.at("event_probability_override").get<double>();

    RateModel model;
    if (doc.contains("rates")) model = load_rates(doc.at("rates"));
    return {std::move(sc), std::move(model)};
}

inline std::pair<WaitScenario, RateModel> load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open scenario file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error("malformed scenario file '" + path + "': " + e.what());
    }
    return load_scenario(doc);
}

} // namespace cbdt
