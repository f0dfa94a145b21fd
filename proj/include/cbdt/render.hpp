#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "cbdt/axiom_checks.hpp"
#include "cbdt/decision.hpp"
#include "cbdt/learning.hpp"
#include "cbdt/scenario_io.hpp"

namespace cbdt {

inline std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

/// Exact fraction (denominators up to 100, the paper-table style) plus a
/// decimal column; larger denominators fall back to the decimal alone.
inline std::string rational_cell(const Rational& r) {
    if (r.den() <= 100) return r.str() + "  (" + fixed6(r.to_double()) + ")";
    return fixed6(r.to_double());
}

inline std::string pad(std::string s, std::size_t width) {
    while (s.size() < width) s += ' ';
    return s;
}

inline nlohmann::json problem_to_json(const Problem& p) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [fid, label] : p.coordinates) j[fid] = label;
    return j;
}

inline nlohmann::json rational_to_json(const Rational& r) {
    return {{"exact", r.str()}, {"value", r.to_double()}};
}

// ---- decision reports ----

inline std::string render_decision_text(const DecisionReport& report) {
    std::string out;
    out += "query: " + problem_str(report.query) + "\n";
    out += "diameter: " + std::to_string(report.similarity.diameter_used) + "\n";
    out += "similarity:\n";
    std::size_t width = 0;
    for (const auto& [q, s] : report.similarity.entries)
        width = std::max(width, problem_str(q).size());
    for (const auto& [q, s] : report.similarity.entries)
        out += "  " + pad(problem_str(q), width + 2) + rational_cell(s) + "\n";
    if (report.restricted_history) {
        out += report.fallback_used ? "restriction empty, falling back to the full history\n"
                                    : "restricted history:\n";
        if (!report.fallback_used)
            for (const auto& q : *report.restricted_history) out += "  " + problem_str(q) + "\n";
    }
    out += "scores:\n";
    std::size_t awidth = 0;
    for (const auto& [a, s] : report.scores) awidth = std::max(awidth, a.id.size());
    for (const auto& [a, s] : report.scores)
        out += "  " + pad(a.id, awidth + 2) + rational_cell(s) + "\n";
    out += "chosen: " + report.chosen.id + "\n";
    if (report.ties.size() > 1) {
        out += "ties:";
        for (const auto& a : report.ties) out += " " + a.id;
        out += "\n";
    }
    return out;
}

inline nlohmann::json decision_to_json(const DecisionReport& report) {
    nlohmann::json j;
    j["query"] = problem_to_json(report.query);
    j["diameter"] = report.similarity.diameter_used;
    j["similarity"] = nlohmann::json::array();
    for (const auto& [q, s] : report.similarity.entries) {
        nlohmann::json e = rational_to_json(s);
        e["problem"] = problem_to_json(q);
        j["similarity"].push_back(std::move(e));
    }
    j["scores"] = nlohmann::json::array();
    for (const auto& [a, s] : report.scores) {
        nlohmann::json e = rational_to_json(s);
        e["action"] = a.id;
        j["scores"].push_back(std::move(e));
    }
    j["chosen"] = report.chosen.id;
    j["ties"] = nlohmann::json::array();
    for (const auto& a : report.ties) j["ties"].push_back(a.id);
    if (report.restricted_history) {
        j["restricted_history"] = nlohmann::json::array();
        for (const auto& q : *report.restricted_history)
            j["restricted_history"].push_back(problem_to_json(q));
        j["fallback_used"] = report.fallback_used;
    }
    return j;
}

// ---- distance / similarity dumps ----

inline std::string render_distances_text(const DistanceReport& report) {
    std::string out;
    out += "diameter: " + std::to_string(report.diameter) + "\n";
    out += "pairwise:\n";
    for (const auto& [key, d] : report.pairwise) {
        const auto sim = report.similarities.at(key);
        out += "  " + problem_str(key.first) + " -- " + problem_str(key.second) + "  d=" +
               std::to_string(d) + "  s=" + rational_cell(sim) + "\n";
    }
    if (report.query) {
        out += "query distances from " + problem_str(*report.query) + ":\n";
        for (const auto& [q, d] : report.query_distances)
            out += "  " + problem_str(q) + "  d=" + std::to_string(d) + "\n";
    }
    return out;
}

inline nlohmann::json distances_to_json(const DistanceReport& report) {
    nlohmann::json j;
    j["diameter"] = report.diameter;
    j["pairwise"] = nlohmann::json::array();
    for (const auto& [key, d] : report.pairwise) {
        nlohmann::json e = rational_to_json(report.similarities.at(key));
        e["a"] = problem_to_json(key.first);
        e["b"] = problem_to_json(key.second);
        e["distance"] = d;
        j["pairwise"].push_back(std::move(e));
    }
    if (report.query) {
        j["query"] = problem_to_json(*report.query);
        j["query_distances"] = nlohmann::json::array();
        for (const auto& [q, d] : report.query_distances)
            j["query_distances"].push_back({{"problem", problem_to_json(q)}, {"distance", d}});
    }
    return j;
}

// ---- verification runs ----

inline std::string render_check_text(const CheckResult& r, bool expected_failures = false) {
    std::string out;
    if (expected_failures)
        out += "NOTE " + r.check_name + ": " + std::to_string(r.instances_tested) +
               " instances, " + std::to_string(r.failures.size()) +
               " recorded counterexamples (known non-property)\n";
    else
        out += (r.passed() ? "PASS " : "FAIL ") + r.check_name + ": " +
               std::to_string(r.instances_tested) + " instances, " +
               std::to_string(r.failures.size()) + " failures\n";
    const std::size_t shown = std::min<std::size_t>(r.failures.size(), expected_failures ? 1 : 5);
    for (std::size_t i = 0; i < shown; ++i) out += "    " + r.failures[i] + "\n";
    return out;
}

inline nlohmann::json check_to_json(const CheckResult& r, bool expected_failures = false) {
    return {{"name", r.check_name},
            {"instances", r.instances_tested},
            {"failures", r.failures},
            {"passed", r.passed()},
            {"expected_failures", expected_failures}};
}

// ---- wait lotteries ----

inline const char* recommendation_str(LotteryValuation::Recommendation r) {
    switch (r) {
    case LotteryValuation::Recommendation::act_now: return "act-now";
    case LotteryValuation::Recommendation::wait: return "wait";
    case LotteryValuation::Recommendation::indifferent: return "indifferent";
    }
    return "?";
}

inline std::string compact9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

inline std::string render_lottery_text(const LotteryValuation& v) {
    std::string out;
    out += "act now:           " + compact9(v.act_now_value) + "\n";
    out += "future decision:   " + compact9(v.future_value) + "\n";
    out += "event probability: " + compact9(v.event_probability) + "\n";
    out += "wait (discounted): " + compact9(v.wait_value) + "\n";
    if (v.threshold_discount)
        out += "break-even discount: " + compact9(*v.threshold_discount) + "\n";
    out += "recommendation: " + std::string(recommendation_str(v.recommendation)) + "\n";
    return out;
}

inline nlohmann::json lottery_to_json(const LotteryValuation& v) {
    nlohmann::json j;
    j["act_now_value"] = v.act_now_value;
    j["future_value"] = v.future_value;
    j["event_probability"] = v.event_probability;
    j["wait_value"] = v.wait_value;
    if (v.threshold_discount) j["threshold_discount"] = *v.threshold_discount;
    j["recommendation"] = recommendation_str(v.recommendation);
    return j;
}

// ---- rate snapshots ----

inline std::string render_rates_text(const RateModel& m) {
    std::string out = "new-value rates per feature:\n";
    for (const auto& [fid, lambda] : m.lambda_values)
        out += "  " + fid + "  " + fixed6(lambda) + "\n";
    out += "new-feature rate: " + fixed6(m.lambda_features) + "\n";
    out += "observations: " + std::to_string(m.observations) + " (batch size " +
           std::to_string(m.batch_size) + ")\n";
    return out;
}

} // namespace cbdt
