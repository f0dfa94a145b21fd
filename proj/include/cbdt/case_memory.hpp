#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "cbdt/feature_space.hpp"
#include "cbdt/rational.hpp"

namespace cbdt {

struct ActionId {
    std::string id;

    friend auto operator<=>(const ActionId&, const ActionId&) = default;
};

/// Result of the one action actually taken on a problem. Held as an exact
/// rational so similarity-weighted scores stay exact. The null result is 0:
/// it marks "action not taken" and is never stored in a case.
struct Outcome {
    Rational value;

    friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct Case {
    Problem problem;
    ActionId action;
    Outcome result;

    friend bool operator==(const Case&, const Case&) = default;
};

/// The remembered cases plus the space their problems live in and the full
/// action set (every action is available for every problem).
///
/// Invariants: one case per problem, every case action drawn from `actions`,
/// every case problem complete in `space`.
struct Memory {
    FeatureSpace space;
    std::vector<Case> cases;
    std::set<ActionId> actions;

    friend bool operator==(const Memory&, const Memory&) = default;
};

/// Problems of all cases, in insertion order.
inline std::vector<Problem> history(const Memory& memory) {
    std::vector<Problem> out;
    out.reserve(memory.cases.size());
    for (const auto& c : memory.cases) out.push_back(c.problem);
    return out;
}

inline void validate(const Memory& memory) {
    validate(memory.space);
    if (memory.space.features.empty()) throw Error("memory space has no features");
    for (const auto& a : memory.actions)
        if (a.id.empty()) throw Error("empty action id");
    std::set<Problem> seen;
    for (std::size_t i = 0; i < memory.cases.size(); ++i) {
        const Case& c = memory.cases[i];
        const std::string where = "case " + std::to_string(i);
        if (!memory.actions.count(c.action))
            throw Error(where + ": unknown-action: '" + c.action.id + "' is not in the action set");
        if (c.result.value.is_zero())
            throw Error(where + ": null-result: a stored case must record a result other than 0");
        if (!is_complete(memory.space, c.problem))
            throw Error(where + ": incomplete-problem: a coordinate is missing for some feature");
        for (const auto& [fid, label] : c.problem.coordinates)
            rank_of(memory.space, fid, label);
        if (!seen.insert(c.problem).second)
            throw Error(where + ": duplicate-problem: each history problem carries exactly one case");
    }
}

/// Appends a case; the input memory is unmodified. The case problem is
/// completed against the memory's space first, so partially specified
/// problems pick up default coordinates.
inline Memory add_case(const Memory& memory, Case c) {
    if (!memory.actions.count(c.action))
        throw Error("unknown-action: '" + c.action.id + "' is not in the action set");
    if (c.result.value.is_zero())
        throw Error("null-result: a stored case must record a result other than 0");
    c.problem = complete_problem(memory.space, c.problem);
    for (const auto& existing : memory.cases)
        if (existing.problem == c.problem)
            throw Error("duplicate-problem: this problem is already in the history");
    Memory out = memory;
    out.cases.push_back(std::move(c));
    return out;
}

/// Result vector of an action over the history: the stored result where the
/// case's action matches, the null result 0 everywhere else.
inline std::map<Problem, Outcome> result_profile(const Memory& memory, const ActionId& action) {
    if (!memory.actions.count(action))
        throw Error("unknown-action: '" + action.id + "' is not in the action set");
    std::map<Problem, Outcome> out;
    for (const auto& c : memory.cases)
        out.emplace(c.problem, c.action == action ? c.result : Outcome{Rational(0)});
    return out;
}

/// Rebinds a memory to an evolved space, re-completing every problem. Used
/// after extend_with_value / extend_with_feature; the input is unmodified.
inline Memory with_space(const Memory& memory, FeatureSpace space) {
    Memory out;
    out.space = std::move(space);
    out.actions = memory.actions;
    out.cases.reserve(memory.cases.size());
    for (const auto& c : memory.cases)
        out.cases.push_back(Case{complete_problem(out.space, c.problem), c.action, c.result});
    validate(out);
    return out;
}

} // namespace cbdt
