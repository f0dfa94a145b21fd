#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cbdt/case_memory.hpp"
#include "cbdt/similarity.hpp"

namespace cbdt {

/// Instantaneous utility over results. Identity covers the common case where
/// the stored result already is the satisfaction level; affine rescales it;
/// a table assigns utilities to the exact outcome values present in memory.
class UtilityFunction {
public:
    static UtilityFunction identity() { return UtilityFunction(Kind::identity, 1, 0, {}); }
    static UtilityFunction affine(Rational scale, Rational shift) {
        if (!(scale > Rational(0))) throw Error("affine utility requires a positive scale");
        return UtilityFunction(Kind::affine, std::move(scale), std::move(shift), {});
    }
    static UtilityFunction table(std::map<Rational, Rational> entries) {
        return UtilityFunction(Kind::table, 1, 0, std::move(entries));
    }

    Rational operator()(const Outcome& outcome) const {
        switch (kind_) {
        case Kind::identity: return outcome.value;
        case Kind::affine: return scale_ * outcome.value + shift_;
        case Kind::table: {
            const auto it = table_.find(outcome.value);
            if (it == table_.end())
                throw Error("utility table has no entry for outcome " + outcome.value.str());
            return it->second;
        }
        }
        throw Error("corrupt utility function");
    }

private:
    enum class Kind { identity, affine, table };
    UtilityFunction(Kind kind, Rational scale, Rational shift, std::map<Rational, Rational> table)
        : kind_(kind), scale_(std::move(scale)), shift_(std::move(shift)), table_(std::move(table)) {}

    Kind kind_;
    Rational scale_;
    Rational shift_;
    std::map<Rational, Rational> table_;
};

/// Outcome of one choice: per-action scores U(a) = sum of s(p,q) u(r) over
/// the supporting cases, the argmax, and the similarity table behind it.
struct DecisionReport {
    Problem query;
    std::map<ActionId, Rational> scores;
    ActionId chosen;
    std::set<ActionId> ties;
    SimilarityTable similarity;
    std::optional<std::vector<Problem>> restricted_history;
    bool fallback_used = false;
};

namespace detail {

inline DecisionReport score_cases(const Memory& memory, const Problem& query,
                                  const UtilityFunction& u, const SimilarityTable& table,
                                  const std::vector<Case>& cases) {
    if (memory.cases.empty())
        throw Error("empty-memory: no cases to base a decision on");
    if (memory.actions.empty())
        throw Error("empty-action-set: no actions to choose from");
    DecisionReport report;
    report.query = query;
    report.similarity = table;
    for (const auto& a : memory.actions) report.scores.emplace(a, Rational(0));
    for (const auto& c : cases)
        report.scores.at(c.action) += table.entries.at(c.problem) * u(c.result);
    Rational best = report.scores.begin()->second;
    for (const auto& [action, score] : report.scores)
        if (score > best) best = score;
    for (const auto& [action, score] : report.scores)
        if (score == best) report.ties.insert(action);
    report.chosen = *report.ties.begin(); // ActionId order is lexicographic
    return report;
}

} // namespace detail

/// Picks the action maximizing similarity-weighted past utility. The query
/// must be complete in the memory's space; extend the space first when the
/// query carries new values or features (see evolve_then_decide).
inline DecisionReport decide(const Memory& memory, const Problem& query, const UtilityFunction& u) {
    if (memory.cases.empty())
        throw Error("empty-memory: no cases to base a decision on");
    const Problem full = complete_problem(memory.space, query);
    const SimilarityTable table = similarity(memory.space, full, memory);
    return detail::score_cases(memory, full, u, table, memory.cases);
}

/// Aspect-restricted choice: similarities are computed on the selected
/// subspace (with its own diameter over the projected ranges) and only
/// history problems with projected similarity strictly above delta count.
/// An empty restriction falls back to the entire history.
inline DecisionReport decide_restricted(const Memory& memory, const Problem& query,
                                        const UtilityFunction& u, const SubspaceSelector& selector,
                                        const Rational& delta) {
    if (delta < Rational(0) || delta > Rational(1))
        throw Error("delta must lie in [0,1]");
    if (memory.cases.empty())
        throw Error("empty-memory: no cases to base a decision on");

    const FeatureSpace subspace = project_space(memory.space, selector);
    const Problem full_query = complete_problem(memory.space, query);
    const Problem projected_query = project(full_query, selector);

    const int diam = diameter(subspace);
    SimilarityTable table;
    table.query = projected_query;
    table.diameter_used = diam;
    std::map<Problem, Rational> by_original; // original problem -> projected similarity
    for (const auto& q : history(memory)) {
        const Rational s = detail::similarity_from_distance(
            lattice_distance(subspace, projected_query, project(q, selector)), diam);
        table.entries.emplace(project(q, selector), s);
        by_original.emplace(q, s);
    }

    std::vector<Case> retained;
    std::vector<Problem> restricted;
    for (const auto& c : memory.cases) {
        if (by_original.at(c.problem) > delta) {
            retained.push_back(c);
            restricted.push_back(c.problem);
        }
    }
    bool fallback = false;
    if (retained.empty()) {
        retained = memory.cases;
        restricted = history(memory);
        fallback = true;
    }

    // Scores run over the original cases but weigh them by projected
    // similarity, so rebuild a lookup keyed by the original problems.
    SimilarityTable original_keyed;
    original_keyed.query = projected_query;
    original_keyed.diameter_used = diam;
    original_keyed.entries = std::move(by_original);

    DecisionReport report = detail::score_cases(memory, full_query, u, original_keyed, retained);
    report.similarity = table;
    report.restricted_history = std::move(restricted);
    report.fallback_used = fallback;
    return report;
}

/// A query as it arrives: coordinates plus whatever is new about it.
/// New values name their insertion position; new features come fully defined.
struct ValueExtension {
    std::string feature_id;
    std::string label;
    std::size_t position = 0;
};

struct RawQuery {
    Problem coordinates;
    std::vector<ValueExtension> new_values;
    std::vector<Feature> new_features;
};

/// Applies the query's novelty to the space (new values, new features),
/// re-completes the history in the evolved space, and decides there. The
/// original memory is unmodified and is returned evolved alongside the
/// report; with no novelty this is exactly decide.
inline std::pair<Memory, DecisionReport> evolve_then_decide(const Memory& memory,
                                                            const RawQuery& raw,
                                                            const UtilityFunction& u) {
    FeatureSpace space = memory.space;
    for (const auto& ext : raw.new_values)
        space = extend_with_value(space, ext.feature_id, ext.label, ext.position);
    for (const auto& f : raw.new_features) space = extend_with_feature(space, f);
    Memory evolved = space == memory.space ? memory : with_space(memory, std::move(space));
    DecisionReport report = decide(evolved, raw.coordinates, u);
    return {std::move(evolved), std::move(report)};
}

} // namespace cbdt
