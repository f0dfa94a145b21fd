#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cbdt/decision.hpp"

namespace cbdt {

/// e^-lambda lambda^k / k!, the probability of k arrivals in one interval.
inline double poisson_pmf(long k, double lambda) {
    if (k < 0) throw Error("poisson pmf needs k >= 0");
    if (lambda < 0) throw Error("poisson pmf needs lambda >= 0");
    if (lambda == 0) return k == 0 ? 1.0 : 0.0;
    return std::exp(static_cast<double>(k) * std::log(lambda) - lambda -
                    std::lgamma(static_cast<double>(k) + 1.0));
}

/// Estimated arrival rates of novelty, per problem interval: new values per
/// feature and new features overall. Deltas accumulate across calls and the
/// rates are recomputed whenever the observation count crosses a batch
/// boundary; between boundaries the last rates carry over.
struct RateModel {
    std::map<std::string, double> lambda_values;
    double lambda_features = 0.0;
    long batch_size = 1;
    long observations = 0;

    std::map<std::string, long> pending_new_values;
    long pending_new_features = 0;
    long pending_problems = 0;

    double lambda_for(const std::string& feature_id) const {
        const auto it = lambda_values.find(feature_id);
        if (it == lambda_values.end())
            throw Error("rate model has no rate for feature '" + feature_id + "'");
        return it->second;
    }

    static RateModel uniform(double lambda, const std::vector<std::string>& feature_ids,
                             double lambda_features) {
        RateModel m;
        for (const auto& fid : feature_ids) m.lambda_values.emplace(fid, lambda);
        m.lambda_features = lambda_features;
        return m;
    }
};

namespace detail {

/// The old cases must reappear verbatim at the front of the new memory, up
/// to re-completion: coordinates over the old features are compared, so an
/// evolved space with extra features still counts as a prefix.
inline void require_prefix(const Memory& old_memory, const Memory& new_memory) {
    if (old_memory.cases.size() > new_memory.cases.size())
        throw Error("not a prefix: the updated memory has fewer cases");
    for (std::size_t i = 0; i < old_memory.cases.size(); ++i) {
        const Case& before = old_memory.cases[i];
        const Case& after = new_memory.cases[i];
        if (before.action != after.action || !(before.result == after.result))
            throw Error("not a prefix: case " + std::to_string(i) + " changed");
        for (const auto& f : old_memory.space.features) {
            const auto it = after.problem.coordinates.find(f.id);
            if (it == after.problem.coordinates.end() ||
                it->second != before.problem.coordinates.at(f.id))
                throw Error("not a prefix: case " + std::to_string(i) + " changed");
        }
    }
}

} // namespace detail

/// Counts novelty over the new problems: a value counts when it is absent
/// from the running range of its feature as of that problem, a feature the
/// first time a problem carries a non-default coordinate for it (earlier
/// problems were merely completed with the default). Rates are the per-batch
/// sample means of those counts.
inline RateModel estimate_rates(const RateModel& model, const Memory& old_memory,
                                const Memory& new_memory) {
    detail::require_prefix(old_memory, new_memory);
    const std::size_t added = new_memory.cases.size() - old_memory.cases.size();
    if (added == 0) throw Error("no new problems between the two memories");

    std::map<std::string, std::set<std::string>> running; // fid -> known labels
    std::set<std::string> known_features;
    for (const auto& f : old_memory.space.features) {
        known_features.insert(f.id);
        running[f.id].insert(f.values.begin(), f.values.end());
    }

    RateModel out = model;
    for (std::size_t i = old_memory.cases.size(); i < new_memory.cases.size(); ++i) {
        const Problem& p = new_memory.cases[i].problem;
        for (const auto& f : new_memory.space.features) {
            const std::string& label = p.coordinates.at(f.id);
            if (known_features.count(f.id)) {
                if (running[f.id].insert(label).second) ++out.pending_new_values[f.id];
            } else if (label != f.values[f.default_rank]) {
                known_features.insert(f.id);
                ++out.pending_new_features;
                running[f.id].insert(f.values[f.default_rank]);
                running[f.id].insert(label);
            }
        }
        ++out.pending_problems;
    }

    const long before = out.observations;
    out.observations += static_cast<long>(added);
    const long batch = out.batch_size > 0 ? out.batch_size : 1;
    if (before / batch != out.observations / batch) {
        out.lambda_values.clear();
        for (const auto& f : new_memory.space.features) {
            const auto it = out.pending_new_values.find(f.id);
            const long count = it == out.pending_new_values.end() ? 0 : it->second;
            out.lambda_values.emplace(f.id, static_cast<double>(count) /
                                                static_cast<double>(out.pending_problems));
        }
        out.lambda_features = static_cast<double>(out.pending_new_features) /
                              static_cast<double>(out.pending_problems);
        out.pending_new_values.clear();
        out.pending_new_features = 0;
        out.pending_problems = 0;
    }
    return out;
}

/// Anticipated novelty for a wait decision: the labels the feature is
/// expected to gain, appended at the top of its range.
struct AnticipatedValues {
    std::string feature_id;
    std::vector<std::string> labels;
};

enum class DiscountMode { compound, single_factor };

/// The postponed side of an act-now / wait comparison: how long to wait,
/// what the space is expected to gain, the problem expected to be faced
/// then, and the per-interval discount factor applied as an interest rate.
struct WaitScenario {
    long now = 0;
    long wait_until = 0;
    std::vector<AnticipatedValues> new_values;
    std::vector<Feature> new_features;
    Problem anticipated_problem;
    double discount = 1.0;
    DiscountMode mode = DiscountMode::compound;
    /// When set, both sides of the comparison value this action instead of
    /// the per-side best action (the natural frame for "buy now or later").
    std::optional<ActionId> focus_action;
    /// Testing/analysis hook: bypasses the Poisson product with a fixed
    /// probability. Never set by the document loader's regular fields.
    std::optional<double> probability_override;

    long horizon() const {
        if (wait_until < now) throw Error("wait_until precedes now");
        return wait_until - now;
    }
};

/// Probability that exactly the anticipated novelty arrives within the
/// horizon: independent Poisson factors for each anticipated feature's value
/// count and for the new-feature count, each at n * lambda.
inline double event_probability(const RateModel& model, const WaitScenario& scenario) {
    const long n = scenario.horizon();
    if (n < 1) throw Error("wait horizon must be at least one interval");
    double p = 1.0;
    for (const auto& av : scenario.new_values)
        p *= poisson_pmf(static_cast<long>(av.labels.size()),
                         static_cast<double>(n) * model.lambda_for(av.feature_id));
    p *= poisson_pmf(static_cast<long>(scenario.new_features.size()),
                     static_cast<double>(n) * model.lambda_features);
    return p;
}

struct LotteryValuation {
    double act_now_value = 0.0;
    double wait_value = 0.0;
    double future_value = 0.0; // undiscounted utility of the anticipated decision
    double event_probability = 0.0;
    std::optional<double> threshold_discount; // discount equating the two sides
    enum class Recommendation { act_now, wait, indifferent } recommendation =
        Recommendation::indifferent;
};

/// Values acting now against waiting for the anticipated problem: the wait
/// side extends the space per the scenario, re-completes the history there,
/// decides on the anticipated problem, and discounts by probability times
/// the compounded (or single) factor.
inline LotteryValuation evaluate_wait(const Memory& memory, const Problem& query_now,
                                      const WaitScenario& scenario, const RateModel& model,
                                      const UtilityFunction& u) {
    const long n = scenario.horizon();
    if (n < 1) throw Error("wait horizon must be at least one interval");

    const auto value_of = [&](const DecisionReport& report) {
        const ActionId& a = scenario.focus_action ? *scenario.focus_action : report.chosen;
        const auto it = report.scores.find(a);
        if (it == report.scores.end())
            throw Error("unknown-action: '" + a.id + "' is not in the action set");
        return it->second.to_double();
    };

    LotteryValuation v;
    v.act_now_value = value_of(decide(memory, query_now, u));

    FeatureSpace future_space = memory.space;
    for (const auto& av : scenario.new_values)
        for (const auto& label : av.labels)
            future_space = extend_with_value(future_space, av.feature_id, label,
                                             future_space.at(av.feature_id).values.size());
    for (const auto& f : scenario.new_features)
        future_space = extend_with_feature(future_space, f);
    const Memory future_memory = with_space(memory, future_space);
    v.future_value = value_of(decide(future_memory, scenario.anticipated_problem, u));

    v.event_probability = scenario.probability_override
                              ? *scenario.probability_override
                              : event_probability(model, scenario);
    const double factor = scenario.mode == DiscountMode::compound
                              ? std::pow(scenario.discount, static_cast<double>(n))
                              : scenario.discount;
    v.wait_value = v.event_probability * factor * v.future_value;

    if (v.future_value > 0 && v.event_probability > 0) {
        const double ratio = v.act_now_value / (v.event_probability * v.future_value);
        if (scenario.mode == DiscountMode::single_factor)
            v.threshold_discount = ratio;
        else if (ratio > 0)
            v.threshold_discount = std::pow(ratio, 1.0 / static_cast<double>(n));
    }

    if (v.wait_value > v.act_now_value)
        v.recommendation = LotteryValuation::Recommendation::wait;
    else if (v.wait_value < v.act_now_value)
        v.recommendation = LotteryValuation::Recommendation::act_now;
    else
        v.recommendation = LotteryValuation::Recommendation::indifferent;
    return v;
}

} // namespace cbdt
