#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cbdt/error.hpp"

namespace cbdt {

/// One axis of the problem lattice: a finite, linearly ordered range of
/// opaque value labels. Order is the sequence position, never a numeric
/// parse, so non-numeric ranges (brands, OS names) work the same way.
struct Feature {
    std::string id;
    std::string name;
    std::vector<std::string> values;
    std::size_t default_rank = 0; // used to complete problems that predate this feature

    friend bool operator==(const Feature&, const Feature&) = default;
};

inline void validate(const Feature& f) {
    if (f.id.empty()) throw Error("feature with empty id");
    if (f.values.empty()) throw Error("feature '" + f.id + "' has an empty value range");
    std::set<std::string_view> seen;
    for (const auto& v : f.values)
        if (!seen.insert(v).second)
            throw Error("feature '" + f.id + "' lists duplicate value '" + v + "'");
    if (f.default_rank >= f.values.size())
        throw Error("feature '" + f.id + "' default_rank out of range");
}

/// Ordered product of feature ranges; spans the lattice problems live on.
struct FeatureSpace {
    std::vector<Feature> features;

    const Feature* find(std::string_view id) const {
        for (const auto& f : features)
            if (f.id == id) return &f;
        return nullptr;
    }
    const Feature& at(std::string_view id) const {
        if (const Feature* f = find(id)) return *f;
        throw Error("unknown feature id '" + std::string(id) + "'");
    }

    friend bool operator==(const FeatureSpace&, const FeatureSpace&) = default;
};

inline void validate(const FeatureSpace& space) {
    std::set<std::string_view> ids;
    for (const auto& f : space.features) {
        validate(f);
        if (!ids.insert(f.id).second) throw Error("duplicate feature id '" + f.id + "'");
    }
}

/// A lattice point: one value label per feature. Stored as an ordered map so
/// iteration (and therefore every rendered report) is deterministic.
struct Problem {
    std::map<std::string, std::string> coordinates;

    friend auto operator<=>(const Problem&, const Problem&) = default;
};

/// Non-empty subset of a space's feature ids, used for aspect-restricted
/// comparison.
struct SubspaceSelector {
    std::vector<std::string> feature_ids;
};

inline std::string problem_str(const Problem& p) {
    std::string out = "(";
    for (const auto& [fid, label] : p.coordinates) {
        if (out.size() > 1) out += ", ";
        out += fid + "=" + label;
    }
    return out + ")";
}

inline std::size_t rank_of(const FeatureSpace& space, std::string_view feature_id,
                           std::string_view value_label) {
    const Feature& f = space.at(feature_id);
    const auto it = std::find(f.values.begin(), f.values.end(), value_label);
    if (it == f.values.end())
        throw Error("feature '" + f.id + "' has no value '" + std::string(value_label) + "'");
    return static_cast<std::size_t>(it - f.values.begin());
}

/// Case (a1): a feature incorporates a new value. The label may be inserted
/// at any position of the linear order; the input space is left untouched.
inline FeatureSpace extend_with_value(const FeatureSpace& space, std::string_view feature_id,
                                      std::string_view value_label, std::size_t position) {
    FeatureSpace out = space;
    for (auto& f : out.features) {
        if (f.id != feature_id) continue;
        if (std::find(f.values.begin(), f.values.end(), value_label) != f.values.end())
            throw Error("feature '" + f.id + "' already has value '" + std::string(value_label) + "'");
        if (position > f.values.size())
            throw Error("insertion position " + std::to_string(position) + " out of range for feature '" +
                        f.id + "' (size " + std::to_string(f.values.size()) + ")");
        f.values.insert(f.values.begin() + static_cast<std::ptrdiff_t>(position),
                        std::string(value_label));
        if (position <= f.default_rank) ++f.default_rank; // keep the default label stable
        return out;
    }
    throw Error("unknown feature id '" + std::string(feature_id) + "'");
}

/// Case (a2): a new feature becomes relevant. Existing problems pick up a
/// coordinate lazily via complete_problem.
inline FeatureSpace extend_with_feature(const FeatureSpace& space, Feature feature) {
    validate(feature);
    if (space.find(feature.id))
        throw Error("duplicate feature id '" + feature.id + "'");
    FeatureSpace out = space;
    out.features.push_back(std::move(feature));
    return out;
}

/// Fills every missing coordinate with the feature's default value.
/// Idempotent; known coordinates must already be valid in the space.
inline Problem complete_problem(const FeatureSpace& space, const Problem& problem) {
    for (const auto& [fid, label] : problem.coordinates)
        rank_of(space, fid, label); // validates both id and label
    Problem out = problem;
    for (const auto& f : space.features)
        if (!out.coordinates.count(f.id))
            out.coordinates.emplace(f.id, f.values[f.default_rank]);
    return out;
}

inline bool is_complete(const FeatureSpace& space, const Problem& problem) {
    for (const auto& f : space.features)
        if (!problem.coordinates.count(f.id)) return false;
    return true;
}

/// Restriction of a problem to the selected coordinates.
inline Problem project(const Problem& problem, const SubspaceSelector& selector) {
    if (selector.feature_ids.empty()) throw Error("empty subspace selector");
    Problem out;
    for (const auto& fid : selector.feature_ids) {
        const auto it = problem.coordinates.find(fid);
        if (it == problem.coordinates.end())
            throw Error("selector names feature '" + fid + "' absent from the problem");
        out.coordinates.insert(*it);
    }
    return out;
}

/// Subspace spanned by the selected features, in the parent space's order.
inline FeatureSpace project_space(const FeatureSpace& space, const SubspaceSelector& selector) {
    if (selector.feature_ids.empty()) throw Error("empty subspace selector");
    std::set<std::string_view> wanted;
    for (const auto& fid : selector.feature_ids) {
        space.at(fid); // existence check
        wanted.insert(fid);
    }
    FeatureSpace out;
    for (const auto& f : space.features)
        if (wanted.count(f.id)) out.features.push_back(f);
    return out;
}

} // namespace cbdt
