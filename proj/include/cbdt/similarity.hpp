#pragma once

#include <cstdlib>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cbdt/case_memory.hpp"
#include "cbdt/feature_space.hpp"
#include "cbdt/rational.hpp"

namespace cbdt {

/// Minimal walk length between two lattice points. On the full lattice this
/// is the rank L1 distance: consecutive values of a feature sit one step
/// apart, features contribute independently.
inline int lattice_distance(const FeatureSpace& space, const Problem& a, const Problem& b) {
    int total = 0;
    for (const auto& f : space.features) {
        const auto ia = a.coordinates.find(f.id);
        const auto ib = b.coordinates.find(f.id);
        if (ia == a.coordinates.end() || ib == b.coordinates.end())
            throw Error("incomplete-problem: no coordinate for feature '" + f.id + "'");
        const auto ra = static_cast<long>(rank_of(space, f.id, ia->second));
        const auto rb = static_cast<long>(rank_of(space, f.id, ib->second));
        total += static_cast<int>(std::labs(ra - rb));
    }
    return total;
}

/// Lattice diameter of the space: the largest distance any two points can
/// realize, sum over features of (range size - 1). Zero only for a
/// degenerate space where every feature is single-valued.
inline int diameter(const FeatureSpace& space) {
    int d = 0;
    for (const auto& f : space.features) d += static_cast<int>(f.values.size()) - 1;
    return d;
}

/// Normalized similarities from one query problem to every history problem:
/// s = 1 - d/D with D the space diameter. Exact rationals throughout.
struct SimilarityTable {
    Problem query;
    std::map<Problem, Rational> entries;
    int diameter_used = 0;

    friend bool operator==(const SimilarityTable&, const SimilarityTable&) = default;
};

namespace detail {
inline Rational similarity_from_distance(int d, int diam) {
    // A degenerate space puts every problem on the same point: maximal
    // similarity by convention, and no division by zero.
    if (diam == 0) return Rational(1);
    return Rational(diam - d, diam);
}
} // namespace detail

inline SimilarityTable similarity(const FeatureSpace& space, const Problem& query,
                                  const Memory& memory) {
    const int diam = diameter(space);
    SimilarityTable table;
    table.query = query;
    table.diameter_used = diam;
    for (const auto& q : history(memory))
        table.entries.emplace(q, detail::similarity_from_distance(lattice_distance(space, query, q), diam));
    return table;
}

/// Distances (and similarities) between all pairs of history problems, plus
/// the distances from an optional designated query.
struct DistanceReport {
    std::map<std::pair<Problem, Problem>, int> pairwise;
    std::map<std::pair<Problem, Problem>, Rational> similarities;
    int diameter = 0;
    std::optional<Problem> query;
    std::map<Problem, int> query_distances;
};

inline DistanceReport pairwise_similarity(const FeatureSpace& space, const Memory& memory,
                                          const std::optional<Problem>& query = std::nullopt) {
    DistanceReport report;
    report.diameter = diameter(space);
    const auto problems = history(memory);
    for (std::size_t i = 0; i < problems.size(); ++i) {
        for (std::size_t j = i + 1; j < problems.size(); ++j) {
            const int d = lattice_distance(space, problems[i], problems[j]);
            auto key = problems[i] < problems[j] ? std::pair(problems[i], problems[j])
                                                 : std::pair(problems[j], problems[i]);
            report.pairwise.emplace(key, d);
            report.similarities.emplace(std::move(key),
                                        detail::similarity_from_distance(d, report.diameter));
        }
    }
    if (query) {
        report.query = query;
        for (const auto& q : problems)
            report.query_distances.emplace(q, lattice_distance(space, *query, q));
    }
    return report;
}

} // namespace cbdt
