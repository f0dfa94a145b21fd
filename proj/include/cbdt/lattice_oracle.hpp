#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "cbdt/feature_space.hpp"

namespace cbdt {

inline constexpr std::size_t kDefaultLatticeCap = 10'000;

/// Every coordinate combination of the space, in row-major feature order.
/// Guarded by a node cap: the lattice is exponential in the feature count.
inline std::vector<Problem> materialize_lattice(const FeatureSpace& space,
                                                std::size_t max_nodes = kDefaultLatticeCap) {
    std::size_t total = 1;
    for (const auto& f : space.features) {
        total *= f.values.size();
        if (total > max_nodes)
            throw Error("lattice too large to materialize (cap " + std::to_string(max_nodes) + " nodes)");
    }
    std::vector<Problem> nodes;
    nodes.reserve(total);
    std::vector<std::size_t> ranks(space.features.size(), 0);
    for (;;) {
        Problem p;
        for (std::size_t j = 0; j < space.features.size(); ++j)
            p.coordinates.emplace(space.features[j].id, space.features[j].values[ranks[j]]);
        nodes.push_back(std::move(p));
        std::size_t j = 0;
        for (; j < ranks.size(); ++j) {
            if (++ranks[j] < space.features[j].values.size()) break;
            ranks[j] = 0;
        }
        if (j == ranks.size()) break;
    }
    return nodes;
}

/// Adjacency-matrix distance oracle: two nodes are adjacent when they differ
/// by exactly one rank step in exactly one feature, and the distance between
/// a and b is the least power l for which the (a,b) entry of B^l is nonzero.
/// Computed by propagating the indicator row of a through B one power at a
/// time, which reads off exactly that entry without forming full powers.
///
/// With an empty `nodes` the full lattice is materialized (subject to the
/// node cap); otherwise only the given problems are vertices, and two of
/// them may be disconnected, which is an error.
inline int matrix_power_distance(const FeatureSpace& space, const std::vector<Problem>& nodes,
                                 const Problem& a, const Problem& b,
                                 std::size_t max_nodes = kDefaultLatticeCap) {
    const std::vector<Problem> lattice =
        nodes.empty() ? materialize_lattice(space, max_nodes) : nodes;
    if (nodes.size() > max_nodes)
        throw Error("lattice too large to materialize (cap " + std::to_string(max_nodes) + " nodes)");

    const auto index_of = [&](const Problem& p) -> std::size_t {
        const auto it = std::find(lattice.begin(), lattice.end(), p);
        if (it == lattice.end()) throw Error("problem is not a node of the materialized lattice");
        return static_cast<std::size_t>(it - lattice.begin());
    };
    const std::size_t src = index_of(a);
    const std::size_t dst = index_of(b);
    if (src == dst) return 0;

    const std::size_t n = lattice.size();
    const std::size_t width = space.features.size();
    std::vector<std::vector<int>> ranks(n, std::vector<int>(width));
    std::map<std::vector<int>, std::size_t> by_ranks;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < width; ++j)
            ranks[i][j] = static_cast<int>(
                rank_of(space, space.features[j].id, lattice[i].coordinates.at(space.features[j].id)));
        by_ranks.emplace(ranks[i], i);
    }

    // Neighbors differ by one rank step in one feature; generate them
    // instead of testing all pairs.
    std::vector<std::vector<std::size_t>> adjacency(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<int> probe = ranks[i];
        for (std::size_t j = 0; j < width; ++j) {
            for (const int step : {-1, +1}) {
                probe[j] = ranks[i][j] + step;
                const auto it = by_ranks.find(probe);
                if (it != by_ranks.end()) adjacency[i].push_back(it->second);
            }
            probe[j] = ranks[i][j];
        }
    }

    // row = e_a B^l, kept as a boolean vector; walks may revisit nodes, so
    // the support can oscillate, but the first power that reaches dst is by
    // construction the least l with (B^l)[a][b] != 0.
    std::vector<char> row(n, 0);
    row[src] = 1;
    for (std::size_t power = 1; power <= n; ++power) {
        std::vector<char> next(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            if (!row[i]) continue;
            for (const std::size_t k : adjacency[i]) next[k] = 1;
        }
        if (next[dst]) return static_cast<int>(power);
        row.swap(next);
    }
    throw Error("no path between the two problems in the given node set");
}

} // namespace cbdt
