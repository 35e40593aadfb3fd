// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 mentionet contributors

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "mentionet/graph.hpp"

namespace mentionet {

/// A set of users persistently mentioned by a largely shared source set
/// over the whole period — the "line" pattern in the adjacency matrix and
/// the candidate signature of coordinated accounts.
struct TagRing {
    std::vector<UserId> targets; // ascending
    std::vector<UserId> sources; // union of the targets' source sets, ascending
    double density = 0.0;        // realized fraction of ordered target pairs with a kept edge
    std::uint64_t total_weight = 0; // summed weight of edges internal to targets
};

struct RingConfig {
    std::size_t min_ring_size = 5;
    std::uint64_t min_weight = 5; // "constant" tagging: kept edges need weight >= this
    double min_jaccard = 0.5;
};

namespace detail {

inline std::size_t intersection_size(const std::vector<UserId>& a, const std::vector<UserId>& b) {
    std::size_t i = 0, j = 0, count = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j])
            ++i;
        else if (b[j] < a[i])
            ++j;
        else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

} // namespace detail

/// Find rings of constantly-tagged users: (1) keep edges with weight >=
/// min_weight, (2) collect each target's in-neighbor source set, (3)
/// single-linkage-cluster targets whose source sets overlap with Jaccard
/// similarity >= min_jaccard, (4) report clusters of at least
/// min_ring_size targets. Rings are disjoint in targets and come out
/// largest first.
inline std::vector<TagRing> detect_tag_rings(const MentionGraph& graph,
                                             const RingConfig& config = {}) {
    if (!graph.weighted)
        throw std::invalid_argument("detect_tag_rings: needs a weighted graph");
    if (config.min_jaccard < 0.0 || config.min_jaccard > 1.0)
        throw std::invalid_argument("detect_tag_rings: min_jaccard must be within [0, 1]");

    // Kept edges, grouped by target.
    std::vector<GraphEdge> kept;
    for (const auto& e : graph.edges)
        if (e.weight >= config.min_weight) kept.push_back(e);

    std::vector<UserId> targets;
    for (const auto& e : kept) targets.push_back(e.dst);
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    if (targets.empty()) return {};

    const auto target_pos = [&](UserId id) {
        return static_cast<std::size_t>(
            std::lower_bound(targets.begin(), targets.end(), id) - targets.begin());
    };

    std::vector<std::vector<UserId>> sources_of(targets.size());
    for (const auto& e : kept) sources_of[target_pos(e.dst)].push_back(e.src);
    for (auto& s : sources_of) std::sort(s.begin(), s.end());

    detail::UnionFind clusters(targets.size());
    for (std::size_t a = 0; a < targets.size(); ++a) {
        for (std::size_t b = a + 1; b < targets.size(); ++b) {
            const std::size_t inter = detail::intersection_size(sources_of[a], sources_of[b]);
            const std::size_t uni = sources_of[a].size() + sources_of[b].size() - inter;
            if (uni == 0) continue;
            if (static_cast<double>(inter) / static_cast<double>(uni) >= config.min_jaccard)
                clusters.unite(a, b);
        }
    }

    std::vector<std::vector<std::size_t>> groups(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) groups[clusters.find(i)].push_back(i);

    std::vector<TagRing> rings;
    for (const auto& group : groups) {
        if (group.size() < config.min_ring_size) continue;
        TagRing ring;
        for (const std::size_t gi : group) ring.targets.push_back(targets[gi]);
        std::sort(ring.targets.begin(), ring.targets.end());

        std::vector<UserId> all_sources;
        for (const std::size_t gi : group)
            all_sources.insert(all_sources.end(), sources_of[gi].begin(), sources_of[gi].end());
        std::sort(all_sources.begin(), all_sources.end());
        all_sources.erase(std::unique(all_sources.begin(), all_sources.end()), all_sources.end());
        ring.sources = std::move(all_sources);

        std::size_t internal_edges = 0;
        for (const auto& e : kept) {
            if (std::binary_search(ring.targets.begin(), ring.targets.end(), e.src) &&
                std::binary_search(ring.targets.begin(), ring.targets.end(), e.dst) &&
                e.src != e.dst) {
                ++internal_edges;
                ring.total_weight += e.weight;
            }
        }
        const std::size_t possible = ring.targets.size() * (ring.targets.size() - 1);
        ring.density = possible > 0 ? static_cast<double>(internal_edges) / static_cast<double>(possible) : 0.0;
        rings.push_back(std::move(ring));
    }

    std::sort(rings.begin(), rings.end(), [](const TagRing& a, const TagRing& b) {
        if (a.targets.size() != b.targets.size()) return a.targets.size() > b.targets.size();
        return a.targets.front() < b.targets.front();
    });
    return rings;
}

} // namespace mentionet
