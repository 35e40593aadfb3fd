// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 mentionet contributors

#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "mentionet/users.hpp"

namespace mentionet {

/// Parameters of the two-sided selection: edges run from the top n1 users
/// by post count to the top n2 users by mention frequency (n2_rank flips
/// the second ranking to posts).
struct BuildConfig {
    std::size_t n1 = 500;
    std::size_t n2 = 100;
    bool weighted = true;
    bool include_self_loops = false;
    RankBy n2_rank = RankBy::mentions;
};

struct GraphEdge {
    UserId src;
    UserId dst;
    std::uint64_t weight;
};

/// Directed weighted mention graph. Nodes are the union of the two top
/// sets (so selected-but-silent users appear with degree 0); edges are
/// sorted by (src, dst) and hold the mention frequency as weight.
struct MentionGraph {
    std::vector<UserId> nodes;       // ascending user ids
    std::vector<std::uint8_t> roles; // parallel to nodes: kRoleAuthor used as
                                     // "source side", kRoleMentioned as "target side"
    std::vector<GraphEdge> edges;    // sorted by (src, dst), unique pairs, weights >= 1
    std::shared_ptr<const UserTable> users;
    bool weighted = true;
    std::size_t n1_used = 0; // effective sizes after truncation to population
    std::size_t n2_used = 0;

    std::size_t node_count() const { return nodes.size(); }
    std::size_t edge_count() const { return edges.size(); }

    std::uint64_t total_weight() const {
        std::uint64_t sum = 0;
        for (const auto& e : edges) sum += e.weight;
        return sum;
    }

    /// Position of a user id in nodes, or npos.
    std::size_t node_index(UserId id) const {
        auto it = std::lower_bound(nodes.begin(), nodes.end(), id);
        if (it == nodes.end() || *it != id) return npos;
        return static_cast<std::size_t>(it - nodes.begin());
    }

    std::vector<std::uint64_t> out_strengths() const {
        std::vector<std::uint64_t> s(nodes.size(), 0);
        for (const auto& e : edges) s[node_index(e.src)] += e.weight;
        return s;
    }

    std::vector<std::uint64_t> in_strengths() const {
        std::vector<std::uint64_t> s(nodes.size(), 0);
        for (const auto& e : edges) s[node_index(e.dst)] += e.weight;
        return s;
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Build the mention graph from mined events. An edge (u, v, w) exists iff
/// u is in the top-n1 poster set, v in the top-n2 target set, and u
/// mentioned v at least once; w counts those occurrences (all forced to 1
/// in unweighted mode). Self-loops are dropped unless configured in.
/// n1/n2 larger than the population are truncated (n1_used/n2_used tell).
inline MentionGraph build_graph(const MiningResult& mining, const BuildConfig& config = {}) {
    if (config.n1 == 0 || config.n2 == 0)
        throw std::invalid_argument("build_graph: n1 and n2 must be >= 1");

    const UserTable& users = *mining.users;
    MentionGraph graph;
    graph.users = mining.users;
    graph.weighted = config.weighted;

    const auto sources = top_n(users, RankBy::posts, config.n1);
    const auto targets = top_n(users, config.n2_rank, config.n2);
    graph.n1_used = sources.size();
    graph.n2_used = targets.size();

    std::vector<std::uint8_t> role_of(users.size(), 0);
    for (UserId id : sources) role_of[id] |= kRoleAuthor;
    for (UserId id : targets) role_of[id] |= kRoleMentioned;

    for (UserId id = 0; id < users.size(); ++id) {
        if (role_of[id]) {
            graph.nodes.push_back(id);
            graph.roles.push_back(role_of[id]);
        }
    }

    std::unordered_map<std::uint64_t, std::uint64_t> weights;
    weights.reserve(mining.events.size() / 4 + 16);
    for (const auto& ev : mining.events) {
        if (!(role_of[ev.author] & kRoleAuthor)) continue;
        if (!(role_of[ev.target] & kRoleMentioned)) continue;
        if (ev.is_self() && !config.include_self_loops) continue;
        const std::uint64_t key = (static_cast<std::uint64_t>(ev.author) << 32) | ev.target;
        ++weights[key];
    }

    graph.edges.reserve(weights.size());
    for (const auto& [key, w] : weights) {
        graph.edges.push_back({static_cast<UserId>(key >> 32), static_cast<UserId>(key & 0xffffffffu),
                               config.weighted ? w : 1});
    }
    std::sort(graph.edges.begin(), graph.edges.end(), [](const GraphEdge& a, const GraphEdge& b) {
        if (a.src != b.src) return a.src < b.src;
        return a.dst < b.dst;
    });
    return graph;
}

/// Keep edges with weight strictly greater than min_weight. Nodes that had
/// edges and lost all of them are dropped; nodes that were already
/// isolated stay, so filtering at 0 is the identity.
inline MentionGraph filter_edges(const MentionGraph& graph, std::uint64_t min_weight) {
    if (!graph.weighted)
        throw std::invalid_argument("filter_edges: graph was built in unweighted mode");

    MentionGraph out;
    out.users = graph.users;
    out.weighted = graph.weighted;
    out.n1_used = graph.n1_used;
    out.n2_used = graph.n2_used;

    std::vector<bool> had_edge(graph.nodes.size(), false);
    std::vector<bool> keeps_edge(graph.nodes.size(), false);
    for (const auto& e : graph.edges) {
        const std::size_t si = graph.node_index(e.src);
        const std::size_t di = graph.node_index(e.dst);
        had_edge[si] = had_edge[di] = true;
        if (e.weight > min_weight) {
            out.edges.push_back(e);
            keeps_edge[si] = keeps_edge[di] = true;
        }
    }
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        if (!had_edge[i] || keeps_edge[i]) {
            out.nodes.push_back(graph.nodes[i]);
            out.roles.push_back(graph.roles[i]);
        }
    }
    return out;
}

enum class MatrixOrdering { by_id, by_out_strength, by_community };

/// Dense adjacency: cells[i * n + j] = weight of edge order[i] -> order[j].
struct AdjacencyMatrix {
    std::size_t n = 0;
    std::vector<std::uint64_t> cells;
    std::vector<UserId> order; // position -> user id

    std::uint64_t at(std::size_t i, std::size_t j) const { return cells[i * n + j]; }
    std::uint64_t max_value() const {
        std::uint64_t m = 0;
        for (auto v : cells) m = std::max(m, v);
        return m;
    }
};

/// Render the graph as a dense matrix. by_community requires the caller to
/// pass community ids aligned with graph.nodes; within a community (and
/// for by_out_strength overall) rows are ordered by descending out-strength
/// with ascending handle as tie-break. Node counts over the cap are an
/// error: filter first.
inline AdjacencyMatrix to_adjacency(const MentionGraph& graph,
                                    MatrixOrdering ordering = MatrixOrdering::by_id,
                                    const std::vector<std::uint32_t>* communities = nullptr,
                                    std::size_t cap = 5000) {
    const std::size_t n = graph.nodes.size();
    if (n > cap)
        throw std::invalid_argument("to_adjacency: " + std::to_string(n) +
                                    " nodes exceed the dense cap of " + std::to_string(cap) +
                                    "; filter the graph first");
    if (ordering == MatrixOrdering::by_community &&
        (communities == nullptr || communities->size() != n))
        throw std::invalid_argument("to_adjacency: by_community needs one community id per node");

    std::vector<std::size_t> positions(n);
    for (std::size_t i = 0; i < n; ++i) positions[i] = i;

    if (ordering != MatrixOrdering::by_id) {
        const auto strengths = graph.out_strengths();
        std::sort(positions.begin(), positions.end(), [&](std::size_t a, std::size_t b) {
            if (ordering == MatrixOrdering::by_community && (*communities)[a] != (*communities)[b])
                return (*communities)[a] < (*communities)[b];
            if (strengths[a] != strengths[b]) return strengths[a] > strengths[b];
            return graph.users->handle(graph.nodes[a]) < graph.users->handle(graph.nodes[b]);
        });
    }

    AdjacencyMatrix m;
    m.n = n;
    m.cells.assign(n * n, 0);
    m.order.resize(n);
    std::vector<std::size_t> position_of(n);
    for (std::size_t i = 0; i < n; ++i) {
        m.order[i] = graph.nodes[positions[i]];
        position_of[positions[i]] = i;
    }
    for (const auto& e : graph.edges) {
        const std::size_t i = position_of[graph.node_index(e.src)];
        const std::size_t j = position_of[graph.node_index(e.dst)];
        m.cells[i * n + j] = e.weight;
    }
    return m;
}

} // namespace mentionet
