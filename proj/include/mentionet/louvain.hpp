// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 mentionet contributors

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mentionet/graph.hpp"
#include "mentionet/rng.hpp"

namespace mentionet {

/// Partition of the graph's nodes. membership is parallel to graph.nodes;
/// community ids are dense and 0-based. modularity is the undirected
/// weighted modularity at the resolution the run used.
struct CommunityAssignment {
    std::vector<std::uint32_t> membership;
    double modularity = 0.0;
    std::uint64_t seed = 0;
    std::uint32_t n_communities = 0;
};

namespace detail {

// Undirected view used for modularity: reciprocal directed weights are
// summed, self-loops kept separate. k includes 2x the loop weight.
struct SymGraph {
    std::size_t n = 0;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;
    std::vector<double> loop;
    std::vector<double> k;
    double two_m = 0.0;
};

inline SymGraph symmetrize(const MentionGraph& graph) {
    SymGraph g;
    g.n = graph.nodes.size();
    g.adj.resize(g.n);
    g.loop.assign(g.n, 0.0);
    g.k.assign(g.n, 0.0);

    std::map<std::pair<std::uint32_t, std::uint32_t>, double> sym;
    for (const auto& e : graph.edges) {
        const auto i = static_cast<std::uint32_t>(graph.node_index(e.src));
        const auto j = static_cast<std::uint32_t>(graph.node_index(e.dst));
        if (i == j) {
            g.loop[i] += static_cast<double>(e.weight);
        } else {
            sym[{std::min(i, j), std::max(i, j)}] += static_cast<double>(e.weight);
        }
    }
    for (const auto& [pair, w] : sym) {
        g.adj[pair.first].emplace_back(pair.second, w);
        g.adj[pair.second].emplace_back(pair.first, w);
    }
    for (std::size_t i = 0; i < g.n; ++i) {
        double sum = 2.0 * g.loop[i];
        for (const auto& [nbr, w] : g.adj[i]) sum += w;
        g.k[i] = sum;
        g.two_m += sum;
    }
    return g;
}

inline double modularity(const SymGraph& g, const std::vector<std::uint32_t>& comm,
                         double resolution) {
    if (g.two_m <= 0.0) return 0.0;
    std::uint32_t n_comm = 0;
    for (auto c : comm) n_comm = std::max(n_comm, c + 1);
    std::vector<double> internal(n_comm, 0.0), tot(n_comm, 0.0);
    for (std::size_t i = 0; i < g.n; ++i) {
        tot[comm[i]] += g.k[i];
        internal[comm[i]] += 2.0 * g.loop[i];
        for (const auto& [nbr, w] : g.adj[i])
            if (comm[nbr] == comm[i]) internal[comm[i]] += w; // both directions visited
    }
    double q = 0.0;
    for (std::uint32_t c = 0; c < n_comm; ++c) {
        q += internal[c] / g.two_m;
        q -= resolution * (tot[c] / g.two_m) * (tot[c] / g.two_m);
    }
    return q;
}

// One Louvain level: greedy local moves until no node improves. A node
// leaves its community only for a strict gain; candidate communities are
// the neighbors' plus, when one is free, an empty slot (so a badly placed
// node can retreat into isolation). Ties go to the smallest community id.
// Visit order is a seeded shuffle, so a fixed seed fixes the outcome.
// Returns true if anything moved.
inline bool local_moves(const SymGraph& g, std::vector<std::uint32_t>& comm, double resolution,
                        Rng& rng) {
    std::vector<double> tot(g.n, 0.0);
    std::vector<std::size_t> size(g.n, 0);
    for (std::size_t i = 0; i < g.n; ++i) {
        tot[comm[i]] += g.k[i];
        ++size[comm[i]];
    }
    std::set<std::uint32_t> empty_slots;
    for (std::uint32_t c = 0; c < g.n; ++c)
        if (size[c] == 0) empty_slots.insert(c);

    std::vector<std::uint32_t> order(g.n);
    for (std::size_t i = 0; i < g.n; ++i) order[i] = static_cast<std::uint32_t>(i);
    rng.shuffle(order);

    std::vector<double> weight_to(g.n, 0.0);
    std::vector<std::uint32_t> touched;
    bool any_move = false;
    bool moved = true;
    int sweeps = 0;
    while (moved && sweeps++ < 256) {
        moved = false;
        for (const std::uint32_t node : order) {
            const std::uint32_t old_comm = comm[node];
            touched.clear();
            touched.push_back(old_comm);
            for (const auto& [nbr, w] : g.adj[node]) {
                const std::uint32_t c = comm[nbr];
                if (weight_to[c] == 0.0 && c != old_comm) touched.push_back(c);
                weight_to[c] += w;
            }

            tot[old_comm] -= g.k[node];
            --size[old_comm];
            const auto gain = [&](std::uint32_t c) {
                return weight_to[c] - resolution * g.k[node] * tot[c] / g.two_m;
            };
            std::uint32_t best = old_comm;
            double best_gain = gain(old_comm);
            const auto consider = [&](std::uint32_t c, double cand) {
                if (cand > best_gain + 1e-12) {
                    best = c;
                    best_gain = cand;
                } else if (best != old_comm && cand >= best_gain - 1e-12 && c < best) {
                    best = c;
                }
            };
            for (const std::uint32_t c : touched)
                if (c != old_comm) consider(c, gain(c));
            if (size[old_comm] > 0 && !empty_slots.empty()) consider(*empty_slots.begin(), 0.0);

            tot[best] += g.k[node];
            ++size[best];
            if (best != old_comm) {
                comm[node] = best;
                moved = true;
                any_move = true;
                if (size[old_comm] == 0) empty_slots.insert(old_comm);
                if (size[best] == 1) empty_slots.erase(best);
            }
            for (const std::uint32_t c : touched) weight_to[c] = 0.0;
        }
    }
    return any_move;
}

// Renumber community ids densely, in order of first appearance.
inline std::uint32_t compact(std::vector<std::uint32_t>& comm) {
    std::vector<std::uint32_t> remap(comm.size(), UINT32_MAX);
    std::uint32_t next = 0;
    for (auto& c : comm) {
        if (remap[c] == UINT32_MAX) remap[c] = next++;
        c = remap[c];
    }
    return next;
}

inline double identity_modularity(const SymGraph& g, double resolution) {
    std::vector<std::uint32_t> ident(g.n);
    for (std::size_t i = 0; i < g.n; ++i) ident[i] = static_cast<std::uint32_t>(i);
    return modularity(g, ident, resolution);
}

inline SymGraph aggregate(const SymGraph& g, const std::vector<std::uint32_t>& comm,
                          std::uint32_t n_comm) {
    SymGraph coarse;
    coarse.n = n_comm;
    coarse.adj.resize(n_comm);
    coarse.loop.assign(n_comm, 0.0);
    coarse.k.assign(n_comm, 0.0);

    std::map<std::pair<std::uint32_t, std::uint32_t>, double> sym;
    for (std::size_t i = 0; i < g.n; ++i) {
        coarse.loop[comm[i]] += g.loop[i];
        for (const auto& [nbr, w] : g.adj[i]) {
            if (nbr < i) continue; // each undirected pair once
            const std::uint32_t a = comm[i], b = comm[nbr];
            if (a == b)
                coarse.loop[a] += w;
            else
                sym[{std::min(a, b), std::max(a, b)}] += w;
        }
    }
    for (const auto& [pair, w] : sym) {
        coarse.adj[pair.first].emplace_back(pair.second, w);
        coarse.adj[pair.second].emplace_back(pair.first, w);
    }
    for (std::size_t i = 0; i < coarse.n; ++i) {
        double sum = 2.0 * coarse.loop[i];
        for (const auto& [nbr, w] : coarse.adj[i]) sum += w;
        coarse.k[i] = sum;
        coarse.two_m += sum;
    }
    return coarse;
}

} // namespace detail

/// Undirected weighted modularity of a membership vector (parallel to
/// graph.nodes) at the given resolution. Edgeless graphs score 0.
inline double modularity_of(const MentionGraph& graph, const std::vector<std::uint32_t>& membership,
                            double resolution = 1.0) {
    if (membership.size() != graph.nodes.size())
        throw std::invalid_argument("modularity_of: membership size mismatch");
    return detail::modularity(detail::symmetrize(graph), membership, resolution);
}

/// Louvain-style greedy modularity maximization over the symmetrized
/// graph. Deterministic for a fixed seed. Starts from singletons, so the
/// result never scores below the all-singletons partition.
inline CommunityAssignment find_communities(const MentionGraph& graph, std::uint64_t seed,
                                            double resolution = 1.0) {
    if (graph.nodes.empty()) throw std::invalid_argument("find_communities: empty graph");
    if (resolution <= 0.0) throw std::invalid_argument("find_communities: resolution must be > 0");

    CommunityAssignment result;
    result.seed = seed;

    detail::SymGraph level = detail::symmetrize(graph);
    std::vector<std::uint32_t> membership(level.n);
    for (std::size_t i = 0; i < level.n; ++i) membership[i] = static_cast<std::uint32_t>(i);

    if (level.two_m > 0.0) {
        Rng rng(seed);
        double q = detail::identity_modularity(level, resolution);
        for (int pass = 0; pass < 64; ++pass) {
            std::vector<std::uint32_t> comm(level.n);
            for (std::size_t i = 0; i < level.n; ++i) comm[i] = static_cast<std::uint32_t>(i);
            const bool moved = detail::local_moves(level, comm, resolution, rng);
            if (!moved) break;
            const std::uint32_t n_comm = detail::compact(comm);
            for (auto& m : membership) m = comm[m];
            level = detail::aggregate(level, comm, n_comm);
            const double q_level = detail::identity_modularity(level, resolution);
            if (q_level <= q + 1e-9) break;
            q = q_level;
        }
    }

    result.n_communities = detail::compact(membership);
    result.membership = std::move(membership);
    result.modularity = modularity_of(graph, result.membership, resolution);
    return result;
}

/// Per-community report: size, share of edge weight kept internal, and the
/// strongest members. Rows come out in community-id order.
struct CommunityMember {
    std::string handle;
    std::uint64_t strength; // in + out strength within the graph
};

struct CommunityInfo {
    std::uint32_t id = 0;
    std::size_t size = 0;
    double internal_weight_share = 0.0;
    std::vector<CommunityMember> top_members;
};

struct CommunitySummary {
    std::uint32_t n_communities = 0;
    double modularity = 0.0;
    std::vector<CommunityInfo> communities;
};

inline CommunitySummary community_summary(const MentionGraph& graph,
                                          const CommunityAssignment& assignment,
                                          std::size_t top_k = 5) {
    if (assignment.membership.size() != graph.nodes.size())
        throw std::invalid_argument("community_summary: assignment does not match graph");

    CommunitySummary summary;
    summary.n_communities = assignment.n_communities;
    summary.modularity = assignment.modularity;
    summary.communities.resize(assignment.n_communities);

    const auto outs = graph.out_strengths();
    const auto ins = graph.in_strengths();

    std::vector<double> internal(assignment.n_communities, 0.0);
    double total_weight = 0.0;
    for (const auto& e : graph.edges) {
        const auto ci = assignment.membership[graph.node_index(e.src)];
        const auto cj = assignment.membership[graph.node_index(e.dst)];
        total_weight += static_cast<double>(e.weight);
        if (ci == cj) internal[ci] += static_cast<double>(e.weight);
    }

    std::vector<std::vector<std::size_t>> members(assignment.n_communities);
    for (std::size_t i = 0; i < graph.nodes.size(); ++i)
        members[assignment.membership[i]].push_back(i);

    for (std::uint32_t c = 0; c < assignment.n_communities; ++c) {
        auto& info = summary.communities[c];
        info.id = c;
        info.size = members[c].size();
        info.internal_weight_share = total_weight > 0.0 ? internal[c] / total_weight : 0.0;
        auto& idx = members[c];
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            const auto sa = outs[a] + ins[a], sb = outs[b] + ins[b];
            if (sa != sb) return sa > sb;
            return graph.users->handle(graph.nodes[a]) < graph.users->handle(graph.nodes[b]);
        });
        for (std::size_t r = 0; r < idx.size() && r < top_k; ++r)
            info.top_members.push_back(
                {graph.users->handle(graph.nodes[idx[r]]), outs[idx[r]] + ins[idx[r]]});
    }
    return summary;
}

} // namespace mentionet
