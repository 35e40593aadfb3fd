// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 mentionet contributors

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mentionet/corpus.hpp"
#include "mentionet/degree.hpp"
#include "mentionet/graph.hpp"
#include "mentionet/louvain.hpp"
#include "mentionet/rings.hpp"
#include "mentionet/svg.hpp"
#include "mentionet/users.hpp"

namespace mentionet {

/// Everything one run needs, serializable so the output directory always
/// carries the exact configuration that produced it.
struct RunConfig {
    std::string input;
    InputFormat format = InputFormat::jsonl;
    std::optional<std::string> from; // RFC 3339 or bare date, closed interval
    std::optional<std::string> to;
    std::size_t n1 = 500;
    std::size_t n2 = 100;
    bool weighted = true;
    bool include_self_loops = false;
    RankBy n2_rank = RankBy::mentions;
    std::uint64_t min_weight = 200; // edge filter, strictly-greater semantics
    std::uint64_t seed = 0;
    double resolution = 1.0;
    std::size_t ring_size = 5;
    std::uint64_t ring_weight = 5;
    double ring_jaccard = 0.5;
    DegreeKind degree_kind = DegreeKind::total;
    bool degree_strength = true;
    TailMethod tail_method = TailMethod::least_squares;
    MatrixOrdering matrix_order = MatrixOrdering::by_id;
    bool log_scale = true;
    std::size_t adjacency_cap = 5000;
    double max_malformed_ratio = 0.10;
    bool strip_rt = false;
    unsigned threads = 1;
    std::string out_dir;
    std::string label;
};

class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& message, bool data_error)
        : std::runtime_error(stage + ": " + message), stage_(std::move(stage)), data_(data_error) {}
    const std::string& stage() const { return stage_; }
    bool is_data_error() const { return data_; }

private:
    std::string stage_;
    bool data_;
};

struct RunReport {
    CorpusStats stats;
    IngestReport ingest;
    std::size_t built_nodes = 0, built_edges = 0;
    std::uint64_t built_weight = 0;
    std::size_t filtered_nodes = 0, filtered_edges = 0;
    bool filter_applied = false;
    std::uint32_t n_communities = 0;
    double modularity = 0.0;
    std::size_t n_rings = 0;
    TailEstimate tail;
};

namespace detail {

inline std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string quoted = "\"";
    for (const char c : field) {
        if (c == '"') quoted += "\"\"";
        else quoted += c;
    }
    quoted += '"';
    return quoted;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace detail

inline void write_users_csv(const UserTable& users, std::ostream& os) {
    os << "handle,id,posts,mentions\n";
    for (UserId id = 0; id < users.size(); ++id)
        os << detail::csv_quote(users.handle(id)) << ',' << id << ',' << users.posts(id) << ','
           << users.mentions(id) << '\n';
}

inline void write_edges_csv(const MentionGraph& graph, std::ostream& os) {
    struct Row {
        const std::string* src;
        const std::string* dst;
        std::uint64_t weight;
    };
    std::vector<Row> rows;
    rows.reserve(graph.edges.size());
    for (const auto& e : graph.edges)
        rows.push_back({&graph.users->handle(e.src), &graph.users->handle(e.dst), e.weight});
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (*a.src != *b.src) return *a.src < *b.src;
        return *a.dst < *b.dst;
    });
    os << "src,dst,weight\n";
    for (const auto& r : rows)
        os << detail::csv_quote(*r.src) << ',' << detail::csv_quote(*r.dst) << ',' << r.weight << '\n';
}

inline void write_adjacency_csv(const AdjacencyMatrix& matrix, const UserTable& users,
                                std::ostream& os) {
    for (std::size_t j = 0; j < matrix.n; ++j) os << ',' << detail::csv_quote(users.handle(matrix.order[j]));
    os << '\n';
    for (std::size_t i = 0; i < matrix.n; ++i) {
        os << detail::csv_quote(users.handle(matrix.order[i]));
        for (std::size_t j = 0; j < matrix.n; ++j) os << ',' << matrix.at(i, j);
        os << '\n';
    }
}

inline void write_degree_csv(const DegreeDistribution& dist, std::ostream& os) {
    os << "degree,count\n";
    for (const auto& [degree, count] : dist.histogram) os << degree << ',' << count << '\n';
}

inline void write_ccdf_csv(const std::vector<CcdfPoint>& points, std::ostream& os) {
    os << "degree,p\n";
    for (const auto& pt : points) os << pt.degree << ',' << detail::fmt_double(pt.p) << '\n';
}

inline nlohmann::ordered_json tail_to_json(const TailEstimate& est, TailMethod method) {
    nlohmann::ordered_json j;
    j["exponent"] = est.exponent;
    j["xmin"] = est.xmin;
    j["n_tail"] = est.n_tail;
    j["r2"] = est.r2;
    j["reliable"] = est.reliable;
    j["method"] = method == TailMethod::least_squares ? "least_squares" : "hill";
    return j;
}

inline void write_communities_csv(const MentionGraph& graph, const CommunityAssignment& assignment,
                                  std::ostream& os) {
    std::vector<std::pair<const std::string*, std::uint32_t>> rows;
    rows.reserve(graph.nodes.size());
    for (std::size_t i = 0; i < graph.nodes.size(); ++i)
        rows.emplace_back(&graph.users->handle(graph.nodes[i]), assignment.membership[i]);
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return *a.first < *b.first; });
    os << "handle,community\n";
    for (const auto& [handle, comm] : rows) os << detail::csv_quote(*handle) << ',' << comm << '\n';
}

inline nlohmann::ordered_json community_summary_to_json(const CommunitySummary& summary) {
    nlohmann::ordered_json j;
    j["n_communities"] = summary.n_communities;
    j["modularity"] = summary.modularity;
    j["communities"] = nlohmann::ordered_json::array();
    for (const auto& info : summary.communities) {
        nlohmann::ordered_json row;
        row["id"] = info.id;
        row["size"] = info.size;
        row["internal_weight_share"] = info.internal_weight_share;
        row["top_members"] = nlohmann::ordered_json::array();
        for (const auto& member : info.top_members)
            row["top_members"].push_back({{"handle", member.handle}, {"strength", member.strength}});
        j["communities"].push_back(std::move(row));
    }
    return j;
}

inline nlohmann::ordered_json rings_to_json(const std::vector<TagRing>& rings,
                                            const UserTable& users) {
    nlohmann::ordered_json j;
    j["n_rings"] = rings.size();
    j["rings"] = nlohmann::ordered_json::array();
    for (const auto& ring : rings) {
        nlohmann::ordered_json row;
        row["targets"] = nlohmann::ordered_json::array();
        for (const UserId id : ring.targets) row["targets"].push_back(users.handle(id));
        row["sources"] = nlohmann::ordered_json::array();
        for (const UserId id : ring.sources) row["sources"].push_back(users.handle(id));
        row["density"] = ring.density;
        row["total_weight"] = ring.total_weight;
        j["rings"].push_back(std::move(row));
    }
    return j;
}

inline nlohmann::ordered_json config_to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["input"] = c.input;
    j["format"] = to_string(c.format);
    j["from"] = c.from ? nlohmann::ordered_json(*c.from) : nlohmann::ordered_json(nullptr);
    j["to"] = c.to ? nlohmann::ordered_json(*c.to) : nlohmann::ordered_json(nullptr);
    j["n1"] = c.n1;
    j["n2"] = c.n2;
    j["weighted"] = c.weighted;
    j["include_self_loops"] = c.include_self_loops;
    j["n2_rank"] = c.n2_rank == RankBy::mentions ? "mentions" : "posts";
    j["min_weight"] = c.min_weight;
    j["seed"] = c.seed;
    j["resolution"] = c.resolution;
    j["ring_size"] = c.ring_size;
    j["ring_weight"] = c.ring_weight;
    j["ring_jaccard"] = c.ring_jaccard;
    j["degree_kind"] = to_string(c.degree_kind);
    j["degree_strength"] = c.degree_strength;
    j["tail_method"] = c.tail_method == TailMethod::least_squares ? "least_squares" : "hill";
    j["matrix_order"] = c.matrix_order == MatrixOrdering::by_id
                            ? "id"
                            : (c.matrix_order == MatrixOrdering::by_out_strength ? "strength" : "community");
    j["log_scale"] = c.log_scale;
    j["adjacency_cap"] = c.adjacency_cap;
    j["max_malformed_ratio"] = c.max_malformed_ratio;
    j["strip_rt"] = c.strip_rt;
    j["threads"] = c.threads;
    j["out_dir"] = c.out_dir;
    j["label"] = c.label;
    return j;
}

namespace detail {

inline void dump_json(const nlohmann::ordered_json& j, const std::filesystem::path& path) {
    auto out = open_output(path);
    out << j.dump(2) << '\n';
}

} // namespace detail

/// Execute the full pipeline: ingest -> mine -> build -> filter -> stats
/// -> communities -> rings, writing every artifact plus summary.json into
/// config.out_dir. The archived config.json is written first; a stage
/// failure leaves partial outputs plus a FAILED marker naming the stage.
inline RunReport run_pipeline(const RunConfig& config) {
    namespace fs = std::filesystem;
    const fs::path out_dir(config.out_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw StageError("setup", "cannot create output directory " + out_dir.string(), true);
    detail::dump_json(config_to_json(config), out_dir / "config.json");
    fs::remove(out_dir / "FAILED", ec);

    RunReport report;
    const auto fail = [&](const std::string& stage, const std::string& message,
                          bool data_error) -> StageError {
        auto marker = detail::open_output(out_dir / "FAILED");
        marker << stage << ": " << message << '\n';
        return StageError(stage, message, data_error);
    };

    // ingest
    Corpus corpus;
    try {
        IngestOptions opts;
        opts.format = config.format;
        opts.max_malformed_ratio = config.max_malformed_ratio;
        opts.threads = config.threads;
        if (config.from) {
            opts.from = parse_range_bound(*config.from, false);
            if (!opts.from) throw IngestError("invalid --from timestamp: " + *config.from);
        }
        if (config.to) {
            opts.to = parse_range_bound(*config.to, true);
            if (!opts.to) throw IngestError("invalid --to timestamp: " + *config.to);
        }
        corpus = ingest_file(config.input, opts);
        if (corpus.records.empty())
            throw IngestError("no usable records in " + config.input);
    } catch (const std::exception& e) {
        throw fail("ingest", e.what(), true);
    }
    report.stats = corpus_stats(corpus, config.label);
    report.ingest = corpus.report;

    // mine
    MiningResult mining;
    try {
        mining = mine_mentions(corpus, {config.strip_rt, config.threads});
        auto users_out = detail::open_output(out_dir / "users.csv");
        write_users_csv(*mining.users, users_out);
    } catch (const std::exception& e) {
        throw fail("mine", e.what(), false);
    }

    // build
    MentionGraph graph;
    try {
        BuildConfig build;
        build.n1 = config.n1;
        build.n2 = config.n2;
        build.weighted = config.weighted;
        build.include_self_loops = config.include_self_loops;
        build.n2_rank = config.n2_rank;
        graph = build_graph(mining, build);
        auto edges_out = detail::open_output(out_dir / "edges.csv");
        write_edges_csv(graph, edges_out);
    } catch (const std::exception& e) {
        throw fail("build", e.what(), false);
    }
    report.built_nodes = graph.node_count();
    report.built_edges = graph.edge_count();
    report.built_weight = graph.total_weight();

    // filter (weighted runs only; unweighted graphs have nothing to threshold)
    MentionGraph filtered;
    try {
        filtered = config.weighted ? filter_edges(graph, config.min_weight) : graph;
        report.filter_applied = config.weighted;
        report.filtered_nodes = filtered.node_count();
        report.filtered_edges = filtered.edge_count();
    } catch (const std::exception& e) {
        throw fail("filter", e.what(), false);
    }

    // stats: degree artifacts from the complete graph, matrix from the filtered one
    try {
        const auto dist = degree_sequence(graph, config.degree_kind, config.degree_strength);
        auto degree_out = detail::open_output(out_dir / "degree.csv");
        write_degree_csv(dist, degree_out);
        auto ccdf_out = detail::open_output(out_dir / "ccdf.csv");
        write_ccdf_csv(ccdf(dist), ccdf_out);
        report.tail = tail_exponent(dist, std::nullopt, config.tail_method);
        detail::dump_json(tail_to_json(report.tail, config.tail_method), out_dir / "tail.json");
        render_degree_plot_file(dist, true, (out_dir / "degree.svg").string(), &report.tail,
                                config.label.empty() ? "degree distribution"
                                                     : config.label + " degree distribution");
        if (filtered.node_count() > 0) {
            const auto matrix = to_adjacency(filtered, config.matrix_order, nullptr, config.adjacency_cap);
            auto adj_out = detail::open_output(out_dir / "adjacency.csv");
            write_adjacency_csv(matrix, *graph.users, adj_out);
            render_matrix_file(matrix, config.log_scale, (out_dir / "matrix.svg").string(),
                               config.label.empty() ? "mention matrix" : config.label + " mention matrix");
        }
    } catch (const std::exception& e) {
        throw fail("stats", e.what(), false);
    }

    // communities, over the complete graph
    try {
        const auto assignment = find_communities(graph, config.seed, config.resolution);
        report.n_communities = assignment.n_communities;
        report.modularity = assignment.modularity;
        auto comm_out = detail::open_output(out_dir / "communities.csv");
        write_communities_csv(graph, assignment, comm_out);
        detail::dump_json(community_summary_to_json(community_summary(graph, assignment)),
                          out_dir / "community_summary.json");
    } catch (const std::exception& e) {
        throw fail("communities", e.what(), false);
    }

    // rings (needs weights)
    try {
        std::vector<TagRing> rings;
        if (config.weighted)
            rings = detect_tag_rings(graph, {config.ring_size, config.ring_weight, config.ring_jaccard});
        report.n_rings = rings.size();
        detail::dump_json(rings_to_json(rings, *graph.users), out_dir / "rings.json");
    } catch (const std::exception& e) {
        throw fail("rings", e.what(), false);
    }

    // summary
    try {
        nlohmann::ordered_json summary;
        summary["label"] = config.label;
        summary["corpus"] = stats_to_json(report.stats, &report.ingest);
        summary["graph"] = {{"nodes", report.built_nodes},
                            {"edges", report.built_edges},
                            {"total_weight", report.built_weight},
                            {"n1_used", graph.n1_used},
                            {"n2_used", graph.n2_used}};
        summary["filtered"] = {{"applied", report.filter_applied},
                               {"min_weight", config.min_weight},
                               {"nodes", report.filtered_nodes},
                               {"edges", report.filtered_edges}};
        summary["communities"] = {{"count", report.n_communities}, {"modularity", report.modularity}};
        summary["rings"] = {{"count", report.n_rings}};
        summary["tail"] = tail_to_json(report.tail, config.tail_method);
        detail::dump_json(summary, out_dir / "summary.json");
    } catch (const std::exception& e) {
        throw fail("summary", e.what(), false);
    }
    return report;
}

} // namespace mentionet
