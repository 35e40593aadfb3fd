// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 mentionet contributors

// mentionet command line: mention-network mining and analysis over tweet
// corpora. Subcommands mirror the pipeline stages; `run` executes the
// whole thing. Exit codes: 0 success, 1 usage, 2 data error, 3 internal.

#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mentionet/pipeline.hpp"
#include "mentionet/synthgen.hpp"

namespace {

using namespace mentionet;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

struct CommonFlags {
    RunConfig config;
    std::string format = "jsonl";
    std::string n2_rank = "mentions";
    std::string from, to;
    bool unweighted = false;
    bool self_loops = false;
    bool degree_unweighted = false;
};

void add_input_flags(CLI::App& cmd, CommonFlags& flags) {
    cmd.add_option("--input", flags.config.input, "input corpus file")->required();
    cmd.add_option("--format", flags.format, "input format: jsonl|csv")
        ->check(CLI::IsMember({"jsonl", "csv"}));
    cmd.add_option("--from", flags.from, "start of closed date range (RFC 3339 or YYYY-MM-DD)");
    cmd.add_option("--to", flags.to, "end of closed date range (RFC 3339 or YYYY-MM-DD)");
    cmd.add_option("--label", flags.config.label, "corpus label, e.g. country name");
    cmd.add_option("--threads", flags.config.threads, "worker cap for parse/extract stages");
    cmd.add_flag("--strip-rt", flags.config.strip_rt, "ignore the mention in a leading \"RT @user\"");
    cmd.add_option("--max-malformed", flags.config.max_malformed_ratio,
                   "abort when the malformed-line ratio exceeds this");
}

void add_build_flags(CLI::App& cmd, CommonFlags& flags) {
    cmd.add_option("--n1", flags.config.n1, "top-N1 posters form the edge sources");
    cmd.add_option("--n2", flags.config.n2, "top-N2 mention targets form the edge targets");
    cmd.add_flag("--unweighted", flags.unweighted, "drop weights (every edge weight becomes 1)");
    cmd.add_flag("--self-loops", flags.self_loops, "keep self-mention edges");
    cmd.add_option("--n2-rank", flags.n2_rank, "rank the target side by: mentions|posts")
        ->check(CLI::IsMember({"mentions", "posts"}));
}

void finalize(CommonFlags& flags) {
    if (auto f = parse_format(flags.format)) flags.config.format = *f;
    flags.config.weighted = !flags.unweighted;
    flags.config.include_self_loops = flags.self_loops;
    flags.config.n2_rank = flags.n2_rank == "posts" ? RankBy::posts : RankBy::mentions;
    if (!flags.from.empty()) flags.config.from = flags.from;
    if (!flags.to.empty()) flags.config.to = flags.to;
    if (flags.degree_unweighted) flags.config.degree_strength = false;
}

IngestOptions ingest_options(const RunConfig& config) {
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
    return opts;
}

struct Loaded {
    Corpus corpus;
    MiningResult mining;
    MentionGraph graph;
};

Loaded load_graph(const RunConfig& config) {
    Loaded loaded;
    loaded.corpus = ingest_file(config.input, ingest_options(config));
    if (loaded.corpus.records.empty()) throw IngestError("no usable records in " + config.input);
    loaded.mining = mine_mentions(loaded.corpus, {config.strip_rt, config.threads});
    BuildConfig build;
    build.n1 = config.n1;
    build.n2 = config.n2;
    build.weighted = config.weighted;
    build.include_self_loops = config.include_self_loops;
    build.n2_rank = config.n2_rank;
    loaded.graph = build_graph(loaded.mining, build);
    if (loaded.graph.n1_used < config.n1 || loaded.graph.n2_used < config.n2)
        std::cerr << "note: population smaller than requested, using n1=" << loaded.graph.n1_used
                  << " n2=" << loaded.graph.n2_used << "\n";
    return loaded;
}

std::filesystem::path ensure_out_dir(const std::string& out) {
    if (out.empty()) throw std::invalid_argument("--out is required");
    std::filesystem::path dir(out);
    std::filesystem::create_directories(dir);
    return dir;
}

int cmd_ingest_stats(const CommonFlags& flags) {
    const auto corpus = ingest_file(flags.config.input, ingest_options(flags.config));
    const auto stats = corpus_stats(corpus, flags.config.label);
    std::cout << stats_to_json(stats, &corpus.report).dump(2) << "\n";
    return kExitOk;
}

int cmd_build(const CommonFlags& flags) {
    const auto dir = ensure_out_dir(flags.config.out_dir);
    const auto loaded = load_graph(flags.config);
    {
        std::ofstream users_out(dir / "users.csv", std::ios::binary);
        write_users_csv(*loaded.mining.users, users_out);
        std::ofstream edges_out(dir / "edges.csv", std::ios::binary);
        write_edges_csv(loaded.graph, edges_out);
    }
    std::cerr << "built graph: " << loaded.graph.node_count() << " nodes, "
              << loaded.graph.edge_count() << " edges, total weight "
              << loaded.graph.total_weight() << "\n";
    return kExitOk;
}

int cmd_analyze(const CommonFlags& flags, bool linear_color) {
    const auto dir = ensure_out_dir(flags.config.out_dir);
    const RunConfig& config = flags.config;
    const auto loaded = load_graph(config);

    const auto dist = degree_sequence(loaded.graph, config.degree_kind, config.degree_strength);
    {
        std::ofstream degree_out(dir / "degree.csv", std::ios::binary);
        write_degree_csv(dist, degree_out);
        std::ofstream ccdf_out(dir / "ccdf.csv", std::ios::binary);
        write_ccdf_csv(ccdf(dist), ccdf_out);
    }
    const auto tail = tail_exponent(dist, std::nullopt, config.tail_method);
    {
        std::ofstream tail_out(dir / "tail.json", std::ios::binary);
        tail_out << tail_to_json(tail, config.tail_method).dump(2) << "\n";
    }
    render_degree_plot_file(dist, true, (dir / "degree.svg").string(), &tail);

    const auto filtered = config.weighted ? filter_edges(loaded.graph, config.min_weight) : loaded.graph;
    if (filtered.node_count() > 0) {
        const auto matrix = to_adjacency(filtered, config.matrix_order, nullptr, config.adjacency_cap);
        std::ofstream adj_out(dir / "adjacency.csv", std::ios::binary);
        write_adjacency_csv(matrix, *loaded.graph.users, adj_out);
        render_matrix_file(matrix, !linear_color, (dir / "matrix.svg").string(), config.label);
    } else {
        std::cerr << "note: filter at min_weight=" << config.min_weight
                  << " left no nodes; matrix artifacts skipped\n";
    }
    return kExitOk;
}

int cmd_communities(const CommonFlags& flags) {
    const auto dir = ensure_out_dir(flags.config.out_dir);
    const auto loaded = load_graph(flags.config);
    const auto assignment = find_communities(loaded.graph, flags.config.seed, flags.config.resolution);
    {
        std::ofstream comm_out(dir / "communities.csv", std::ios::binary);
        write_communities_csv(loaded.graph, assignment, comm_out);
        std::ofstream summary_out(dir / "community_summary.json", std::ios::binary);
        summary_out << community_summary_to_json(community_summary(loaded.graph, assignment)).dump(2)
                    << "\n";
    }
    std::cerr << "communities: " << assignment.n_communities
              << ", modularity: " << assignment.modularity << "\n";
    return kExitOk;
}

int cmd_rings(const CommonFlags& flags) {
    const auto dir = ensure_out_dir(flags.config.out_dir);
    const auto loaded = load_graph(flags.config);
    const auto rings = detect_tag_rings(
        loaded.graph, {flags.config.ring_size, flags.config.ring_weight, flags.config.ring_jaccard});
    {
        std::ofstream rings_out(dir / "rings.json", std::ios::binary);
        rings_out << rings_to_json(rings, *loaded.graph.users).dump(2) << "\n";
    }
    std::cerr << "rings found: " << rings.size() << "\n";
    return kExitOk;
}

int run_one(RunConfig config) {
    const auto report = run_pipeline(config);
    std::cerr << "run complete: " << report.built_edges << " edges, " << report.n_communities
              << " communities, " << report.n_rings << " rings -> " << config.out_dir << "\n";
    return kExitOk;
}

int cmd_run(const CommonFlags& flags, const std::string& manifest_path) {
    if (manifest_path.empty()) return run_one(flags.config);

    std::ifstream manifest_in(manifest_path);
    if (!manifest_in) throw IngestError("cannot open manifest: " + manifest_path);
    nlohmann::json manifest = nlohmann::json::parse(manifest_in, nullptr, false);
    if (manifest.is_discarded() || !manifest.is_object())
        throw IngestError("manifest must be a JSON object of label -> input path");

    std::map<std::string, std::string> entries;
    for (const auto& [label, path] : manifest.items()) {
        if (!path.is_string()) throw IngestError("manifest value for \"" + label + "\" must be a path");
        entries[label] = path.get<std::string>();
    }
    const std::filesystem::path base(flags.config.out_dir.empty() ? "." : flags.config.out_dir);
    for (const auto& [label, input] : entries) {
        RunConfig config = flags.config;
        config.label = label;
        config.input = input;
        config.out_dir = (base / label).string();
        std::cerr << "=== " << label << " ===\n";
        run_one(config);
    }
    return kExitOk;
}

int cmd_synth(const std::string& spec_path, PlantedSpec spec,
              const std::vector<std::string>& ring_specs,
              const std::vector<std::string>& community_specs, const std::string& out) {
    if (!spec_path.empty()) {
        std::ifstream in(spec_path);
        if (!in) throw IngestError("cannot open spec file: " + spec_path);
        const auto j = nlohmann::json::parse(in, nullptr, false);
        if (j.is_discarded()) throw IngestError("spec file is not valid JSON: " + spec_path);
        spec = spec_from_json(j);
    }
    for (const auto& rs : ring_specs) {
        const auto colon = rs.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("--ring expects SIZE:MENTIONS_PER_PAIR, got " + rs);
        spec.rings.push_back({std::stoul(rs.substr(0, colon)), std::stoul(rs.substr(colon + 1))});
    }
    for (const auto& cs : community_specs) {
        const auto colon = cs.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("--community expects SIZE:INTERNAL_PROB, got " + cs);
        spec.communities.push_back({std::stoul(cs.substr(0, colon)), std::stod(cs.substr(colon + 1))});
    }
    const auto dir = ensure_out_dir(out);
    generate_files(spec, (dir / "synth_corpus.jsonl").string(), (dir / "truth.json").string());
    std::cerr << "wrote " << (dir / "synth_corpus.jsonl").string() << " and "
              << (dir / "truth.json").string() << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mention-network mining and analysis for tweet corpora"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string manifest_path;
    bool linear_color = false;

    auto* ingest_cmd = app.add_subcommand("ingest-stats", "ingest a corpus and print dataset stats");
    add_input_flags(*ingest_cmd, flags);

    auto* build_cmd = app.add_subcommand("build", "build the mention graph and dump users/edges CSVs");
    add_input_flags(*build_cmd, flags);
    add_build_flags(*build_cmd, flags);
    build_cmd->add_option("--out", flags.config.out_dir, "output directory")->required();

    auto* analyze_cmd =
        app.add_subcommand("analyze", "degree/CCDF/tail stats and adjacency heatmap");
    add_input_flags(*analyze_cmd, flags);
    add_build_flags(*analyze_cmd, flags);
    analyze_cmd->add_option("--out", flags.config.out_dir, "output directory")->required();
    analyze_cmd->add_option("--min-weight", flags.config.min_weight,
                            "keep edges with weight strictly greater than this before rendering");
    analyze_cmd->add_flag("--linear-color", linear_color, "linear color scale instead of log1p");
    analyze_cmd
        ->add_option("--tail-method", flags.config.tail_method,
                     "tail fit: least-squares log-log regression or Hill MLE")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, TailMethod>{{"ls", TailMethod::least_squares},
                                              {"hill", TailMethod::hill}}));
    analyze_cmd
        ->add_option("--degree-kind", flags.config.degree_kind, "which degree to histogram")
        ->transform(CLI::CheckedTransformer(std::map<std::string, DegreeKind>{
            {"in", DegreeKind::in}, {"out", DegreeKind::out}, {"total", DegreeKind::total}}));
    analyze_cmd->add_flag("--degree-unweighted", flags.degree_unweighted,
                          "histogram plain degrees instead of strengths");
    analyze_cmd
        ->add_option("--order", flags.config.matrix_order, "matrix row/column ordering")
        ->transform(CLI::CheckedTransformer(std::map<std::string, MatrixOrdering>{
            {"id", MatrixOrdering::by_id}, {"strength", MatrixOrdering::by_out_strength}}));

    auto* communities_cmd = app.add_subcommand("communities", "detect communities on the complete graph");
    add_input_flags(*communities_cmd, flags);
    add_build_flags(*communities_cmd, flags);
    communities_cmd->add_option("--out", flags.config.out_dir, "output directory")->required();
    communities_cmd->add_option("--seed", flags.config.seed, "seed for the node visit order");
    communities_cmd->add_option("--resolution", flags.config.resolution, "modularity resolution");

    auto* rings_cmd = app.add_subcommand("rings", "detect constant-tagging rings");
    add_input_flags(*rings_cmd, flags);
    add_build_flags(*rings_cmd, flags);
    rings_cmd->add_option("--out", flags.config.out_dir, "output directory")->required();
    rings_cmd->add_option("--ring-size", flags.config.ring_size, "minimum targets per ring");
    rings_cmd->add_option("--ring-weight", flags.config.ring_weight,
                          "minimum edge weight that counts as constant tagging");
    rings_cmd->add_option("--ring-jaccard", flags.config.ring_jaccard,
                          "minimum source-set Jaccard similarity");

    auto* run_cmd = app.add_subcommand("run", "full pipeline: ingest, mine, build, filter, stats, "
                                              "communities, rings");
    add_input_flags(*run_cmd, flags);
    add_build_flags(*run_cmd, flags);
    run_cmd->add_option("--out", flags.config.out_dir, "output directory")->required();
    run_cmd->add_option("--min-weight", flags.config.min_weight, "edge filter threshold (strict >)");
    run_cmd->add_option("--seed", flags.config.seed, "seed for seeded stages");
    run_cmd->add_option("--resolution", flags.config.resolution, "modularity resolution");
    run_cmd->add_option("--ring-size", flags.config.ring_size, "minimum targets per ring");
    run_cmd->add_option("--ring-weight", flags.config.ring_weight, "ring edge-weight floor");
    run_cmd->add_option("--ring-jaccard", flags.config.ring_jaccard, "ring Jaccard threshold");
    run_cmd->add_option("--manifest", manifest_path,
                        "JSON object of label -> input file; runs each into out/<label>/");
    run_cmd->get_option("--input")->required(false); // manifest mode brings its own inputs

    std::string synth_spec_path, synth_out;
    std::vector<std::string> synth_rings, synth_communities;
    PlantedSpec synth_spec;
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic corpus with planted truth");
    synth_cmd->add_option("--spec", synth_spec_path, "JSON spec file (overrides the flags below)");
    synth_cmd->add_option("--users", synth_spec.n_users, "number of users");
    synth_cmd->add_option("--tweets", synth_spec.n_tweets, "number of tweets");
    synth_cmd->add_option("--zipf-s", synth_spec.activity_zipf_s, "author activity Zipf exponent");
    synth_cmd->add_option("--mention-rate", synth_spec.mention_rate,
                          "expected organic mentions per tweet");
    synth_cmd->add_option("--noise", synth_spec.noise_edge_prob,
                          "noise events per planted structural event");
    synth_cmd->add_option("--seed", synth_spec.seed, "generator seed");
    synth_cmd->add_option("--ring", synth_rings, "planted ring SIZE:MENTIONS_PER_PAIR (repeatable)");
    synth_cmd->add_option("--community", synth_communities,
                          "planted community SIZE:INTERNAL_PROB (repeatable)");
    synth_cmd->add_option("--out", synth_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        finalize(flags);
        if (ingest_cmd->parsed()) return cmd_ingest_stats(flags);
        if (build_cmd->parsed()) return cmd_build(flags);
        if (analyze_cmd->parsed()) return cmd_analyze(flags, linear_color);
        if (communities_cmd->parsed()) return cmd_communities(flags);
        if (rings_cmd->parsed()) return cmd_rings(flags);
        if (run_cmd->parsed()) {
            if (manifest_path.empty() && flags.config.input.empty())
                throw std::invalid_argument("run needs --input or --manifest");
            return cmd_run(flags, manifest_path);
        }
        if (synth_cmd->parsed())
            return cmd_synth(synth_spec_path, synth_spec, synth_rings, synth_communities, synth_out);
        return kExitUsage;
    } catch (const StageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.is_data_error() ? kExitData : kExitInternal;
    } catch (const IngestError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
