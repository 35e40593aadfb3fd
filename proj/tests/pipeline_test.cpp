// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 mentionet contributors

#include <filesystem>
#include <string>

#include <catch_amalgamated.hpp>

#include "mentionet/pipeline.hpp"
#include "mentionet/synthgen.hpp"
#include "test_util.hpp"

using namespace mentionet;
namespace fs = std::filesystem;

namespace {

fs::path make_corpus(const fs::path& dir, std::uint64_t seed = 11) {
    PlantedSpec spec;
    spec.n_users = 40;
    spec.n_tweets = 2500;
    spec.mention_rate = 1.0;
    spec.rings.push_back({6, 12});
    spec.communities.push_back({8, 0.5});
    spec.seed = seed;
    const auto path = dir / "corpus.jsonl";
    generate_files(spec, path.string(), (dir / "truth.json").string());
    return path;
}

RunConfig base_config(const fs::path& input, const fs::path& out) {
    RunConfig config;
    config.input = input.string();
    config.out_dir = out.string();
    config.label = "synthland";
    config.n1 = 30;
    config.n2 = 20;
    config.min_weight = 5;
    config.ring_weight = 3;
    config.seed = 7;
    return config;
}

const std::vector<std::string> kArtifacts = {
    "config.json", "users.csv",  "edges.csv",         "degree.csv",
    "ccdf.csv",    "tail.json",  "degree.svg",        "adjacency.csv",
    "matrix.svg",  "communities.csv", "community_summary.json", "rings.json",
    "summary.json"};

} // namespace

TEST_CASE("run_pipeline writes every artifact and a well-formed summary") {
    const auto dir = testutil::fresh_dir("pipe");
    const auto config = base_config(make_corpus(dir), dir / "out");
    const auto report = run_pipeline(config);

    for (const auto& name : kArtifacts) {
        INFO(name);
        CHECK(fs::exists(fs::path(config.out_dir) / name));
    }
    CHECK(!fs::exists(fs::path(config.out_dir) / "FAILED"));

    const auto summary = nlohmann::json::parse(testutil::read_file(fs::path(config.out_dir) / "summary.json"));
    CHECK(summary.at("label") == "synthland");
    CHECK(summary.at("corpus").at("tweets") == 2500);
    CHECK(summary.at("graph").at("edges").get<std::size_t>() == report.built_edges);
    CHECK(summary.at("communities").at("count").get<std::uint32_t>() == report.n_communities);
    CHECK(summary.at("rings").at("count").get<std::size_t>() == report.n_rings);
    CHECK(report.n_rings >= 1); // the planted ring survives the pipeline
    CHECK(summary.at("tail").contains("exponent"));

    const auto archived = nlohmann::json::parse(testutil::read_file(fs::path(config.out_dir) / "config.json"));
    CHECK(archived.at("n1") == 30);
    CHECK(archived.at("min_weight") == 5);
    CHECK(archived.at("seed") == 7);

    fs::remove_all(dir);
}

TEST_CASE("pipeline runs are deterministic end to end") {
    const auto dir = testutil::fresh_dir("pipe_det");
    const auto corpus = make_corpus(dir);
    auto config_a = base_config(corpus, dir / "out_a");
    auto config_b = base_config(corpus, dir / "out_b");
    run_pipeline(config_a);
    run_pipeline(config_b);

    for (const auto& name : kArtifacts) {
        if (name == "config.json") continue; // embeds the differing out_dir
        INFO(name);
        CHECK(testutil::read_file(fs::path(config_a.out_dir) / name) ==
              testutil::read_file(fs::path(config_b.out_dir) / name));
    }
    fs::remove_all(dir);
}

TEST_CASE("empty input fails cleanly at the ingest stage") {
    const auto dir = testutil::fresh_dir("pipe_empty");
    const auto input = dir / "empty.jsonl";
    testutil::write_file(input, "");
    const auto config = base_config(input, dir / "out");

    bool threw = false;
    try {
        run_pipeline(config);
    } catch (const StageError& e) {
        threw = true;
        CHECK(e.stage() == "ingest");
        CHECK(e.is_data_error());
    }
    CHECK(threw);
    CHECK(fs::exists(fs::path(config.out_dir) / "FAILED"));
    CHECK(fs::exists(fs::path(config.out_dir) / "config.json")); // archived before stages run
    const auto marker = testutil::read_file(fs::path(config.out_dir) / "FAILED");
    CHECK(marker.find("ingest") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("a failing run leaves partial outputs and the marker") {
    const auto dir = testutil::fresh_dir("pipe_fail");
    const auto input = dir / "bad.jsonl";
    testutil::write_file(input, "not json at all\nstill not json\n");
    const auto config = base_config(input, dir / "out");
    CHECK_THROWS_AS(run_pipeline(config), StageError);
    CHECK(fs::exists(fs::path(config.out_dir) / "FAILED"));
    fs::remove_all(dir);
}

TEST_CASE("unweighted runs skip the filter and ring stages but keep artifacts") {
    const auto dir = testutil::fresh_dir("pipe_unw");
    auto config = base_config(make_corpus(dir), dir / "out");
    config.weighted = false;
    const auto report = run_pipeline(config);
    CHECK(!report.filter_applied);
    CHECK(report.n_rings == 0);
    CHECK(fs::exists(fs::path(config.out_dir) / "rings.json"));
    const auto rings = nlohmann::json::parse(testutil::read_file(fs::path(config.out_dir) / "rings.json"));
    CHECK(rings.at("n_rings") == 0);
    fs::remove_all(dir);
}

TEST_CASE("date-bounded runs drop records outside the window") {
    const auto dir = testutil::fresh_dir("pipe_dates");
    auto config = base_config(make_corpus(dir), dir / "out");
    // generated corpus starts 2020-03-08 and steps 10s per tweet
    config.from = "2020-03-08T00:30:00Z";
    config.to = "2020-03-08T01:00:00Z";
    const auto report = run_pipeline(config);
    CHECK(report.stats.tweet_count < 2500);
    CHECK(report.stats.tweet_count > 0);
    CHECK(report.ingest.filtered_by_date > 0);
    fs::remove_all(dir);
}

TEST_CASE("strip_rt changes what the pipeline counts") {
    const auto dir = testutil::fresh_dir("pipe_rt");
    std::string lines;
    for (int i = 0; i < 30; ++i) {
        lines += R"({"id":")" + std::to_string(i) +
                 R"(","user":"fan","text":"RT @source: hola @other","created_at":"2020-03-08T00:00:00Z"})" "\n";
    }
    const auto input = dir / "rt.jsonl";
    testutil::write_file(input, lines);

    auto config = base_config(input, dir / "out_keep");
    config.min_weight = 1;
    const auto keep = run_pipeline(config);
    config.out_dir = (dir / "out_strip").string();
    config.strip_rt = true;
    const auto strip = run_pipeline(config);
    CHECK(keep.built_weight == 60);  // both mentions count 30x
    CHECK(strip.built_weight == 30); // the RT-prefix mention is dropped
    fs::remove_all(dir);
}

TEST_CASE("config json captures every knob") {
    RunConfig config;
    config.input = "x.jsonl";
    config.from = "2020-03-08";
    config.n2_rank = RankBy::posts;
    config.tail_method = TailMethod::hill;
    config.matrix_order = MatrixOrdering::by_out_strength;
    const auto j = config_to_json(config);
    CHECK(j.at("format") == "jsonl");
    CHECK(j.at("from") == "2020-03-08");
    CHECK(j.at("to").is_null());
    CHECK(j.at("n2_rank") == "posts");
    CHECK(j.at("tail_method") == "hill");
    CHECK(j.at("matrix_order") == "strength");
    CHECK(j.at("weighted") == true);
}
