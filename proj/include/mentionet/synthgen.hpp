// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 mentionet contributors

#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mentionet/corpus.hpp"
#include "mentionet/rng.hpp"
#include "mentionet/timestamp.hpp"

namespace mentionet {

// Synthetic corpora with planted ground truth. These stand in for the
// real datasets the analyses were designed for: every mention event the
// generator embeds is recorded, so mining and graph construction can be
// checked against an exact oracle.

struct CommunityPlant {
    std::size_t size = 0;
    double internal_mention_prob = 0.0; // per ordered member pair
};

struct RingPlant {
    std::size_t size = 0;
    std::size_t mentions_per_pair = 1; // events per ordered member pair
};

struct PlantedSpec {
    std::size_t n_users = 100;
    std::size_t n_tweets = 1000;
    double activity_zipf_s = 1.2;  // author draw for organic tweets
    double mention_rate = 0.5;     // expected organic mentions per tweet (Poisson, capped)
    std::vector<CommunityPlant> communities;
    std::vector<RingPlant> rings;
    double noise_edge_prob = 0.0;  // extra random events per planted structural event
    std::uint64_t seed = 1;
};

enum class EventKind : std::uint8_t { organic = 0, community = 1, ring = 2, noise = 3 };

struct PlantedEvent {
    std::uint32_t author;
    std::uint32_t target;
    std::uint32_t tweet_index; // position in the emitted corpus
    EventKind kind;
};

struct PlantedTruth {
    std::vector<std::string> handles;     // user index -> handle
    std::vector<std::int32_t> community_of; // -1 when unassigned
    std::vector<std::int32_t> ring_of;      // -1 when unassigned
    std::vector<std::uint64_t> post_counts; // authored tweets per user
    std::vector<PlantedEvent> events;       // the exact embedded mention multiset
};

struct SynthCorpus {
    std::vector<TweetRecord> records;
    PlantedTruth truth;
};

namespace detail {

inline constexpr std::size_t kMaxMentionsPerTweet = 5;

inline const std::vector<std::string>& filler_words() {
    static const std::vector<std::string> words = {
        "hola",  "gracias", "salud",  "hoy",    "noticias", "info",   "apoyo",  "fuerza",
        "animo", "cuidate", "manana", "siempre", "atencion", "ciudad", "juntos", "vamos"};
    return words;
}

inline std::string pad_number(std::uint64_t value, int width) {
    std::string digits = std::to_string(value);
    if (static_cast<int>(digits.size()) < width)
        digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
    return digits;
}

inline int digits_for(std::size_t max_value) {
    int width = 1;
    while (max_value >= 10) {
        max_value /= 10;
        ++width;
    }
    return width;
}

inline void json_escape_into(std::string& out, const std::string& s) {
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
}

} // namespace detail

/// Generate the corpus and its truth in memory. Deterministic per seed:
/// same spec + seed means identical records and events.
///
/// Layout: ring blocks first, then community blocks, then free users.
/// Structural events (ring pairs, community pairs, noise) are packed into
/// tweets authored by their source user; the remaining tweet budget is
/// organic traffic with Zipf-distributed authors and uniform targets.
/// Tweet order is a seeded shuffle of all of these.
inline SynthCorpus generate(const PlantedSpec& spec) {
    std::size_t planted_users = 0;
    for (const auto& r : spec.rings) planted_users += r.size;
    for (const auto& c : spec.communities) planted_users += c.size;
    if (planted_users > spec.n_users)
        throw std::invalid_argument("synthgen: ring and community sizes exceed n_users");
    for (const auto& c : spec.communities)
        if (c.internal_mention_prob < 0.0 || c.internal_mention_prob > 1.0)
            throw std::invalid_argument("synthgen: internal_mention_prob must be within [0, 1]");
    if (spec.noise_edge_prob < 0.0)
        throw std::invalid_argument("synthgen: noise_edge_prob must be >= 0");
    if (spec.mention_rate < 0.0)
        throw std::invalid_argument("synthgen: mention_rate must be >= 0");
    if (spec.n_users == 0) throw std::invalid_argument("synthgen: n_users must be >= 1");

    SynthCorpus out;
    auto& truth = out.truth;
    const int handle_width = detail::digits_for(spec.n_users - 1);
    truth.handles.reserve(spec.n_users);
    for (std::size_t u = 0; u < spec.n_users; ++u)
        truth.handles.push_back("u" + detail::pad_number(u, handle_width));
    truth.community_of.assign(spec.n_users, -1);
    truth.ring_of.assign(spec.n_users, -1);
    truth.post_counts.assign(spec.n_users, 0);

    std::size_t cursor = 0;
    std::vector<std::vector<std::uint32_t>> ring_members, community_members;
    for (std::size_t r = 0; r < spec.rings.size(); ++r) {
        std::vector<std::uint32_t> members;
        for (std::size_t k = 0; k < spec.rings[r].size; ++k) {
            truth.ring_of[cursor] = static_cast<std::int32_t>(r);
            members.push_back(static_cast<std::uint32_t>(cursor++));
        }
        ring_members.push_back(std::move(members));
    }
    for (std::size_t c = 0; c < spec.communities.size(); ++c) {
        std::vector<std::uint32_t> members;
        for (std::size_t k = 0; k < spec.communities[c].size; ++k) {
            truth.community_of[cursor] = static_cast<std::int32_t>(c);
            members.push_back(static_cast<std::uint32_t>(cursor++));
        }
        community_members.push_back(std::move(members));
    }

    Rng rng(spec.seed);

    // Structural events, before tweet assignment.
    struct RawEvent {
        std::uint32_t author, target;
        EventKind kind;
    };
    std::vector<RawEvent> structural;
    for (std::size_t r = 0; r < ring_members.size(); ++r) {
        const auto& members = ring_members[r];
        for (const std::uint32_t u : members)
            for (const std::uint32_t v : members)
                if (u != v)
                    for (std::size_t k = 0; k < spec.rings[r].mentions_per_pair; ++k)
                        structural.push_back({u, v, EventKind::ring});
    }
    for (std::size_t c = 0; c < community_members.size(); ++c) {
        const auto& members = community_members[c];
        for (const std::uint32_t u : members)
            for (const std::uint32_t v : members)
                if (u != v && rng.bernoulli(spec.communities[c].internal_mention_prob))
                    structural.push_back({u, v, EventKind::community});
    }
    const auto n_noise = static_cast<std::size_t>(spec.noise_edge_prob *
                                                  static_cast<double>(structural.size()));
    for (std::size_t k = 0; k < n_noise && spec.n_users > 1; ++k) {
        const auto u = static_cast<std::uint32_t>(rng.below(spec.n_users));
        std::uint32_t v;
        do {
            v = static_cast<std::uint32_t>(rng.below(spec.n_users));
        } while (v == u);
        structural.push_back({u, v, EventKind::noise});
    }

    std::vector<std::vector<RawEvent>> queue(spec.n_users);
    for (const auto& ev : structural) queue[ev.author].push_back(ev);

    // A tweet is an author plus the events it will carry.
    struct TweetDraft {
        std::uint32_t author;
        std::vector<RawEvent> events;
    };
    std::vector<TweetDraft> drafts;
    for (std::uint32_t u = 0; u < spec.n_users; ++u) {
        auto& pending = queue[u];
        for (std::size_t start = 0; start < pending.size(); start += detail::kMaxMentionsPerTweet) {
            TweetDraft draft{u, {}};
            const std::size_t end = std::min(pending.size(), start + detail::kMaxMentionsPerTweet);
            draft.events.assign(pending.begin() + start, pending.begin() + end);
            drafts.push_back(std::move(draft));
        }
    }
    if (drafts.size() > spec.n_tweets)
        throw std::invalid_argument("synthgen: n_tweets too small for the planted events (need >= " +
                                    std::to_string(drafts.size()) + ")");

    const std::size_t n_organic = spec.n_tweets - drafts.size();
    if (n_organic > 0) {
        const ZipfSampler activity(spec.n_users, spec.activity_zipf_s);
        for (std::size_t t = 0; t < n_organic; ++t) {
            TweetDraft draft{static_cast<std::uint32_t>(activity.draw(rng)), {}};
            const std::uint64_t k =
                std::min<std::uint64_t>(rng.poisson(spec.mention_rate), detail::kMaxMentionsPerTweet);
            for (std::uint64_t j = 0; j < k && spec.n_users > 1; ++j) {
                std::uint32_t v;
                do {
                    v = static_cast<std::uint32_t>(rng.below(spec.n_users));
                } while (v == draft.author);
                draft.events.push_back({draft.author, v, EventKind::organic});
            }
            drafts.push_back(std::move(draft));
        }
    }

    rng.shuffle(drafts);

    const std::int64_t start_ts = *parse_rfc3339("2020-03-08T00:00:00Z");
    const int id_width = spec.n_tweets > 0 ? detail::digits_for(spec.n_tweets - 1) : 1;
    out.records.reserve(drafts.size());
    truth.events.reserve(structural.size());
    const auto& fillers = detail::filler_words();
    for (std::size_t i = 0; i < drafts.size(); ++i) {
        const auto& draft = drafts[i];
        TweetRecord rec;
        rec.id = "t" + detail::pad_number(i, id_width);
        rec.author = truth.handles[draft.author];
        rec.created_at = start_ts + static_cast<std::int64_t>(i) * 10;
        ++truth.post_counts[draft.author];

        std::string text;
        const std::size_t n_fillers = 1 + rng.below(3);
        for (std::size_t f = 0; f < n_fillers; ++f) {
            if (f) text += ' ';
            text += fillers[rng.below(fillers.size())];
        }
        for (const auto& ev : draft.events) {
            text += " @";
            std::string handle = truth.handles[ev.target];
            if (rng.bernoulli(0.2)) handle[0] = static_cast<char>(handle[0] - 32); // exercise case folding
            text += handle;
            truth.events.push_back({ev.author, ev.target, static_cast<std::uint32_t>(i), ev.kind});
        }
        rec.text = std::move(text);
        out.records.push_back(std::move(rec));
    }

    std::sort(truth.events.begin(), truth.events.end(), [](const PlantedEvent& a, const PlantedEvent& b) {
        if (a.tweet_index != b.tweet_index) return a.tweet_index < b.tweet_index;
        if (a.target != b.target) return a.target < b.target;
        return a.kind < b.kind;
    });
    return out;
}

/// One JSON object per line, keys id/user/text/created_at.
inline void write_corpus_jsonl(const std::vector<TweetRecord>& records, std::ostream& os) {
    std::string line;
    for (const auto& rec : records) {
        line.clear();
        line += "{\"id\":\"";
        detail::json_escape_into(line, rec.id);
        line += "\",\"user\":\"";
        detail::json_escape_into(line, rec.author);
        line += "\",\"text\":\"";
        detail::json_escape_into(line, rec.text);
        line += "\",\"created_at\":\"";
        line += format_rfc3339(rec.created_at);
        line += "\"}\n";
        os << line;
    }
}

/// Truth as JSON with a stable key order; events as compact
/// [author, target, tweet_index, kind] rows.
inline void write_truth_json(const PlantedTruth& truth, std::ostream& os) {
    os << "{\n\"n_users\":" << truth.handles.size() << ",\n";
    os << "\"handles\":[";
    for (std::size_t i = 0; i < truth.handles.size(); ++i)
        os << (i ? ",\"" : "\"") << truth.handles[i] << '"';
    os << "],\n\"community_of\":[";
    for (std::size_t i = 0; i < truth.community_of.size(); ++i)
        os << (i ? "," : "") << truth.community_of[i];
    os << "],\n\"ring_of\":[";
    for (std::size_t i = 0; i < truth.ring_of.size(); ++i) os << (i ? "," : "") << truth.ring_of[i];
    os << "],\n\"post_counts\":[";
    for (std::size_t i = 0; i < truth.post_counts.size(); ++i)
        os << (i ? "," : "") << truth.post_counts[i];
    os << "],\n\"event_count\":" << truth.events.size() << ",\n\"events\":[";
    for (std::size_t i = 0; i < truth.events.size(); ++i) {
        const auto& e = truth.events[i];
        os << (i ? ",\n" : "\n") << '[' << e.author << ',' << e.target << ',' << e.tweet_index << ','
           << static_cast<int>(e.kind) << ']';
    }
    os << "\n]\n}\n";
}

inline void generate_files(const PlantedSpec& spec, const std::string& corpus_path,
                           const std::string& truth_path) {
    const SynthCorpus synth = generate(spec);
    std::ofstream corpus_out(corpus_path, std::ios::binary);
    if (!corpus_out) throw std::runtime_error("cannot write " + corpus_path);
    write_corpus_jsonl(synth.records, corpus_out);
    std::ofstream truth_out(truth_path, std::ios::binary);
    if (!truth_out) throw std::runtime_error("cannot write " + truth_path);
    write_truth_json(synth.truth, truth_out);
}

/// Spec from a JSON document (the CLI's --spec file). Unknown keys are an
/// error so typos do not silently fall back to defaults.
inline PlantedSpec spec_from_json(const nlohmann::json& j) {
    PlantedSpec spec;
    static const std::vector<std::string> known = {
        "n_users", "n_tweets", "activity_zipf_s", "mention_rate",
        "communities", "rings", "noise_edge_prob", "seed"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw std::invalid_argument("synthgen spec: unknown key \"" + key + "\"");
    }
    spec.n_users = j.value("n_users", spec.n_users);
    spec.n_tweets = j.value("n_tweets", spec.n_tweets);
    spec.activity_zipf_s = j.value("activity_zipf_s", spec.activity_zipf_s);
    spec.mention_rate = j.value("mention_rate", spec.mention_rate);
    spec.noise_edge_prob = j.value("noise_edge_prob", spec.noise_edge_prob);
    spec.seed = j.value("seed", spec.seed);
    if (j.contains("communities"))
        for (const auto& c : j.at("communities"))
            spec.communities.push_back(
                {c.at("size").get<std::size_t>(), c.at("internal_mention_prob").get<double>()});
    if (j.contains("rings"))
        for (const auto& r : j.at("rings"))
            spec.rings.push_back(
                {r.at("size").get<std::size_t>(), r.at("mentions_per_pair").get<std::size_t>()});
    return spec;
}

inline nlohmann::ordered_json spec_to_json(const PlantedSpec& spec) {
    nlohmann::ordered_json j;
    j["n_users"] = spec.n_users;
    j["n_tweets"] = spec.n_tweets;
    j["activity_zipf_s"] = spec.activity_zipf_s;
    j["mention_rate"] = spec.mention_rate;
    j["communities"] = nlohmann::ordered_json::array();
    for (const auto& c : spec.communities)
        j["communities"].push_back({{"size", c.size}, {"internal_mention_prob", c.internal_mention_prob}});
    j["rings"] = nlohmann::ordered_json::array();
    for (const auto& r : spec.rings)
        j["rings"].push_back({{"size", r.size}, {"mentions_per_pair", r.mentions_per_pair}});
    j["noise_edge_prob"] = spec.noise_edge_prob;
    j["seed"] = spec.seed;
    return j;
}

} // namespace mentionet
