// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 mentionet contributors

#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mentionet/handle.hpp"
#include "mentionet/timestamp.hpp"

namespace mentionet {

enum class InputFormat { jsonl, csv };

inline const char* to_string(InputFormat f) { return f == InputFormat::jsonl ? "jsonl" : "csv"; }

inline std::optional<InputFormat> parse_format(std::string_view s) {
    if (s == "jsonl") return InputFormat::jsonl;
    if (s == "csv") return InputFormat::csv;
    return std::nullopt;
}

/// One authored post. author is trimmed of any leading '@' but keeps its
/// original case; identity normalization happens at mining time.
struct TweetRecord {
    std::string id;
    std::string author;
    std::string text;
    std::int64_t created_at = 0; // epoch seconds, UTC
};

struct ParseResult {
    std::optional<TweetRecord> record;
    std::string error; // set iff record is empty
};

/// Raised for unreadable sources and for corpora whose malformed-line
/// ratio exceeds the configured threshold.
class IngestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

// RFC 4180-ish CSV splitting: quoted fields, doubled quotes inside quotes.
inline bool split_csv_row(std::string_view line, std::vector<std::string>& fields, std::string& error) {
    fields.clear();
    std::string cur;
    bool quoted = false;
    std::size_t i = 0;
    while (i < line.size()) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
        ++i;
    }
    if (quoted) {
        error = "unterminated quoted field";
        return false;
    }
    fields.push_back(std::move(cur));
    return true;
}

inline std::string strip_leading_at(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    while (b < e && s[b] == '@') ++b;
    return std::string(s.substr(b, e - b));
}

} // namespace detail

/// Parse one line in the declared format. JSONL keys: id, user, text,
/// created_at (RFC 3339), optional place ignored. CSV columns in the same
/// order; the header row is the caller's business.
inline ParseResult parse_record(std::string_view line, InputFormat format) {
    ParseResult res;
    std::string id, user, text, created;
    if (format == InputFormat::jsonl) {
        const auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            res.error = "malformed json";
            return res;
        }
        for (const char* key : {"id", "user", "text", "created_at"}) {
            if (!j.contains(key)) {
                res.error = std::string("missing field \"") + key + "\"";
                return res;
            }
        }
        const auto& jid = j["id"];
        if (jid.is_string())
            id = jid.get<std::string>();
        else if (jid.is_number_integer())
            id = std::to_string(jid.get<std::int64_t>());
        else {
            res.error = "field \"id\" must be a string";
            return res;
        }
        if (!j["user"].is_string() || !j["text"].is_string() || !j["created_at"].is_string()) {
            res.error = "fields \"user\", \"text\", \"created_at\" must be strings";
            return res;
        }
        user = j["user"].get<std::string>();
        text = j["text"].get<std::string>();
        created = j["created_at"].get<std::string>();
    } else {
        std::vector<std::string> fields;
        std::string err;
        if (!detail::split_csv_row(line, fields, err)) {
            res.error = err;
            return res;
        }
        if (fields.size() < 4) {
            res.error = "expected at least 4 columns (id,user,text,created_at)";
            return res;
        }
        id = fields[0];
        user = fields[1];
        text = fields[2];
        created = fields[3];
    }

    if (id.empty()) {
        res.error = "empty field \"id\"";
        return res;
    }
    std::string author = detail::strip_leading_at(user);
    if (author.empty()) {
        res.error = "empty field \"user\"";
        return res;
    }
    const auto ts = parse_rfc3339(created);
    if (!ts) {
        res.error = "invalid timestamp \"" + created + "\"";
        return res;
    }
    res.record = TweetRecord{std::move(id), std::move(author), std::move(text), *ts};
    return res;
}

struct LineError {
    std::size_t line_no = 0; // 1-based
    std::string message;
};

struct IngestOptions {
    InputFormat format = InputFormat::jsonl;
    std::optional<std::int64_t> from; // closed interval, epoch seconds
    std::optional<std::int64_t> to;
    double max_malformed_ratio = 0.10;
    unsigned threads = 1;
};

struct IngestReport {
    std::size_t lines_read = 0;
    std::size_t blank_lines = 0;
    std::size_t parsed = 0;
    std::size_t skipped_malformed = 0;
    std::size_t filtered_by_date = 0;
    std::vector<LineError> sample_errors; // first few, for diagnostics
};

struct Corpus {
    std::vector<TweetRecord> records;
    IngestReport report;
};

namespace detail {

inline constexpr std::size_t kMaxSampleErrors = 10;

struct LineIndex {
    std::string data;                      // whole source
    std::vector<std::pair<std::size_t, std::size_t>> lines; // offset, length (no newline)
};

inline LineIndex index_lines(std::istream& in) {
    LineIndex idx;
    std::ostringstream buf;
    buf << in.rdbuf();
    idx.data = std::move(buf).str();
    std::size_t start = 0;
    const std::string& d = idx.data;
    for (std::size_t i = 0; i <= d.size(); ++i) {
        if (i == d.size() || d[i] == '\n') {
            std::size_t len = i - start;
            if (len > 0 && d[start + len - 1] == '\r') --len;
            if (!(i == d.size() && len == 0)) idx.lines.emplace_back(start, len);
            start = i + 1;
        }
    }
    return idx;
}

struct ChunkResult {
    std::vector<TweetRecord> records;
    std::vector<LineError> errors; // all of them; merged and sampled later
    std::size_t blank = 0;
    std::size_t filtered = 0;
};

inline void parse_chunk(const LineIndex& idx, std::size_t begin, std::size_t end,
                        const IngestOptions& opt, ChunkResult& out) {
    for (std::size_t li = begin; li < end; ++li) {
        const auto [off, len] = idx.lines[li];
        const std::string_view line(idx.data.data() + off, len);
        if (line.empty()) {
            ++out.blank;
            continue;
        }
        auto parsed = parse_record(line, opt.format);
        if (!parsed.record) {
            out.errors.push_back({li + 1, std::move(parsed.error)});
            continue;
        }
        const std::int64_t ts = parsed.record->created_at;
        if ((opt.from && ts < *opt.from) || (opt.to && ts > *opt.to)) {
            ++out.filtered;
            continue;
        }
        out.records.push_back(std::move(*parsed.record));
    }
}

} // namespace detail

/// Ingest a record stream: parse every line, skip-and-count malformed ones,
/// apply the closed [from, to] date filter, preserve source order. Aborts
/// (IngestError) when the malformed ratio exceeds the configured threshold.
/// Partitioned across threads by line chunk; the merge keeps source order,
/// so the result is independent of the thread count.
inline Corpus ingest_stream(std::istream& in, const IngestOptions& options = {}) {
    if (options.from && options.to && *options.from > *options.to)
        throw IngestError("ingest: date range is inverted (from > to)");

    const auto idx = detail::index_lines(in);
    const std::size_t n_lines = idx.lines.size();

    unsigned threads = options.threads == 0 ? 1 : options.threads;
    if (threads > 1 && n_lines < 2048) threads = 1; // not worth the fan-out
    std::vector<detail::ChunkResult> chunks(threads);

    if (threads == 1) {
        detail::parse_chunk(idx, 0, n_lines, options, chunks[0]);
    } else {
        std::vector<std::thread> workers;
        const std::size_t per = (n_lines + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t begin = std::min<std::size_t>(t * per, n_lines);
            const std::size_t end = std::min<std::size_t>(begin + per, n_lines);
            workers.emplace_back(detail::parse_chunk, std::cref(idx), begin, end,
                                 std::cref(options), std::ref(chunks[t]));
        }
        for (auto& w : workers) w.join();
    }

    Corpus corpus;
    corpus.report.lines_read = n_lines;
    std::size_t total_records = 0, total_errors = 0;
    for (const auto& c : chunks) {
        total_records += c.records.size();
        total_errors += c.errors.size();
    }
    corpus.records.reserve(total_records);
    for (auto& c : chunks) {
        corpus.report.blank_lines += c.blank;
        corpus.report.filtered_by_date += c.filtered;
        for (auto& r : c.records) corpus.records.push_back(std::move(r));
        for (auto& e : c.errors) {
            if (corpus.report.sample_errors.size() < detail::kMaxSampleErrors)
                corpus.report.sample_errors.push_back(std::move(e));
        }
    }
    corpus.report.parsed = total_records + corpus.report.filtered_by_date;
    corpus.report.skipped_malformed = total_errors;

    const std::size_t considered = corpus.report.parsed + total_errors;
    if (considered > 0) {
        const double ratio = static_cast<double>(total_errors) / static_cast<double>(considered);
        if (ratio > options.max_malformed_ratio) {
            std::ostringstream msg;
            msg << "ingest aborted: " << total_errors << " of " << considered
                << " lines malformed (" << static_cast<int>(ratio * 100.0)
                << "%, threshold " << static_cast<int>(options.max_malformed_ratio * 100.0) << "%)";
            if (!corpus.report.sample_errors.empty()) {
                const auto& first = corpus.report.sample_errors.front();
                msg << "; first at line " << first.line_no << ": " << first.message;
            }
            throw IngestError(msg.str());
        }
    }
    return corpus;
}

/// File variant. For CSV the mandatory header row is skipped.
inline Corpus ingest_file(const std::string& path, IngestOptions options = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open input file: " + path);
    if (options.format == InputFormat::csv) {
        std::string header;
        std::getline(in, header); // header row, contents not interpreted
    }
    return ingest_stream(in, options);
}

struct CorpusStats {
    std::size_t tweet_count = 0;
    std::size_t unique_authors = 0;
    std::optional<std::int64_t> date_min;
    std::optional<std::int64_t> date_max;
    std::string label;
};

/// Dataset description: record count, distinct normalized authors, date
/// span. Empty corpus yields zeros.
inline CorpusStats corpus_stats(const Corpus& corpus, std::string label = {}) {
    CorpusStats stats;
    stats.label = std::move(label);
    stats.tweet_count = corpus.records.size();
    std::set<std::string> authors;
    for (const auto& r : corpus.records) {
        authors.insert(normalize_handle(r.author));
        if (!stats.date_min || r.created_at < *stats.date_min) stats.date_min = r.created_at;
        if (!stats.date_max || r.created_at > *stats.date_max) stats.date_max = r.created_at;
    }
    stats.unique_authors = authors.size();
    return stats;
}

inline nlohmann::ordered_json stats_to_json(const CorpusStats& s, const IngestReport* report = nullptr) {
    nlohmann::ordered_json j;
    j["label"] = s.label;
    j["tweets"] = s.tweet_count;
    j["unique_users"] = s.unique_authors;
    j["date_min"] = s.date_min ? nlohmann::ordered_json(format_rfc3339(*s.date_min)) : nlohmann::ordered_json(nullptr);
    j["date_max"] = s.date_max ? nlohmann::ordered_json(format_rfc3339(*s.date_max)) : nlohmann::ordered_json(nullptr);
    if (report) {
        j["lines_read"] = report->lines_read;
        j["skipped_malformed"] = report->skipped_malformed;
        j["filtered_by_date"] = report->filtered_by_date;
    }
    return j;
}

} // namespace mentionet
