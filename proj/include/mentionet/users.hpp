// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 mentionet contributors

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <vector>

#include "mentionet/corpus.hpp"
#include "mentionet/handle.hpp"

namespace mentionet {

using UserId = std::uint32_t;

enum UserRole : std::uint8_t {
    kRoleAuthor = 1,
    kRoleMentioned = 2,
};

namespace detail {
struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
};
} // namespace detail

/// Bijection handle <-> dense id, plus per-user post and mention counts.
/// Ids are assigned in first-seen order over the record stream (authors
/// first, then the mentions inside each text), which is deterministic
/// because ingestion preserves source order.
class UserTable {
public:
    UserId intern(std::string_view normalized_handle, std::uint8_t role) {
        auto it = ids_.find(normalized_handle);
        UserId id;
        if (it == ids_.end()) {
            id = static_cast<UserId>(handles_.size());
            handles_.emplace_back(normalized_handle);
            posts_.push_back(0);
            mentions_.push_back(0);
            roles_.push_back(0);
            ids_.emplace(handles_.back(), id);
        } else {
            id = it->second;
        }
        roles_[id] |= role;
        return id;
    }

    std::optional<UserId> find(std::string_view handle) const {
        auto it = ids_.find(handle);
        if (it == ids_.end()) return std::nullopt;
        return it->second;
    }

    const std::string& handle(UserId id) const { return handles_.at(id); }
    std::size_t size() const { return handles_.size(); }

    std::uint64_t posts(UserId id) const { return posts_.at(id); }
    std::uint64_t mentions(UserId id) const { return mentions_.at(id); }
    bool is_author(UserId id) const { return roles_.at(id) & kRoleAuthor; }
    bool is_mentioned(UserId id) const { return roles_.at(id) & kRoleMentioned; }

    void add_post(UserId id) { ++posts_[id]; }
    void add_mention(UserId id) { ++mentions_[id]; }

    const std::vector<std::uint64_t>& post_counts() const { return posts_; }
    const std::vector<std::uint64_t>& mention_counts() const { return mentions_; }

private:
    std::vector<std::string> handles_;
    std::unordered_map<std::string, UserId, detail::StringHash, std::equal_to<>> ids_;
    std::vector<std::uint64_t> posts_;
    std::vector<std::uint64_t> mentions_;
    std::vector<std::uint8_t> roles_;
};

/// One @-mention occurrence: author tagged target in the given tweet.
struct MentionEvent {
    UserId author;
    UserId target;
    std::string tweet_id;

    bool is_self() const { return author == target; }
};

struct MiningOptions {
    bool strip_rt = false;
    unsigned threads = 1;
};

struct MiningResult {
    std::shared_ptr<UserTable> users;
    std::vector<MentionEvent> events;
};

/// Walk the corpus once: intern every author, extract mentions from every
/// text, intern targets, and record one event per occurrence. Extraction
/// fans out across threads; interning and counting stay sequential so id
/// assignment does not depend on the thread count.
inline MiningResult mine_mentions(const Corpus& corpus, const MiningOptions& options = {}) {
    MiningResult result;
    result.users = std::make_shared<UserTable>();

    const std::size_t n = corpus.records.size();
    std::vector<std::vector<std::string>> mentions_per_record(n);

    unsigned threads = options.threads == 0 ? 1 : options.threads;
    if (threads > 1 && n < 2048) threads = 1;
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i)
            mentions_per_record[i] = extract_mentions(corpus.records[i].text, options.strip_rt);
    } else {
        std::vector<std::thread> workers;
        const std::size_t per = (n + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t begin = std::min<std::size_t>(t * per, n);
            const std::size_t end = std::min<std::size_t>(begin + per, n);
            workers.emplace_back([&, begin, end] {
                for (std::size_t i = begin; i < end; ++i)
                    mentions_per_record[i] = extract_mentions(corpus.records[i].text, options.strip_rt);
            });
        }
        for (auto& w : workers) w.join();
    }

    UserTable& users = *result.users;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& rec = corpus.records[i];
        const UserId author = users.intern(normalize_handle(rec.author), kRoleAuthor);
        users.add_post(author);
        for (const auto& handle : mentions_per_record[i]) {
            const UserId target = users.intern(handle, kRoleMentioned);
            users.add_mention(target);
            result.events.push_back({author, target, rec.id});
        }
    }
    return result;
}

/// Top-n ids by count, descending; ties broken ascending by handle so the
/// result does not depend on table iteration order. Returns min(n, size)
/// entries.
inline std::vector<UserId> top_n(const std::vector<std::uint64_t>& counts, const UserTable& table,
                                 std::size_t n) {
    if (n == 0) throw std::invalid_argument("top_n: n must be >= 1");
    if (counts.size() != table.size())
        throw std::invalid_argument("top_n: counts do not match table");
    std::vector<UserId> ids(counts.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<UserId>(i);
    std::sort(ids.begin(), ids.end(), [&](UserId a, UserId b) {
        if (counts[a] != counts[b]) return counts[a] > counts[b];
        return table.handle(a) < table.handle(b);
    });
    if (ids.size() > n) ids.resize(n);
    return ids;
}

enum class RankBy { posts, mentions };

inline std::vector<UserId> top_n(const UserTable& table, RankBy rank, std::size_t n) {
    return top_n(rank == RankBy::posts ? table.post_counts() : table.mention_counts(), table, n);
}

} // namespace mentionet
