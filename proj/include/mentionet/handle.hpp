// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 mentionet contributors

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mentionet {

// Handle grammar: 1-15 characters of [a-z0-9_], case-insensitive identity.

inline constexpr std::size_t kMaxHandleLength = 15;

constexpr bool is_handle_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

constexpr char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c; }

/// Canonical user key: drop any leading mix of whitespace and '@', trim
/// trailing whitespace, lowercase ASCII letters. Idempotent.
inline std::string normalize_handle(std::string_view raw) {
    const auto is_ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    std::size_t begin = 0, end = raw.size();
    while (begin < end && (is_ws(raw[begin]) || raw[begin] == '@')) ++begin;
    while (end > begin && is_ws(raw[end - 1])) --end;
    std::string out;
    out.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) out.push_back(ascii_lower(raw[i]));
    return out;
}

/// Extract @-mentions from tweet text, in order of occurrence and with
/// duplicates kept (each occurrence is one event). A mention is a maximal
/// run of handle characters after an '@' that is not itself preceded by a
/// handle character; runs longer than 15 characters do not match the
/// grammar and yield nothing. Results are lowercased.
///
/// With strip_rt set, the mention inside a leading "RT @user" retweet
/// prefix is dropped.
inline std::vector<std::string> extract_mentions(std::string_view text, bool strip_rt = false) {
    std::vector<std::string> out;

    std::size_t rt_at = std::string_view::npos;
    if (strip_rt) {
        std::size_t p = 0;
        while (p < text.size() && (text[p] == ' ' || text[p] == '\t')) ++p;
        if (p + 2 < text.size() && ascii_lower(text[p]) == 'r' && ascii_lower(text[p + 1]) == 't') {
            std::size_t q = p + 2;
            std::size_t spaces = 0;
            while (q < text.size() && (text[q] == ' ' || text[q] == '\t')) {
                ++q;
                ++spaces;
            }
            if (spaces > 0 && q < text.size() && text[q] == '@') rt_at = q;
        }
    }

    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '@') continue;
        if (i > 0 && is_handle_char(text[i - 1])) continue;
        std::size_t j = i + 1;
        while (j < text.size() && is_handle_char(text[j])) ++j;
        const std::size_t len = j - (i + 1);
        if (len >= 1 && len <= kMaxHandleLength && i != rt_at) {
            std::string handle;
            handle.reserve(len);
            for (std::size_t k = i + 1; k < j; ++k) handle.push_back(ascii_lower(text[k]));
            out.push_back(std::move(handle));
        }
        if (j > i + 1) i = j - 1;
    }
    return out;
}

} // namespace mentionet
