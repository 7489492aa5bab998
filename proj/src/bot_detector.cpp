// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#include "archlog/bot_detector.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace archlog {

namespace {

constexpr std::string_view kBuiltinKeywords[] = {"bot", "crawler", "spider"};

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : static_cast<char>(c);
    });
    return out;
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

} // namespace

KnownBotList KnownBotList::builtin() {
    KnownBotList list;
    for (std::string_view kw : kBuiltinKeywords) {
        list.add(kw);
    }
    return list;
}

void KnownBotList::add(std::string_view pattern) {
    std::string lowered = to_lower(pattern);
    if (lowered.empty()) {
        return;
    }
    if (std::find(patterns_.begin(), patterns_.end(), lowered) == patterns_.end()) {
        patterns_.push_back(std::move(lowered));
    }
}

Result<KnownBotList> KnownBotList::load(const std::string &path, bool include_builtin) {
    std::FILE *f = std::fopen(path.c_str(), "rb");
    if (!f) {
        return ParseError{0, "cannot open known-bot list " + path};
    }
    KnownBotList list = include_builtin ? builtin() : KnownBotList{};
    std::string line;
    int c;
    while (true) {
        c = std::fgetc(f);
        if (c == EOF || c == '\n') {
            const std::string_view content = trim(line);
            if (!content.empty() && content[0] != '#') {
                list.add(content);
            }
            line.clear();
            if (c == EOF) break;
        } else {
            line += static_cast<char>(c);
        }
    }
    std::fclose(f);
    if (list.size() == 0) {
        return ParseError{0, "known-bot list is empty"};
    }
    return list;
}

bool KnownBotList::matches(std::string_view user_agent) const {
    if (user_agent.empty()) {
        return false;
    }
    const std::string lowered = to_lower(user_agent);
    for (const std::string &pattern : patterns_) {
        if (lowered.find(pattern) != std::string::npos) {
            return true;
        }
    }
    return false;
}

bool is_self_identified_robot(std::string_view user_agent) {
    if (user_agent.empty()) {
        return false;
    }
    const std::string lowered = to_lower(user_agent);
    for (std::string_view kw : kBuiltinKeywords) {
        if (lowered.find(kw) != std::string::npos) {
            return true;
        }
    }
    return false;
}

bool flag_known_bot(std::string_view user_agent, const KnownBotList &list) {
    return list.matches(user_agent);
}

bool flag_head(const ArchiveRequest &request) {
    return request.entry.method == Method::Head;
}

bool flag_robots_txt(const Session &session) {
    return session.robots_txt_count > 0;
}

std::optional<double> session_browsing_speed(const Session &session) {
    const std::int64_t duration = session.duration_seconds();
    if (duration == 0) {
        if (session.html_count <= 1) {
            return std::nullopt;
        }
        return std::numeric_limits<double>::infinity();
    }
    return static_cast<double>(session.html_count) / static_cast<double>(duration);
}

bool flag_browsing_speed(const Session &session, double threshold) {
    const auto rate = session_browsing_speed(session);
    return rate.has_value() && *rate >= threshold;
}

std::optional<double> session_ih_ratio(const Session &session) {
    if (session.html_count == 0) {
        return std::nullopt;
    }
    return static_cast<double>(session.image_count) / static_cast<double>(session.html_count);
}

bool flag_ih_ratio(const Session &session, double threshold) {
    const auto ratio = session_ih_ratio(session);
    return ratio.has_value() && *ratio < threshold;
}

void UaPerIpCounter::add(std::string_view client_token, std::string_view user_agent) {
    auto [it, inserted] = tokens_.try_emplace(std::string(client_token));
    TokenState &state = it->second;
    if (state.over) {
        return;
    }
    const std::uint64_t h = fnv1a64(user_agent);
    if (std::find(state.ua_hashes.begin(), state.ua_hashes.end(), h) != state.ua_hashes.end()) {
        return;
    }
    state.ua_hashes.push_back(h);
    if (state.ua_hashes.size() > threshold_) {
        state.over = true;
        state.ua_hashes.clear();
        state.ua_hashes.shrink_to_fit();
    }
}

void UaPerIpCounter::add(const ArchiveRequest &request) {
    add(request.entry.client_token, request.entry.user_agent_or_empty());
}

bool UaPerIpCounter::is_flagged(const std::string &client_token) const {
    const auto it = tokens_.find(client_token);
    return it != tokens_.end() && it->second.over;
}

std::unordered_set<std::string> UaPerIpCounter::flagged_tokens() const {
    std::unordered_set<std::string> out;
    for (const auto &[token, state] : tokens_) {
        if (state.over) {
            out.insert(token);
        }
    }
    return out;
}

std::vector<std::string_view> BotVerdict::flag_names() const {
    std::vector<std::string_view> names;
    if (known_bot) names.push_back("known_bot");
    if (head_method) names.push_back("head_method");
    if (ua_per_ip) names.push_back("ua_per_ip");
    if (robots_txt) names.push_back("robots_txt");
    if (browsing_speed) names.push_back("browsing_speed");
    if (ih_ratio) names.push_back("ih_ratio");
    return names;
}

BotVerdict classify_session(const Session &session,
                            const std::unordered_set<std::string> &flagged_tokens,
                            const KnownBotList &list, const DetectorThresholds &thresholds) {
    BotVerdict verdict;
    verdict.request_count = session.requests.size();
    // The key pins one User-Agent per session, so one match covers all
    // member requests.
    verdict.known_bot = list.matches(session.key.user_agent);
    verdict.head_method = session.head_count > 0;
    verdict.ua_per_ip = flagged_tokens.contains(session.key.client_token);
    verdict.robots_txt = flag_robots_txt(session);
    verdict.browsing_speed = flag_browsing_speed(session, thresholds.browsing_speed);
    verdict.ih_ratio = flag_ih_ratio(session, thresholds.ih_ratio);
    verdict.is_robot = verdict.known_bot || verdict.head_method || verdict.ua_per_ip ||
                       verdict.robots_txt || verdict.browsing_speed || verdict.ih_ratio;
    return verdict;
}

} // namespace archlog
