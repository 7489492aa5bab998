// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "archlog/result.hpp"
#include "archlog/session.hpp"

namespace archlog {

/// Substring patterns (case-insensitive) matched against User-Agents.
/// The built-in keywords `bot`, `crawler`, `spider` are always present;
/// list files add more, one pattern per line, `#` comments.
class KnownBotList {
public:
    static KnownBotList builtin();
    static Result<KnownBotList> load(const std::string &path, bool include_builtin = true);

    bool matches(std::string_view user_agent) const;
    std::size_t size() const { return patterns_.size(); }
    void add(std::string_view pattern);

private:
    std::vector<std::string> patterns_; // lowercased
};

/// True when the User-Agent alone self-identifies as a robot (used for
/// the feature table; detection uses the fuller KnownBotList).
bool is_self_identified_robot(std::string_view user_agent);

struct DetectorThresholds {
    double browsing_speed = 0.5;   // HTML requests per second, flag at >=
    double ih_ratio = 0.1;         // images per HTML, flag strictly below
    std::uint64_t ua_per_ip = 20;  // distinct UAs per IP, flag strictly above
};

bool flag_known_bot(std::string_view user_agent, const KnownBotList &list);
bool flag_head(const ArchiveRequest &request);
bool flag_robots_txt(const Session &session);

/// HTML requests per second over the session, or nullopt when the rate
/// is undefined (zero duration with at most one HTML request). Sessions
/// firing >=2 HTML requests inside one second flag as infinitely fast.
std::optional<double> session_browsing_speed(const Session &session);
bool flag_browsing_speed(const Session &session, double threshold = 0.5);

/// images/HTML, or nullopt when the session requested no HTML.
std::optional<double> session_ih_ratio(const Session &session);
bool flag_ih_ratio(const Session &session, double threshold = 0.1);

/// Global pass for the UA-per-IP heuristic: distinct User-Agent counts
/// per client token. Tracking stops at threshold+1 distinct values, so
/// memory stays proportional to the number of tokens.
class UaPerIpCounter {
public:
    explicit UaPerIpCounter(std::uint64_t threshold = 20) : threshold_(threshold) {}

    void add(std::string_view client_token, std::string_view user_agent);
    void add(const ArchiveRequest &request);

    bool is_flagged(const std::string &client_token) const;
    std::unordered_set<std::string> flagged_tokens() const;

private:
    struct TokenState {
        std::vector<std::uint64_t> ua_hashes;
        bool over = false;
    };
    std::uint64_t threshold_;
    std::unordered_map<std::string, TokenState> tokens_;
};

struct BotVerdict {
    bool known_bot = false;
    bool head_method = false;
    bool ua_per_ip = false;
    bool robots_txt = false;
    bool browsing_speed = false;
    bool ih_ratio = false;
    bool is_robot = false;

    std::uint64_t request_count = 0;

    /// Requests this session contributes to a heuristic's row in the
    /// results table: all of them when the heuristic flagged, else none.
    std::uint64_t requests_for(bool flag) const { return flag ? request_count : 0; }

    std::vector<std::string_view> flag_names() const;
};

/// All six heuristics, OR-combined.
BotVerdict classify_session(const Session &session,
                            const std::unordered_set<std::string> &flagged_tokens,
                            const KnownBotList &list,
                            const DetectorThresholds &thresholds = {});

} // namespace archlog
