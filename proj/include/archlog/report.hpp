// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "archlog/archive_request.hpp"
#include "archlog/bot_detector.hpp"
#include "archlog/cleaning.hpp"
#include "archlog/patterns.hpp"
#include "archlog/percent.hpp"
#include "archlog/temporal.hpp"

namespace archlog {

using OrderedJson = nlohmann::ordered_json;

/// Corpus-level counters over the raw (pre-cleaning) request stream.
struct FeatureStats {
    std::uint64_t total_requests = 0;

    std::uint64_t get = 0;
    std::uint64_t head = 0;
    std::uint64_t propfind = 0;
    std::uint64_t post = 0;
    std::uint64_t options = 0;
    std::uint64_t other_method = 0;

    std::uint64_t status_2xx = 0;
    std::uint64_t status_3xx = 0;
    std::uint64_t status_4xx = 0;
    std::uint64_t status_5xx = 0;

    std::uint64_t embedded_resources = 0;
    std::uint64_t null_referrer = 0;
    std::uint64_t si_robots = 0;

    void add(const ArchiveRequest &request);

    std::string pct(std::uint64_t n) const { return format_percent(n, total_requests); }
};

/// The bot-identification results table: per-heuristic session and
/// request counts plus the OR-combined totals. Heuristics overlap, so
/// per-heuristic rows do not sum to the total.
struct BotTable {
    std::uint64_t total_sessions = 0;
    std::uint64_t total_requests = 0;

    struct Row {
        std::uint64_t sessions = 0;
        std::uint64_t requests = 0;
    };
    Row known_bots;
    Row ua_per_ip;
    Row robots_txt;
    Row head_method;
    Row ih_ratio;
    Row browsing_speed;
    Row total_robots;

    void add(const BotVerdict &verdict);
};

struct RunMetadata {
    std::string profile = "auto";
    std::string format = "auto";
    std::int64_t session_timeout_seconds = 600;
    double bs_threshold = 0.5;
    double ih_threshold = 0.1;
    std::uint64_t ua_ip_threshold = 20;
    std::int64_t dive_window_seconds = kDefaultDiveWindowSeconds;
    std::string year_mode = "calendar";
    std::string reference_date; // ISO date, empty until resolved
    std::string known_bots_file;
    std::uint64_t parse_errors = 0;
    std::uint64_t input_lines = 0;
    std::vector<std::pair<std::string, std::string>> input_digests; // path -> fnv1a64 hex
};

struct ReportBundle {
    FeatureStats features;
    CleaningStats cleaning;
    BotTable bot_table;
    PatternDistribution patterns;
    TemporalHistogram temporal_human;
    TemporalHistogram temporal_robot;
    RunMetadata metadata;
};

OrderedJson feature_stats_to_json(const FeatureStats &);
OrderedJson cleaning_stats_to_json(const CleaningStats &);
OrderedJson bot_table_to_json(const BotTable &);
OrderedJson patterns_to_json(const PatternDistribution &);
OrderedJson temporal_to_json(const TemporalHistogram &human, const TemporalHistogram &robot);
OrderedJson metadata_to_json(const RunMetadata &);
OrderedJson bundle_to_json(const ReportBundle &);

/// Writes report.json / *.csv / report.md into out_dir, depending on the
/// requested formats ("json", "csv", "markdown"). Output is
/// byte-deterministic for identical bundles. Returns false with a
/// message on I/O failure.
bool emit_report(const ReportBundle &bundle, const std::set<std::string> &formats,
                 const std::string &out_dir, std::string &error);

/// FNV-1a 64 over a file's bytes, hex-encoded; used for input digests.
std::string file_digest(const std::string &path);

} // namespace archlog
