// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "archlog/bot_detector.hpp"
#include "archlog/log_parser.hpp"
#include "archlog/report.hpp"
#include "archlog/session.hpp"
#include "archlog/temporal.hpp"

namespace archlog {

struct PipelineConfig {
    std::vector<std::string> inputs;
    LogFormat format = LogFormat::Auto;
    ArchiveProfile profile = ArchiveProfile::Auto;
    std::string out_dir = "archlog-out";

    std::string known_bots_path; // empty: built-in keywords only
    DetectorThresholds thresholds;
    std::int64_t session_timeout_seconds = 600;
    std::int64_t dive_window_seconds = kDefaultDiveWindowSeconds;
    YearMode year_mode = YearMode::Calendar;
    std::string reference_date; // YYYY-MM-DD; empty: modal date of the corpus

    std::uint64_t memory_budget_bytes = 256ull << 20;
    std::string tmp_dir; // empty: <out_dir>/tmp
    int threads = 1;
    std::set<std::string> report_formats = {"json", "csv", "markdown"};
    bool resume = false;        // skip stages whose outputs already exist
    std::string errors_out;     // parse-error sink; empty: <out_dir>/parse_errors.log
};

/// Artifact paths inside the output directory; every stage reads and
/// writes these fixed names so stages compose the same way whether run
/// in-process or as separate CLI invocations.
struct Artifacts {
    explicit Artifacts(const std::string &dir);
    std::string dir;
    std::string records;      // parsed + classified, canonical stream
    std::string parse_errors; // rejected lines with reasons
    std::string features;     // raw corpus counters (json)
    std::string cleaning;     // stage counts (json)
    std::string s1;           // stage-1 survivors
    std::string sessions;     // stage-1 survivors with session ids, grouped
    std::string verdicts;     // one json object per session
    std::string bot_table;    // aggregated heuristic counts (json)
    std::string s2;           // stage-2 survivors, session ids kept
    std::string pattern_labels; // one json object per surviving session
    std::string patterns;     // distribution (json)
    std::string temporal;     // histograms (json)
};

bool stage_parse(const PipelineConfig &config, std::string &error);
bool stage_clean1(const PipelineConfig &config, std::string &error);
bool stage_sessionize(const PipelineConfig &config, std::string &error);
bool stage_detect(const PipelineConfig &config, std::string &error);
bool stage_clean2(const PipelineConfig &config, std::string &error);
bool stage_patterns(const PipelineConfig &config, std::string &error);
bool stage_temporal(const PipelineConfig &config, std::string &error);
bool stage_report(const PipelineConfig &config, ReportBundle &bundle, std::string &error);

/// parse -> S1 -> sessionize -> detect -> S2 -> patterns -> temporal ->
/// report, leaving every intermediate artifact in out_dir.
bool run_pipeline(const PipelineConfig &config, ReportBundle &bundle, std::string &error);

} // namespace archlog
