// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>

#include "archlog/session.hpp"

namespace archlog {

enum class PatternName : std::uint8_t {
    Dip,
    Slide,
    Dive,
    Skim,
    DiveSlide,
    DiveSkim,
    SkimSlide,
    DiveSlideSkim,
    Unknown,
};

std::string_view pattern_name(PatternName p) noexcept;
std::optional<PatternName> pattern_from_name(std::string_view) noexcept;

struct PatternLabel {
    bool slide = false;
    bool dive = false;
    bool skim = false;
    bool is_dip = false;
    PatternName label = PatternName::Unknown;
};

inline constexpr std::int64_t kDefaultDiveWindowSeconds = 24 * 3600;

/// Same URI-R captured at two or more distinct Memento-Datetimes.
bool detect_slide(const Session &session);

/// Two different URI-Rs whose Memento-Datetimes lie within the window:
/// following links inside a replayed page lands on captures made around
/// the same crawl.
bool detect_dive(const Session &session, std::int64_t window_seconds = kDefaultDiveWindowSeconds);

/// Two or more distinct TimeMaps.
bool detect_skim(const Session &session);

/// Labels a session that already went through stage-2 filtering.
/// Single-request sessions are Dips; otherwise the label names the set
/// of detected base patterns, or Unknown when none fire.
PatternLabel classify_pattern(const Session &session,
                              std::int64_t dive_window_seconds = kDefaultDiveWindowSeconds);

/// Per-subdataset, per-label request tallies backing the distribution
/// charts. Keys are ordered so the report serializes deterministically.
struct PatternDistribution {
    struct Cell {
        std::uint64_t sessions = 0;
        std::uint64_t requests = 0;
        std::uint64_t memento_requests = 0;
        std::uint64_t timemap_requests = 0;
    };
    // key: (is_robot, label)
    std::map<std::pair<bool, PatternName>, Cell> cells;
    std::uint64_t human_requests = 0;
    std::uint64_t robot_requests = 0;

    void add(bool is_robot, PatternName label, const Session &post_s2_session);
};

} // namespace archlog
