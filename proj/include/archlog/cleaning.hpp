// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <string>

#include "archlog/archive_request.hpp"
#include "archlog/percent.hpp"

namespace archlog {

/// Stage 1 keeps archive content: mementos, TimeMaps and robots.txt
/// (robots.txt feeds a detection heuristic and is dropped again at
/// stage 2).
inline bool stage1_keep(const ArchiveRequest &r) {
    return r.kind == RequestKind::Memento || r.kind == RequestKind::Timemap ||
           r.kind == RequestKind::RobotsTxt;
}

/// Stage 2 keeps what a user deliberately navigated to: plain GETs with
/// status 200/404/503 that are not embedded resources and not
/// robots.txt. Implies stage1_keep.
inline bool stage2_keep(const ArchiveRequest &r) {
    const int s = r.entry.status;
    return (r.kind == RequestKind::Memento || r.kind == RequestKind::Timemap) &&
           r.entry.method == Method::Get && (s == 200 || s == 404 || s == 503) &&
           !r.is_embedded;
}

struct CleaningStats {
    std::uint64_t raw_count = 0;
    std::uint64_t s1_count = 0;
    std::uint64_t s2_count = 0;

    std::string s1_pct() const { return format_percent(s1_count, raw_count); }
    std::string s2_pct() const { return format_percent(s2_count, raw_count); }
};

} // namespace archlog
