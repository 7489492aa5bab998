// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#include "archlog/patterns.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace archlog {

std::string_view pattern_name(PatternName p) noexcept {
    switch (p) {
    case PatternName::Dip: return "Dip";
    case PatternName::Slide: return "Slide";
    case PatternName::Dive: return "Dive";
    case PatternName::Skim: return "Skim";
    case PatternName::DiveSlide: return "DiveSlide";
    case PatternName::DiveSkim: return "DiveSkim";
    case PatternName::SkimSlide: return "SkimSlide";
    case PatternName::DiveSlideSkim: return "DiveSlideSkim";
    case PatternName::Unknown: break;
    }
    return "Unknown";
}

std::optional<PatternName> pattern_from_name(std::string_view s) noexcept {
    if (s == "Dip") return PatternName::Dip;
    if (s == "Slide") return PatternName::Slide;
    if (s == "Dive") return PatternName::Dive;
    if (s == "Skim") return PatternName::Skim;
    if (s == "DiveSlide") return PatternName::DiveSlide;
    if (s == "DiveSkim") return PatternName::DiveSkim;
    if (s == "SkimSlide") return PatternName::SkimSlide;
    if (s == "DiveSlideSkim") return PatternName::DiveSlideSkim;
    if (s == "Unknown") return PatternName::Unknown;
    return std::nullopt;
}

bool detect_slide(const Session &session) {
    // URI-R -> first seen datetime; a second, different datetime on the
    // same URI-R is a slide.
    std::unordered_map<std::string_view, std::int64_t> first_seen;
    for (const ArchiveRequest &r : session.requests) {
        if (r.kind != RequestKind::Memento || !r.memento_datetime) {
            continue;
        }
        auto [it, inserted] = first_seen.try_emplace(r.uri_r, *r.memento_datetime);
        if (!inserted && it->second != *r.memento_datetime) {
            return true;
        }
    }
    return false;
}

bool detect_dive(const Session &session, std::int64_t window_seconds) {
    struct Item {
        std::int64_t datetime;
        std::string_view uri;
    };
    std::vector<Item> items;
    items.reserve(session.requests.size());
    for (const ArchiveRequest &r : session.requests) {
        if (r.kind == RequestKind::Memento && r.memento_datetime) {
            items.push_back({*r.memento_datetime, r.uri_r});
        }
    }
    if (items.size() < 2) {
        return false;
    }
    std::sort(items.begin(), items.end(), [](const Item &a, const Item &b) {
        return a.datetime < b.datetime;
    });
    // Sliding window over sorted datetimes; two distinct URI-Rs inside
    // one window make a dive.
    std::unordered_map<std::string_view, std::size_t> in_window;
    std::size_t lo = 0;
    for (std::size_t hi = 0; hi < items.size(); ++hi) {
        ++in_window[items[hi].uri];
        while (items[hi].datetime - items[lo].datetime > window_seconds) {
            auto it = in_window.find(items[lo].uri);
            if (--it->second == 0) {
                in_window.erase(it);
            }
            ++lo;
        }
        if (in_window.size() >= 2) {
            return true;
        }
    }
    return false;
}

bool detect_skim(const Session &session) {
    std::unordered_set<std::string_view> timemaps;
    for (const ArchiveRequest &r : session.requests) {
        if (r.kind == RequestKind::Timemap) {
            timemaps.insert(r.uri_r);
            if (timemaps.size() >= 2) {
                return true;
            }
        }
    }
    return false;
}

PatternLabel classify_pattern(const Session &session, std::int64_t dive_window_seconds) {
    PatternLabel label;
    if (session.requests.size() == 1) {
        label.is_dip = true;
        label.label = PatternName::Dip;
        return label;
    }
    label.slide = detect_slide(session);
    label.dive = detect_dive(session, dive_window_seconds);
    label.skim = detect_skim(session);
    if (label.dive && label.slide && label.skim) {
        label.label = PatternName::DiveSlideSkim;
    } else if (label.dive && label.slide) {
        label.label = PatternName::DiveSlide;
    } else if (label.dive && label.skim) {
        label.label = PatternName::DiveSkim;
    } else if (label.skim && label.slide) {
        label.label = PatternName::SkimSlide;
    } else if (label.slide) {
        label.label = PatternName::Slide;
    } else if (label.dive) {
        label.label = PatternName::Dive;
    } else if (label.skim) {
        label.label = PatternName::Skim;
    } else {
        label.label = PatternName::Unknown;
    }
    return label;
}

void PatternDistribution::add(bool is_robot, PatternName label, const Session &session) {
    Cell &cell = cells[{is_robot, label}];
    ++cell.sessions;
    cell.requests += session.requests.size();
    for (const ArchiveRequest &r : session.requests) {
        if (r.kind == RequestKind::Memento) {
            ++cell.memento_requests;
        } else if (r.kind == RequestKind::Timemap) {
            ++cell.timemap_requests;
        }
    }
    (is_robot ? robot_requests : human_requests) += session.requests.size();
}

} // namespace archlog
