// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "archlog/archive_request.hpp"

namespace archlog {

enum class YearMode : std::uint8_t {
    Calendar, // reference year minus capture year
    Elapsed,  // whole 365.25-day spans between the instants
};

/// Years between a capture and the log date; nullopt marks captures
/// dated after the reference (clock skew, malformed stamps).
std::optional<int> years_prior(std::int64_t memento_datetime, std::int64_t reference,
                               YearMode mode = YearMode::Calendar);

struct TemporalHistogram {
    std::int64_t reference_epoch = 0;
    std::map<int, std::uint64_t> buckets; // years prior -> requests
    std::uint64_t discarded_future = 0;

    std::uint64_t total() const {
        std::uint64_t n = discarded_future;
        for (const auto &[year, count] : buckets) {
            n += count;
        }
        return n;
    }

    void add(std::int64_t memento_datetime, YearMode mode = YearMode::Calendar) {
        if (auto years = years_prior(memento_datetime, reference_epoch, mode)) {
            ++buckets[*years];
        } else {
            ++discarded_future;
        }
    }
};

} // namespace archlog
