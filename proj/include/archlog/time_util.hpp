// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "archlog/result.hpp"

namespace archlog {

struct CivilTime {
    int year = 1970;
    unsigned month = 1; // 1-12
    unsigned day = 1;   // 1-31
    unsigned hour = 0;
    unsigned minute = 0;
    unsigned second = 0;
};

/// Days since 1970-01-01 in the proleptic Gregorian calendar.
std::int64_t days_from_civil(int year, unsigned month, unsigned day) noexcept;

void civil_from_days(std::int64_t days, int &year, unsigned &month, unsigned &day) noexcept;

bool valid_civil_date(int year, unsigned month, unsigned day) noexcept;

std::int64_t epoch_from_civil(const CivilTime &ct) noexcept;

CivilTime civil_from_epoch(std::int64_t epoch) noexcept;

/// A log timestamp: the UTC instant plus the offset it was logged with,
/// kept so the original `dd/Mon/yyyy:HH:MM:SS +zzzz` text round-trips.
struct ClfTime {
    std::int64_t epoch_utc = 0;
    int tz_offset_min = 0;

    bool operator==(const ClfTime &) const = default;
};

/// Parses the bracket-inner CLF timestamp, e.g. `07/Jul/2019:04:44:14 +0100`.
Result<ClfTime> parse_clf_timestamp(std::string_view token);

/// Inverse of parse_clf_timestamp (without the brackets).
std::string format_clf_timestamp(const ClfTime &t);

/// `2019-07-07T03:44:14Z`
std::string format_iso8601(std::int64_t epoch_utc);

/// `2019-07-07`
std::string format_iso_date(std::int64_t epoch_utc);

} // namespace archlog
