// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#include "archlog/time_util.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace archlog {

namespace {

constexpr std::array<const char *, 12> kMonthAbbrev = {
    "Jan", "Feb", "Mar", "Apr", "May", "Jun",
    "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

int month_from_abbrev(std::string_view m) {
    for (int i = 0; i < 12; ++i) {
        if (m == kMonthAbbrev[static_cast<unsigned>(i)]) {
            return i + 1;
        }
    }
    return 0;
}

bool is_leap(int y) noexcept {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

unsigned days_in_month(int y, unsigned m) noexcept {
    static constexpr unsigned lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) {
        return 29;
    }
    return lengths[m - 1];
}

bool parse_fixed_uint(std::string_view text, unsigned &out) {
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

} // namespace

// Howard Hinnant's algorithm, public domain.
std::int64_t days_from_civil(int y, unsigned m, unsigned d) noexcept {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int &year, unsigned &month, unsigned &day) noexcept {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    day = doy - (153 * mp + 2) / 5 + 1;
    month = mp + (mp < 10 ? 3 : -9);
    year = static_cast<int>(y + (month <= 2));
}

bool valid_civil_date(int year, unsigned month, unsigned day) noexcept {
    if (month < 1 || month > 12 || day < 1) {
        return false;
    }
    return day <= days_in_month(year, month);
}

std::int64_t epoch_from_civil(const CivilTime &ct) noexcept {
    return days_from_civil(ct.year, ct.month, ct.day) * 86400 +
           static_cast<std::int64_t>(ct.hour) * 3600 +
           static_cast<std::int64_t>(ct.minute) * 60 + ct.second;
}

CivilTime civil_from_epoch(std::int64_t epoch) noexcept {
    std::int64_t days = epoch / 86400;
    std::int64_t rem = epoch % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    CivilTime ct;
    civil_from_days(days, ct.year, ct.month, ct.day);
    ct.hour = static_cast<unsigned>(rem / 3600);
    ct.minute = static_cast<unsigned>((rem % 3600) / 60);
    ct.second = static_cast<unsigned>(rem % 60);
    return ct;
}

Result<ClfTime> parse_clf_timestamp(std::string_view token) {
    // dd/Mon/yyyy:HH:MM:SS +zzzz
    if (token.size() < 26) {
        return ParseError{0, "timestamp too short"};
    }
    if (token[2] != '/' || token[6] != '/' || token[11] != ':' || token[14] != ':' ||
        token[17] != ':' || token[20] != ' ') {
        return ParseError{0, "timestamp separators malformed"};
    }
    unsigned day = 0, year = 0, hour = 0, minute = 0, second = 0;
    if (!parse_fixed_uint(token.substr(0, 2), day) ||
        !parse_fixed_uint(token.substr(7, 4), year) ||
        !parse_fixed_uint(token.substr(12, 2), hour) ||
        !parse_fixed_uint(token.substr(15, 2), minute) ||
        !parse_fixed_uint(token.substr(18, 2), second)) {
        return ParseError{0, "timestamp digits malformed"};
    }
    const int month = month_from_abbrev(token.substr(3, 3));
    if (month == 0) {
        return ParseError{3, "unknown month abbreviation"};
    }
    if (!valid_civil_date(static_cast<int>(year), static_cast<unsigned>(month), day)) {
        return ParseError{0, "invalid calendar date"};
    }
    if (hour > 23 || minute > 59 || second > 59) {
        return ParseError{12, "time of day out of range"};
    }
    const std::string_view zone = token.substr(21);
    if (zone.size() != 5 || (zone[0] != '+' && zone[0] != '-')) {
        return ParseError{21, "timezone offset malformed"};
    }
    unsigned zh = 0, zm = 0;
    if (!parse_fixed_uint(zone.substr(1, 2), zh) || !parse_fixed_uint(zone.substr(3, 2), zm) ||
        zh > 23 || zm > 59) {
        return ParseError{21, "timezone offset malformed"};
    }
    int offset_min = static_cast<int>(zh * 60 + zm);
    if (zone[0] == '-') {
        offset_min = -offset_min;
    }
    CivilTime ct{static_cast<int>(year), static_cast<unsigned>(month), day, hour, minute, second};
    ClfTime out;
    out.tz_offset_min = offset_min;
    out.epoch_utc = epoch_from_civil(ct) - static_cast<std::int64_t>(offset_min) * 60;
    return out;
}

std::string format_clf_timestamp(const ClfTime &t) {
    const CivilTime ct = civil_from_epoch(t.epoch_utc + static_cast<std::int64_t>(t.tz_offset_min) * 60);
    const int off = t.tz_offset_min;
    const unsigned abs_off = static_cast<unsigned>(off < 0 ? -off : off);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%02u/%s/%04d:%02u:%02u:%02u %c%02u%02u",
                  ct.day, kMonthAbbrev[ct.month - 1], ct.year, ct.hour, ct.minute, ct.second,
                  off < 0 ? '-' : '+', abs_off / 60, abs_off % 60);
    return buf;
}

std::string format_iso8601(std::int64_t epoch_utc) {
    const CivilTime ct = civil_from_epoch(epoch_utc);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02u:%02u:%02uZ",
                  ct.year, ct.month, ct.day, ct.hour, ct.minute, ct.second);
    return buf;
}

std::string format_iso_date(std::int64_t epoch_utc) {
    const CivilTime ct = civil_from_epoch(epoch_utc);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", ct.year, ct.month, ct.day);
    return buf;
}

} // namespace archlog
