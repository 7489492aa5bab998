// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#include "archlog/temporal.hpp"

#include "archlog/time_util.hpp"

namespace archlog {

std::optional<int> years_prior(std::int64_t memento_datetime, std::int64_t reference,
                               YearMode mode) {
    if (mode == YearMode::Calendar) {
        const int ref_year = civil_from_epoch(reference).year;
        const int mdt_year = civil_from_epoch(memento_datetime).year;
        const int diff = ref_year - mdt_year;
        if (diff < 0) {
            return std::nullopt;
        }
        return diff;
    }
    const std::int64_t delta = reference - memento_datetime;
    if (delta < 0) {
        return std::nullopt;
    }
    constexpr std::int64_t kYearSeconds = 31557600; // 365.25 days
    return static_cast<int>(delta / kYearSeconds);
}

} // namespace archlog
