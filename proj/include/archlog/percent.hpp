// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

namespace archlog {

/// num/den as a percentage with two decimals, half-up, e.g. "85.22%".
/// Exact integer arithmetic; a zero denominator formats as "0.00%".
inline std::string format_percent(std::uint64_t num, std::uint64_t den) {
    if (den == 0) {
        return "0.00%";
    }
    const std::uint64_t scaled = num * 10000;
    std::uint64_t q = scaled / den;
    if ((scaled % den) * 2 >= den) {
        ++q;
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%llu.%02llu%%",
                  static_cast<unsigned long long>(q / 100),
                  static_cast<unsigned long long>(q % 100));
    return buf;
}

/// 1234567 -> "1,234,567" (for the markdown tables).
inline std::string format_thousands(std::uint64_t n) {
    std::string digits = std::to_string(n);
    std::string out;
    out.reserve(digits.size() + digits.size() / 3);
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i != 0 && (digits.size() - i) % 3 == 0) {
            out += ',';
        }
        out += digits[i];
    }
    return out;
}

} // namespace archlog
