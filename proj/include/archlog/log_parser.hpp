// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <string>
#include <string_view>

#include "archlog/log_entry.hpp"
#include "archlog/result.hpp"

namespace archlog {

enum class LogFormat : std::uint8_t {
    Auto,        // try the extended variant first, then plain CLF
    Clf,         // client ident auth [ts] "req" status bytes ["ref" "ua"]
    ClfExtended, // client vhost [ident] auth [ts] "req" status ... extras
};

/// Parses one physical log line. Total: every input yields a LogEntry or
/// a ParseError with the byte offset where scanning failed. Trailing
/// optional fields may be truncated mid-line (real archive logs are cut
/// for privacy or by log rotation); required fields end at the status
/// code.
Result<LogEntry> parse_line(std::string_view line, LogFormat format = LogFormat::Auto);

/// Reconstructs a log line carrying every semantic field of the entry.
/// Byte-identical to the input for well-formed combined-format lines;
/// truncated lines come back with `-` placeholders for absent fields.
std::string serialize_line(const LogEntry &entry);

} // namespace archlog
