// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "archlog/log_entry.hpp"
#include "archlog/result.hpp"

namespace archlog {

enum class RequestKind : std::uint8_t { Memento, Timemap, RobotsTxt, Other };

enum class ResourceClass : std::uint8_t {
    Html,
    Image,
    Stylesheet,
    Script,
    Font,
    OtherEmbedded,
    Unknown,
};

enum class ArchiveProfile : std::uint8_t { IaWayback, Arquivo, Auto };

std::string_view request_kind_name(RequestKind k) noexcept;
std::string_view resource_class_name(ResourceClass c) noexcept;
std::optional<RequestKind> request_kind_from_name(std::string_view) noexcept;
std::optional<ResourceClass> resource_class_from_name(std::string_view) noexcept;
std::optional<ArchiveProfile> archive_profile_from_name(std::string_view) noexcept;
std::string_view archive_profile_name(ArchiveProfile) noexcept;

/// A LogEntry enriched with archive replay semantics.
///
/// For mementos and TimeMaps the original path is recoverable
/// byte-for-byte as replay_prefix + stamp_text + "/" + uri_r.
struct ArchiveRequest {
    LogEntry entry;
    RequestKind kind = RequestKind::Other;

    std::string replay_prefix; // up to and including the slash before the stamp
    std::string stamp_text;    // verbatim: digits, optional modifier, optional '*'
    std::string uri_r;         // empty means absent

    std::optional<std::int64_t> memento_datetime; // UTC epoch seconds

    ResourceClass resource_class = ResourceClass::Unknown;
    bool is_embedded = false;

    std::string session_id; // empty until sessionized
};

/// Recognizes the replay-path shape of an entry and derives URI-R,
/// Memento-Datetime and the resource class. Total: unrecognized paths
/// come back as kind=Other.
ArchiveRequest classify_path(LogEntry entry, ArchiveProfile profile);

/// 4-14 digit replay stamp -> UTC instant. Short stamps extend with the
/// `yyyymmddHHMMSS` defaults (month/day 01, time 00:00:00), so `2019`
/// reads as 2019-01-01T00:00:00Z.
Result<std::int64_t> parse_memento_datetime(std::string_view stamp);

/// Resource class from logged content-type (when the extended format
/// carries one), else the URI-R path extension; extension-less and
/// trailing-slash URIs count as HTML.
ResourceClass classify_resource(const ArchiveRequest &request, ArchiveProfile profile);

/// Kind a path would classify as, without building a full request.
/// Used for referrer checks.
RequestKind path_shape_kind(std::string_view path, ArchiveProfile profile);

} // namespace archlog
