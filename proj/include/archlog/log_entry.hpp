// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "archlog/time_util.hpp"

namespace archlog {

enum class Method : std::uint8_t { Get, Head, Post, Propfind, Options, Other };

Method method_from_text(std::string_view text) noexcept;
std::string_view method_name(Method m) noexcept;

/// One parsed access-log line (Common/Combined Log Format plus the
/// archive-specific extended variant with a vhost field and trailing
/// cache/timing/content-type tokens).
///
/// Absent fields (`-` or physically missing from a truncated line) are
/// nullopt. client_token is the anonymized IP and is kept whole,
/// including `_n_m` suffixes.
struct LogEntry {
    std::uint64_t seq = 0; // input sequence number, assigned by the reader

    std::string client_token;
    std::optional<std::string> vhost; // extended format only
    std::string ident = "-";
    std::optional<std::string> auth_user;

    ClfTime timestamp;

    Method method = Method::Other;
    std::string method_text;
    std::string path;
    std::optional<std::string> http_version;

    int status = 0;
    std::optional<std::int64_t> bytes;

    std::optional<std::string> referrer;
    std::optional<std::string> user_agent;

    /// Trailing tokens after the User-Agent, verbatim (quotes kept).
    std::vector<std::string> extras;

    std::string_view user_agent_or_empty() const {
        return user_agent ? std::string_view(*user_agent) : std::string_view();
    }

    bool semantically_equal(const LogEntry &other) const {
        return client_token == other.client_token && vhost == other.vhost &&
               ident == other.ident && auth_user == other.auth_user &&
               timestamp == other.timestamp && method == other.method &&
               method_text == other.method_text && path == other.path &&
               http_version == other.http_version && status == other.status &&
               bytes == other.bytes && referrer == other.referrer &&
               user_agent == other.user_agent && extras == other.extras;
    }
};

} // namespace archlog
