// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#include "archlog/archive_request.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "archlog/time_util.hpp"

namespace archlog {

std::string_view request_kind_name(RequestKind k) noexcept {
    switch (k) {
    case RequestKind::Memento: return "memento";
    case RequestKind::Timemap: return "timemap";
    case RequestKind::RobotsTxt: return "robots_txt";
    case RequestKind::Other: break;
    }
    return "other";
}

std::optional<RequestKind> request_kind_from_name(std::string_view s) noexcept {
    if (s == "memento") return RequestKind::Memento;
    if (s == "timemap") return RequestKind::Timemap;
    if (s == "robots_txt") return RequestKind::RobotsTxt;
    if (s == "other") return RequestKind::Other;
    return std::nullopt;
}

std::string_view resource_class_name(ResourceClass c) noexcept {
    switch (c) {
    case ResourceClass::Html: return "html";
    case ResourceClass::Image: return "image";
    case ResourceClass::Stylesheet: return "stylesheet";
    case ResourceClass::Script: return "script";
    case ResourceClass::Font: return "font";
    case ResourceClass::OtherEmbedded: return "other_embedded";
    case ResourceClass::Unknown: break;
    }
    return "unknown";
}

std::optional<ResourceClass> resource_class_from_name(std::string_view s) noexcept {
    if (s == "html") return ResourceClass::Html;
    if (s == "image") return ResourceClass::Image;
    if (s == "stylesheet") return ResourceClass::Stylesheet;
    if (s == "script") return ResourceClass::Script;
    if (s == "font") return ResourceClass::Font;
    if (s == "other_embedded") return ResourceClass::OtherEmbedded;
    if (s == "unknown") return ResourceClass::Unknown;
    return std::nullopt;
}

std::optional<ArchiveProfile> archive_profile_from_name(std::string_view s) noexcept {
    if (s == "ia" || s == "ia_wayback") return ArchiveProfile::IaWayback;
    if (s == "arquivo") return ArchiveProfile::Arquivo;
    if (s == "auto") return ArchiveProfile::Auto;
    return std::nullopt;
}

std::string_view archive_profile_name(ArchiveProfile p) noexcept {
    switch (p) {
    case ArchiveProfile::IaWayback: return "ia";
    case ArchiveProfile::Arquivo: return "arquivo";
    case ArchiveProfile::Auto: break;
    }
    return "auto";
}

namespace {

char ascii_lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c;
}

bool is_digit(char c) {
    return c >= '0' && c <= '9';
}

// Splits an absolute-URL path into its origin ("http://host") and the
// origin-form remainder. Paths that are already origin-form pass through.
std::string_view split_origin(std::string_view path, std::string_view &origin) {
    origin = {};
    std::string_view rest = path;
    if (path.starts_with("http://") || path.starts_with("https://")) {
        const std::size_t scheme_len = path.starts_with("https://") ? 8 : 7;
        const std::size_t slash = path.find('/', scheme_len);
        if (slash == std::string_view::npos) {
            origin = path;
            return {};
        }
        origin = path.substr(0, slash);
        rest = path.substr(slash);
    }
    return rest;
}

struct PathShape {
    RequestKind kind = RequestKind::Other;
    std::string_view prefix;     // includes the trailing slash before the stamp
    std::string_view stamp_text; // digits [modifier] ['*'], or "*"
    std::string_view uri_r;
    std::optional<std::int64_t> memento_datetime;
    std::string_view modifier; // "im_", "js_", ... when present
};

bool is_timemap_format_segment(std::string_view s) {
    return s == "link" || s == "json" || s == "cdx" || s == "html";
}

std::size_t profile_prefixes(ArchiveProfile profile, std::array<std::string_view, 2> &out) {
    switch (profile) {
    case ArchiveProfile::IaWayback:
        out = {"/web", ""};
        return 1;
    case ArchiveProfile::Arquivo:
        out = {"/wayback", ""};
        return 1;
    case ArchiveProfile::Auto:
        break;
    }
    out = {"/web", "/wayback"};
    return 2;
}

PathShape analyze_local(std::string_view local, ArchiveProfile profile) {
    PathShape shape;
    if (local == "/robots.txt" || local.starts_with("/robots.txt?")) {
        shape.kind = RequestKind::RobotsTxt;
        return shape;
    }
    std::array<std::string_view, 2> prefixes;
    const std::size_t n_prefixes = profile_prefixes(profile, prefixes);
    std::string_view matched;
    std::string_view rem;
    for (std::size_t k = 0; k < n_prefixes; ++k) {
        const std::string_view prefix = prefixes[k];
        if (local.size() > prefix.size() + 1 && local.starts_with(prefix) &&
            local[prefix.size()] == '/') {
            matched = local.substr(0, prefix.size() + 1);
            rem = local.substr(prefix.size() + 1);
            break;
        }
    }
    if (matched.empty()) {
        return shape;
    }
    shape.prefix = matched;

    // TimeMap API form: <prefix>/timemap/<format>/<uri-r>
    if (rem.starts_with("timemap/")) {
        std::string_view after = rem.substr(8);
        const std::size_t slash = after.find('/');
        if (slash != std::string_view::npos && is_timemap_format_segment(after.substr(0, slash))) {
            after = after.substr(slash + 1);
        }
        if (!after.empty()) {
            shape.kind = RequestKind::Timemap;
            shape.stamp_text = rem.substr(0, rem.size() - after.size() - 1);
            shape.uri_r = after;
        }
        return shape;
    }

    // Wildcard TimeMap: <prefix>/*/<uri-r>
    if (rem.starts_with("*/")) {
        if (rem.size() > 2) {
            shape.kind = RequestKind::Timemap;
            shape.stamp_text = rem.substr(0, 1);
            shape.uri_r = rem.substr(2);
        }
        return shape;
    }

    // <prefix>/<stamp>[modifier][*]/<uri-r>
    std::size_t i = 0;
    while (i < rem.size() && is_digit(rem[i])) ++i;
    if (i < 4 || i > 14) {
        return shape;
    }
    const std::string_view digits = rem.substr(0, i);
    std::size_t j = i;
    if (rem.size() >= j + 3 && rem[j + 2] == '_' &&
        ascii_lower(rem[j]) >= 'a' && ascii_lower(rem[j]) <= 'z' &&
        ascii_lower(rem[j + 1]) >= 'a' && ascii_lower(rem[j + 1]) <= 'z') {
        shape.modifier = rem.substr(j, 3);
        j += 3;
    }
    bool wildcard = false;
    if (j < rem.size() && rem[j] == '*') {
        wildcard = true;
        ++j;
    }
    if (j >= rem.size() || rem[j] != '/' || j + 1 >= rem.size()) {
        return shape;
    }
    shape.stamp_text = rem.substr(0, j);
    shape.uri_r = rem.substr(j + 1);
    if (wildcard) {
        // Calendar query over a stamp range: a list of captures.
        shape.kind = RequestKind::Timemap;
        return shape;
    }
    auto mdt = parse_memento_datetime(digits);
    if (!mdt) {
        shape = PathShape{};
        return shape;
    }
    shape.kind = RequestKind::Memento;
    shape.memento_datetime = *mdt;
    return shape;
}

PathShape analyze_path(std::string_view path, ArchiveProfile profile) {
    std::string_view origin;
    const std::string_view local = split_origin(path, origin);
    return analyze_local(local, profile);
}

std::string_view uri_path_component(std::string_view uri) {
    std::string_view origin;
    std::string_view rest = split_origin(uri, origin);
    const std::size_t cut = rest.find_first_of("?#");
    if (cut != std::string_view::npos) {
        rest = rest.substr(0, cut);
    }
    return rest;
}

std::string_view path_extension(std::string_view path) {
    const std::size_t slash = path.rfind('/');
    const std::string_view last = slash == std::string_view::npos ? path : path.substr(slash + 1);
    const std::size_t dot = last.rfind('.');
    if (dot == std::string_view::npos || dot + 1 == last.size()) {
        return {};
    }
    return last.substr(dot + 1);
}

bool ext_in(std::string_view ext, std::initializer_list<std::string_view> set) {
    std::string lowered(ext);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(), ascii_lower);
    for (std::string_view candidate : set) {
        if (lowered == candidate) return true;
    }
    return false;
}

// First extras token shaped like a MIME type, unquoted and lowercased up
// to any parameters.
std::optional<std::string> content_type_from_extras(const std::vector<std::string> &extras) {
    for (const std::string &raw : extras) {
        std::string_view t = raw;
        if (t.size() >= 2 && t.front() == '"' && t.back() == '"') {
            t = t.substr(1, t.size() - 2);
        }
        const std::size_t slash = t.find('/');
        if (slash == std::string_view::npos || slash == 0) continue;
        bool word = true;
        for (char c : t.substr(0, slash)) {
            if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'))) {
                word = false;
                break;
            }
        }
        if (!word) continue;
        static constexpr std::array<std::string_view, 8> kTypes = {
            "text", "image", "application", "font", "audio", "video", "multipart", "message"};
        std::string major(t.substr(0, slash));
        std::transform(major.begin(), major.end(), major.begin(), ascii_lower);
        if (std::find(kTypes.begin(), kTypes.end(), major) == kTypes.end()) continue;
        std::size_t end = t.find_first_of("; ");
        std::string full(t.substr(0, end));
        std::transform(full.begin(), full.end(), full.begin(), ascii_lower);
        return full;
    }
    return std::nullopt;
}

std::optional<ResourceClass> class_from_content_type(std::string_view ct) {
    if (ct == "text/html" || ct == "application/xhtml+xml") return ResourceClass::Html;
    if (ct.starts_with("image/")) return ResourceClass::Image;
    if (ct == "text/css") return ResourceClass::Stylesheet;
    if (ct == "application/javascript" || ct == "text/javascript" ||
        ct == "application/x-javascript") {
        return ResourceClass::Script;
    }
    if (ct.starts_with("font/") || ct == "application/font-woff" ||
        ct == "application/vnd.ms-fontobject" || ct.starts_with("application/x-font")) {
        return ResourceClass::Font;
    }
    return std::nullopt;
}

std::optional<ResourceClass> class_from_modifier(std::string_view mod) {
    if (mod == "im_") return ResourceClass::Image;
    if (mod == "cs_") return ResourceClass::Stylesheet;
    if (mod == "js_") return ResourceClass::Script;
    return std::nullopt;
}

std::string_view stamp_modifier(const std::string &stamp_text) {
    if (stamp_text.size() >= 3 && stamp_text.back() == '_') {
        return std::string_view(stamp_text).substr(stamp_text.size() - 3);
    }
    return {};
}

} // namespace

Result<std::int64_t> parse_memento_datetime(std::string_view stamp) {
    if (stamp.size() < 4 || stamp.size() > 14) {
        return ParseError{0, "stamp must be 4-14 digits"};
    }
    for (std::size_t i = 0; i < stamp.size(); ++i) {
        if (!is_digit(stamp[i])) {
            return ParseError{i, "stamp must be digits"};
        }
    }
    // Extend short stamps with the template defaults.
    static constexpr std::string_view kPad = "00000101000000";
    char full[14];
    std::copy(stamp.begin(), stamp.end(), full);
    std::copy(kPad.begin() + static_cast<std::ptrdiff_t>(stamp.size()), kPad.end(),
              full + stamp.size());
    const std::string_view f(full, 14);

    auto num = [&](std::size_t off, std::size_t len) {
        unsigned v = 0;
        for (std::size_t i = off; i < off + len; ++i) {
            v = v * 10 + static_cast<unsigned>(f[i] - '0');
        }
        return v;
    };
    CivilTime ct;
    ct.year = static_cast<int>(num(0, 4));
    ct.month = num(4, 2);
    ct.day = num(6, 2);
    ct.hour = num(8, 2);
    ct.minute = num(10, 2);
    ct.second = num(12, 2);
    if (!valid_civil_date(ct.year, ct.month, ct.day)) {
        return ParseError{4, "invalid calendar date"};
    }
    if (ct.hour > 23 || ct.minute > 59 || ct.second > 59) {
        return ParseError{8, "time of day out of range"};
    }
    return epoch_from_civil(ct);
}

RequestKind path_shape_kind(std::string_view path, ArchiveProfile profile) {
    return analyze_path(path, profile).kind;
}

ResourceClass classify_resource(const ArchiveRequest &request, ArchiveProfile profile) {
    if (auto ct = content_type_from_extras(request.entry.extras)) {
        if (auto cls = class_from_content_type(*ct)) {
            return *cls;
        }
    } else {
        if (auto cls = class_from_modifier(stamp_modifier(request.stamp_text))) {
            return *cls;
        }
        const std::string_view target = request.uri_r.empty()
                                            ? std::string_view(request.entry.path)
                                            : std::string_view(request.uri_r);
        const std::string_view path = uri_path_component(target);
        const std::string_view ext = path_extension(path);
        if (ext.empty() || ext_in(ext, {"htm", "html", "php", "asp", "aspx", "jsp"})) {
            return ResourceClass::Html;
        }
        if (ext_in(ext, {"png", "jpg", "jpeg", "gif", "ico", "svg", "webp", "bmp"})) {
            return ResourceClass::Image;
        }
        if (ext_in(ext, {"css"})) return ResourceClass::Stylesheet;
        if (ext_in(ext, {"js"})) return ResourceClass::Script;
        if (ext_in(ext, {"woff", "woff2", "ttf", "eot", "otf"})) return ResourceClass::Font;
    }
    // Unrecognized type: embedded if it was pulled in from a replayed page.
    if (request.entry.referrer &&
        path_shape_kind(*request.entry.referrer, profile) == RequestKind::Memento) {
        return ResourceClass::OtherEmbedded;
    }
    return ResourceClass::Unknown;
}

ArchiveRequest classify_path(LogEntry entry, ArchiveProfile profile) {
    ArchiveRequest request;
    const PathShape shape = analyze_path(entry.path, profile);
    request.kind = shape.kind;
    if (shape.kind == RequestKind::Memento || shape.kind == RequestKind::Timemap) {
        const char *path_begin = entry.path.data();
        // prefix as matched within the path, including any absolute origin
        const std::size_t prefix_end =
            static_cast<std::size_t>(shape.prefix.data() + shape.prefix.size() - path_begin);
        request.replay_prefix = entry.path.substr(0, prefix_end);
        request.stamp_text = std::string(shape.stamp_text);
        request.uri_r = std::string(shape.uri_r);
        request.memento_datetime = shape.memento_datetime;
    }
    request.entry = std::move(entry);
    if (request.kind == RequestKind::Memento || request.kind == RequestKind::Other) {
        request.resource_class = classify_resource(request, profile);
        // im_/cs_/js_ replay modifiers mark embedded loads even when the
        // logged content-type reclassifies the body.
        request.is_embedded = (request.resource_class != ResourceClass::Html &&
                               request.resource_class != ResourceClass::Unknown) ||
                              class_from_modifier(stamp_modifier(request.stamp_text)).has_value();
    }
    return request;
}

} // namespace archlog
