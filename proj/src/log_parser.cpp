// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#include "archlog/log_parser.hpp"

#include <charconv>

namespace archlog {

Method method_from_text(std::string_view text) noexcept {
    if (text == "GET") return Method::Get;
    if (text == "HEAD") return Method::Head;
    if (text == "POST") return Method::Post;
    if (text == "PROPFIND") return Method::Propfind;
    if (text == "OPTIONS") return Method::Options;
    return Method::Other;
}

std::string_view method_name(Method m) noexcept {
    switch (m) {
    case Method::Get: return "GET";
    case Method::Head: return "HEAD";
    case Method::Post: return "POST";
    case Method::Propfind: return "PROPFIND";
    case Method::Options: return "OPTIONS";
    case Method::Other: break;
    }
    return "OTHER";
}

namespace {

struct Scanner {
    std::string_view line;
    std::size_t pos = 0;

    bool eol() const { return pos >= line.size(); }

    void skip_spaces() {
        while (pos < line.size() && line[pos] == ' ') ++pos;
    }

    // Next run of non-space bytes. Empty view at end of line.
    std::string_view token() {
        skip_spaces();
        const std::size_t start = pos;
        while (pos < line.size() && line[pos] != ' ') ++pos;
        return line.substr(start, pos - start);
    }

    // A field that may be quoted: returns the raw text (quotes included)
    // and the inner text. An unterminated quote runs to end of line,
    // which real logs produce when lines are cut mid-field.
    struct Field {
        std::string_view raw;
        std::string_view inner;
        bool quoted = false;
    };

    Field field() {
        skip_spaces();
        Field f;
        const std::size_t start = pos;
        if (pos < line.size() && line[pos] == '"') {
            f.quoted = true;
            ++pos;
            const std::size_t inner_start = pos;
            while (pos < line.size() && line[pos] != '"') ++pos;
            f.inner = line.substr(inner_start, pos - inner_start);
            if (pos < line.size()) ++pos; // closing quote
            f.raw = line.substr(start, pos - start);
        } else {
            while (pos < line.size() && line[pos] != ' ') ++pos;
            f.raw = line.substr(start, pos - start);
            f.inner = f.raw;
        }
        return f;
    }
};

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

bool token_has_alpha(std::string_view s) {
    for (char c : s) {
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) return true;
    }
    return false;
}

std::optional<std::string> opt_field(std::string_view inner) {
    if (inner == "-") return std::nullopt;
    return std::string(inner);
}

// "GET /path HTTP/1.1" -> method, path, version. Paths with raw spaces
// keep everything between the method and a trailing HTTP/* token.
void split_request(std::string_view request, LogEntry &entry) {
    if (request.empty()) {
        return;
    }
    const std::size_t method_end = request.find(' ');
    if (method_end == std::string_view::npos) {
        entry.method_text = std::string(request);
        entry.method = method_from_text(request);
        return;
    }
    entry.method_text = std::string(request.substr(0, method_end));
    entry.method = method_from_text(entry.method_text);
    std::string_view rest = request.substr(method_end + 1);
    const std::size_t last_space = rest.rfind(' ');
    if (last_space != std::string_view::npos &&
        rest.substr(last_space + 1).starts_with("HTTP/")) {
        entry.http_version = std::string(rest.substr(last_space + 1));
        rest = rest.substr(0, last_space);
    }
    entry.path = std::string(rest);
}

} // namespace

Result<LogEntry> parse_line(std::string_view line, LogFormat format) {
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }

    LogEntry entry;
    Scanner sc{line};

    const std::string_view client = sc.token();
    if (client.empty()) {
        return ParseError{0, "missing fields"};
    }
    entry.client_token = std::string(client);

    // Up to three tokens may sit between the client and the [timestamp]:
    // CLF has ident and auth, the extended variant inserts a vhost.
    std::string_view pre[3];
    int pre_count = 0;
    std::size_t bracket_pos = 0;
    while (true) {
        sc.skip_spaces();
        if (sc.eol()) {
            return ParseError{sc.pos, "missing timestamp"};
        }
        if (sc.line[sc.pos] == '[') {
            bracket_pos = sc.pos;
            break;
        }
        if (pre_count == 3) {
            return ParseError{sc.pos, "too many tokens before timestamp"};
        }
        pre[pre_count++] = sc.token();
    }

    switch (pre_count) {
    case 2:
        if (format == LogFormat::Clf || pre[0] == "-" ||
            (format == LogFormat::Auto && !token_has_alpha(pre[0]))) {
            entry.ident = std::string(pre[0]);
            entry.auth_user = std::string(pre[1]);
        } else {
            // client vhost auth, as in the extended archive format
            entry.vhost = std::string(pre[0]);
            entry.ident = std::string(pre[1]);
        }
        break;
    case 3:
        if (format == LogFormat::Clf) {
            return ParseError{bracket_pos, "unexpected token before timestamp"};
        }
        entry.vhost = std::string(pre[0]);
        entry.ident = std::string(pre[1]);
        entry.auth_user = std::string(pre[2]);
        break;
    default:
        return ParseError{bracket_pos, "missing fields before timestamp"};
    }

    const std::size_t ts_start = sc.pos + 1;
    const std::size_t ts_end = sc.line.find(']', ts_start);
    if (ts_end == std::string_view::npos) {
        return ParseError{bracket_pos, "unterminated timestamp bracket"};
    }
    auto ts = parse_clf_timestamp(sc.line.substr(ts_start, ts_end - ts_start));
    if (!ts) {
        ParseError err = ts.error();
        err.offset += ts_start;
        return err;
    }
    entry.timestamp = *ts;
    sc.pos = ts_end + 1;

    sc.skip_spaces();
    if (sc.eol() || sc.line[sc.pos] != '"') {
        return ParseError{sc.pos, "missing request field"};
    }
    const std::size_t req_open = sc.pos;
    const std::size_t req_close = sc.line.find('"', req_open + 1);
    if (req_close == std::string_view::npos) {
        return ParseError{req_open, "unterminated request field"};
    }
    split_request(sc.line.substr(req_open + 1, req_close - req_open - 1), entry);
    sc.pos = req_close + 1;

    sc.skip_spaces();
    const std::size_t status_pos = sc.pos;
    const std::string_view status_tok = sc.token();
    int status = 0;
    auto [p, ec] = std::from_chars(status_tok.data(), status_tok.data() + status_tok.size(), status);
    if (ec != std::errc() || p != status_tok.data() + status_tok.size() ||
        status < 100 || status > 599) {
        return ParseError{status_pos, "invalid status code"};
    }
    entry.status = status;

    // Everything after the status is optional: bytes, referrer,
    // user-agent, then extended trailing tokens kept verbatim.
    enum { Bytes, Referrer, UserAgent, Extras } state = Bytes;
    while (true) {
        sc.skip_spaces();
        if (sc.eol()) break;
        Scanner::Field f = sc.field();
        switch (state) {
        case Bytes:
            state = Referrer;
            if (!f.quoted) {
                if (f.raw == "-") {
                    break;
                }
                if (all_digits(f.raw)) {
                    std::int64_t n = 0;
                    std::from_chars(f.raw.data(), f.raw.data() + f.raw.size(), n);
                    entry.bytes = n;
                    break;
                }
                entry.extras.emplace_back(f.raw);
                state = Extras;
                break;
            }
            [[fallthrough]];
        case Referrer:
            state = UserAgent;
            if (f.quoted) {
                entry.referrer = opt_field(f.inner);
            } else {
                entry.extras.emplace_back(f.raw);
                state = Extras;
            }
            break;
        case UserAgent:
            state = Extras;
            if (f.quoted) {
                entry.user_agent = opt_field(f.inner);
            } else {
                entry.extras.emplace_back(f.raw);
            }
            break;
        case Extras:
            entry.extras.emplace_back(f.raw);
            break;
        }
    }

    return entry;
}

std::string serialize_line(const LogEntry &entry) {
    std::string out;
    out.reserve(256);
    out += entry.client_token;
    if (entry.vhost) {
        out += ' ';
        out += *entry.vhost;
    }
    out += ' ';
    out += entry.ident;
    if (entry.auth_user) {
        out += ' ';
        out += *entry.auth_user;
    }
    out += " [";
    out += format_clf_timestamp(entry.timestamp);
    out += "] \"";
    out += entry.method_text;
    if (!entry.path.empty()) {
        out += ' ';
        out += entry.path;
    }
    if (entry.http_version) {
        out += ' ';
        out += *entry.http_version;
    }
    out += "\" ";
    out += std::to_string(entry.status);
    out += ' ';
    out += entry.bytes ? std::to_string(*entry.bytes) : "-";
    out += " \"";
    out += entry.referrer.value_or("-");
    out += "\" \"";
    out += entry.user_agent.value_or("-");
    out += '"';
    for (const std::string &extra : entry.extras) {
        out += ' ';
        out += extra;
    }
    return out;
}

} // namespace archlog
