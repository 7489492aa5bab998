// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#include "archlog/record_io.hpp"

#include <charconv>
#include <zlib.h>

namespace archlog {

namespace {

void append_escaped(std::string &out, std::string_view field) {
    if (field == "-") {
        out += "\\-";
        return;
    }
    for (char c : field) {
        switch (c) {
        case '\t': out += "\\t"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\\': out += "\\\\"; break;
        default: out += c;
        }
    }
}

void append_opt(std::string &out, const std::optional<std::string> &field) {
    if (field) {
        append_escaped(out, *field);
    } else {
        out += '-';
    }
}

std::string unescape(std::string_view field) {
    std::string out;
    out.reserve(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) {
        if (field[i] == '\\' && i + 1 < field.size()) {
            ++i;
            switch (field[i]) {
            case 't': out += '\t'; break;
            case 'n': out += '\n'; break;
            case 'r': out += '\r'; break;
            case '-': out += '-'; break;
            default: out += field[i];
            }
        } else {
            out += field[i];
        }
    }
    return out;
}

bool split_fields(std::string_view line, std::string_view *fields, std::size_t count) {
    std::size_t start = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            if (i + 1 != count) {
                return false;
            }
            fields[i] = line.substr(start);
            return true;
        }
        fields[i] = line.substr(start, tab - start);
        start = tab + 1;
    }
    return false;
}

template <typename T>
bool parse_int(std::string_view s, T &out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

constexpr std::size_t kFieldCount = 22;

} // namespace

void append_record(std::string &out, const ArchiveRequest &r) {
    const LogEntry &e = r.entry;
    out += std::to_string(e.seq);
    out += '\t';
    append_escaped(out, e.client_token);
    out += '\t';
    append_opt(out, e.vhost);
    out += '\t';
    append_escaped(out, e.ident);
    out += '\t';
    append_opt(out, e.auth_user);
    out += '\t';
    out += std::to_string(e.timestamp.epoch_utc);
    out += '\t';
    out += std::to_string(e.timestamp.tz_offset_min);
    out += '\t';
    append_escaped(out, e.method_text);
    out += '\t';
    append_escaped(out, e.path);
    out += '\t';
    append_opt(out, e.http_version);
    out += '\t';
    out += std::to_string(e.status);
    out += '\t';
    out += e.bytes ? std::to_string(*e.bytes) : "-";
    out += '\t';
    append_opt(out, e.referrer);
    out += '\t';
    append_opt(out, e.user_agent);
    out += '\t';
    if (e.extras.empty()) {
        out += '-';
    } else {
        std::string joined;
        for (std::size_t i = 0; i < e.extras.size(); ++i) {
            if (i != 0) joined += ' ';
            joined += e.extras[i];
        }
        append_escaped(out, joined);
    }
    out += '\t';
    out += request_kind_name(r.kind);
    out += '\t';
    if (r.replay_prefix.empty()) {
        out += '-';
    } else {
        append_escaped(out, r.replay_prefix);
    }
    out += '\t';
    if (r.stamp_text.empty()) {
        out += '-';
    } else {
        append_escaped(out, r.stamp_text);
    }
    out += '\t';
    if (r.uri_r.empty()) {
        out += '-';
    } else {
        append_escaped(out, r.uri_r);
    }
    out += '\t';
    out += r.memento_datetime ? std::to_string(*r.memento_datetime) : "-";
    out += '\t';
    out += resource_class_name(r.resource_class);
    out += '\t';
    out += r.is_embedded ? '1' : '0';
    out += '\t';
    if (r.session_id.empty()) {
        out += '-';
    } else {
        append_escaped(out, r.session_id);
    }
    out += '\n';
}

Result<ArchiveRequest> parse_record(std::string_view line) {
    std::string_view f[kFieldCount + 1];
    if (!split_fields(line, f, kFieldCount + 1)) {
        return ParseError{0, "wrong field count"};
    }
    ArchiveRequest r;
    LogEntry &e = r.entry;
    if (!parse_int(f[0], e.seq)) {
        return ParseError{0, "bad seq"};
    }
    e.client_token = unescape(f[1]);
    if (f[2] != "-") e.vhost = unescape(f[2]);
    e.ident = f[3] == "-" ? "-" : unescape(f[3]);
    if (f[4] != "-") e.auth_user = unescape(f[4]);
    if (!parse_int(f[5], e.timestamp.epoch_utc) || !parse_int(f[6], e.timestamp.tz_offset_min)) {
        return ParseError{0, "bad timestamp"};
    }
    e.method_text = unescape(f[7]);
    e.method = method_from_text(e.method_text);
    e.path = unescape(f[8]);
    if (f[9] != "-") e.http_version = unescape(f[9]);
    if (!parse_int(f[10], e.status)) {
        return ParseError{0, "bad status"};
    }
    if (f[11] != "-") {
        std::int64_t b = 0;
        if (!parse_int(f[11], b)) {
            return ParseError{0, "bad bytes"};
        }
        e.bytes = b;
    }
    if (f[12] != "-") e.referrer = unescape(f[12]);
    if (f[13] != "-") e.user_agent = unescape(f[13]);
    if (f[14] != "-") {
        const std::string joined = unescape(f[14]);
        std::size_t start = 0;
        while (start <= joined.size()) {
            std::size_t sp = start;
            bool in_quote = false;
            while (sp < joined.size() && (in_quote || joined[sp] != ' ')) {
                if (joined[sp] == '"') in_quote = !in_quote;
                ++sp;
            }
            e.extras.emplace_back(joined.substr(start, sp - start));
            if (sp >= joined.size()) break;
            start = sp + 1;
        }
    }
    if (auto kind = request_kind_from_name(f[15])) {
        r.kind = *kind;
    } else {
        return ParseError{0, "bad kind"};
    }
    if (f[16] != "-") r.replay_prefix = unescape(f[16]);
    if (f[17] != "-") r.stamp_text = unescape(f[17]);
    if (f[18] != "-") r.uri_r = unescape(f[18]);
    if (f[19] != "-") {
        std::int64_t mdt = 0;
        if (!parse_int(f[19], mdt)) {
            return ParseError{0, "bad memento datetime"};
        }
        r.memento_datetime = mdt;
    }
    if (auto cls = resource_class_from_name(f[20])) {
        r.resource_class = *cls;
    } else {
        return ParseError{0, "bad resource class"};
    }
    r.is_embedded = f[21] == "1";
    if (f[22] != "-") r.session_id = unescape(f[22]);
    return r;
}

LineReader::LineReader(const std::string &path) {
    handle_ = gzopen(path.c_str(), "rb");
    buffer_.resize(1 << 16);
    buffer_.clear();
}

LineReader::~LineReader() {
    if (handle_) {
        gzclose(static_cast<gzFile>(handle_));
    }
}

bool LineReader::next(std::string &line) {
    if (!handle_) {
        return false;
    }
    line.clear();
    while (true) {
        const std::size_t nl = buffer_.find('\n', buf_pos_);
        if (nl != std::string::npos) {
            line.append(buffer_, buf_pos_, nl - buf_pos_);
            buf_pos_ = nl + 1;
            return true;
        }
        line.append(buffer_, buf_pos_, buffer_.size() - buf_pos_);
        buffer_.clear();
        buf_pos_ = 0;
        if (eof_) {
            return !line.empty();
        }
        char chunk[1 << 16];
        const int n = gzread(static_cast<gzFile>(handle_), chunk, sizeof(chunk));
        if (n <= 0) {
            eof_ = true;
            continue;
        }
        buffer_.assign(chunk, static_cast<std::size_t>(n));
    }
}

RecordWriter::RecordWriter(const std::string &path) {
    file_ = std::fopen(path.c_str(), "wb");
    if (file_) {
        buffer_.reserve(1 << 20);
        buffer_ += kRecordHeader;
        buffer_ += '\n';
    }
}

RecordWriter::~RecordWriter() {
    close();
}

void RecordWriter::write(const ArchiveRequest &r) {
    append_record(buffer_, r);
    if (buffer_.size() > (1 << 20) - (1 << 12)) {
        std::fwrite(buffer_.data(), 1, buffer_.size(), file_);
        buffer_.clear();
    }
}

void RecordWriter::close() {
    if (file_) {
        if (!buffer_.empty()) {
            std::fwrite(buffer_.data(), 1, buffer_.size(), file_);
            buffer_.clear();
        }
        std::fclose(file_);
        file_ = nullptr;
    }
}

RecordReader::RecordReader(const std::string &path) : lines_(path) {
    if (!lines_.ok()) {
        error_ = "cannot open " + path;
        return;
    }
    std::string header;
    if (!lines_.next(header) || !header.starts_with("#archlog\trecords\tv1")) {
        error_ = "missing record stream header in " + path;
        return;
    }
    ok_ = true;
}

bool RecordReader::next(ArchiveRequest &r) {
    if (!ok_) {
        return false;
    }
    while (lines_.next(line_)) {
        if (line_.empty() || line_[0] == '#') {
            continue;
        }
        auto parsed = parse_record(line_);
        if (!parsed) {
            error_ = "malformed record: " + parsed.error().reason;
            ok_ = false;
            return false;
        }
        r = std::move(*parsed);
        return true;
    }
    return false;
}

} // namespace archlog
