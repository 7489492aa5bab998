// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdio>
#include <string>
#include <string_view>

#include "archlog/archive_request.hpp"
#include "archlog/result.hpp"

namespace archlog {

/// Canonical intermediate stream: one tab-separated record per
/// ArchiveRequest, fixed field order, newline-delimited. Text fields are
/// backslash-escaped (\t \n \r \\); absent optional fields carry `-`
/// (a literal lone dash escapes to `\-`). The stream starts with a
/// versioned header line.
inline constexpr std::string_view kRecordHeader =
    "#archlog\trecords\tv1\tseq client vhost ident auth epoch tzmin method path "
    "version status bytes referrer ua extras kind prefix stamp uri_r mdt class "
    "embedded session";

void append_record(std::string &out, const ArchiveRequest &r);
Result<ArchiveRequest> parse_record(std::string_view line);

/// Line reader over plain or gzip files (zlib reads both transparently).
class LineReader {
public:
    explicit LineReader(const std::string &path);
    ~LineReader();
    LineReader(const LineReader &) = delete;
    LineReader &operator=(const LineReader &) = delete;

    bool ok() const { return handle_ != nullptr; }
    /// Next line without its newline. False at end of input.
    bool next(std::string &line);

private:
    void *handle_ = nullptr;
    std::string buffer_;
    std::size_t buf_pos_ = 0;
    bool eof_ = false;
};

/// Buffered record writer; plain text output.
class RecordWriter {
public:
    explicit RecordWriter(const std::string &path);
    ~RecordWriter();
    RecordWriter(const RecordWriter &) = delete;
    RecordWriter &operator=(const RecordWriter &) = delete;

    bool ok() const { return file_ != nullptr; }
    void write(const ArchiveRequest &r);
    void close();

private:
    std::FILE *file_ = nullptr;
    std::string buffer_;
};

/// Record reader that validates the stream header.
class RecordReader {
public:
    explicit RecordReader(const std::string &path);

    bool ok() const { return ok_; }
    const std::string &error() const { return error_; }
    /// False at end of input; sets error() on malformed records.
    bool next(ArchiveRequest &r);

private:
    LineReader lines_;
    std::string line_;
    std::string error_;
    bool ok_ = false;
};

} // namespace archlog
