// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include <zlib.h>

#include "archlog/record_io.hpp"

using namespace archlog;

namespace {

bool records_equal(const ArchiveRequest &a, const ArchiveRequest &b) {
    return a.entry.semantically_equal(b.entry) && a.entry.seq == b.entry.seq &&
           a.kind == b.kind && a.replay_prefix == b.replay_prefix &&
           a.stamp_text == b.stamp_text && a.uri_r == b.uri_r &&
           a.memento_datetime == b.memento_datetime &&
           a.resource_class == b.resource_class && a.is_embedded == b.is_embedded &&
           a.session_id == b.session_id;
}

std::string random_text(std::mt19937_64 &rng, std::size_t max_len) {
    static const std::string alphabet =
        "abcXYZ019 \t\"\\/-_%\n\r\xc3\xa9\xff";
    std::string out;
    const std::size_t len = rng() % max_len;
    for (std::size_t i = 0; i < len; ++i) {
        out += alphabet[rng() % alphabet.size()];
    }
    return out;
}

} // namespace

TEST_CASE("record round-trip survives hostile field content") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 2000; ++trial) {
        ArchiveRequest r;
        r.entry.seq = rng();
        r.entry.client_token = "-"; // lone dash must survive as text
        if (rng() % 2) r.entry.client_token = random_text(rng, 24) + "x";
        if (rng() % 2) r.entry.vhost = random_text(rng, 16);
        r.entry.ident = rng() % 2 ? "-" : "ident";
        if (rng() % 2) r.entry.auth_user = random_text(rng, 8);
        r.entry.timestamp.epoch_utc = static_cast<std::int64_t>(rng() % 2000000000);
        r.entry.timestamp.tz_offset_min = static_cast<int>(rng() % 1440) - 720;
        r.entry.method_text = rng() % 2 ? "GET" : random_text(rng, 6);
        r.entry.method = method_from_text(r.entry.method_text);
        r.entry.path = random_text(rng, 60);
        if (rng() % 2) r.entry.http_version = "HTTP/1.1";
        r.entry.status = 100 + static_cast<int>(rng() % 500);
        if (rng() % 2) r.entry.bytes = static_cast<std::int64_t>(rng() % 1000000);
        if (rng() % 2) r.entry.referrer = random_text(rng, 40);
        if (rng() % 2) r.entry.user_agent = random_text(rng, 40);
        if (rng() % 3 == 0) {
            r.entry.extras = {"0.123", "MISS", "\"text/html; charset=utf-8\"", "\"-\""};
        }
        r.kind = static_cast<RequestKind>(rng() % 4);
        if (rng() % 2) r.uri_r = random_text(rng, 40);
        if (rng() % 2) r.replay_prefix = "/web/";
        if (rng() % 2) r.stamp_text = "20190101000000";
        if (rng() % 2) r.memento_datetime = static_cast<std::int64_t>(rng() % 2000000000);
        r.resource_class = static_cast<ResourceClass>(rng() % 7);
        r.is_embedded = rng() % 2 == 0;
        if (rng() % 2) r.session_id = "abcd1234abcd1234";

        std::string line;
        append_record(line, r);
        REQUIRE(line.back() == '\n');
        auto parsed = parse_record(std::string_view(line).substr(0, line.size() - 1));
        REQUIRE_MESSAGE(parsed.ok(), parsed.error().reason);
        CHECK(records_equal(r, *parsed));
    }
}

TEST_CASE("writer and reader round-trip through a file") {
    const auto path = std::filesystem::temp_directory_path() / "archlog_records_test.arl";
    ArchiveRequest r;
    r.entry.seq = 7;
    r.entry.client_token = "1.2.3.4";
    r.entry.method_text = "GET";
    r.entry.method = Method::Get;
    r.entry.path = "/web/20190101000000/http://x/";
    r.entry.status = 200;
    r.kind = RequestKind::Memento;
    r.uri_r = "http://x/";
    r.memento_datetime = 1546300800;
    {
        RecordWriter writer(path.string());
        REQUIRE(writer.ok());
        for (int i = 0; i < 100; ++i) {
            r.entry.seq = static_cast<std::uint64_t>(i);
            writer.write(r);
        }
    }
    RecordReader reader(path.string());
    REQUIRE(reader.ok());
    ArchiveRequest in;
    std::uint64_t count = 0;
    while (reader.next(in)) {
        CHECK(in.entry.seq == count);
        CHECK(in.uri_r == "http://x/");
        ++count;
    }
    CHECK(count == 100);
    CHECK(reader.ok());
    std::filesystem::remove(path);
}

TEST_CASE("reader rejects missing files and foreign headers") {
    RecordReader missing("/nonexistent/records.arl");
    CHECK(!missing.ok());

    const auto path = std::filesystem::temp_directory_path() / "archlog_bad_header.arl";
    {
        std::ofstream out(path);
        out << "not a record stream\n";
    }
    RecordReader bad(path.string());
    CHECK(!bad.ok());
    std::filesystem::remove(path);
}

TEST_CASE("line reader handles gzip input transparently") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto plain = dir / "archlog_lines_test.log";
    {
        std::ofstream out(plain, std::ios::binary);
        out << "first\nsecond\nthird";
    }
    LineReader reader(plain.string());
    REQUIRE(reader.ok());
    std::string line;
    REQUIRE(reader.next(line));
    CHECK(line == "first");
    REQUIRE(reader.next(line));
    CHECK(line == "second");
    REQUIRE(reader.next(line));
    CHECK(line == "third"); // no trailing newline required
    CHECK(!reader.next(line));
    std::filesystem::remove(plain);

    const auto gz = dir / "archlog_lines_test.log.gz";
    {
        gzFile out = gzopen(gz.string().c_str(), "wb");
        REQUIRE(out != nullptr);
        const std::string content = "alpha\nbeta\n";
        gzwrite(out, content.data(), static_cast<unsigned>(content.size()));
        gzclose(out);
    }
    LineReader gz_reader(gz.string());
    REQUIRE(gz_reader.ok());
    REQUIRE(gz_reader.next(line));
    CHECK(line == "alpha");
    REQUIRE(gz_reader.next(line));
    CHECK(line == "beta");
    CHECK(!gz_reader.next(line));
    std::filesystem::remove(gz);
}
