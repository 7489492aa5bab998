// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "archlog/archive_request.hpp"
#include "archlog/log_parser.hpp"

using namespace archlog;

namespace {

ArchiveRequest classify(const std::string &line, ArchiveProfile profile) {
    auto parsed = parse_line(line);
    REQUIRE(parsed.ok());
    return classify_path(std::move(*parsed), profile);
}

LogEntry entry_with_path(std::string path) {
    LogEntry e;
    e.client_token = "1.2.3.4";
    e.method = Method::Get;
    e.method_text = "GET";
    e.path = std::move(path);
    e.status = 200;
    return e;
}

} // namespace

TEST_CASE("arquivo replay path is a memento") {
    auto r = classify_path(entry_with_path("/wayback/20091223043049/http://www.cs.odu.edu/"),
                           ArchiveProfile::Arquivo);
    CHECK(r.kind == RequestKind::Memento);
    CHECK(r.uri_r == "http://www.cs.odu.edu/");
    REQUIRE(r.memento_datetime);
    CHECK(format_iso8601(*r.memento_datetime) == "2009-12-23T04:30:49Z");
    CHECK(r.resource_class == ResourceClass::Html);
    CHECK(!r.is_embedded);
}

TEST_CASE("star path is a timemap") {
    auto r = classify_path(entry_with_path("/web/*/http://maestro.haarp.alaska.edu/"),
                           ArchiveProfile::IaWayback);
    CHECK(r.kind == RequestKind::Timemap);
    CHECK(r.uri_r == "http://maestro.haarp.alaska.edu/");
    CHECK(!r.memento_datetime);
}

TEST_CASE("wildcard calendar path is a timemap") {
    auto r = classify_path(
        entry_with_path("/web/20130715000000*/http://maestro.haarp.alaska.edu/"),
        ArchiveProfile::IaWayback);
    CHECK(r.kind == RequestKind::Timemap);
    CHECK(r.uri_r == "http://maestro.haarp.alaska.edu/");
    CHECK(!r.memento_datetime);
}

TEST_CASE("absolute robots.txt URL") {
    auto r = classify_path(entry_with_path("http://web.archive.org/robots.txt"),
                           ArchiveProfile::Auto);
    CHECK(r.kind == RequestKind::RobotsTxt);
    CHECK(r.uri_r.empty());
    auto q = classify_path(entry_with_path("/robots.txt?ref=x"), ArchiveProfile::Auto);
    CHECK(q.kind == RequestKind::RobotsTxt);
}

TEST_CASE("absolute replay URL with any archive host") {
    auto r = classify_path(
        entry_with_path(
            "http://wayback.archive.org/web/*/http://www.goloco.org/users/D5EWwXI"),
        ArchiveProfile::IaWayback);
    CHECK(r.kind == RequestKind::Timemap);
    CHECK(r.uri_r == "http://www.goloco.org/users/D5EWwXI");
}

TEST_CASE("timemap api form") {
    auto r = classify_path(entry_with_path("/web/timemap/link/http://example.com/"),
                           ArchiveProfile::IaWayback);
    CHECK(r.kind == RequestKind::Timemap);
    CHECK(r.uri_r == "http://example.com/");
}

TEST_CASE("profile restricts the replay prefix") {
    auto r = classify_path(entry_with_path("/web/20091223043049/http://a.com/"),
                           ArchiveProfile::Arquivo);
    CHECK(r.kind == RequestKind::Other);
    auto q = classify_path(entry_with_path("/wayback/20091223043049/http://a.com/"),
                           ArchiveProfile::IaWayback);
    CHECK(q.kind == RequestKind::Other);
    auto both = classify_path(entry_with_path("/wayback/20091223043049/http://a.com/"),
                              ArchiveProfile::Auto);
    CHECK(both.kind == RequestKind::Memento);
}

TEST_CASE("unparseable remainders fall back to other") {
    CHECK(classify_path(entry_with_path("/"), ArchiveProfile::Auto).kind == RequestKind::Other);
    CHECK(classify_path(entry_with_path("/web/"), ArchiveProfile::Auto).kind ==
          RequestKind::Other);
    CHECK(classify_path(entry_with_path("/web/20130230000000/http://x/"), ArchiveProfile::Auto)
              .kind == RequestKind::Other); // Feb 30
    CHECK(classify_path(entry_with_path("/web/123/http://x/"), ArchiveProfile::Auto).kind ==
          RequestKind::Other); // stamp too short
    CHECK(classify_path(entry_with_path("/web/20130405060708/"), ArchiveProfile::Auto).kind ==
          RequestKind::Other); // no URI-R
}

TEST_CASE("memento datetime stamps") {
    auto t = parse_memento_datetime("20091223043049");
    REQUIRE(t.ok());
    CHECK(format_iso8601(*t) == "2009-12-23T04:30:49Z");
    t = parse_memento_datetime("20190207001831");
    REQUIRE(t.ok());
    CHECK(format_iso8601(*t) == "2019-02-07T00:18:31Z");
    t = parse_memento_datetime("2019");
    REQUIRE(t.ok());
    CHECK(format_iso8601(*t) == "2019-01-01T00:00:00Z");
    t = parse_memento_datetime("201906");
    REQUIRE(t.ok());
    CHECK(format_iso8601(*t) == "2019-06-01T00:00:00Z");
    CHECK(!parse_memento_datetime("123").ok());
    CHECK(!parse_memento_datetime("20191301000000").ok());
    CHECK(!parse_memento_datetime("20190229000000").ok()); // 2019 is not a leap year
    CHECK(parse_memento_datetime("20200229000000").ok());
    CHECK(!parse_memento_datetime("abcd").ok());
}

TEST_CASE("datetime modifiers strip and mark embedded") {
    auto r = classify_path(
        entry_with_path("/web/20190207001831im_/http://example.com/banner"),
        ArchiveProfile::IaWayback);
    CHECK(r.kind == RequestKind::Memento);
    REQUIRE(r.memento_datetime);
    CHECK(format_iso8601(*r.memento_datetime) == "2019-02-07T00:18:31Z");
    CHECK(r.resource_class == ResourceClass::Image);
    CHECK(r.is_embedded);
    CHECK(r.stamp_text == "20190207001831im_");
}

TEST_CASE("resource classification by extension") {
    auto cls = [](const std::string &uri) {
        auto r = classify_path(entry_with_path("/web/20190207001831/" + uri),
                               ArchiveProfile::IaWayback);
        return r.resource_class;
    };
    CHECK(cls("http://www.cs.odu.edu/") == ResourceClass::Html);
    CHECK(cls("http://example.com/page.html") == ResourceClass::Html);
    CHECK(cls("http://example.com/page.PHP") == ResourceClass::Html);
    CHECK(cls("http://example.com/no-extension") == ResourceClass::Html);
    CHECK(cls("http://example.com/a.png") == ResourceClass::Image);
    CHECK(cls("http://example.com/a.JPG?x=1") == ResourceClass::Image);
    CHECK(cls("http://example.com/style.css") == ResourceClass::Stylesheet);
    CHECK(cls("https://connect.facebook.net/en_US/fbevents.js") == ResourceClass::Script);
    CHECK(cls("http://example.com/f.woff2") == ResourceClass::Font);
}

TEST_CASE("embedded modifier survives a content-type reclassification") {
    auto parsed = parse_line(
        "0.0.1.1 web.archive.org - [07/Feb/2019:10:00:00 +0000] \"GET "
        "/web/20190207001831im_/http://example.com/spacer HTTP/1.1\" 200 10 \"-\" "
        "\"Mozilla/5.0\" 0.1 HIT - \"text/html; charset=utf-8\" - \"-\"");
    REQUIRE(parsed.ok());
    auto r = classify_path(std::move(*parsed), ArchiveProfile::IaWayback);
    CHECK(r.resource_class == ResourceClass::Html); // content-type decides the class
    CHECK(r.is_embedded);                           // the im_ modifier still marks it
}

TEST_CASE("logged content-type beats the extension") {
    auto parsed = parse_line(
        "0.0.122.100_1_0 web.archive.org - [07/Feb/2019:16:56:15 +0000] \"GET "
        "/web/20130304102141/http://maestro.haarp.alaska.edu/data.bin HTTP/2.0\" 404 0 \"-\" "
        "\"Mozilla/5.0\" 10.859 MISS 10.856 \"text/html; charset=utf-8\" - \"-\" \"-\" "
        "\"wwwb-app104\" \"-\"");
    REQUIRE(parsed.ok());
    auto r = classify_path(std::move(*parsed), ArchiveProfile::IaWayback);
    CHECK(r.resource_class == ResourceClass::Html);
    CHECK(!r.is_embedded);
}

TEST_CASE("unknown types with a memento referrer are embedded") {
    LogEntry e = entry_with_path("/web/20190207001831/http://example.com/blob.data");
    e.referrer = "https://web.archive.org/web/20190207001831/http://example.com/";
    auto r = classify_path(std::move(e), ArchiveProfile::IaWayback);
    CHECK(r.resource_class == ResourceClass::OtherEmbedded);
    CHECK(r.is_embedded);

    LogEntry plain = entry_with_path("/web/20190207001831/http://example.com/blob.data");
    auto q = classify_path(std::move(plain), ArchiveProfile::IaWayback);
    CHECK(q.resource_class == ResourceClass::Unknown);
    CHECK(!q.is_embedded);
}

TEST_CASE("memento paths re-serialize byte-for-byte") {
    const std::string paths[] = {
        "/wayback/20091223043049/http://www.cs.odu.edu/",
        "/web/20190207001831im_/http://example.com/banner.png",
        "http://web.archive.org/web/20070211155651/http://212.227.83.57/cproc.aspx",
        "/web/*/http://maestro.haarp.alaska.edu/",
        "/web/*/http://maestro.haarp.alaska.edu/*",
        "/web/20130715000000*/http://maestro.haarp.alaska.edu/",
    };
    for (const std::string &path : paths) {
        CAPTURE(path);
        auto r = classify_path(entry_with_path(path), ArchiveProfile::Auto);
        REQUIRE(r.kind != RequestKind::Other);
        CHECK(r.replay_prefix + r.stamp_text + "/" + r.uri_r == path);
    }
}

TEST_CASE("classification is idempotent and total") {
    const std::string paths[] = {
        "/wayback/20091223043049/http://www.cs.odu.edu/",
        "/web/*/http://a/",
        "/robots.txt",
        "/",
        "/web/x/y",
        "http://web.archive.org/web/9999/http//broken",
    };
    for (const std::string &path : paths) {
        auto first = classify_path(entry_with_path(path), ArchiveProfile::Auto);
        auto second = classify_path(first.entry, ArchiveProfile::Auto);
        CHECK(first.kind == second.kind);
        CHECK(first.uri_r == second.uri_r);
        CHECK(first.memento_datetime == second.memento_datetime);
        CHECK(first.resource_class == second.resource_class);
    }
}

TEST_CASE("kind invariants") {
    auto memento = classify_path(entry_with_path("/web/20190207001831/http://a/"),
                                 ArchiveProfile::Auto);
    CHECK(memento.kind == RequestKind::Memento);
    CHECK(!memento.uri_r.empty());
    CHECK(memento.memento_datetime.has_value());

    auto timemap = classify_path(entry_with_path("/web/*/http://a/"), ArchiveProfile::Auto);
    CHECK(timemap.kind == RequestKind::Timemap);
    CHECK(!timemap.uri_r.empty());
    CHECK(!timemap.memento_datetime.has_value());

    auto robots = classify_path(entry_with_path("/robots.txt"), ArchiveProfile::Auto);
    CHECK(robots.kind == RequestKind::RobotsTxt);
    CHECK(robots.uri_r.empty());
    CHECK(!robots.memento_datetime.has_value());
}
