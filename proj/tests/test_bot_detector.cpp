// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "archlog/bot_detector.hpp"

using namespace archlog;

namespace {

ArchiveRequest memento(std::int64_t epoch, ResourceClass cls, Method method = Method::Get) {
    ArchiveRequest r;
    r.kind = RequestKind::Memento;
    r.entry.method = method;
    r.entry.method_text = std::string(method_name(method));
    r.entry.status = 200;
    r.entry.timestamp.epoch_utc = epoch;
    r.resource_class = cls;
    r.is_embedded = cls != ResourceClass::Html && cls != ResourceClass::Unknown;
    r.uri_r = "http://x/";
    r.memento_datetime = 0;
    return r;
}

Session session_of(std::vector<ArchiveRequest> requests, const std::string &ua = "Mozilla/5.0") {
    Session s;
    s.key = {"9.9.9.9", ua};
    for (std::size_t i = 0; i < requests.size(); ++i) {
        requests[i].entry.client_token = "9.9.9.9";
        requests[i].entry.user_agent = ua;
        requests[i].entry.seq = i;
    }
    s.requests = std::move(requests);
    finalize_session(s);
    return s;
}

Session html_session(std::uint64_t html, std::uint64_t images, std::int64_t duration) {
    std::vector<ArchiveRequest> requests;
    const std::uint64_t total = html + images;
    for (std::uint64_t i = 0; i < html; ++i) {
        requests.push_back(
            memento(total > 1 ? duration * i / (total - 1) : 0, ResourceClass::Html));
    }
    for (std::uint64_t i = 0; i < images; ++i) {
        requests.push_back(memento(total > 1 ? duration * (html + i) / (total - 1) : 0,
                                   ResourceClass::Image));
    }
    return session_of(std::move(requests));
}

} // namespace

TEST_CASE("known bot matching is a case-insensitive substring") {
    const KnownBotList list = KnownBotList::builtin();
    CHECK(flag_known_bot("Twitterbot/1.0", list));
    CHECK(flag_known_bot("MySuperCRAWLER/2.0", list));
    CHECK(flag_known_bot("research-spider/0.4", list));
    CHECK(!flag_known_bot("Mozilla/5.0 (X11; Ubuntu; Linux x86_64; rv:48.0) Gecko/20100101 "
                          "Firefox/48.0",
                          list));
    CHECK(!flag_known_bot("", list));
}

TEST_CASE("known bot list loads patterns and keeps the builtins") {
    const auto path = std::filesystem::temp_directory_path() / "archlog_bots_test.txt";
    {
        std::ofstream out(path);
        out << "# comment\n\nRSS Scout\ncurl\n";
    }
    auto list = KnownBotList::load(path.string());
    REQUIRE(list.ok());
    CHECK(list->matches("RSS Scout 0.9.2"));
    CHECK(list->matches("curl/7.64"));
    CHECK(list->matches("Twitterbot/1.0")); // builtin keyword still active
    CHECK(!list->matches("Mozilla/5.0"));
    std::filesystem::remove(path);

    CHECK(!KnownBotList::load("/nonexistent/bots.txt").ok());
}

TEST_CASE("HEAD requests flag") {
    CHECK(flag_head(memento(0, ResourceClass::Html, Method::Head)));
    CHECK(!flag_head(memento(0, ResourceClass::Html, Method::Get)));
    CHECK(!flag_head(memento(0, ResourceClass::Html, Method::Post)));
}

TEST_CASE("UA per IP counts distinct agents with a strict threshold") {
    UaPerIpCounter counter(20);
    for (int i = 0; i < 21; ++i) {
        counter.add("1.1.1.1", "agent-" + std::to_string(i));
    }
    for (int i = 0; i < 20; ++i) {
        counter.add("2.2.2.2", "agent-" + std::to_string(i));
    }
    for (int i = 0; i < 10000; ++i) {
        counter.add("3.3.3.3", "agent-0");
    }
    CHECK(counter.is_flagged("1.1.1.1"));   // 21 distinct
    CHECK(!counter.is_flagged("2.2.2.2"));  // exactly 20 distinct
    CHECK(!counter.is_flagged("3.3.3.3"));  // one agent many times
    const auto flagged = counter.flagged_tokens();
    CHECK(flagged.size() == 1);
    CHECK(flagged.contains("1.1.1.1"));
}

TEST_CASE("UA per IP agrees with a brute-force distinct count") {
    std::mt19937_64 rng(4242);
    std::vector<std::pair<std::string, std::string>> pairs;
    for (int i = 0; i < 5000; ++i) {
        pairs.emplace_back("t" + std::to_string(rng() % 30),
                           "ua" + std::to_string(rng() % 30));
    }
    UaPerIpCounter counter(20);
    std::map<std::string, std::set<std::string>> oracle;
    for (const auto &[token, ua] : pairs) {
        counter.add(token, ua);
        oracle[token].insert(ua);
    }
    for (const auto &[token, agents] : oracle) {
        CHECK(counter.is_flagged(token) == (agents.size() > 20));
    }
}

TEST_CASE("robots.txt flags the session") {
    ArchiveRequest robots;
    robots.kind = RequestKind::RobotsTxt;
    robots.entry.method = Method::Get;
    robots.entry.method_text = "GET";
    robots.entry.status = 200;
    CHECK(flag_robots_txt(session_of({robots})));
    CHECK(!flag_robots_txt(html_session(2, 1, 100)));
}

TEST_CASE("browsing speed thresholds") {
    CHECK(session_browsing_speed(html_session(10, 0, 40)) == doctest::Approx(0.25));
    CHECK(!flag_browsing_speed(html_session(10, 0, 40)));
    CHECK(flag_browsing_speed(html_session(10, 0, 10))); // 1.0 req/s

    // 49 vs 50 HTML requests in 100 seconds straddle the 0.5 threshold.
    CHECK(!flag_browsing_speed(html_session(49, 0, 100)));
    CHECK(flag_browsing_speed(html_session(50, 0, 100)));

    // Same-second barrage: infinite speed.
    CHECK(flag_browsing_speed(html_session(5, 0, 0)));
    // Single request in a zero-length session is undefined, not robotic.
    CHECK(!session_browsing_speed(html_session(1, 0, 0)).has_value());
    CHECK(!flag_browsing_speed(html_session(1, 0, 0)));
    // No HTML at all: rate zero.
    CHECK(!flag_browsing_speed(html_session(0, 2, 100)));
}

TEST_CASE("image-to-HTML thresholds") {
    CHECK(flag_ih_ratio(html_session(20, 0, 1000)));  // no images
    CHECK(!flag_ih_ratio(html_session(10, 1, 1000))); // exactly 1:10 is not less-than
    CHECK(flag_ih_ratio(html_session(11, 1, 1000)));  // just under 1:10
    CHECK(!flag_ih_ratio(html_session(10, 3, 1000)));
    CHECK(!session_ih_ratio(html_session(0, 5, 1000)).has_value()); // undefined
    CHECK(!flag_ih_ratio(html_session(0, 5, 1000)));
}

TEST_CASE("classify_session ORs the heuristics") {
    const KnownBotList list = KnownBotList::builtin();
    const std::unordered_set<std::string> no_tokens;

    SUBCASE("clean human session") {
        auto s = html_session(5, 2, 100);
        const auto v = classify_session(s, no_tokens, list);
        CHECK(!v.known_bot);
        CHECK(!v.head_method);
        CHECK(!v.ua_per_ip);
        CHECK(!v.robots_txt);
        CHECK(!v.browsing_speed);
        CHECK(!v.ih_ratio);
        CHECK(!v.is_robot);
        CHECK(v.request_count == 7);
    }

    SUBCASE("bot UA plus HEAD") {
        auto s = session_of({memento(0, ResourceClass::Html, Method::Head),
                             memento(2, ResourceClass::Html, Method::Head)},
                            "Twitterbot/1.0");
        const auto v = classify_session(s, no_tokens, list);
        CHECK(v.known_bot);
        CHECK(v.head_method);
        CHECK(v.is_robot);
    }

    SUBCASE("fast html-only session trips two flags") {
        auto s = html_session(30, 0, 30);
        const auto v = classify_session(s, no_tokens, list);
        CHECK(v.browsing_speed);
        CHECK(v.ih_ratio);
        CHECK(v.is_robot);
    }

    SUBCASE("flagged token marks every session of that IP") {
        auto s = html_session(5, 2, 100);
        const auto v = classify_session(s, {"9.9.9.9"}, list);
        CHECK(v.ua_per_ip);
        CHECK(v.is_robot);
    }

    SUBCASE("adding a flagged request never unflags") {
        auto s = html_session(5, 2, 100);
        auto v0 = classify_session(s, no_tokens, list);
        CHECK(!v0.is_robot);
        s.requests.push_back(memento(101, ResourceClass::Html, Method::Head));
        finalize_session(s);
        auto v1 = classify_session(s, no_tokens, list);
        CHECK(v1.is_robot);
    }
}

TEST_CASE("thresholds are configurable") {
    DetectorThresholds strict;
    strict.browsing_speed = 0.2;
    const KnownBotList list = KnownBotList::builtin();
    auto s = html_session(10, 2, 40); // 0.25 html/s
    CHECK(classify_session(s, {}, list, strict).browsing_speed);
    CHECK(!classify_session(s, {}, list, DetectorThresholds{}).browsing_speed);
}
