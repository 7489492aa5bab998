// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#include "archlog/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "archlog/bot_detector.hpp"
#include "archlog/cleaning.hpp"
#include "archlog/log_parser.hpp"
#include "archlog/session.hpp"
#include "archlog/temporal.hpp"
#include "archlog/time_util.hpp"

namespace archlog {

std::string_view heuristic_name(Heuristic h) noexcept {
    switch (h) {
    case Heuristic::KnownBot: return "known_bot";
    case Heuristic::HeadMethod: return "head_method";
    case Heuristic::UaPerIp: return "ua_per_ip";
    case Heuristic::RobotsTxt: return "robots_txt";
    case Heuristic::BrowsingSpeed: return "browsing_speed";
    case Heuristic::IhRatio: break;
    }
    return "ih_ratio";
}

std::optional<Heuristic> heuristic_from_name(std::string_view s) noexcept {
    if (s == "known_bot") return Heuristic::KnownBot;
    if (s == "head_method") return Heuristic::HeadMethod;
    if (s == "ua_per_ip") return Heuristic::UaPerIp;
    if (s == "robots_txt") return Heuristic::RobotsTxt;
    if (s == "browsing_speed") return Heuristic::BrowsingSpeed;
    if (s == "ih_ratio") return Heuristic::IhRatio;
    return std::nullopt;
}

namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kHumanUas[] = {
    "Mozilla/5.0 (Windows NT 10.0; Win64; x64) AppleWebKit/537.36 (KHTML, like Gecko) "
    "Chrome/70.0.3538.102 Safari/537.36",
    "Mozilla/5.0 (X11; Ubuntu; Linux x86_64; rv:48.0) Gecko/20100101 Firefox/48.0",
    "Mozilla/5.0 (Macintosh; Intel Mac OS X 10_14_2) AppleWebKit/605.1.15 (KHTML, like "
    "Gecko) Version/12.0 Safari/605.1.15",
    "Opera/9.80 (Windows NT 6.1) Presto/2.12.388 Version/12.16",
};

constexpr std::string_view kBotUas[] = {
    "Twitterbot/1.0",
    "ExampleCrawler/2.1 (+http://crawler.example.com)",
    "research-spider/0.4",
    "ArchiveBot/3.0 (checks public captures)",
};

struct PlannedRequest {
    std::int64_t offset = 0; // seconds from session start
    Method method = Method::Get;
    std::string path_local; // origin-form, profile prefix included
    int status = 200;
    std::optional<std::int64_t> bytes = 1024;
    std::string referrer = "-";
    std::string content_type; // empty: never emit one
};

struct SessionPlan {
    std::string token;
    std::string ua;
    std::int64_t start_local = 0; // seconds into the local day
    std::vector<PlannedRequest> requests;
    std::vector<int> expected_years; // per surviving memento, ref_year - capture_year
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t b, std::uint64_t i) {
    std::uint64_t h = 1469598103934665603ull ^ seed;
    h = (h ^ (b + 1)) * 1099511628211ull;
    h = (h ^ (i + 1)) * 1099511628211ull;
    return h;
}

std::string memento_stamp(std::int64_t epoch) {
    const CivilTime ct = civil_from_epoch(epoch);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d%02u%02u%02u%02u%02u", ct.year, ct.month, ct.day,
                  ct.hour, ct.minute, ct.second);
    return buf;
}

// Capture instants inside one year: the dive pair sits on day 5 an hour
// apart, regular slots start on day 20 spaced 17 days, so everything but
// the dive pair is pairwise more than the 24h window apart.
std::int64_t year_epoch(int year, unsigned day_of_year, unsigned hour, unsigned minute) {
    return (days_from_civil(year, 1, 1) + day_of_year - 1) * 86400 +
           static_cast<std::int64_t>(hour) * 3600 + static_cast<std::int64_t>(minute) * 60;
}

struct BlueprintContext {
    const SessionBlueprint &bp;
    std::size_t blueprint_index;
    int log_year;
    ArchiveProfile profile;
    std::string replay_prefix; // "/web" or "/wayback"
};

std::map<int, std::uint64_t> default_years(const SessionBlueprint &bp) {
    if (bp.memento_years) {
        return *bp.memento_years;
    }
    const bool head_dip =
        bp.pattern == PatternName::Dip && bp.triggers.contains(Heuristic::HeadMethod);
    if (head_dip) {
        return {};
    }
    switch (bp.pattern) {
    case PatternName::Dip: return {{0, 1}};
    case PatternName::Slide: return {{0, 2}};
    case PatternName::Dive: return {{0, 2}};
    case PatternName::Skim: return {};
    case PatternName::DiveSlide: return {{0, 3}};
    case PatternName::DiveSkim: return {{0, 2}};
    case PatternName::SkimSlide: return {{0, 2}};
    case PatternName::DiveSlideSkim: return {{0, 3}};
    case PatternName::Unknown: return {{0, 1}, {5, 1}};
    }
    return {};
}

struct PlanError {
    std::string message;
};

// Builds the request list for one session. Survivor mementos realize the
// pattern on the year grid; supporting requests realize the trigger set
// without disturbing it.
Result<SessionPlan> plan_session(const BlueprintContext &ctx, std::uint64_t session_index,
                                 std::mt19937_64 &rng) {
    const SessionBlueprint &bp = ctx.bp;
    SessionPlan plan;

    // Identity
    if (bp.triggers.contains(Heuristic::UaPerIp)) {
        plan.token = "172.16." + std::to_string(ctx.blueprint_index + 1) + ".9_0_0";
        plan.ua = "Mozilla/4.0 (compatible; MSIE 6.0; Windows NT 5.1; Variant " +
                  std::to_string(session_index) + ")";
    } else {
        plan.token = "10." + std::to_string(ctx.blueprint_index + 1) + "." +
                     std::to_string(session_index / 250) + "." +
                     std::to_string(session_index % 250);
        if (rng() % 2 == 0) {
            plan.token += "_0_0";
        }
        if (bp.triggers.contains(Heuristic::KnownBot)) {
            plan.ua = std::string(kBotUas[rng() % std::size(kBotUas)]);
        } else {
            plan.ua = std::string(kHumanUas[rng() % std::size(kHumanUas)]);
        }
    }

    const std::string uri_base = "http://b" + std::to_string(ctx.blueprint_index) + "s" +
                                 std::to_string(session_index) + ".example.net";
    int uri_counter = 0;
    auto fresh_uri = [&]() { return uri_base + "/p" + std::to_string(uri_counter++); };

    const bool dive_needed = bp.pattern == PatternName::Dive ||
                             bp.pattern == PatternName::DiveSlide ||
                             bp.pattern == PatternName::DiveSkim ||
                             bp.pattern == PatternName::DiveSlideSkim;
    const bool slide_needed = bp.pattern == PatternName::Slide ||
                              bp.pattern == PatternName::DiveSlide ||
                              bp.pattern == PatternName::SkimSlide ||
                              bp.pattern == PatternName::DiveSlideSkim;
    const bool skim_needed = bp.pattern == PatternName::Skim ||
                             bp.pattern == PatternName::DiveSkim ||
                             bp.pattern == PatternName::SkimSlide ||
                             bp.pattern == PatternName::DiveSlideSkim;

    const std::map<int, std::uint64_t> years = default_years(bp);
    std::uint64_t total_slots = 0;
    for (const auto &[year, n] : years) {
        total_slots += n;
    }

    if (bp.pattern == PatternName::Dip && total_slots > 1) {
        return ParseError{0, bp.name + ": a Dip cannot carry more than one surviving memento"};
    }
    if (slide_needed && total_slots < (dive_needed ? 3u : 2u)) {
        return ParseError{0, bp.name + ": Slide needs more memento slots"};
    }
    if (dive_needed) {
        bool ok = false;
        for (const auto &[year, n] : years) {
            if (n >= 2) ok = true;
        }
        if (!ok) {
            return ParseError{0, bp.name + ": Dive needs a year holding at least two captures"};
        }
    }
    // Survivor mementos: (uri, capture epoch, years_prior)
    struct Survivor {
        std::string uri;
        std::int64_t capture;
        int years_prior;
    };
    std::vector<Survivor> mementos;
    std::string dive_uri_a;

    bool dive_placed = false;
    for (const auto &[years_prior, n] : years) {
        const int capture_year = ctx.log_year - years_prior;
        unsigned grid = 0;
        std::uint64_t remaining = n;
        if (dive_needed && !dive_placed && n >= 2) {
            dive_uri_a = fresh_uri();
            mementos.push_back({dive_uri_a, year_epoch(capture_year, 5, 6, 0), years_prior});
            mementos.push_back({fresh_uri(), year_epoch(capture_year, 5, 7, 0), years_prior});
            remaining -= 2;
            dive_placed = true;
        }
        for (std::uint64_t k = 0; k < remaining; ++k) {
            mementos.push_back(
                {fresh_uri(), year_epoch(capture_year, 20 + 17 * grid, 6, 0), years_prior});
            ++grid;
            if (grid > 20) {
                return ParseError{0, bp.name + ": too many captures in one year"};
            }
        }
    }

    if (slide_needed) {
        // Re-request an existing URI at a different capture instant: with
        // a dive present reuse its first URI, otherwise fold two grid
        // slots onto one URI.
        if (dive_placed) {
            for (std::size_t i = 2; i < mementos.size(); ++i) {
                if (mementos[i].uri != dive_uri_a) {
                    mementos[i].uri = dive_uri_a;
                    break;
                }
            }
        } else {
            if (mementos.size() < 2) {
                return ParseError{0, bp.name + ": Slide needs two memento slots"};
            }
            mementos[1].uri = mementos[0].uri;
        }
    }

    std::vector<std::string> timemap_uris;
    if (skim_needed) {
        timemap_uris.push_back(fresh_uri());
        timemap_uris.push_back(fresh_uri());
    }
    if (bp.pattern == PatternName::Unknown && total_slots < 2) {
        if (total_slots == 1) {
            timemap_uris.push_back(fresh_uri()); // one memento + one TimeMap
        } else {
            // Two hits on the same TimeMap: several requests, one URI-T,
            // no base pattern fires.
            const std::string uri = fresh_uri();
            timemap_uris.push_back(uri);
            timemap_uris.push_back(uri);
        }
    }
    if (bp.pattern == PatternName::Dip && total_slots == 0 &&
        !bp.triggers.contains(Heuristic::HeadMethod) &&
        !bp.triggers.contains(Heuristic::RobotsTxt)) {
        timemap_uris.push_back(fresh_uri()); // single-TimeMap Dip
    }
    if (bp.pattern == PatternName::Skim && timemap_uris.empty()) {
        return ParseError{0, bp.name + ": Skim needs TimeMap requests"};
    }

    // Assemble in request order.
    const std::string prefix = ctx.replay_prefix;
    auto pick_status = [&]() -> int {
        const auto r = rng() % 100;
        if (r < 80) return 200;
        if (r < 95) return 404;
        return 503;
    };

    if (bp.triggers.contains(Heuristic::RobotsTxt)) {
        PlannedRequest req;
        req.path_local = rng() % 2 == 0 ? "/robots.txt" : "/robots.txt?from=session";
        req.bytes = 125;
        plan.requests.push_back(std::move(req));
    }

    std::uint64_t html_requests = 0;
    std::string first_html_uri;
    std::string first_html_stamp;
    for (const Survivor &s : mementos) {
        PlannedRequest req;
        req.path_local = prefix + "/" + memento_stamp(s.capture) + "/" + s.uri;
        req.status = pick_status();
        req.bytes = 2048 + static_cast<std::int64_t>(rng() % 8192);
        req.content_type = "text/html; charset=utf-8";
        if (first_html_uri.empty()) {
            first_html_uri = s.uri;
            first_html_stamp = memento_stamp(s.capture);
        }
        ++html_requests;
        plan.requests.push_back(std::move(req));
        plan.expected_years.push_back(s.years_prior);
    }
    for (const std::string &uri : timemap_uris) {
        PlannedRequest req;
        req.path_local = prefix + "/*/" + uri;
        req.bytes = 9002;
        req.content_type = "text/html; charset=utf-8";
        plan.requests.push_back(std::move(req));
    }

    if (bp.triggers.contains(Heuristic::HeadMethod)) {
        PlannedRequest req;
        req.method = Method::Head;
        const std::string uri = first_html_uri.empty() ? fresh_uri() : first_html_uri;
        const std::string stamp = first_html_stamp.empty()
                                      ? memento_stamp(year_epoch(ctx.log_year, 3, 12, 0))
                                      : first_html_stamp;
        req.path_local = prefix + "/" + stamp + "/" + uri;
        req.bytes = std::nullopt;
        req.content_type = "text/html; charset=utf-8";
        ++html_requests; // HEADs to HTML captures count toward the ratio
        plan.requests.push_back(std::move(req));
        if (first_html_uri.empty()) {
            first_html_uri = uri;
            first_html_stamp = stamp;
        }
    }

    if (!bp.triggers.contains(Heuristic::IhRatio) && html_requests > 0) {
        const std::uint64_t images = (html_requests + 4) / 5;
        for (std::uint64_t k = 0; k < images; ++k) {
            PlannedRequest req;
            req.path_local = prefix + "/" + first_html_stamp + "im_/" + first_html_uri + "/img" +
                             std::to_string(k) + ".png";
            req.bytes = 512 + static_cast<std::int64_t>(rng() % 4096);
            req.referrer = std::string(ctx.profile == ArchiveProfile::Arquivo
                                           ? "https://arquivo.pt"
                                           : "https://web.archive.org") +
                           prefix + "/" + first_html_stamp + "/" + first_html_uri;
            req.content_type = "image/png";
            plan.requests.push_back(std::move(req));
        }
    }
    if (bp.triggers.contains(Heuristic::IhRatio) && html_requests == 0) {
        return ParseError{0, bp.name + ": ih_ratio needs at least one HTML request"};
    }
    if (bp.triggers.contains(Heuristic::BrowsingSpeed) && html_requests == 0) {
        return ParseError{0, bp.name + ": browsing_speed counts HTML requests; "
                             "a TimeMap-only session cannot trip it"};
    }

    if (plan.requests.empty()) {
        return ParseError{0, bp.name + ": blueprint emits no requests"};
    }
    if (plan.requests.size() > 60) {
        return ParseError{0, bp.name + ": session too large (max 60 requests)"};
    }

    // Timing.
    if (bp.triggers.contains(Heuristic::BrowsingSpeed)) {
        if (plan.requests.size() == 1) {
            return ParseError{0, bp.name + ": browsing_speed needs more than one request"};
        }
        const bool all_same_second = html_requests >= 2;
        for (std::size_t i = 0; i < plan.requests.size(); ++i) {
            plan.requests[i].offset = all_same_second ? 0 : (i == 0 ? 0 : 1);
        }
    } else {
        for (std::size_t i = 0; i < plan.requests.size(); ++i) {
            plan.requests[i].offset = static_cast<std::int64_t>(i) * 5;
        }
    }

    return plan;
}

std::string render_line(const BlueprintContext &ctx, const SessionPlan &plan,
                        const PlannedRequest &req, const ClfTime &ts, std::mt19937_64 &rng,
                        bool absolute_path) {
    std::string path = req.path_local;
    if (absolute_path && path.starts_with('/')) {
        path = (ctx.profile == ArchiveProfile::Arquivo ? "http://arquivo.pt"
                                                       : "http://web.archive.org") +
               path;
    }
    std::string line;
    line.reserve(256);
    line += plan.token;
    if (ctx.profile == ArchiveProfile::IaWayback) {
        line += " web.archive.org -";
    } else {
        line += " - -";
    }
    line += " [";
    line += format_clf_timestamp(ts);
    line += "] \"";
    line += method_name(req.method);
    line += ' ';
    line += path;
    line += " HTTP/1.1\" ";
    line += std::to_string(req.status);
    line += ' ';
    line += req.bytes ? std::to_string(*req.bytes) : "-";
    line += " \"";
    line += req.referrer;
    line += "\" \"";
    line += plan.ua;
    line += '"';
    if (ctx.profile == ArchiveProfile::IaWayback && !req.content_type.empty() && rng() % 2 == 0) {
        char extras[96];
        std::snprintf(extras, sizeof(extras), " 0.%03u %s %u.%03u",
                      static_cast<unsigned>(rng() % 999), rng() % 3 == 0 ? "HIT" : "MISS",
                      static_cast<unsigned>(rng() % 2), static_cast<unsigned>(rng() % 999));
        line += extras;
        line += " \"";
        line += req.content_type;
        line += "\" - \"-\" \"-\" \"wwwb-app";
        line += std::to_string(rng() % 200);
        line += "\" \"-\"";
    }
    return line;
}

std::string flags_to_string(const BotVerdict &v) {
    std::string out;
    for (std::string_view f : v.flag_names()) {
        if (!out.empty()) out += ',';
        out += f;
    }
    return out;
}

std::string triggers_to_string(const std::set<Heuristic> &t) {
    std::string out;
    for (Heuristic h : t) {
        if (!out.empty()) out += ',';
        out += heuristic_name(h);
    }
    return out;
}

} // namespace

Result<SynthSpec> load_synth_spec(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        return ParseError{0, "cannot open spec " + path};
    }
    Json j;
    try {
        in >> j;
    } catch (const std::exception &e) {
        return ParseError{0, std::string("spec is not valid JSON: ") + e.what()};
    }
    SynthSpec spec;
    try {
        spec.seed = j.value("seed", 1ull);
        spec.log_date = j.value("log_date", std::string("2019-02-07"));
        const std::string profile = j.value("profile", std::string("ia"));
        if (auto p = archive_profile_from_name(profile); p && *p != ArchiveProfile::Auto) {
            spec.profile = *p;
        } else {
            return ParseError{0, "spec profile must be 'ia' or 'arquivo'"};
        }
        if (!j.contains("blueprints") || !j["blueprints"].is_array()) {
            return ParseError{0, "spec needs a blueprints array"};
        }
        for (const auto &b : j["blueprints"]) {
            SessionBlueprint bp;
            bp.name = b.value("name", std::string("blueprint"));
            bp.count = b.value("count", 1ull);
            const std::string kind = b.value("kind", std::string("human"));
            if (kind != "human" && kind != "robot") {
                return ParseError{0, bp.name + ": kind must be human or robot"};
            }
            bp.robot = kind == "robot";
            if (b.contains("triggers")) {
                for (const auto &t : b["triggers"]) {
                    const auto h = heuristic_from_name(t.get<std::string>());
                    if (!h) {
                        return ParseError{0, bp.name + ": unknown heuristic " +
                                                 t.get<std::string>()};
                    }
                    bp.triggers.insert(*h);
                }
            }
            const std::string pattern = b.value("pattern", std::string("Dip"));
            const auto p = pattern_from_name(pattern);
            if (!p) {
                return ParseError{0, bp.name + ": unknown pattern " + pattern};
            }
            bp.pattern = *p;
            if (b.contains("memento_years")) {
                std::map<int, std::uint64_t> years;
                for (const auto &[key, value] : b["memento_years"].items()) {
                    years[std::stoi(key)] = value.get<std::uint64_t>();
                }
                bp.memento_years = std::move(years);
            }
            spec.blueprints.push_back(std::move(bp));
        }
    } catch (const std::exception &e) {
        return ParseError{0, std::string("bad spec field: ") + e.what()};
    }
    return spec;
}

std::string GroundTruth::to_json_text() const {
    Json j;
    j["profile"] = profile;
    j["log_date"] = log_date;
    j["total_lines"] = total_lines;
    Json sessions_json = Json::array();
    for (const GroundTruthSession &s : sessions) {
        Json o;
        o["id"] = s.id;
        o["client_token"] = s.client_token;
        o["user_agent"] = s.user_agent;
        o["start_epoch"] = s.start_epoch;
        o["kind"] = s.robot ? "robot" : "human";
        o["flags"] = s.flags;
        if (s.pattern) {
            o["pattern"] = std::string(pattern_name(*s.pattern));
        } else {
            o["pattern"] = nullptr;
        }
        o["surviving_requests"] = s.surviving_requests;
        o["blueprint"] = s.blueprint;
        sessions_json.push_back(std::move(o));
    }
    j["sessions"] = std::move(sessions_json);
    auto hist = [](const std::map<int, std::uint64_t> &years, std::uint64_t future) {
        Json h;
        Json buckets;
        for (const auto &[y, n] : years) {
            buckets[std::to_string(y)] = n;
        }
        h["years_prior"] = buckets;
        h["future"] = future;
        return h;
    };
    j["temporal"]["human"] = hist(human_years, human_future);
    j["temporal"]["robot"] = hist(robot_years, robot_future);
    return j.dump(2) + "\n";
}

Result<GroundTruth> GroundTruth::from_json_text(const std::string &text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const std::exception &e) {
        return ParseError{0, std::string("ground truth is not valid JSON: ") + e.what()};
    }
    GroundTruth gt;
    try {
        gt.profile = j.value("profile", std::string());
        gt.log_date = j.value("log_date", std::string());
        gt.total_lines = j.value("total_lines", 0ull);
        for (const auto &o : j["sessions"]) {
            GroundTruthSession s;
            s.id = o.value("id", std::string());
            s.client_token = o.value("client_token", std::string());
            s.user_agent = o.value("user_agent", std::string());
            s.start_epoch = o.value("start_epoch", 0ll);
            s.robot = o.value("kind", std::string()) == "robot";
            for (const auto &f : o["flags"]) {
                s.flags.push_back(f.get<std::string>());
            }
            if (!o["pattern"].is_null()) {
                s.pattern = pattern_from_name(o["pattern"].get<std::string>());
            }
            s.surviving_requests = o.value("surviving_requests", 0ull);
            s.blueprint = o.value("blueprint", std::string());
            gt.sessions.push_back(std::move(s));
        }
        auto hist = [](const Json &h, std::map<int, std::uint64_t> &years,
                       std::uint64_t &future) {
            for (const auto &[key, value] : h["years_prior"].items()) {
                years[std::stoi(key)] = value.get<std::uint64_t>();
            }
            future = h.value("future", 0ull);
        };
        hist(j["temporal"]["human"], gt.human_years, gt.human_future);
        hist(j["temporal"]["robot"], gt.robot_years, gt.robot_future);
    } catch (const std::exception &e) {
        return ParseError{0, std::string("bad ground truth field: ") + e.what()};
    }
    return gt;
}

Result<GenerationStats> generate_corpus(const SynthSpec &spec, const std::string &log_path,
                                        const std::string &truth_path) {
    // Local midnight of the corpus day.
    unsigned y = 0, m = 0, d = 0;
    if (std::sscanf(spec.log_date.c_str(), "%4u-%2u-%2u", &y, &m, &d) != 3 ||
        !valid_civil_date(static_cast<int>(y), m, d)) {
        return ParseError{0, "log_date must be YYYY-MM-DD"};
    }
    const int tz_offset_min = spec.profile == ArchiveProfile::Arquivo ? 60 : 0;
    const std::int64_t local_midnight =
        days_from_civil(static_cast<int>(y), m, d) * 86400 -
        static_cast<std::int64_t>(tz_offset_min) * 60;
    const int log_year = static_cast<int>(y);

    const KnownBotList bot_list = KnownBotList::builtin();
    const DetectorThresholds thresholds;

    GroundTruth truth;
    truth.profile = std::string(archive_profile_name(spec.profile));
    truth.log_date = spec.log_date;

    struct RenderedLine {
        std::int64_t epoch;
        std::uint64_t order;
        std::string text;
    };
    std::vector<RenderedLine> lines;
    std::uint64_t order = 0;

    for (std::size_t b = 0; b < spec.blueprints.size(); ++b) {
        const SessionBlueprint &bp = spec.blueprints[b];
        if (bp.count == 0) {
            return ParseError{0, bp.name + ": count must be positive"};
        }
        if (bp.robot == bp.triggers.empty()) {
            return ParseError{0, bp.name + (bp.robot ? ": robots need at least one trigger"
                                                     : ": humans cannot carry triggers")};
        }
        if (bp.triggers.contains(Heuristic::UaPerIp)) {
            if (bp.count <= thresholds.ua_per_ip) {
                return ParseError{0, bp.name + ": ua_per_ip needs count > 20 (one UA each)"};
            }
            if (bp.count > 59) {
                return ParseError{0, bp.name + ": ua_per_ip count exceeds one-day capacity"};
            }
        }

        BlueprintContext ctx{bp, b, log_year, spec.profile,
                             spec.profile == ArchiveProfile::Arquivo ? "/wayback" : "/web"};

        for (std::uint64_t i = 0; i < bp.count; ++i) {
            std::mt19937_64 rng(mix_seed(spec.seed, b, i));
            auto plan_result = plan_session(ctx, i, rng);
            if (!plan_result) {
                return plan_result.error();
            }
            SessionPlan plan = std::move(*plan_result);
            if (bp.triggers.contains(Heuristic::UaPerIp)) {
                plan.start_local = 900 + static_cast<std::int64_t>(i) * 1400;
            } else {
                plan.start_local = 700 +
                                   static_cast<std::int64_t>((i * 84000) / bp.count) +
                                   static_cast<std::int64_t>((b * 37) % 500);
            }

            // Render, re-parse and verify the session end to end before
            // accepting it into the corpus.
            Session session;
            session.key = UserKey{plan.token, plan.ua};
            std::vector<std::string> rendered;
            for (std::size_t k = 0; k < plan.requests.size(); ++k) {
                const PlannedRequest &req = plan.requests[k];
                const ClfTime ts{local_midnight + plan.start_local + req.offset, tz_offset_min};
                const bool absolute = rng() % 4 == 0;
                std::string text = render_line(ctx, plan, req, ts, rng, absolute);
                auto parsed = parse_line(text, LogFormat::Auto);
                if (!parsed) {
                    return ParseError{0, bp.name + ": generated line failed to parse: " +
                                             parsed.error().reason + " [" + text + "]"};
                }
                parsed->seq = k;
                ArchiveRequest request = classify_path(std::move(*parsed), spec.profile);
                session.requests.push_back(std::move(request));
                rendered.push_back(std::move(text));
            }
            finalize_session(session);

            std::unordered_set<std::string> flagged;
            if (bp.triggers.contains(Heuristic::UaPerIp)) {
                flagged.insert(plan.token);
            }
            const BotVerdict verdict = classify_session(session, flagged, bot_list, thresholds);
            const bool flags_match =
                verdict.known_bot == bp.triggers.contains(Heuristic::KnownBot) &&
                verdict.head_method == bp.triggers.contains(Heuristic::HeadMethod) &&
                verdict.ua_per_ip == bp.triggers.contains(Heuristic::UaPerIp) &&
                verdict.robots_txt == bp.triggers.contains(Heuristic::RobotsTxt) &&
                verdict.browsing_speed == bp.triggers.contains(Heuristic::BrowsingSpeed) &&
                verdict.ih_ratio == bp.triggers.contains(Heuristic::IhRatio);
            if (!flags_match) {
                return ParseError{0, bp.name + ": planned triggers [" +
                                         triggers_to_string(bp.triggers) +
                                         "] but the detector sees [" + flags_to_string(verdict) +
                                         "]"};
            }
            if (verdict.is_robot != bp.robot) {
                return ParseError{0, bp.name + ": robot/human label mismatch"};
            }

            const Session surviving = stage2_filtered(session);
            GroundTruthSession gt;
            gt.id = session.id;
            gt.client_token = plan.token;
            gt.user_agent = plan.ua;
            gt.start_epoch = session.start_epoch;
            gt.robot = bp.robot;
            for (std::string_view f : verdict.flag_names()) {
                gt.flags.emplace_back(f);
            }
            gt.surviving_requests = surviving.requests.size();
            gt.blueprint = bp.name;
            if (!surviving.requests.empty()) {
                const PatternLabel label = classify_pattern(surviving);
                if (label.label != bp.pattern) {
                    return ParseError{0, bp.name + ": planned pattern " +
                                             std::string(pattern_name(bp.pattern)) +
                                             " but classifier sees " +
                                             std::string(pattern_name(label.label))};
                }
                gt.pattern = label.label;
            }

            // Planted years must agree with what survives stage 2.
            std::vector<int> surviving_years;
            for (const ArchiveRequest &r : surviving.requests) {
                if (r.kind == RequestKind::Memento && r.memento_datetime) {
                    surviving_years.push_back(
                        log_year - civil_from_epoch(*r.memento_datetime).year);
                }
            }
            std::vector<int> expected = plan.expected_years;
            std::sort(surviving_years.begin(), surviving_years.end());
            std::sort(expected.begin(), expected.end());
            if (surviving_years != expected) {
                return ParseError{0, bp.name + ": planted capture years drifted"};
            }
            auto &years_map = bp.robot ? truth.robot_years : truth.human_years;
            auto &future = bp.robot ? truth.robot_future : truth.human_future;
            for (int yp : surviving_years) {
                if (yp < 0) {
                    ++future;
                } else {
                    ++years_map[yp];
                }
            }
            truth.sessions.push_back(std::move(gt));

            for (std::size_t k = 0; k < rendered.size(); ++k) {
                lines.push_back({session.requests[k].entry.timestamp.epoch_utc, order++,
                                 std::move(rendered[k])});
            }

            // Occasionally a stray non-archive hit from the same user;
            // stage 1 removes it before sessionization.
            if (!bp.triggers.contains(Heuristic::UaPerIp) && rng() % 10 == 0) {
                PlannedRequest stray;
                stray.path_local = rng() % 2 == 0 ? "/" : "/favicon.ico";
                stray.bytes = 312;
                const ClfTime ts{local_midnight + plan.start_local - 30, tz_offset_min};
                std::string text = render_line(ctx, plan, stray, ts, rng, false);
                lines.push_back({ts.epoch_utc, order++, std::move(text)});
            }
        }
    }

    std::stable_sort(lines.begin(), lines.end(), [](const RenderedLine &a, const RenderedLine &b) {
        if (a.epoch != b.epoch) return a.epoch < b.epoch;
        return a.order < b.order;
    });

    std::ofstream log(log_path, std::ios::binary | std::ios::trunc);
    if (!log) {
        return ParseError{0, "cannot write " + log_path};
    }
    for (const RenderedLine &line : lines) {
        log << line.text << '\n';
    }
    log.close();
    if (!log) {
        return ParseError{0, "short write to " + log_path};
    }

    truth.total_lines = lines.size();
    std::ofstream truth_out(truth_path, std::ios::binary | std::ios::trunc);
    if (!truth_out) {
        return ParseError{0, "cannot write " + truth_path};
    }
    truth_out << truth.to_json_text();
    truth_out.close();

    GenerationStats stats;
    stats.lines = lines.size();
    stats.sessions = truth.sessions.size();
    return stats;
}

} // namespace archlog
