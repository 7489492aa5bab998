// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#include "archlog/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace archlog {

void FeatureStats::add(const ArchiveRequest &r) {
    ++total_requests;
    switch (r.entry.method) {
    case Method::Get: ++get; break;
    case Method::Head: ++head; break;
    case Method::Propfind: ++propfind; break;
    case Method::Post: ++post; break;
    case Method::Options: ++options; break;
    case Method::Other: ++other_method; break;
    }
    const int s = r.entry.status;
    if (s >= 200 && s < 300) ++status_2xx;
    else if (s >= 300 && s < 400) ++status_3xx;
    else if (s >= 400 && s < 500) ++status_4xx;
    else if (s >= 500 && s < 600) ++status_5xx;
    if (r.is_embedded) ++embedded_resources;
    if (!r.entry.referrer || *r.entry.referrer == "-") ++null_referrer;
    if (is_self_identified_robot(r.entry.user_agent_or_empty())) ++si_robots;
}

void BotTable::add(const BotVerdict &v) {
    ++total_sessions;
    total_requests += v.request_count;
    auto bump = [&](Row &row, bool flag) {
        if (flag) {
            ++row.sessions;
            row.requests += v.request_count;
        }
    };
    bump(known_bots, v.known_bot);
    bump(ua_per_ip, v.ua_per_ip);
    bump(robots_txt, v.robots_txt);
    bump(head_method, v.head_method);
    bump(ih_ratio, v.ih_ratio);
    bump(browsing_speed, v.browsing_speed);
    bump(total_robots, v.is_robot);
}

namespace {

OrderedJson counted(std::uint64_t count, std::uint64_t total) {
    OrderedJson j;
    j["count"] = count;
    j["total"] = total;
    j["percent"] = format_percent(count, total);
    return j;
}

} // namespace

OrderedJson feature_stats_to_json(const FeatureStats &f) {
    OrderedJson j;
    j["total_requests"] = f.total_requests;
    OrderedJson methods;
    methods["GET"] = counted(f.get, f.total_requests);
    methods["HEAD"] = counted(f.head, f.total_requests);
    methods["PROPFIND"] = counted(f.propfind, f.total_requests);
    methods["POST"] = counted(f.post, f.total_requests);
    methods["OPTIONS"] = counted(f.options, f.total_requests);
    methods["other"] = counted(f.other_method, f.total_requests);
    j["methods"] = methods;
    OrderedJson statuses;
    statuses["2xx"] = counted(f.status_2xx, f.total_requests);
    statuses["3xx"] = counted(f.status_3xx, f.total_requests);
    statuses["4xx"] = counted(f.status_4xx, f.total_requests);
    statuses["5xx"] = counted(f.status_5xx, f.total_requests);
    j["status_classes"] = statuses;
    j["embedded_resources"] = counted(f.embedded_resources, f.total_requests);
    j["null_referrer"] = counted(f.null_referrer, f.total_requests);
    j["si_robots"] = counted(f.si_robots, f.total_requests);
    return j;
}

OrderedJson cleaning_stats_to_json(const CleaningStats &c) {
    OrderedJson j;
    j["raw"] = c.raw_count;
    j["stage1"] = counted(c.s1_count, c.raw_count);
    j["stage2"] = counted(c.s2_count, c.raw_count);
    return j;
}

OrderedJson bot_table_to_json(const BotTable &t) {
    OrderedJson j;
    j["total_sessions"] = t.total_sessions;
    j["total_requests"] = t.total_requests;
    auto row = [&](const BotTable::Row &r) {
        OrderedJson o;
        o["sessions"] = counted(r.sessions, t.total_sessions);
        o["requests"] = counted(r.requests, t.total_requests);
        return o;
    };
    j["known_bots"] = row(t.known_bots);
    j["ua_per_ip"] = row(t.ua_per_ip);
    j["robots_txt"] = row(t.robots_txt);
    j["head_method"] = row(t.head_method);
    j["ih_ratio"] = row(t.ih_ratio);
    j["browsing_speed"] = row(t.browsing_speed);
    j["total_robots"] = row(t.total_robots);
    return j;
}

OrderedJson patterns_to_json(const PatternDistribution &d) {
    OrderedJson j;
    for (const bool robot : {false, true}) {
        OrderedJson side;
        const std::uint64_t denom = robot ? d.robot_requests : d.human_requests;
        side["total_requests"] = denom;
        OrderedJson labels;
        for (int p = 0; p <= static_cast<int>(PatternName::Unknown); ++p) {
            const auto it = d.cells.find({robot, static_cast<PatternName>(p)});
            if (it == d.cells.end()) {
                continue;
            }
            const auto &cell = it->second;
            OrderedJson o;
            o["sessions"] = cell.sessions;
            o["requests"] = counted(cell.requests, denom);
            o["memento_requests"] = cell.memento_requests;
            o["timemap_requests"] = cell.timemap_requests;
            labels[std::string(pattern_name(static_cast<PatternName>(p)))] = o;
        }
        side["labels"] = labels;
        j[robot ? "robot" : "human"] = side;
    }
    return j;
}

namespace {

OrderedJson histogram_to_json(const TemporalHistogram &h) {
    OrderedJson j;
    j["reference_date"] = format_iso_date(h.reference_epoch);
    OrderedJson buckets;
    for (const auto &[years, count] : h.buckets) {
        buckets[std::to_string(years)] = count;
    }
    j["years_prior"] = buckets;
    j["discarded_future"] = h.discarded_future;
    j["total"] = h.total();
    return j;
}

} // namespace

OrderedJson temporal_to_json(const TemporalHistogram &human, const TemporalHistogram &robot) {
    OrderedJson j;
    j["human"] = histogram_to_json(human);
    j["robot"] = histogram_to_json(robot);
    return j;
}

OrderedJson metadata_to_json(const RunMetadata &m) {
    OrderedJson j;
    j["profile"] = m.profile;
    j["format"] = m.format;
    j["session_timeout_seconds"] = m.session_timeout_seconds;
    j["bs_threshold"] = m.bs_threshold;
    j["ih_threshold"] = m.ih_threshold;
    j["ua_ip_threshold"] = m.ua_ip_threshold;
    j["dive_window_seconds"] = m.dive_window_seconds;
    j["year_mode"] = m.year_mode;
    j["reference_date"] = m.reference_date;
    j["known_bots_file"] = m.known_bots_file.empty() ? "(builtin)" : m.known_bots_file;
    j["input_lines"] = m.input_lines;
    j["parse_errors"] = m.parse_errors;
    OrderedJson digests;
    for (const auto &[path, digest] : m.input_digests) {
        digests[path] = digest;
    }
    j["input_digests"] = digests;
    return j;
}

OrderedJson bundle_to_json(const ReportBundle &b) {
    OrderedJson j;
    j["features"] = feature_stats_to_json(b.features);
    j["cleaning"] = cleaning_stats_to_json(b.cleaning);
    j["bot_table"] = bot_table_to_json(b.bot_table);
    j["patterns"] = patterns_to_json(b.patterns);
    j["temporal"] = temporal_to_json(b.temporal_human, b.temporal_robot);
    j["run_metadata"] = metadata_to_json(b.metadata);
    return j;
}

namespace {

bool write_file(const std::string &path, const std::string &content, std::string &error) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        error = "cannot write " + path;
        return false;
    }
    out << content;
    out.close();
    if (!out) {
        error = "short write to " + path;
        return false;
    }
    return true;
}

std::string features_csv(const FeatureStats &f) {
    std::string out = "feature,count,total,percent\n";
    auto row = [&](std::string_view name, std::uint64_t n) {
        out += name;
        out += ',' + std::to_string(n) + ',' + std::to_string(f.total_requests) + ',' +
               format_percent(n, f.total_requests) + '\n';
    };
    row("requests", f.total_requests);
    row("GET", f.get);
    row("HEAD", f.head);
    row("PROPFIND", f.propfind);
    row("POST", f.post);
    row("OPTIONS", f.options);
    row("status_2xx", f.status_2xx);
    row("status_3xx", f.status_3xx);
    row("status_4xx", f.status_4xx);
    row("status_5xx", f.status_5xx);
    row("embedded_resources", f.embedded_resources);
    row("null_referrer", f.null_referrer);
    row("si_robots", f.si_robots);
    return out;
}

std::string cleaning_csv(const CleaningStats &c) {
    std::string out = "stage,count,total,percent\n";
    out += "raw," + std::to_string(c.raw_count) + ',' + std::to_string(c.raw_count) + ",100.00%\n";
    out += "stage1," + std::to_string(c.s1_count) + ',' + std::to_string(c.raw_count) + ',' +
           c.s1_pct() + '\n';
    out += "stage2," + std::to_string(c.s2_count) + ',' + std::to_string(c.raw_count) + ',' +
           c.s2_pct() + '\n';
    return out;
}

std::string bot_table_csv(const BotTable &t) {
    std::string out =
        "heuristic,sessions,session_pct,requests,request_pct\n";
    auto row = [&](std::string_view name, const BotTable::Row &r) {
        out += name;
        out += ',' + std::to_string(r.sessions) + ',' +
               format_percent(r.sessions, t.total_sessions) + ',' + std::to_string(r.requests) +
               ',' + format_percent(r.requests, t.total_requests) + '\n';
    };
    out += "all," + std::to_string(t.total_sessions) + ",100.00%," +
           std::to_string(t.total_requests) + ",100.00%\n";
    row("known_bots", t.known_bots);
    row("ua_per_ip", t.ua_per_ip);
    row("robots_txt", t.robots_txt);
    row("head_method", t.head_method);
    row("ih_ratio", t.ih_ratio);
    row("browsing_speed", t.browsing_speed);
    row("total_robots", t.total_robots);
    return out;
}

std::string patterns_csv(const PatternDistribution &d) {
    std::string out =
        "subdataset,label,sessions,requests,subdataset_requests,request_pct,memento_requests,"
        "timemap_requests\n";
    for (const bool robot : {false, true}) {
        const std::uint64_t denom = robot ? d.robot_requests : d.human_requests;
        for (int p = 0; p <= static_cast<int>(PatternName::Unknown); ++p) {
            const auto it = d.cells.find({robot, static_cast<PatternName>(p)});
            if (it == d.cells.end()) {
                continue;
            }
            const auto &cell = it->second;
            out += robot ? "robot," : "human,";
            out += std::string(pattern_name(static_cast<PatternName>(p))) + ',' +
                   std::to_string(cell.sessions) + ',' + std::to_string(cell.requests) + ',' +
                   std::to_string(denom) + ',' + format_percent(cell.requests, denom) + ',' +
                   std::to_string(cell.memento_requests) + ',' +
                   std::to_string(cell.timemap_requests) + '\n';
        }
    }
    return out;
}

std::string temporal_csv(const TemporalHistogram &human, const TemporalHistogram &robot) {
    std::string out = "subdataset,years_prior,requests\n";
    auto rows = [&](std::string_view name, const TemporalHistogram &h) {
        for (const auto &[years, count] : h.buckets) {
            out += name;
            out += ',' + std::to_string(years) + ',' + std::to_string(count) + '\n';
        }
        if (h.discarded_future > 0) {
            out += name;
            out += ",future," + std::to_string(h.discarded_future) + '\n';
        }
    };
    rows("human", human);
    rows("robot", robot);
    return out;
}

std::string bundle_markdown(const ReportBundle &b) {
    std::string md;
    md += "# Access log analysis\n\n";
    md += "## Dataset features\n\n";
    md += "| Feature | Count | Percent |\n|---|---:|---:|\n";
    const FeatureStats &f = b.features;
    auto frow = [&](std::string_view name, std::uint64_t n) {
        md += "| ";
        md += name;
        md += " | " + format_thousands(n) + " | " + format_percent(n, f.total_requests) + " |\n";
    };
    frow("Requests", f.total_requests);
    frow("GET", f.get);
    frow("HEAD", f.head);
    frow("PROPFIND", f.propfind);
    frow("POST", f.post);
    frow("OPTIONS", f.options);
    frow("Status 2xx", f.status_2xx);
    frow("Status 3xx", f.status_3xx);
    frow("Status 4xx", f.status_4xx);
    frow("Status 5xx", f.status_5xx);
    frow("Embedded resources", f.embedded_resources);
    frow("Null referrer", f.null_referrer);
    frow("SI robots", f.si_robots);

    md += "\n## Cleaning\n\n";
    md += "| Raw | Stage 1 | Stage 2 |\n|---:|---:|---:|\n";
    md += "| " + format_thousands(b.cleaning.raw_count) + " | " +
          format_thousands(b.cleaning.s1_count) + " (" + b.cleaning.s1_pct() + ") | " +
          format_thousands(b.cleaning.s2_count) + " (" + b.cleaning.s2_pct() + ") |\n";

    md += "\n## Robots vs. humans\n\n";
    md += "Sessions: " + format_thousands(b.bot_table.total_sessions) +
          ", requests: " + format_thousands(b.bot_table.total_requests) + "\n\n";
    md += "| Heuristic | Sessions | Requests |\n|---|---:|---:|\n";
    auto brow = [&](std::string_view name, const BotTable::Row &r) {
        md += "| ";
        md += name;
        md += " | " + format_thousands(r.sessions) + " (" +
              format_percent(r.sessions, b.bot_table.total_sessions) + ") | " +
              format_thousands(r.requests) + " (" +
              format_percent(r.requests, b.bot_table.total_requests) + ") |\n";
    };
    brow("Known bots", b.bot_table.known_bots);
    brow("#UA per IP", b.bot_table.ua_per_ip);
    brow("robots.txt", b.bot_table.robots_txt);
    brow("HEAD method", b.bot_table.head_method);
    brow("IH ratio", b.bot_table.ih_ratio);
    brow("Browsing speed", b.bot_table.browsing_speed);
    brow("**Total robots**", b.bot_table.total_robots);

    md += "\n## Access patterns\n\n";
    md += "| Subdataset | Pattern | Sessions | Requests | URI-M | URI-T |\n"
          "|---|---|---:|---:|---:|---:|\n";
    for (const bool robot : {false, true}) {
        const std::uint64_t denom =
            robot ? b.patterns.robot_requests : b.patterns.human_requests;
        for (int p = 0; p <= static_cast<int>(PatternName::Unknown); ++p) {
            const auto it = b.patterns.cells.find({robot, static_cast<PatternName>(p)});
            if (it == b.patterns.cells.end()) {
                continue;
            }
            const auto &cell = it->second;
            md += std::string("| ") + (robot ? "robot" : "human") + " | " +
                  std::string(pattern_name(static_cast<PatternName>(p))) + " | " +
                  format_thousands(cell.sessions) + " | " + format_thousands(cell.requests) +
                  " (" + format_percent(cell.requests, denom) + ") | " +
                  format_thousands(cell.memento_requests) + " | " +
                  format_thousands(cell.timemap_requests) + " |\n";
        }
    }

    md += "\n## Temporal preference\n\n";
    md += "| Subdataset | Years prior | Requests |\n|---|---:|---:|\n";
    auto trows = [&](std::string_view name, const TemporalHistogram &h) {
        for (const auto &[years, count] : h.buckets) {
            md += "| ";
            md += name;
            md += " | " + std::to_string(years) + " | " + format_thousands(count) + " |\n";
        }
        if (h.discarded_future > 0) {
            md += "| ";
            md += name;
            md += " | future | " + format_thousands(h.discarded_future) + " |\n";
        }
    };
    trows("human", b.temporal_human);
    trows("robot", b.temporal_robot);
    md += "\n";
    return md;
}

} // namespace

bool emit_report(const ReportBundle &bundle, const std::set<std::string> &formats,
                 const std::string &out_dir, std::string &error) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (formats.contains("json")) {
        if (!write_file(out_dir + "/report.json", bundle_to_json(bundle).dump(2) + "\n", error)) {
            return false;
        }
    }
    if (formats.contains("csv")) {
        if (!write_file(out_dir + "/features.csv", features_csv(bundle.features), error) ||
            !write_file(out_dir + "/cleaning.csv", cleaning_csv(bundle.cleaning), error) ||
            !write_file(out_dir + "/bot_table.csv", bot_table_csv(bundle.bot_table), error) ||
            !write_file(out_dir + "/patterns.csv", patterns_csv(bundle.patterns), error) ||
            !write_file(out_dir + "/temporal.csv",
                        temporal_csv(bundle.temporal_human, bundle.temporal_robot), error)) {
            return false;
        }
    }
    if (formats.contains("markdown")) {
        if (!write_file(out_dir + "/report.md", bundle_markdown(bundle), error)) {
            return false;
        }
    }
    return true;
}

std::string file_digest(const std::string &path) {
    std::FILE *f = std::fopen(path.c_str(), "rb");
    if (!f) {
        return "unreadable";
    }
    std::uint64_t h = 1469598103934665603ull;
    char buf[1 << 16];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof(buf), f)) > 0) {
        for (std::size_t i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
    }
    std::fclose(f);
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

} // namespace archlog
