// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#include "archlog/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <unordered_map>

#include <json.hpp>

#include "archlog/cleaning.hpp"
#include "archlog/patterns.hpp"
#include "archlog/record_io.hpp"
#include "archlog/time_util.hpp"

namespace archlog {

namespace {

using Json = nlohmann::ordered_json;

bool write_text(const std::string &path, const std::string &content, std::string &error) {
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

bool read_json(const std::string &path, Json &j, std::string &error) {
    std::ifstream in(path);
    if (!in) {
        error = "cannot read " + path + " (run the earlier stage first)";
        return false;
    }
    try {
        in >> j;
    } catch (const std::exception &e) {
        error = path + " is not valid JSON: " + e.what();
        return false;
    }
    return true;
}

std::string tmp_dir_of(const PipelineConfig &config) {
    if (!config.tmp_dir.empty()) {
        return config.tmp_dir;
    }
    if (const char *env = std::getenv("ARCHLOG_TMPDIR"); env && *env) {
        return std::string(env);
    }
    return config.out_dir + "/tmp";
}

Result<KnownBotList> bot_list_of(const PipelineConfig &config) {
    if (config.known_bots_path.empty()) {
        return KnownBotList::builtin();
    }
    return KnownBotList::load(config.known_bots_path);
}

// Groups contiguous records sharing a session id and feeds each group to
// the callback as a Session (requests in stream order).
class SessionGrouper {
public:
    template <typename Fn>
    static bool for_each(const std::string &path, Fn &&fn, std::string &error) {
        RecordReader reader(path);
        if (!reader.ok()) {
            error = reader.error();
            return false;
        }
        Session current;
        ArchiveRequest r;
        while (reader.next(r)) {
            if (!current.requests.empty() && r.session_id != current.id) {
                recompute_session_metrics(current);
                if (!fn(std::move(current))) {
                    error = "session consumer failed";
                    return false;
                }
                current = Session{};
            }
            if (current.requests.empty()) {
                current.id = r.session_id;
                current.key = user_key_of(r.entry);
            }
            current.requests.push_back(std::move(r));
        }
        if (!reader.ok()) {
            error = reader.error();
            return false;
        }
        if (!current.requests.empty()) {
            recompute_session_metrics(current);
            if (!fn(std::move(current))) {
                error = "session consumer failed";
                return false;
            }
        }
        return true;
    }
};

struct VerdictRecord {
    bool is_robot = false;
};

bool load_verdicts(const std::string &path, std::unordered_map<std::string, VerdictRecord> &out,
                   std::string &error) {
    LineReader lines(path);
    if (!lines.ok()) {
        error = "cannot read " + path + " (run detect first)";
        return false;
    }
    std::string line;
    while (lines.next(line)) {
        if (line.empty()) continue;
        try {
            const Json j = Json::parse(line);
            out[j.at("id").get<std::string>()] = {j.at("is_robot").get<bool>()};
        } catch (const std::exception &e) {
            error = "malformed verdict line: " + std::string(e.what());
            return false;
        }
    }
    return true;
}

} // namespace

Artifacts::Artifacts(const std::string &d)
    : dir(d),
      records(d + "/records.arl"),
      parse_errors(d + "/parse_errors.log"),
      features(d + "/features.json"),
      cleaning(d + "/cleaning.json"),
      s1(d + "/s1.arl"),
      sessions(d + "/sessions.arl"),
      verdicts(d + "/verdicts.ndjson"),
      bot_table(d + "/bot_table.json"),
      s2(d + "/s2.arl"),
      pattern_labels(d + "/pattern_labels.ndjson"),
      patterns(d + "/patterns.json"),
      temporal(d + "/temporal.json") {}

bool stage_parse(const PipelineConfig &config, std::string &error) {
    const Artifacts art(config.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);

    if (config.inputs.empty()) {
        error = "no input files";
        return false;
    }
    for (const std::string &path : config.inputs) {
        if (!std::filesystem::exists(path)) {
            error = "cannot read input " + path;
            return false;
        }
    }

    RecordWriter writer(art.records);
    if (!writer.ok()) {
        error = "cannot write " + art.records;
        return false;
    }
    const std::string errors_path =
        config.errors_out.empty() ? art.parse_errors : config.errors_out;
    std::ofstream errors_out(errors_path, std::ios::binary | std::ios::trunc);

    FeatureStats features;
    std::map<std::int64_t, std::uint64_t> local_date_counts;
    std::uint64_t lines_in = 0;
    std::uint64_t parse_errors = 0;
    std::uint64_t raw_records = 0;

    for (const std::string &path : config.inputs) {
        LineReader lines(path);
        if (!lines.ok()) {
            error = "cannot read input " + path;
            return false;
        }
        std::string line;
        std::uint64_t line_no = 0;
        while (lines.next(line)) {
            ++line_no;
            const std::uint64_t seq = lines_in++;
            if (line.empty()) {
                ++parse_errors;
                errors_out << path << ':' << line_no << ": offset 0: empty line\n";
                continue;
            }
            auto parsed = parse_line(line, config.format);
            if (!parsed) {
                ++parse_errors;
                errors_out << path << ':' << line_no << ": offset " << parsed.error().offset
                           << ": " << parsed.error().reason << '\t' << line << '\n';
                continue;
            }
            parsed->seq = seq;
            const std::int64_t local =
                parsed->timestamp.epoch_utc + std::int64_t(parsed->timestamp.tz_offset_min) * 60;
            ++local_date_counts[local / 86400];
            ArchiveRequest request = classify_path(std::move(*parsed), config.profile);
            features.add(request);
            writer.write(request);
            ++raw_records;
        }
    }
    writer.close();

    Json fj;
    fj["counters"]["total"] = features.total_requests;
    fj["counters"]["get"] = features.get;
    fj["counters"]["head"] = features.head;
    fj["counters"]["propfind"] = features.propfind;
    fj["counters"]["post"] = features.post;
    fj["counters"]["options"] = features.options;
    fj["counters"]["other_method"] = features.other_method;
    fj["counters"]["status_2xx"] = features.status_2xx;
    fj["counters"]["status_3xx"] = features.status_3xx;
    fj["counters"]["status_4xx"] = features.status_4xx;
    fj["counters"]["status_5xx"] = features.status_5xx;
    fj["counters"]["embedded"] = features.embedded_resources;
    fj["counters"]["null_referrer"] = features.null_referrer;
    fj["counters"]["si_robots"] = features.si_robots;
    fj["input_lines"] = lines_in;
    fj["parse_errors"] = parse_errors;
    std::int64_t modal_day = 0;
    std::uint64_t modal_count = 0;
    for (const auto &[day, count] : local_date_counts) {
        if (count > modal_count) {
            modal_day = day;
            modal_count = count;
        }
    }
    fj["modal_date"] = raw_records == 0 ? "" : format_iso_date(modal_day * 86400);
    Json digests;
    for (const std::string &path : config.inputs) {
        digests[path] = file_digest(path);
    }
    fj["input_digests"] = digests;
    if (!write_text(art.features, fj.dump(2) + "\n", error)) {
        return false;
    }

    Json cj;
    cj["raw"] = raw_records;
    return write_text(art.cleaning, cj.dump(2) + "\n", error);
}

bool stage_clean1(const PipelineConfig &config, std::string &error) {
    const Artifacts art(config.out_dir);
    RecordReader reader(art.records);
    if (!reader.ok()) {
        error = reader.error();
        return false;
    }
    RecordWriter writer(art.s1);
    if (!writer.ok()) {
        error = "cannot write " + art.s1;
        return false;
    }
    std::uint64_t kept = 0;
    ArchiveRequest r;
    while (reader.next(r)) {
        if (stage1_keep(r)) {
            writer.write(r);
            ++kept;
        }
    }
    if (!reader.ok() && !reader.error().empty()) {
        error = reader.error();
        return false;
    }
    writer.close();

    Json cj;
    if (!read_json(art.cleaning, cj, error)) {
        return false;
    }
    cj["s1"] = kept;
    return write_text(art.cleaning, cj.dump(2) + "\n", error);
}

bool stage_sessionize(const PipelineConfig &config, std::string &error) {
    const Artifacts art(config.out_dir);
    if (!std::filesystem::exists(art.s1)) {
        error = "cannot read " + art.s1 + " (run clean --stage 1 first)";
        return false;
    }
    SessionizerOptions options;
    options.timeout_seconds = config.session_timeout_seconds;
    options.memory_budget_bytes = config.memory_budget_bytes;
    options.tmp_dir = tmp_dir_of(config);
    options.threads = config.threads;
    options.input_size_hint = std::filesystem::file_size(art.s1);
    Sessionizer sessionizer(options);

    {
        RecordReader reader(art.s1);
        if (!reader.ok()) {
            error = reader.error();
            return false;
        }
        ArchiveRequest r;
        while (reader.next(r)) {
            sessionizer.add(r);
        }
        if (!reader.ok() && !reader.error().empty()) {
            error = reader.error();
            return false;
        }
    }

    RecordWriter writer(art.sessions);
    if (!writer.ok()) {
        error = "cannot write " + art.sessions;
        return false;
    }
    std::uint64_t written = 0;
    const bool ok = sessionizer.finish(
        [&](Session &&session) {
            for (ArchiveRequest &r : session.requests) {
                r.session_id = session.id;
                writer.write(r);
                ++written;
            }
        },
        error);
    writer.close();
    if (!ok) {
        return false;
    }
    if (written != sessionizer.request_count()) {
        error = "sessionizer lost requests: " + std::to_string(written) + " of " +
                std::to_string(sessionizer.request_count());
        return false;
    }
    return true;
}

bool stage_detect(const PipelineConfig &config, std::string &error) {
    const Artifacts art(config.out_dir);
    auto list = bot_list_of(config);
    if (!list) {
        error = list.error().reason;
        return false;
    }

    // Global pass: distinct User-Agents per client token.
    UaPerIpCounter counter(config.thresholds.ua_per_ip);
    {
        RecordReader reader(art.sessions);
        if (!reader.ok()) {
            error = reader.error();
            return false;
        }
        ArchiveRequest r;
        while (reader.next(r)) {
            counter.add(r);
        }
        if (!reader.ok() && !reader.error().empty()) {
            error = reader.error();
            return false;
        }
    }
    const std::unordered_set<std::string> flagged = counter.flagged_tokens();

    std::ofstream verdicts(art.verdicts, std::ios::binary | std::ios::trunc);
    if (!verdicts) {
        error = "cannot write " + art.verdicts;
        return false;
    }
    BotTable table;
    const bool ok = SessionGrouper::for_each(
        art.sessions,
        [&](Session &&session) {
            const BotVerdict verdict =
                classify_session(session, flagged, *list, config.thresholds);
            table.add(verdict);
            Json j;
            j["id"] = session.id;
            j["client_token"] = session.key.client_token;
            j["user_agent"] = session.key.user_agent;
            j["start_epoch"] = session.start_epoch;
            j["requests"] = verdict.request_count;
            Json flags = Json::array();
            for (std::string_view f : verdict.flag_names()) {
                flags.push_back(std::string(f));
            }
            j["flags"] = flags;
            j["is_robot"] = verdict.is_robot;
            verdicts << j.dump() << '\n';
            return static_cast<bool>(verdicts);
        },
        error);
    if (!ok) {
        return false;
    }
    verdicts.close();

    Json tj;
    tj["total_sessions"] = table.total_sessions;
    tj["total_requests"] = table.total_requests;
    auto row = [](const BotTable::Row &r) {
        Json o;
        o["sessions"] = r.sessions;
        o["requests"] = r.requests;
        return o;
    };
    tj["known_bots"] = row(table.known_bots);
    tj["ua_per_ip"] = row(table.ua_per_ip);
    tj["robots_txt"] = row(table.robots_txt);
    tj["head_method"] = row(table.head_method);
    tj["ih_ratio"] = row(table.ih_ratio);
    tj["browsing_speed"] = row(table.browsing_speed);
    tj["total_robots"] = row(table.total_robots);
    return write_text(art.bot_table, tj.dump(2) + "\n", error);
}

bool stage_clean2(const PipelineConfig &config, std::string &error) {
    const Artifacts art(config.out_dir);
    RecordReader reader(art.sessions);
    if (!reader.ok()) {
        error = reader.error();
        return false;
    }
    RecordWriter writer(art.s2);
    if (!writer.ok()) {
        error = "cannot write " + art.s2;
        return false;
    }
    std::uint64_t kept = 0;
    ArchiveRequest r;
    while (reader.next(r)) {
        if (stage2_keep(r)) {
            writer.write(r);
            ++kept;
        }
    }
    if (!reader.ok() && !reader.error().empty()) {
        error = reader.error();
        return false;
    }
    writer.close();

    Json cj;
    if (!read_json(art.cleaning, cj, error)) {
        return false;
    }
    cj["s2"] = kept;
    return write_text(art.cleaning, cj.dump(2) + "\n", error);
}

bool stage_patterns(const PipelineConfig &config, std::string &error) {
    const Artifacts art(config.out_dir);
    std::unordered_map<std::string, VerdictRecord> verdicts;
    if (!load_verdicts(art.verdicts, verdicts, error)) {
        return false;
    }
    std::ofstream labels(art.pattern_labels, std::ios::binary | std::ios::trunc);
    if (!labels) {
        error = "cannot write " + art.pattern_labels;
        return false;
    }
    PatternDistribution distribution;
    bool verdict_missing = false;
    const bool ok = SessionGrouper::for_each(
        art.s2,
        [&](Session &&session) {
            const auto it = verdicts.find(session.id);
            if (it == verdicts.end()) {
                verdict_missing = true;
                return false;
            }
            const PatternLabel label = classify_pattern(session, config.dive_window_seconds);
            distribution.add(it->second.is_robot, label.label, session);
            Json j;
            j["id"] = session.id;
            j["label"] = std::string(pattern_name(label.label));
            j["requests"] = session.requests.size();
            j["is_robot"] = it->second.is_robot;
            labels << j.dump() << '\n';
            return static_cast<bool>(labels);
        },
        error);
    if (!ok) {
        if (verdict_missing) {
            error = "session in " + art.s2 + " missing from verdicts (rerun detect)";
        }
        return false;
    }
    labels.close();

    Json pj;
    pj["human_requests"] = distribution.human_requests;
    pj["robot_requests"] = distribution.robot_requests;
    Json cells = Json::array();
    for (const auto &[key, cell] : distribution.cells) {
        Json c;
        c["subdataset"] = key.first ? "robot" : "human";
        c["label"] = std::string(pattern_name(key.second));
        c["sessions"] = cell.sessions;
        c["requests"] = cell.requests;
        c["memento_requests"] = cell.memento_requests;
        c["timemap_requests"] = cell.timemap_requests;
        cells.push_back(std::move(c));
    }
    pj["cells"] = cells;
    return write_text(art.patterns, pj.dump(2) + "\n", error);
}

bool stage_temporal(const PipelineConfig &config, std::string &error) {
    const Artifacts art(config.out_dir);
    std::unordered_map<std::string, VerdictRecord> verdicts;
    if (!load_verdicts(art.verdicts, verdicts, error)) {
        return false;
    }

    std::string reference_date = config.reference_date;
    if (reference_date.empty()) {
        Json fj;
        if (!read_json(art.features, fj, error)) {
            return false;
        }
        reference_date = fj.value("modal_date", std::string());
    }
    std::int64_t reference_epoch = 0;
    bool have_reference = false;
    {
        unsigned y = 0, m = 0, d = 0;
        if (std::sscanf(reference_date.c_str(), "%4u-%2u-%2u", &y, &m, &d) == 3 &&
            valid_civil_date(static_cast<int>(y), m, d)) {
            reference_epoch = days_from_civil(static_cast<int>(y), m, d) * 86400;
            have_reference = true;
        }
    }

    TemporalHistogram human;
    TemporalHistogram robot;
    human.reference_epoch = reference_epoch;
    robot.reference_epoch = reference_epoch;

    RecordReader reader(art.s2);
    if (!reader.ok()) {
        error = reader.error();
        return false;
    }
    ArchiveRequest r;
    bool missing_verdict = false;
    while (reader.next(r)) {
        if (r.kind != RequestKind::Memento || !r.memento_datetime) {
            continue;
        }
        if (!have_reference) {
            error = "no usable reference date (set --reference-date)";
            return false;
        }
        const auto it = verdicts.find(r.session_id);
        if (it == verdicts.end()) {
            missing_verdict = true;
            break;
        }
        (it->second.is_robot ? robot : human).add(*r.memento_datetime, config.year_mode);
    }
    if (missing_verdict) {
        error = "request in " + art.s2 + " missing from verdicts (rerun detect)";
        return false;
    }
    if (!reader.ok() && !reader.error().empty()) {
        error = reader.error();
        return false;
    }

    Json tj;
    tj["reference_date"] = reference_date;
    auto hist = [](const TemporalHistogram &h) {
        Json o;
        Json buckets;
        for (const auto &[years, count] : h.buckets) {
            buckets[std::to_string(years)] = count;
        }
        o["years_prior"] = buckets;
        o["discarded_future"] = h.discarded_future;
        return o;
    };
    tj["human"] = hist(human);
    tj["robot"] = hist(robot);
    return write_text(art.temporal, tj.dump(2) + "\n", error);
}

bool stage_report(const PipelineConfig &config, ReportBundle &bundle, std::string &error) {
    const Artifacts art(config.out_dir);
    Json fj, cj, tj, pj, hj;
    if (!read_json(art.features, fj, error) || !read_json(art.cleaning, cj, error) ||
        !read_json(art.bot_table, tj, error) || !read_json(art.patterns, pj, error) ||
        !read_json(art.temporal, hj, error)) {
        return false;
    }
    try {
        const Json &c = fj.at("counters");
        bundle.features.total_requests = c.at("total").get<std::uint64_t>();
        bundle.features.get = c.at("get").get<std::uint64_t>();
        bundle.features.head = c.at("head").get<std::uint64_t>();
        bundle.features.propfind = c.at("propfind").get<std::uint64_t>();
        bundle.features.post = c.at("post").get<std::uint64_t>();
        bundle.features.options = c.at("options").get<std::uint64_t>();
        bundle.features.other_method = c.at("other_method").get<std::uint64_t>();
        bundle.features.status_2xx = c.at("status_2xx").get<std::uint64_t>();
        bundle.features.status_3xx = c.at("status_3xx").get<std::uint64_t>();
        bundle.features.status_4xx = c.at("status_4xx").get<std::uint64_t>();
        bundle.features.status_5xx = c.at("status_5xx").get<std::uint64_t>();
        bundle.features.embedded_resources = c.at("embedded").get<std::uint64_t>();
        bundle.features.null_referrer = c.at("null_referrer").get<std::uint64_t>();
        bundle.features.si_robots = c.at("si_robots").get<std::uint64_t>();

        bundle.cleaning.raw_count = cj.at("raw").get<std::uint64_t>();
        bundle.cleaning.s1_count = cj.value("s1", 0ull);
        bundle.cleaning.s2_count = cj.value("s2", 0ull);

        auto row = [&](const char *name) {
            BotTable::Row r;
            r.sessions = tj.at(name).at("sessions").get<std::uint64_t>();
            r.requests = tj.at(name).at("requests").get<std::uint64_t>();
            return r;
        };
        bundle.bot_table.total_sessions = tj.at("total_sessions").get<std::uint64_t>();
        bundle.bot_table.total_requests = tj.at("total_requests").get<std::uint64_t>();
        bundle.bot_table.known_bots = row("known_bots");
        bundle.bot_table.ua_per_ip = row("ua_per_ip");
        bundle.bot_table.robots_txt = row("robots_txt");
        bundle.bot_table.head_method = row("head_method");
        bundle.bot_table.ih_ratio = row("ih_ratio");
        bundle.bot_table.browsing_speed = row("browsing_speed");
        bundle.bot_table.total_robots = row("total_robots");

        bundle.patterns.human_requests = pj.at("human_requests").get<std::uint64_t>();
        bundle.patterns.robot_requests = pj.at("robot_requests").get<std::uint64_t>();
        for (const auto &c2 : pj.at("cells")) {
            const bool robot = c2.at("subdataset").get<std::string>() == "robot";
            const auto label = pattern_from_name(c2.at("label").get<std::string>());
            if (!label) {
                error = "unknown pattern label in " + art.patterns;
                return false;
            }
            PatternDistribution::Cell cell;
            cell.sessions = c2.at("sessions").get<std::uint64_t>();
            cell.requests = c2.at("requests").get<std::uint64_t>();
            cell.memento_requests = c2.at("memento_requests").get<std::uint64_t>();
            cell.timemap_requests = c2.at("timemap_requests").get<std::uint64_t>();
            bundle.patterns.cells[{robot, *label}] = cell;
        }

        const std::string ref = hj.at("reference_date").get<std::string>();
        unsigned y = 0, m = 0, d = 0;
        if (std::sscanf(ref.c_str(), "%4u-%2u-%2u", &y, &m, &d) == 3) {
            const std::int64_t epoch = days_from_civil(static_cast<int>(y), m, d) * 86400;
            bundle.temporal_human.reference_epoch = epoch;
            bundle.temporal_robot.reference_epoch = epoch;
        }
        auto hist = [](const Json &h, TemporalHistogram &out) {
            for (const auto &[key, value] : h.at("years_prior").items()) {
                out.buckets[std::stoi(key)] = value.get<std::uint64_t>();
            }
            out.discarded_future = h.at("discarded_future").get<std::uint64_t>();
        };
        hist(hj.at("human"), bundle.temporal_human);
        hist(hj.at("robot"), bundle.temporal_robot);

        bundle.metadata.profile = std::string(archive_profile_name(config.profile));
        bundle.metadata.format = config.format == LogFormat::Auto ? "auto"
                                 : config.format == LogFormat::Clf ? "clf"
                                                                   : "clf-extended";
        bundle.metadata.session_timeout_seconds = config.session_timeout_seconds;
        bundle.metadata.bs_threshold = config.thresholds.browsing_speed;
        bundle.metadata.ih_threshold = config.thresholds.ih_ratio;
        bundle.metadata.ua_ip_threshold = config.thresholds.ua_per_ip;
        bundle.metadata.dive_window_seconds = config.dive_window_seconds;
        bundle.metadata.year_mode =
            config.year_mode == YearMode::Calendar ? "calendar" : "elapsed";
        bundle.metadata.reference_date = ref;
        bundle.metadata.known_bots_file = config.known_bots_path;
        bundle.metadata.parse_errors = fj.value("parse_errors", 0ull);
        bundle.metadata.input_lines = fj.value("input_lines", 0ull);
        for (const auto &[path, digest] : fj.at("input_digests").items()) {
            bundle.metadata.input_digests.emplace_back(path, digest.get<std::string>());
        }
    } catch (const std::exception &e) {
        error = "artifact field missing: " + std::string(e.what());
        return false;
    }
    return emit_report(bundle, config.report_formats, config.out_dir, error);
}

bool run_pipeline(const PipelineConfig &config, ReportBundle &bundle, std::string &error) {
    const Artifacts art(config.out_dir);
    struct Step {
        const char *name;
        std::string output;
        bool (*fn)(const PipelineConfig &, std::string &);
    };
    const Step steps[] = {
        {"parse", art.records, stage_parse},
        {"clean-1", art.s1, stage_clean1},
        {"sessionize", art.sessions, stage_sessionize},
        {"detect", art.verdicts, stage_detect},
        {"clean-2", art.s2, stage_clean2},
        {"patterns", art.patterns, stage_patterns},
        {"temporal", art.temporal, stage_temporal},
    };
    for (const Step &step : steps) {
        if (config.resume && std::filesystem::exists(step.output)) {
            continue;
        }
        if (!step.fn(config, error)) {
            error = std::string("stage ") + step.name + ": " + error;
            return false;
        }
    }
    if (!stage_report(config, bundle, error)) {
        error = "stage report: " + error;
        return false;
    }
    return true;
}

} // namespace archlog
