// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "archlog/pipeline.hpp"
#include "archlog/synth.hpp"

namespace {

using archlog::PipelineConfig;

bool parse_size(const std::string &text, std::uint64_t &out) {
    if (text.empty()) {
        return false;
    }
    char suffix = text.back();
    std::uint64_t multiplier = 1;
    std::string digits = text;
    switch (suffix) {
    case 'k': case 'K': multiplier = 1ull << 10; digits.pop_back(); break;
    case 'm': case 'M': multiplier = 1ull << 20; digits.pop_back(); break;
    case 'g': case 'G': multiplier = 1ull << 30; digits.pop_back(); break;
    default: break;
    }
    try {
        out = std::stoull(digits) * multiplier;
    } catch (...) {
        return false;
    }
    return true;
}

bool apply_profile(PipelineConfig &config, const std::string &name) {
    const auto p = archlog::archive_profile_from_name(name);
    if (!p) {
        std::fprintf(stderr, "error: unknown profile '%s' (ia|arquivo|auto)\n", name.c_str());
        return false;
    }
    config.profile = *p;
    return true;
}

bool apply_format(PipelineConfig &config, const std::string &name) {
    if (name == "auto") {
        config.format = archlog::LogFormat::Auto;
    } else if (name == "clf") {
        config.format = archlog::LogFormat::Clf;
    } else if (name == "clf-extended") {
        config.format = archlog::LogFormat::ClfExtended;
    } else {
        std::fprintf(stderr, "error: unknown format '%s' (auto|clf|clf-extended)\n", name.c_str());
        return false;
    }
    return true;
}

bool apply_year_mode(PipelineConfig &config, const std::string &name) {
    if (name == "calendar") {
        config.year_mode = archlog::YearMode::Calendar;
    } else if (name == "elapsed") {
        config.year_mode = archlog::YearMode::Elapsed;
    } else {
        std::fprintf(stderr, "error: unknown year mode '%s' (calendar|elapsed)\n", name.c_str());
        return false;
    }
    return true;
}

bool load_config_file(const std::string &path, PipelineConfig &config) {
    std::ifstream in(path);
    if (!in) {
        std::fprintf(stderr, "error: cannot read config %s\n", path.c_str());
        return false;
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: config %s: %s\n", path.c_str(), e.what());
        return false;
    }
    try {
        if (j.contains("inputs")) {
            config.inputs = j["inputs"].get<std::vector<std::string>>();
        }
        if (j.contains("out_dir")) config.out_dir = j["out_dir"].get<std::string>();
        if (j.contains("profile") && !apply_profile(config, j["profile"].get<std::string>())) {
            return false;
        }
        if (j.contains("format") && !apply_format(config, j["format"].get<std::string>())) {
            return false;
        }
        if (j.contains("known_bots")) config.known_bots_path = j["known_bots"].get<std::string>();
        if (j.contains("bs_threshold")) config.thresholds.browsing_speed = j["bs_threshold"];
        if (j.contains("ih_threshold")) config.thresholds.ih_ratio = j["ih_threshold"];
        if (j.contains("ua_ip_threshold")) config.thresholds.ua_per_ip = j["ua_ip_threshold"];
        if (j.contains("timeout_minutes")) {
            config.session_timeout_seconds = j["timeout_minutes"].get<std::int64_t>() * 60;
        }
        if (j.contains("dive_window_hours")) {
            config.dive_window_seconds = j["dive_window_hours"].get<std::int64_t>() * 3600;
        }
        if (j.contains("year_mode") && !apply_year_mode(config, j["year_mode"])) {
            return false;
        }
        if (j.contains("reference_date")) {
            config.reference_date = j["reference_date"].get<std::string>();
        }
        if (j.contains("memory_budget")) {
            if (!parse_size(j["memory_budget"].get<std::string>(),
                            config.memory_budget_bytes)) {
                std::fprintf(stderr, "error: bad memory_budget in config\n");
                return false;
            }
        }
        if (j.contains("tmpdir")) config.tmp_dir = j["tmpdir"].get<std::string>();
        if (j.contains("threads")) config.threads = j["threads"].get<int>();
        if (j.contains("emit")) {
            config.report_formats.clear();
            for (const auto &f : j["emit"]) {
                config.report_formats.insert(f.get<std::string>());
            }
        }
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: config %s: %s\n", path.c_str(), e.what());
        return false;
    }
    return true;
}

int fail(const std::string &message) {
    std::fprintf(stderr, "error: %s\n", message.c_str());
    return 1;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"archlog: web-archive access log analysis"};
    app.require_subcommand(1);

    PipelineConfig config;
    std::string profile_name = "auto";
    std::string format_name = "auto";
    std::string year_mode_name = "calendar";
    std::string memory_budget = "256M";
    std::string emit_formats = "json,csv,markdown";
    std::string config_file;
    double timeout_minutes = 10.0;
    double dive_window_hours = 24.0;

    auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("-o,--out-dir,--out", config.out_dir, "artifact directory");
        cmd->add_option("--profile", profile_name, "archive profile: ia|arquivo|auto");
    };

    // parse
    auto *cmd_parse = app.add_subcommand("parse", "parse raw logs into the record stream");
    add_common(cmd_parse);
    cmd_parse->add_option("-i,--input", config.inputs, "log files (plain or .gz)")->required();
    cmd_parse->add_option("--format", format_name, "auto|clf|clf-extended");
    cmd_parse->add_option("--errors-out", config.errors_out, "file for rejected lines");

    // clean
    auto *cmd_clean = app.add_subcommand("clean", "stage 1 or stage 2 filtering");
    add_common(cmd_clean);
    int clean_stage = 1;
    cmd_clean->add_option("--stage", clean_stage, "1 or 2")->required();

    // sessionize
    auto *cmd_sessionize = app.add_subcommand("sessionize", "group requests into sessions");
    add_common(cmd_sessionize);
    cmd_sessionize->add_option("--timeout-minutes", timeout_minutes, "inactivity gap");
    cmd_sessionize->add_option("--memory-budget", memory_budget, "e.g. 256M, 1G");
    cmd_sessionize->add_option("--tmpdir", config.tmp_dir, "spill directory");
    cmd_sessionize->add_option("--threads", config.threads, "parallel shard workers");

    // detect
    auto *cmd_detect = app.add_subcommand("detect", "label sessions robot or human");
    add_common(cmd_detect);
    cmd_detect->add_option("--known-bots", config.known_bots_path, "pattern file");
    cmd_detect->add_option("--bs-threshold", config.thresholds.browsing_speed,
                           "HTML req/s, flag at >=");
    cmd_detect->add_option("--ih-threshold", config.thresholds.ih_ratio,
                           "images per HTML, flag below");
    cmd_detect->add_option("--ua-ip-threshold", config.thresholds.ua_per_ip,
                           "distinct UAs per IP, flag above");

    // patterns
    auto *cmd_patterns = app.add_subcommand("patterns", "label access patterns");
    add_common(cmd_patterns);
    cmd_patterns->add_option("--dive-window-hours", dive_window_hours,
                             "capture spread for a Dive");

    // temporal
    auto *cmd_temporal = app.add_subcommand("temporal", "years-prior histograms");
    add_common(cmd_temporal);
    cmd_temporal->add_option("--reference-date", config.reference_date, "YYYY-MM-DD");
    cmd_temporal->add_option("--year-mode", year_mode_name, "calendar|elapsed");

    // report
    auto *cmd_report = app.add_subcommand("report", "assemble the report bundle");
    add_common(cmd_report);
    cmd_report->add_option("--emit", emit_formats, "comma list of json,csv,markdown");

    // synth
    auto *cmd_synth = app.add_subcommand("synth", "generate a synthetic corpus");
    std::string synth_spec_path;
    std::string synth_out = "synth-out";
    std::uint64_t synth_seed = 0;
    bool synth_seed_set = false;
    cmd_synth->add_option("--spec", synth_spec_path, "blueprint spec (json)")->required();
    auto *seed_opt = cmd_synth->add_option("--seed", synth_seed, "override the spec seed");
    cmd_synth->add_option("--out", synth_out, "output directory");

    // run
    auto *cmd_run = app.add_subcommand("run", "full pipeline");
    add_common(cmd_run);
    cmd_run->add_option("-i,--input", config.inputs, "log files (plain or .gz)");
    cmd_run->add_option("--format", format_name, "auto|clf|clf-extended");
    cmd_run->add_option("--errors-out", config.errors_out, "file for rejected lines");
    cmd_run->add_option("--timeout-minutes", timeout_minutes, "inactivity gap");
    cmd_run->add_option("--memory-budget", memory_budget, "e.g. 256M, 1G");
    cmd_run->add_option("--tmpdir", config.tmp_dir, "spill directory");
    cmd_run->add_option("--threads", config.threads, "parallel shard workers");
    cmd_run->add_option("--known-bots", config.known_bots_path, "pattern file");
    cmd_run->add_option("--bs-threshold", config.thresholds.browsing_speed, "flag at >=");
    cmd_run->add_option("--ih-threshold", config.thresholds.ih_ratio, "flag below");
    cmd_run->add_option("--ua-ip-threshold", config.thresholds.ua_per_ip, "flag above");
    cmd_run->add_option("--dive-window-hours", dive_window_hours, "capture spread for a Dive");
    cmd_run->add_option("--reference-date", config.reference_date, "YYYY-MM-DD");
    cmd_run->add_option("--year-mode", year_mode_name, "calendar|elapsed");
    cmd_run->add_option("--emit", emit_formats, "comma list of json,csv,markdown");
    cmd_run->add_option("--config", config_file, "declarative config (json)");
    cmd_run->add_flag("--resume", config.resume, "skip stages whose outputs exist");

    CLI11_PARSE(app, argc, argv);

    if (!config_file.empty() && !load_config_file(config_file, config)) {
        return 1;
    }
    if (!apply_profile(config, profile_name) || !apply_format(config, format_name) ||
        !apply_year_mode(config, year_mode_name)) {
        return 1;
    }
    if (!parse_size(memory_budget, config.memory_budget_bytes)) {
        return fail("bad --memory-budget value: " + memory_budget);
    }
    config.session_timeout_seconds = static_cast<std::int64_t>(timeout_minutes * 60.0);
    config.dive_window_seconds = static_cast<std::int64_t>(dive_window_hours * 3600.0);
    if (config.session_timeout_seconds <= 0 || config.dive_window_seconds <= 0) {
        return fail("timeout and dive window must be positive");
    }
    if (config.thresholds.browsing_speed <= 0 || config.thresholds.ih_ratio <= 0 ||
        config.thresholds.ua_per_ip == 0) {
        return fail("thresholds must be positive");
    }
    {
        config.report_formats.clear();
        std::size_t start = 0;
        while (start <= emit_formats.size()) {
            const std::size_t comma = emit_formats.find(',', start);
            const std::string f = emit_formats.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start);
            if (!f.empty()) {
                if (f != "json" && f != "csv" && f != "markdown") {
                    return fail("unknown report format: " + f);
                }
                config.report_formats.insert(f);
            }
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }

    std::string error;

    if (cmd_parse->parsed()) {
        if (!archlog::stage_parse(config, error)) return fail(error);
        return 0;
    }
    if (cmd_clean->parsed()) {
        if (clean_stage == 1) {
            if (!archlog::stage_clean1(config, error)) return fail(error);
        } else if (clean_stage == 2) {
            if (!archlog::stage_clean2(config, error)) return fail(error);
        } else {
            return fail("--stage must be 1 or 2");
        }
        return 0;
    }
    if (cmd_sessionize->parsed()) {
        if (!archlog::stage_sessionize(config, error)) return fail(error);
        return 0;
    }
    if (cmd_detect->parsed()) {
        if (!archlog::stage_detect(config, error)) return fail(error);
        return 0;
    }
    if (cmd_patterns->parsed()) {
        if (!archlog::stage_patterns(config, error)) return fail(error);
        return 0;
    }
    if (cmd_temporal->parsed()) {
        if (!archlog::stage_temporal(config, error)) return fail(error);
        return 0;
    }
    if (cmd_report->parsed()) {
        archlog::ReportBundle bundle;
        if (!archlog::stage_report(config, bundle, error)) return fail(error);
        return 0;
    }
    if (cmd_synth->parsed()) {
        auto spec = archlog::load_synth_spec(synth_spec_path);
        if (!spec) return fail(spec.error().reason);
        synth_seed_set = seed_opt->count() > 0;
        if (synth_seed_set) {
            spec->seed = synth_seed;
        }
        std::error_code ec;
        std::filesystem::create_directories(synth_out, ec);
        auto stats = archlog::generate_corpus(*spec, synth_out + "/synthetic.log",
                                              synth_out + "/ground_truth.json");
        if (!stats) return fail(stats.error().reason);
        std::printf("wrote %llu lines across %llu sessions to %s\n",
                    static_cast<unsigned long long>(stats->lines),
                    static_cast<unsigned long long>(stats->sessions), synth_out.c_str());
        return 0;
    }
    if (cmd_run->parsed()) {
        if (config.inputs.empty()) {
            return fail("run needs --input files (or a config listing them)");
        }
        archlog::ReportBundle bundle;
        if (!archlog::run_pipeline(config, bundle, error)) return fail(error);
        if (bundle.metadata.input_lines == 0) {
            std::fprintf(stderr, "warning: inputs contained no log lines\n");
        }
        std::printf("%s\n", (config.out_dir + "/report.json").c_str());
        return 0;
    }
    return 0;
}
