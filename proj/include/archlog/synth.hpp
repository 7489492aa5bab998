// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "archlog/archive_request.hpp"
#include "archlog/patterns.hpp"
#include "archlog/result.hpp"

namespace archlog {

enum class Heuristic : std::uint8_t {
    KnownBot,
    HeadMethod,
    UaPerIp,
    RobotsTxt,
    BrowsingSpeed,
    IhRatio,
};

std::string_view heuristic_name(Heuristic h) noexcept;
std::optional<Heuristic> heuristic_from_name(std::string_view) noexcept;

/// One family of sessions to plant. `triggers` is the exact flag set the
/// detector must recover; humans have none. `memento_years` maps
/// years-prior to the number of surviving memento requests placed in
/// that year (negative keys plant future-dated captures). Empty uses a
/// default shaped by the pattern.
struct SessionBlueprint {
    std::string name;
    std::uint64_t count = 1;
    bool robot = false;
    std::set<Heuristic> triggers;
    PatternName pattern = PatternName::Dip;
    std::optional<std::map<int, std::uint64_t>> memento_years; // nullopt: pattern default
};

struct SynthSpec {
    std::uint64_t seed = 1;
    std::string log_date = "2019-02-07"; // local civil date of the corpus
    ArchiveProfile profile = ArchiveProfile::IaWayback;
    std::vector<SessionBlueprint> blueprints;
};

Result<SynthSpec> load_synth_spec(const std::string &path);

struct GroundTruthSession {
    std::string id;
    std::string client_token;
    std::string user_agent;
    std::int64_t start_epoch = 0;
    bool robot = false;
    std::vector<std::string> flags;       // detector flag names, sorted
    std::optional<PatternName> pattern;   // nullopt: nothing survives stage 2
    std::uint64_t surviving_requests = 0;
    std::string blueprint;
};

struct GroundTruth {
    std::string profile;
    std::string log_date;
    std::uint64_t total_lines = 0;
    std::vector<GroundTruthSession> sessions;
    // Expected temporal histograms over surviving memento requests.
    std::map<int, std::uint64_t> human_years;
    std::map<int, std::uint64_t> robot_years;
    std::uint64_t human_future = 0;
    std::uint64_t robot_future = 0;

    std::string to_json_text() const;
    static Result<GroundTruth> from_json_text(const std::string &text);
};

struct GenerationStats {
    std::uint64_t lines = 0;
    std::uint64_t sessions = 0;
};

/// Renders the corpus and its ground truth. Deterministic for a seed:
/// the same spec produces byte-identical output. Every planned session
/// is checked against the real detector and pattern classifier before
/// anything is written; an unrealizable blueprint fails generation.
Result<GenerationStats> generate_corpus(const SynthSpec &spec, const std::string &log_path,
                                        const std::string &truth_path);

} // namespace archlog
