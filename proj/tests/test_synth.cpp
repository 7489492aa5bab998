// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "archlog/synth.hpp"

using namespace archlog;

namespace {

std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

SynthSpec small_spec() {
    SynthSpec spec;
    spec.seed = 7;
    spec.log_date = "2019-02-07";
    spec.profile = ArchiveProfile::IaWayback;

    SessionBlueprint humans;
    humans.name = "human-dips";
    humans.count = 5;
    humans.robot = false;
    humans.pattern = PatternName::Dip;
    spec.blueprints.push_back(humans);

    SessionBlueprint bots;
    bots.name = "twitter-heads";
    bots.count = 3;
    bots.robot = true;
    bots.triggers = {Heuristic::KnownBot, Heuristic::HeadMethod};
    bots.pattern = PatternName::Dip;
    spec.blueprints.push_back(bots);

    SessionBlueprint skimmers;
    skimmers.name = "ih-skims";
    skimmers.count = 2;
    skimmers.robot = true;
    skimmers.triggers = {Heuristic::IhRatio};
    skimmers.pattern = PatternName::DiveSlide;
    skimmers.memento_years = std::map<int, std::uint64_t>{{0, 2}, {3, 1}};
    spec.blueprints.push_back(skimmers);
    return spec;
}

} // namespace

TEST_CASE("generation is deterministic for a seed") {
    const auto dir = std::filesystem::temp_directory_path() / "archlog_synth_test";
    std::filesystem::create_directories(dir);
    const SynthSpec spec = small_spec();
    auto a = generate_corpus(spec, (dir / "a.log").string(), (dir / "a.json").string());
    REQUIRE_MESSAGE(a.ok(), a.error().reason);
    auto b = generate_corpus(spec, (dir / "b.log").string(), (dir / "b.json").string());
    REQUIRE(b.ok());
    CHECK(slurp((dir / "a.log").string()) == slurp((dir / "b.log").string()));
    CHECK(slurp((dir / "a.json").string()) == slurp((dir / "b.json").string()));

    SynthSpec other = spec;
    other.seed = 8;
    auto c = generate_corpus(other, (dir / "c.log").string(), (dir / "c.json").string());
    REQUIRE(c.ok());
    CHECK(slurp((dir / "a.log").string()) != slurp((dir / "c.log").string()));
    std::filesystem::remove_all(dir);
}

TEST_CASE("ground truth matches the blueprint intent") {
    const auto dir = std::filesystem::temp_directory_path() / "archlog_synth_truth";
    std::filesystem::create_directories(dir);
    const SynthSpec spec = small_spec();
    auto stats =
        generate_corpus(spec, (dir / "x.log").string(), (dir / "x.json").string());
    REQUIRE_MESSAGE(stats.ok(), stats.error().reason);
    CHECK(stats->sessions == 10);

    auto truth = GroundTruth::from_json_text(slurp((dir / "x.json").string()));
    REQUIRE_MESSAGE(truth.ok(), truth.error().reason);
    CHECK(truth->sessions.size() == 10);
    std::uint64_t robots = 0;
    std::uint64_t head_dips = 0;
    for (const auto &s : truth->sessions) {
        if (s.robot) ++robots;
        if (s.blueprint == "twitter-heads") {
            // A lone HEAD request leaves nothing after stage 2.
            CHECK(!s.pattern.has_value());
            CHECK(s.surviving_requests == 0);
            ++head_dips;
        }
        if (s.blueprint == "human-dips") {
            CHECK(s.pattern == PatternName::Dip);
            CHECK(s.flags.empty());
        }
        if (s.blueprint == "ih-skims") {
            CHECK(s.pattern == PatternName::DiveSlide);
            CHECK(s.flags == std::vector<std::string>{"ih_ratio"});
        }
    }
    CHECK(robots == 5);
    CHECK(head_dips == 3);
    // Planted temporal mass: ih-skims place 2 captures in year 0 and one
    // three years back, per session; human dips land in year 0.
    CHECK(truth->robot_years.at(0) == 4);
    CHECK(truth->robot_years.at(3) == 2);
    CHECK(truth->human_years.at(0) == 5);
    std::filesystem::remove_all(dir);
}

TEST_CASE("unrealizable blueprints are rejected") {
    const auto dir = std::filesystem::temp_directory_path() / "archlog_synth_invalid";
    std::filesystem::create_directories(dir);
    const auto log = (dir / "x.log").string();
    const auto truth = (dir / "x.json").string();

    SynthSpec spec;
    spec.blueprints.emplace_back();
    auto &bp = spec.blueprints.back();

    bp = SessionBlueprint{};
    bp.name = "skim-of-one";
    bp.robot = true;
    bp.triggers = {Heuristic::BrowsingSpeed};
    bp.pattern = PatternName::Skim;
    bp.memento_years = std::map<int, std::uint64_t>{};
    // Skim needs two TimeMaps, fine; but a Dip cannot carry two mementos:
    bp.pattern = PatternName::Dip;
    bp.memento_years = std::map<int, std::uint64_t>{{0, 2}};
    CHECK(!generate_corpus(spec, log, truth).ok());

    bp = SessionBlueprint{};
    bp.name = "dive-needs-pair";
    bp.robot = true;
    bp.triggers = {Heuristic::IhRatio};
    bp.pattern = PatternName::Dive;
    bp.memento_years = std::map<int, std::uint64_t>{{0, 1}, {5, 1}};
    CHECK(!generate_corpus(spec, log, truth).ok());

    bp = SessionBlueprint{};
    bp.name = "humans-cannot-trigger";
    bp.robot = false;
    bp.triggers = {Heuristic::IhRatio};
    CHECK(!generate_corpus(spec, log, truth).ok());

    bp = SessionBlueprint{};
    bp.name = "ua-ip-too-few";
    bp.robot = true;
    bp.triggers = {Heuristic::UaPerIp};
    bp.count = 20;
    CHECK(!generate_corpus(spec, log, truth).ok());

    std::filesystem::remove_all(dir);
}

TEST_CASE("spec files load with defaults and validation") {
    const auto dir = std::filesystem::temp_directory_path() / "archlog_synth_spec";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "spec.json").string();
    {
        std::ofstream out(path);
        out << R"({
  "seed": 3,
  "log_date": "2012-02-02",
  "profile": "arquivo",
  "blueprints": [
    {"name": "dips", "count": 4, "kind": "human", "pattern": "Dip"},
    {"name": "fast", "count": 2, "kind": "robot", "pattern": "Slide",
     "triggers": ["browsing_speed", "ih_ratio"], "memento_years": {"0": 2}}
  ]
})";
    }
    auto spec = load_synth_spec(path);
    REQUIRE_MESSAGE(spec.ok(), spec.error().reason);
    CHECK(spec->seed == 3);
    CHECK(spec->profile == ArchiveProfile::Arquivo);
    REQUIRE(spec->blueprints.size() == 2);
    CHECK(spec->blueprints[0].count == 4);
    CHECK(!spec->blueprints[0].memento_years.has_value());
    CHECK(spec->blueprints[1].triggers ==
          std::set<Heuristic>{Heuristic::BrowsingSpeed, Heuristic::IhRatio});

    auto stats = generate_corpus(*spec, (dir / "out.log").string(), (dir / "gt.json").string());
    REQUIRE_MESSAGE(stats.ok(), stats.error().reason);
    CHECK(stats->sessions == 6);

    CHECK(!load_synth_spec("/nonexistent/spec.json").ok());
    std::filesystem::remove_all(dir);
}
