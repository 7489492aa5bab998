// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "archlog/archive_request.hpp"

namespace archlog {

/// A user is an (anonymized IP token, User-Agent) pair. Absent
/// User-Agents normalize to the empty string.
struct UserKey {
    std::string client_token;
    std::string user_agent;

    auto operator<=>(const UserKey &) const = default;
};

UserKey user_key_of(const LogEntry &entry);

/// Deterministic session id: a 64-bit FNV-1a over key and start instant.
std::string session_id_for(const UserKey &key, std::int64_t start_epoch);

struct Session {
    UserKey key;
    std::string id;
    std::vector<ArchiveRequest> requests; // time-ordered, ties by input seq
    std::int64_t start_epoch = 0;
    std::int64_t end_epoch = 0;

    std::uint64_t html_count = 0;
    std::uint64_t image_count = 0;
    std::uint64_t timemap_count = 0;
    std::uint64_t robots_txt_count = 0;
    std::uint64_t head_count = 0;

    std::int64_t duration_seconds() const { return end_epoch - start_epoch; }
};

/// Recomputes time bounds and per-class counters from the request list;
/// the id is left alone (stage-2 filtering keeps session membership).
void recompute_session_metrics(Session &session);

/// recompute_session_metrics plus the deterministic id.
void finalize_session(Session &session);

/// Copy of the session holding only requests that survive stage 2,
/// keeping the original identity.
Session stage2_filtered(const Session &session);

struct SessionizerOptions {
    std::int64_t timeout_seconds = 600;
    std::uint64_t memory_budget_bytes = 256ull << 20;
    std::string tmp_dir = "/tmp";
    int threads = 1;
    std::uint64_t input_size_hint = 0; // bytes; tunes the shard count
};

/// Out-of-core grouping: requests are hash-partitioned by UserKey into
/// spill shards sized to the memory budget, then each shard is sorted
/// (externally if it still exceeds the budget) and scanned into
/// sessions. A gap strictly greater than the timeout starts a new
/// session. Shard processing may run in parallel; sessions are emitted
/// in shard order, so output is deterministic for a given configuration.
class Sessionizer {
public:
    explicit Sessionizer(SessionizerOptions options);
    ~Sessionizer();
    Sessionizer(const Sessionizer &) = delete;
    Sessionizer &operator=(const Sessionizer &) = delete;

    void add(const ArchiveRequest &request);

    /// Flushes, sorts and emits every session. Returns false (with a
    /// message) on spill-storage failure; sessions already emitted stay
    /// valid.
    bool finish(const std::function<void(Session &&)> &sink, std::string &error);

    std::uint64_t request_count() const { return request_count_; }

private:
    struct Shard;
    void flush_shard(std::size_t index);
    bool process_shard(std::size_t index, std::vector<Session> &out, std::string &error) const;

    SessionizerOptions options_;
    std::vector<Shard> shards_;
    std::uint64_t request_count_ = 0;
    bool failed_ = false;
    std::string fail_reason_;
};

} // namespace archlog
