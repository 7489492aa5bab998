// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#include "archlog/session.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <future>
#include <queue>

#include "archlog/cleaning.hpp"
#include "archlog/record_io.hpp"

namespace archlog {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::uint64_t fnv1a(std::uint64_t h, std::string_view data) {
    for (unsigned char c : data) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

std::uint64_t key_hash(std::string_view token, std::string_view ua) {
    std::uint64_t h = fnv1a(kFnvOffset, token);
    h = fnv1a(h, std::string_view("\0", 1));
    return fnv1a(h, ua);
}

struct RequestOrder {
    bool operator()(const ArchiveRequest &a, const ArchiveRequest &b) const {
        const auto ka = std::tie(a.entry.client_token, a.entry.user_agent);
        const auto kb = std::tie(b.entry.client_token, b.entry.user_agent);
        if (ka != kb) return ka < kb;
        if (a.entry.timestamp.epoch_utc != b.entry.timestamp.epoch_utc) {
            return a.entry.timestamp.epoch_utc < b.entry.timestamp.epoch_utc;
        }
        return a.entry.seq < b.entry.seq;
    }
};

// Approximate resident footprint of a buffered request.
std::size_t request_weight(const ArchiveRequest &r) {
    return sizeof(ArchiveRequest) + r.entry.client_token.size() + r.entry.path.size() +
           r.entry.method_text.size() + r.uri_r.size() + r.replay_prefix.size() +
           r.stamp_text.size() + (r.entry.user_agent ? r.entry.user_agent->size() : 0) +
           (r.entry.referrer ? r.entry.referrer->size() : 0) + 64;
}

} // namespace

UserKey user_key_of(const LogEntry &entry) {
    return UserKey{entry.client_token, std::string(entry.user_agent_or_empty())};
}

std::string session_id_for(const UserKey &key, std::int64_t start_epoch) {
    std::uint64_t h = key_hash(key.client_token, key.user_agent);
    h = fnv1a(h, std::string_view("\0", 1));
    h = fnv1a(h, std::to_string(start_epoch));
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void recompute_session_metrics(Session &session) {
    session.html_count = 0;
    session.image_count = 0;
    session.timemap_count = 0;
    session.robots_txt_count = 0;
    session.head_count = 0;
    if (session.requests.empty()) {
        session.start_epoch = session.end_epoch = 0;
        return;
    }
    session.start_epoch = session.requests.front().entry.timestamp.epoch_utc;
    session.end_epoch = session.requests.back().entry.timestamp.epoch_utc;
    for (const ArchiveRequest &r : session.requests) {
        if (r.entry.method == Method::Head) ++session.head_count;
        switch (r.kind) {
        case RequestKind::Timemap:
            ++session.timemap_count;
            break;
        case RequestKind::RobotsTxt:
            ++session.robots_txt_count;
            break;
        case RequestKind::Memento:
            if (r.resource_class == ResourceClass::Html) ++session.html_count;
            if (r.resource_class == ResourceClass::Image) ++session.image_count;
            break;
        case RequestKind::Other:
            break;
        }
    }
}

void finalize_session(Session &session) {
    recompute_session_metrics(session);
    if (!session.requests.empty()) {
        session.id = session_id_for(session.key, session.start_epoch);
    }
}

Session stage2_filtered(const Session &session) {
    Session out;
    out.key = session.key;
    out.id = session.id;
    for (const ArchiveRequest &r : session.requests) {
        if (stage2_keep(r)) {
            out.requests.push_back(r);
        }
    }
    recompute_session_metrics(out);
    return out;
}

struct Sessionizer::Shard {
    std::string path;
    std::FILE *file = nullptr;
    std::string buffer;
};

Sessionizer::Sessionizer(SessionizerOptions options) : options_(std::move(options)) {
    if (options_.memory_budget_bytes < (1u << 16)) {
        options_.memory_budget_bytes = 1u << 16;
    }
    std::size_t shard_count = 1;
    if (options_.input_size_hint > 0) {
        // Records expand ~1.5x over raw lines once buffered.
        const std::uint64_t want =
            (options_.input_size_hint * 3 / 2) / options_.memory_budget_bytes + 1;
        shard_count = static_cast<std::size_t>(std::min<std::uint64_t>(want, 1024));
    } else {
        shard_count = 16;
    }
    shards_.resize(shard_count);
    std::filesystem::create_directories(options_.tmp_dir);
    for (std::size_t i = 0; i < shards_.size(); ++i) {
        shards_[i].path = options_.tmp_dir + "/shard_" + std::to_string(i) + ".arl";
    }
}

Sessionizer::~Sessionizer() {
    for (Shard &shard : shards_) {
        if (shard.file) {
            std::fclose(shard.file);
        }
        if (!shard.path.empty()) {
            std::error_code ec;
            std::filesystem::remove(shard.path, ec);
        }
    }
}

void Sessionizer::flush_shard(std::size_t index) {
    Shard &shard = shards_[index];
    if (!shard.file) {
        shard.file = std::fopen(shard.path.c_str(), "wb");
        if (!shard.file) {
            failed_ = true;
            fail_reason_ = "cannot open spill shard " + shard.path;
            return;
        }
        std::fwrite(kRecordHeader.data(), 1, kRecordHeader.size(), shard.file);
        std::fputc('\n', shard.file);
    }
    if (!shard.buffer.empty()) {
        if (std::fwrite(shard.buffer.data(), 1, shard.buffer.size(), shard.file) !=
            shard.buffer.size()) {
            failed_ = true;
            fail_reason_ = "short write to spill shard " + shard.path;
        }
        shard.buffer.clear();
    }
}

void Sessionizer::add(const ArchiveRequest &request) {
    if (failed_) return;
    ++request_count_;
    const std::size_t index = static_cast<std::size_t>(
        key_hash(request.entry.client_token, request.entry.user_agent_or_empty()) %
        shards_.size());
    Shard &shard = shards_[index];
    append_record(shard.buffer, request);
    if (shard.buffer.size() >= (1u << 20)) {
        flush_shard(index);
    }
}

namespace {

// Sorted scan over one key group: emit a session at every gap > timeout.
template <typename Sink>
void scan_group(std::vector<ArchiveRequest> &&group, std::int64_t timeout, Sink &&sink) {
    Session session;
    for (ArchiveRequest &r : group) {
        if (!session.requests.empty() &&
            r.entry.timestamp.epoch_utc -
                    session.requests.back().entry.timestamp.epoch_utc >
                timeout) {
            finalize_session(session);
            Session done;
            std::swap(done, session);
            sink(std::move(done));
        }
        if (session.requests.empty()) {
            session.key = user_key_of(r.entry);
        }
        session.requests.push_back(std::move(r));
    }
    if (!session.requests.empty()) {
        finalize_session(session);
        sink(std::move(session));
    }
}

template <typename Sink>
void scan_sorted(std::vector<ArchiveRequest> &&records, std::int64_t timeout, Sink &&sink) {
    std::vector<ArchiveRequest> group;
    for (ArchiveRequest &r : records) {
        if (!group.empty() &&
            (group.back().entry.client_token != r.entry.client_token ||
             group.back().entry.user_agent_or_empty() != r.entry.user_agent_or_empty())) {
            scan_group(std::move(group), timeout, sink);
            group.clear();
        }
        group.push_back(std::move(r));
    }
    if (!group.empty()) {
        scan_group(std::move(group), timeout, sink);
    }
}

} // namespace

bool Sessionizer::process_shard(std::size_t index, std::vector<Session> &out,
                                std::string &error) const {
    const Shard &shard = shards_[index];
    if (!std::filesystem::exists(shard.path)) {
        return true;
    }
    const std::uint64_t size = std::filesystem::file_size(shard.path);
    const std::int64_t timeout = options_.timeout_seconds;
    auto sink = [&out](Session &&s) { out.push_back(std::move(s)); };

    if (size * 2 <= options_.memory_budget_bytes) {
        std::vector<ArchiveRequest> records;
        RecordReader reader(shard.path);
        ArchiveRequest r;
        while (reader.next(r)) {
            records.push_back(std::move(r));
        }
        if (!reader.ok() && !reader.error().empty()) {
            error = reader.error();
            return false;
        }
        std::sort(records.begin(), records.end(), RequestOrder{});
        scan_sorted(std::move(records), timeout, sink);
        return true;
    }

    // Oversized shard (skewed keys): external merge sort in runs that fit
    // the budget, then a k-way merge feeding the same scan.
    std::vector<std::string> run_paths;
    {
        RecordReader reader(shard.path);
        std::vector<ArchiveRequest> run;
        std::size_t run_bytes = 0;
        ArchiveRequest r;
        auto spill_run = [&]() -> bool {
            std::sort(run.begin(), run.end(), RequestOrder{});
            std::string path =
                shard.path + ".run" + std::to_string(run_paths.size());
            RecordWriter writer(path);
            if (!writer.ok()) {
                error = "cannot open sort run " + path;
                return false;
            }
            for (const ArchiveRequest &rec : run) {
                writer.write(rec);
            }
            writer.close();
            run_paths.push_back(std::move(path));
            run.clear();
            run_bytes = 0;
            return true;
        };
        while (reader.next(r)) {
            run_bytes += request_weight(r);
            run.push_back(std::move(r));
            if (run_bytes >= options_.memory_budget_bytes / 2 && !run.empty()) {
                if (!spill_run()) return false;
            }
        }
        if (!reader.ok() && !reader.error().empty()) {
            error = reader.error();
            return false;
        }
        if (!run.empty() && !spill_run()) {
            return false;
        }
    }

    struct MergeEntry {
        ArchiveRequest record;
        std::size_t source;
    };
    struct MergeOrder {
        bool operator()(const MergeEntry &a, const MergeEntry &b) const {
            // priority_queue is a max-heap; invert.
            return RequestOrder{}(b.record, a.record);
        }
    };
    std::vector<std::unique_ptr<RecordReader>> readers;
    std::priority_queue<MergeEntry, std::vector<MergeEntry>, MergeOrder> heap;
    for (std::size_t i = 0; i < run_paths.size(); ++i) {
        readers.push_back(std::make_unique<RecordReader>(run_paths[i]));
        ArchiveRequest r;
        if (readers.back()->next(r)) {
            heap.push(MergeEntry{std::move(r), i});
        }
    }

    // Streaming variant of scan_sorted over the merged order.
    std::vector<ArchiveRequest> group;
    while (!heap.empty()) {
        MergeEntry top = std::move(const_cast<MergeEntry &>(heap.top()));
        heap.pop();
        ArchiveRequest next;
        if (readers[top.source]->next(next)) {
            heap.push(MergeEntry{std::move(next), top.source});
        }
        ArchiveRequest &r = top.record;
        if (!group.empty() &&
            (group.back().entry.client_token != r.entry.client_token ||
             group.back().entry.user_agent_or_empty() != r.entry.user_agent_or_empty())) {
            scan_group(std::move(group), timeout, sink);
            group.clear();
        }
        group.push_back(std::move(r));
    }
    if (!group.empty()) {
        scan_group(std::move(group), timeout, sink);
    }
    for (const std::string &path : run_paths) {
        std::error_code ec;
        std::filesystem::remove(path, ec);
    }
    return true;
}

bool Sessionizer::finish(const std::function<void(Session &&)> &sink, std::string &error) {
    if (failed_) {
        error = fail_reason_;
        return false;
    }
    for (std::size_t i = 0; i < shards_.size(); ++i) {
        flush_shard(i);
        if (shards_[i].file) {
            std::fclose(shards_[i].file);
            shards_[i].file = nullptr;
        }
    }
    if (failed_) {
        error = fail_reason_;
        return false;
    }

    const int threads = std::max(1, options_.threads);
    if (threads == 1) {
        for (std::size_t i = 0; i < shards_.size(); ++i) {
            std::vector<Session> sessions;
            if (!process_shard(i, sessions, error)) {
                return false;
            }
            for (Session &s : sessions) {
                sink(std::move(s));
            }
        }
        return true;
    }

    // Shards are independent; process a window of them concurrently and
    // emit in shard order to keep the output deterministic.
    std::size_t next = 0;
    while (next < shards_.size()) {
        const std::size_t window =
            std::min<std::size_t>(static_cast<std::size_t>(threads), shards_.size() - next);
        std::vector<std::future<std::pair<bool, std::string>>> futures;
        std::vector<std::vector<Session>> results(window);
        for (std::size_t w = 0; w < window; ++w) {
            futures.push_back(std::async(std::launch::async, [this, next, w, &results] {
                std::string err;
                const bool ok = process_shard(next + w, results[w], err);
                return std::make_pair(ok, err);
            }));
        }
        for (std::size_t w = 0; w < window; ++w) {
            auto [ok, err] = futures[w].get();
            if (!ok) {
                error = err;
                return false;
            }
        }
        for (std::size_t w = 0; w < window; ++w) {
            for (Session &s : results[w]) {
                sink(std::move(s));
            }
        }
        next += window;
    }
    return true;
}

} // namespace archlog
