#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relmine/model.hpp"

namespace relmine {

// An entry as kept on disk. Error-status (4xx/5xx) entries stay in the
// store tagged `dropped` so hit statistics over the full stream remain
// computable; graph queries exclude them.
struct StoredEntry {
    LogEntry entry;
    bool dropped = false;  // status outside [200, 399]
    bool bot = false;      // host flagged by bot detection
    std::optional<AccessType> access;  // set for surviving classified entries

    bool operator==(const StoredEntry &) const = default;
};

struct HitStats {
    std::uint64_t accessed_resources = 0;
    std::uint64_t days = 0;
    std::uint64_t hits = 0;
    std::uint64_t successful_hits = 0;
    std::uint64_t semantic_requests = 0;
    std::uint64_t sparql_requests = 0;
    std::uint64_t distinct_hosts = 0;
};

struct IngestSummary {
    std::uint64_t count = 0;
    std::string batch_file;
};

struct QueryFilter {
    std::optional<AccessType> access;
    std::optional<std::string> host;
    bool include_dropped = false;
    bool include_bots = false;
};

class StoreError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class DuplicateBatchError : public StoreError {
  public:
    using StoreError::StoreError;
};

// Embedded windowed event store: a directory with a manifest, one
// newline-delimited record file per ingested batch, and a per-day count
// index. Single writer, any number of readers; readers only ever see
// fully committed batches (a batch becomes visible when its manifest
// line lands).
class Store {
  public:
    // Creates the directory if absent; otherwise opens it.
    static Store open(const std::filesystem::path &dir, const std::string &site_host = "");

    // Batches are keyed by source_id; re-ingesting one is an error.
    IngestSummary ingest(const std::string &source_id, std::span<const StoredEntry> entries);

    std::vector<StoredEntry> query(const std::optional<TimeWindow> &window,
                                   const QueryFilter &filter = {}) const;

    HitStats stats(const std::optional<TimeWindow> &window = std::nullopt) const;

    // Tab-separated export for external tools; one header line, then one
    // row per record in time order.
    std::string export_tsv(const std::optional<TimeWindow> &window = std::nullopt) const;

    const std::string &site_host() const { return site_host_; }
    const std::filesystem::path &dir() const { return dir_; }

  private:
    Store(std::filesystem::path dir, std::string site_host);

    struct BatchInfo {
        std::string source_id;
        std::string file;
        std::uint64_t count = 0;
        EpochSeconds min_epoch = 0;
        EpochSeconds max_epoch = 0;
    };

    std::vector<BatchInfo> load_manifest() const;
    std::vector<StoredEntry> load_batch(const BatchInfo &b) const;

    std::filesystem::path dir_;
    std::string site_host_;
};

}  // namespace relmine
