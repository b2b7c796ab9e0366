#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "relmine/model.hpp"

namespace relmine {

enum class BotReason { UserAgentPattern, RobotsTxtFetch, RateThreshold };

const char *bot_reason_name(BotReason r);

struct BotVerdict {
    std::string host_hash;
    // At least one reason; evidence string per reason.
    std::vector<std::pair<BotReason, std::string>> reasons;

    bool has(BotReason r) const {
        for (const auto &[reason, _] : reasons)
            if (reason == r) return true;
        return false;
    }
};

struct CurationConfig {
    std::vector<std::string> ua_patterns = {"bot",      "spider", "crawl", "slurp",
                                            "archiver", "wget",   "curl",  "libwww"};
    std::uint32_t rate_limit_hits = 1000;   // N
    std::uint32_t rate_limit_span_s = 3600; // S
    std::uint32_t semantic_pair_horizon_s = 10;
    std::vector<std::string> sparql_endpoints = {"/sparql"};
    std::vector<std::string> search_paths;  // empty = Search disabled
    std::string site_host;
    // Maps a plain-URI prefix to its representation prefix, DBpedia style.
    std::vector<std::pair<std::string, std::string>> representation_rewrites = {
        {"/resource/", "/data/"}, {"/resource/", "/page/"}};
    std::vector<std::string> representation_extensions = {".rdf", ".html", ".xml",
                                                          ".json", ".ttl", ".n3"};
    std::uint32_t session_gap_s = 1800;
};

// Keeps exactly the entries with status in [200, 399], order preserved.
std::vector<LogEntry> filter_status(std::span<const LogEntry> entries);

// A host is a bot iff its user agent matches a configured pattern, it
// ever requests /robots.txt, or it exceeds N hits in any sliding
// S-second span. All satisfied reasons are recorded.
std::vector<BotVerdict> detect_bots(std::span<const LogEntry> entries,
                                    const CurationConfig &config);

std::vector<LogEntry> strip_hosts(std::span<const LogEntry> entries,
                                  std::span<const BotVerdict> verdicts);

struct ClassifyResult {
    std::vector<AccessType> types;  // parallel to the input entries
    // (index of the 303 hit, index of the paired 200 hit)
    std::vector<std::pair<std::size_t, std::size_t>> semantic_pairs;
};

// Pairs 303 hits with their representation fetch (both become Semantic);
// unpaired hits fall through to Sparql / Search / PlainHtml by path
// prefix. Entries must be time-ordered within each host.
ClassifyResult classify_access(std::span<const LogEntry> entries, const CurationConfig &config);

}  // namespace relmine
