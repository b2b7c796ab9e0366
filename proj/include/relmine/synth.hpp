#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "relmine/config.hpp"
#include "relmine/curation.hpp"
#include "relmine/model.hpp"

namespace relmine {

struct TrailSpec {
    std::vector<ResourceKey> nodes;
    unsigned repetitions = 1;
};

// Deterministic corpus plan: same seed + scenario -> byte-identical
// lines. The generator keeps its own tallies while emitting, on a code
// path separate from the analysis modules, so its ground truth can serve
// as an independent oracle.
struct Scenario {
    std::uint64_t seed = 42;
    std::string site_host = "data.semanticweb.org";
    std::vector<TimeWindow> windows;

    ResourceKey event_resource = "/conference/www/2009";
    std::string event_window = "during";  // label; empty = no burst
    std::string final_window;             // label of the post-event window, if any
    unsigned burst_multiplier = 10;

    unsigned background_hosts = 20;
    unsigned bot_hosts = 0;  // 0..3: user-agent, +robots.txt, +rate bots
    std::vector<TrailSpec> trails;
    unsigned semantic_pairs = 0;
    unsigned semantic_decoys = 0;
    unsigned sparql_hits = 0;
    unsigned malformed_lines = 0;

    // Bot shaping, all hits land on bot_target.
    ResourceKey bot_target = "/papers";
    unsigned ua_bot_hits = 50;
    unsigned robots_bot_hits = 50;
    unsigned rate_bot_hits = 1200;
    unsigned rate_burst_span_s = 600;
    // Thresholds the ground truth assumes when predicting RateThreshold
    // verdicts; keep in sync with the CurationConfig used downstream.
    std::uint32_t rate_limit_hits = 1000;
    std::uint32_t rate_limit_span_s = 3600;
    std::uint32_t semantic_pair_horizon_s = 10;

    static Scenario from(const KeyValueFile &kv);
    void validate() const;  // throws std::runtime_error
};

using EdgeTally = std::map<std::pair<ResourceKey, ResourceKey>, std::uint64_t>;

struct GroundTruth {
    std::map<std::string, EdgeTally> edges;       // per window label, bot-free
    std::map<std::string, ResourceKey> rank1;     // per window label
    std::map<std::string, std::uint64_t> window_entries;  // parseable lines per window
    std::map<std::int64_t, std::uint64_t> per_day;        // UTC day -> lines
    std::map<std::string, std::vector<BotReason>> bots;   // host -> expected reasons
    std::uint64_t semantic_entries = 0;  // entries the pipeline must type Semantic
    std::uint64_t total_lines = 0;       // including planted malformed lines
    std::uint64_t malformed_lines = 0;
    std::vector<std::pair<ResourceKey, std::size_t>> planted_trails;  // (first node, length)
    std::uint64_t target_hits_with_bots = 0;     // hits on bot_target, bots included
    std::uint64_t target_hits_without_bots = 0;  // same, bot hosts excluded

    std::string to_json() const;
};

struct SynthResult {
    std::vector<std::string> lines;
    GroundTruth truth;
};

SynthResult generate(const Scenario &scenario);

}  // namespace relmine
