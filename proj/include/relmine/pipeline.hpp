#pragma once

#include <span>
#include <string>
#include <vector>

#include "relmine/clf_parser.hpp"
#include "relmine/curation.hpp"
#include "relmine/event_store.hpp"

namespace relmine {

struct PipelineResult {
    std::vector<StoredEntry> stored;  // every parsed entry, tagged
    ParseReport report;
    std::vector<BotVerdict> verdicts;
    std::size_t semantic_pairs = 0;
};

// parse -> status filter -> bot detection -> classification, producing
// store-ready records. With keep_bots, bot detection is skipped.
PipelineResult run_pipeline(std::span<const std::string> lines, const CurationConfig &config,
                            bool keep_bots = false);

}  // namespace relmine
