#include "relmine/pipeline.hpp"

#include <unordered_map>
#include <unordered_set>

namespace relmine {

PipelineResult run_pipeline(std::span<const std::string> lines, const CurationConfig &config,
                            bool keep_bots) {
    PipelineResult result;
    auto parsed = parse_stream(lines);
    result.report = std::move(parsed.report);

    const auto successful = filter_status(parsed.entries);
    if (!keep_bots) result.verdicts = detect_bots(successful, config);
    const auto surviving = strip_hosts(successful, result.verdicts);
    const auto classified = classify_access(surviving, config);
    result.semantic_pairs = classified.semantic_pairs.size();

    std::unordered_set<std::string> bot_hosts;
    for (const auto &v : result.verdicts) bot_hosts.insert(v.host_hash);
    std::unordered_map<std::uint64_t, AccessType> type_by_line;
    for (std::size_t i = 0; i < surviving.size(); ++i)
        type_by_line.emplace(surviving[i].line_no, classified.types[i]);

    result.stored.reserve(parsed.entries.size());
    for (auto &e : parsed.entries) {
        StoredEntry r;
        r.dropped = e.status < 200 || e.status > 399;
        r.bot = bot_hosts.contains(e.host_hash);
        if (const auto it = type_by_line.find(e.line_no); it != type_by_line.end())
            r.access = it->second;
        r.entry = std::move(e);
        result.stored.push_back(std::move(r));
    }
    return result;
}

}  // namespace relmine
