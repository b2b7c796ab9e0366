#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "relmine/footprint.hpp"
#include "relmine/model.hpp"

namespace relmine {

struct RelevanceScore {
    ResourceKey resource;
    std::uint64_t weight_total = 0;  // incident traffic sum
    std::uint64_t fan = 0;
    std::size_t depth_max = 1;
};

// Division-scaled weight change between two windows; sharp-drop edges
// (quotient zero) and edges only present in the old window are gone.
struct DiffGraph {
    TimeWindow window_old;
    TimeWindow window_new;
    std::map<std::pair<ResourceKey, ResourceKey>, std::uint64_t> edges;  // weights >= 1
};

RelevanceScore score(const UsageGraph &graph, std::span<const Path> paths,
                     const ResourceKey &node);

// Total order: weight_total desc, fan desc, depth_max desc, key asc.
// Returns the top min(k, |nodes|) resources.
std::vector<RelevanceScore> rank(const UsageGraph &graph, std::span<const Path> paths,
                                 std::size_t k);

// Per edge of graph_new: floor(w2 / max(w1, 1)); zero-weight results are
// dropped, emphasizing new hits and penalizing unchanged ones.
DiffGraph diff(const UsageGraph &graph_old, const UsageGraph &graph_new);

// Same ranking rule over the diff edges; depth_max is fixed at 1 (paths
// are not differenced).
std::vector<RelevanceScore> rank_diff(const DiffGraph &diff_graph, std::size_t k);

// rank \t resource \t weight_total \t fan \t depth_max
std::string ranking_tsv(std::span<const RelevanceScore> ranking);

}  // namespace relmine
