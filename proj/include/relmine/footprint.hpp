#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "relmine/model.hpp"

namespace relmine {

// Weighted directed graph of referrer->resource transitions inside one
// time window. One host's graph is a Web Travel Footprint; the merge
// over all hosts is the Kandinsky source graph.
struct UsageGraph {
    enum class Scope { OneHost, SiteWide };

    TimeWindow window;
    Scope scope = Scope::SiteWide;
    std::string host_hash;  // set when scope is OneHost
    std::set<ResourceKey> nodes;
    std::map<std::pair<ResourceKey, ResourceKey>, std::uint64_t> edges;

    std::uint64_t total_edge_weight() const {
        std::uint64_t sum = 0;
        for (const auto &[_, w] : edges) sum += w;
        return sum;
    }
};

// One chained traversal of a single host: consecutive nodes are observed
// referrer->resource transitions in time order within one session.
struct Path {
    std::vector<ResourceKey> nodes;
    std::string host_hash;
    EpochSeconds start = 0;
    EpochSeconds end = 0;

    std::size_t depth() const { return nodes.size(); }
};

// Entries must all belong to one host, lie in the window, and be
// time-ordered. Self-loop transitions are skipped; external or absent
// referrers contribute the target node only.
UsageGraph build_wtf(std::span<const LogEntry> entries, const TimeWindow &window,
                     const std::string &site_host);

// Edge-weight-wise sum of every host's WTF within the window.
UsageGraph build_site_graph(std::span<const LogEntry> entries, const TimeWindow &window,
                            const std::string &site_host);

// In-place merge used for site-graph aggregation; commutative and
// associative on edge weights.
void merge_graph(UsageGraph &into, const UsageGraph &from);

// Distinct out-neighbors of node. Throws std::invalid_argument for an
// unknown node.
std::uint64_t fan(const UsageGraph &graph, const ResourceKey &node);

// Sum of the weights of all edges incident to node, in plus out.
std::uint64_t weight(const UsageGraph &graph, const ResourceKey &node);

// Greedy session chaining: an entry extends the path whose tip equals
// its internal referrer and whose last activity is within session_gap,
// else it starts a new path.
std::vector<Path> extract_paths(std::span<const LogEntry> entries, const TimeWindow &window,
                                const std::string &site_host, std::uint32_t session_gap_s);

// Length of the longest path containing node; throws if the node is in
// no path.
std::size_t max_depth(std::span<const Path> paths, const ResourceKey &node);

// (from, to, weight) edge list, one edge per line, tab-separated.
std::string edges_tsv(const UsageGraph &graph);

}  // namespace relmine
