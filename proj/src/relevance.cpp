#include "relmine/relevance.hpp"

#include <algorithm>
#include <set>

namespace relmine {

namespace {

bool score_before(const RelevanceScore &a, const RelevanceScore &b) {
    if (a.weight_total != b.weight_total) return a.weight_total > b.weight_total;
    if (a.fan != b.fan) return a.fan > b.fan;
    if (a.depth_max != b.depth_max) return a.depth_max > b.depth_max;
    return a.resource < b.resource;
}

std::size_t depth_or_one(std::span<const Path> paths, const ResourceKey &node) {
    std::size_t best = 1;
    for (const auto &p : paths) {
        if (p.nodes.size() <= best) continue;
        for (const auto &n : p.nodes) {
            if (n == node) {
                best = p.nodes.size();
                break;
            }
        }
    }
    return best;
}

}  // namespace

RelevanceScore score(const UsageGraph &graph, std::span<const Path> paths,
                     const ResourceKey &node) {
    RelevanceScore s;
    s.resource = node;
    s.weight_total = weight(graph, node);  // throws on unknown node
    s.fan = fan(graph, node);
    s.depth_max = depth_or_one(paths, node);
    return s;
}

std::vector<RelevanceScore> rank(const UsageGraph &graph, std::span<const Path> paths,
                                 std::size_t k) {
    std::vector<RelevanceScore> scores;
    scores.reserve(graph.nodes.size());
    for (const auto &node : graph.nodes) scores.push_back(score(graph, paths, node));
    std::sort(scores.begin(), scores.end(), score_before);
    if (scores.size() > k) scores.resize(k);
    return scores;
}

DiffGraph diff(const UsageGraph &graph_old, const UsageGraph &graph_new) {
    DiffGraph d;
    d.window_old = graph_old.window;
    d.window_new = graph_new.window;
    for (const auto &[edge, w2] : graph_new.edges) {
        const auto it = graph_old.edges.find(edge);
        const std::uint64_t w1 = it == graph_old.edges.end() ? 0 : it->second;
        const std::uint64_t dw = w2 / std::max<std::uint64_t>(w1, 1);
        if (dw >= 1) d.edges[edge] = dw;
    }
    return d;
}

std::vector<RelevanceScore> rank_diff(const DiffGraph &diff_graph, std::size_t k) {
    std::map<ResourceKey, RelevanceScore> by_node;
    std::map<ResourceKey, std::set<ResourceKey>> out_neighbors;
    for (const auto &[edge, w] : diff_graph.edges) {
        auto &from = by_node[edge.first];
        from.resource = edge.first;
        from.weight_total += w;
        out_neighbors[edge.first].insert(edge.second);
        auto &to = by_node[edge.second];
        to.resource = edge.second;
        to.weight_total += w;
    }
    std::vector<RelevanceScore> scores;
    scores.reserve(by_node.size());
    for (auto &[node, s] : by_node) {
        s.fan = out_neighbors[node].size();
        s.depth_max = 1;
        scores.push_back(s);
    }
    std::sort(scores.begin(), scores.end(), score_before);
    if (scores.size() > k) scores.resize(k);
    return scores;
}

std::string ranking_tsv(std::span<const RelevanceScore> ranking) {
    std::string out;
    std::size_t i = 0;
    for (const auto &s : ranking) {
        out += std::to_string(++i);
        out += '\t';
        out += s.resource;
        out += '\t';
        out += std::to_string(s.weight_total);
        out += '\t';
        out += std::to_string(s.fan);
        out += '\t';
        out += std::to_string(s.depth_max);
        out += '\n';
    }
    return out;
}

}  // namespace relmine
