#include "relmine/footprint.hpp"

#include <map>
#include <stdexcept>

namespace relmine {

UsageGraph build_wtf(std::span<const LogEntry> entries, const TimeWindow &window,
                     const std::string &site_host) {
    UsageGraph g;
    g.window = window;
    g.scope = UsageGraph::Scope::OneHost;
    if (!entries.empty()) g.host_hash = entries.front().host_hash;

    for (const auto &e : entries) {
        if (!window.contains(e.timestamp.epoch)) continue;
        const auto target = normalize_resource(e.resource_raw, site_host);
        if (target.external()) continue;
        g.nodes.insert(*target.key);
        if (!e.referrer) continue;
        const auto ref = normalize_resource(*e.referrer, site_host);
        if (ref.external()) continue;
        if (*ref.key == *target.key) continue;  // self-loop
        g.nodes.insert(*ref.key);
        ++g.edges[{*ref.key, *target.key}];
    }
    return g;
}

void merge_graph(UsageGraph &into, const UsageGraph &from) {
    into.nodes.insert(from.nodes.begin(), from.nodes.end());
    for (const auto &[edge, w] : from.edges) into.edges[edge] += w;
}

UsageGraph build_site_graph(std::span<const LogEntry> entries, const TimeWindow &window,
                            const std::string &site_host) {
    std::map<std::string, std::vector<LogEntry>> by_host;
    for (const auto &e : entries) by_host[e.host_hash].push_back(e);

    UsageGraph site;
    site.window = window;
    site.scope = UsageGraph::Scope::SiteWide;
    for (const auto &[host, host_entries] : by_host)
        merge_graph(site, build_wtf(host_entries, window, site_host));
    return site;
}

std::uint64_t fan(const UsageGraph &graph, const ResourceKey &node) {
    if (!graph.nodes.contains(node)) throw std::invalid_argument("unknown node: " + node);
    std::uint64_t n = 0;
    // edges are ordered by (from, to); the out-edges of node are contiguous.
    for (auto it = graph.edges.lower_bound({node, ""}); it != graph.edges.end(); ++it) {
        if (it->first.first != node) break;
        ++n;
    }
    return n;
}

std::uint64_t weight(const UsageGraph &graph, const ResourceKey &node) {
    if (!graph.nodes.contains(node)) throw std::invalid_argument("unknown node: " + node);
    std::uint64_t sum = 0;
    for (const auto &[edge, w] : graph.edges) {
        if (edge.first == node) sum += w;
        if (edge.second == node) sum += w;
    }
    return sum;
}

std::vector<Path> extract_paths(std::span<const LogEntry> entries, const TimeWindow &window,
                                const std::string &site_host, std::uint32_t session_gap_s) {
    struct Open {
        std::size_t path_index;
        ResourceKey tip;
        EpochSeconds last_activity;
    };
    std::vector<Path> paths;
    std::vector<Open> open;
    const auto gap = static_cast<EpochSeconds>(session_gap_s);

    for (const auto &e : entries) {
        if (!window.contains(e.timestamp.epoch)) continue;
        const auto target = normalize_resource(e.resource_raw, site_host);
        if (target.external()) continue;
        const EpochSeconds t = e.timestamp.epoch;

        std::optional<ResourceKey> ref;
        if (e.referrer) {
            const auto r = normalize_resource(*e.referrer, site_host);
            if (!r.external()) ref = *r.key;
        }

        Open *chosen = nullptr;
        if (ref) {
            // Most recently active matching tip wins.
            for (auto &o : open) {
                if (o.tip == *ref && t - o.last_activity <= gap &&
                    (!chosen || o.last_activity > chosen->last_activity))
                    chosen = &o;
            }
        }
        if (chosen) {
            auto &p = paths[chosen->path_index];
            p.nodes.push_back(*target.key);
            p.end = t;
            chosen->tip = *target.key;
            chosen->last_activity = t;
        } else {
            Path p;
            // An internal referrer we never saw as a tip still starts
            // the chain: the hit arrived via that page.
            if (ref && *ref != *target.key) p.nodes.push_back(*ref);
            p.nodes.push_back(*target.key);
            p.host_hash = e.host_hash;
            p.start = p.end = t;
            open.push_back(Open{paths.size(), *target.key, t});
            paths.push_back(std::move(p));
        }
    }
    return paths;
}

std::size_t max_depth(std::span<const Path> paths, const ResourceKey &node) {
    std::size_t best = 0;
    for (const auto &p : paths) {
        if (p.nodes.size() <= best) continue;
        for (const auto &n : p.nodes) {
            if (n == node) {
                best = p.nodes.size();
                break;
            }
        }
    }
    if (best == 0) throw std::invalid_argument("node in no path: " + node);
    return best;
}

std::string edges_tsv(const UsageGraph &graph) {
    std::string out;
    for (const auto &[edge, w] : graph.edges) {
        out += edge.first;
        out += '\t';
        out += edge.second;
        out += '\t';
        out += std::to_string(w);
        out += '\n';
    }
    return out;
}

}  // namespace relmine
