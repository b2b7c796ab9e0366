#include "relmine/curation.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace relmine {

namespace {

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool starts_with(std::string_view s, std::string_view prefix) {
    return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

const char *bot_reason_name(BotReason r) {
    switch (r) {
        case BotReason::UserAgentPattern: return "UserAgentPattern";
        case BotReason::RobotsTxtFetch: return "RobotsTxtFetch";
        case BotReason::RateThreshold: return "RateThreshold";
    }
    return "?";
}

std::vector<LogEntry> filter_status(std::span<const LogEntry> entries) {
    std::vector<LogEntry> out;
    out.reserve(entries.size());
    for (const auto &e : entries) {
        if (e.status >= 200 && e.status <= 399) out.push_back(e);
    }
    return out;
}

std::vector<BotVerdict> detect_bots(std::span<const LogEntry> entries,
                                    const CurationConfig &config) {
    struct HostState {
        std::vector<EpochSeconds> hit_times;
        std::vector<std::pair<BotReason, std::string>> reasons;
        bool ua_flagged = false;
        bool robots_flagged = false;
    };
    std::map<std::string, HostState> hosts;  // ordered for deterministic output

    std::vector<std::string> patterns_lower;
    patterns_lower.reserve(config.ua_patterns.size());
    for (const auto &p : config.ua_patterns) patterns_lower.push_back(to_lower(p));

    for (const auto &e : entries) {
        auto &st = hosts[e.host_hash];
        st.hit_times.push_back(e.timestamp.epoch);
        if (!st.ua_flagged) {
            const std::string ua = to_lower(e.user_agent);
            for (std::size_t i = 0; i < patterns_lower.size(); ++i) {
                if (!patterns_lower[i].empty() && ua.find(patterns_lower[i]) != std::string::npos) {
                    st.ua_flagged = true;
                    st.reasons.emplace_back(BotReason::UserAgentPattern,
                                            "user agent \"" + e.user_agent +
                                                "\" matches pattern \"" + config.ua_patterns[i] +
                                                "\"");
                    break;
                }
            }
        }
        if (!st.robots_flagged && raw_path_of(e.resource_raw) == "/robots.txt") {
            st.robots_flagged = true;
            st.reasons.emplace_back(BotReason::RobotsTxtFetch,
                                    "requested /robots.txt at line " + std::to_string(e.line_no));
        }
    }

    std::vector<BotVerdict> verdicts;
    for (auto &[host, st] : hosts) {
        // Sliding-window rate check: more than N hits inside any half-open
        // S-second span [t, t+S).
        auto &times = st.hit_times;
        std::sort(times.begin(), times.end());
        std::size_t lo = 0;
        for (std::size_t hi = 0; hi < times.size(); ++hi) {
            while (times[hi] - times[lo] >= static_cast<EpochSeconds>(config.rate_limit_span_s))
                ++lo;
            if (hi - lo + 1 > config.rate_limit_hits) {
                st.reasons.emplace_back(
                    BotReason::RateThreshold,
                    std::to_string(hi - lo + 1) + " hits within " +
                        std::to_string(config.rate_limit_span_s) + "s (limit " +
                        std::to_string(config.rate_limit_hits) + ")");
                break;
            }
        }
        if (!st.reasons.empty()) verdicts.push_back(BotVerdict{host, std::move(st.reasons)});
    }
    return verdicts;
}

std::vector<LogEntry> strip_hosts(std::span<const LogEntry> entries,
                                  std::span<const BotVerdict> verdicts) {
    std::unordered_set<std::string> flagged;
    for (const auto &v : verdicts) flagged.insert(v.host_hash);
    std::vector<LogEntry> out;
    out.reserve(entries.size());
    for (const auto &e : entries) {
        if (!flagged.contains(e.host_hash)) out.push_back(e);
    }
    return out;
}

namespace {

// Candidate plain-URI keys whose representation the given key could be.
std::vector<ResourceKey> representation_origins(const ResourceKey &key,
                                                const CurationConfig &config) {
    std::vector<ResourceKey> origins;
    for (const auto &[plain_prefix, repr_prefix] : config.representation_rewrites) {
        if (starts_with(key, repr_prefix))
            origins.push_back(plain_prefix + key.substr(repr_prefix.size()));
    }
    for (const auto &ext : config.representation_extensions) {
        if (key.size() > ext.size() && ends_with(key, ext))
            origins.push_back(key.substr(0, key.size() - ext.size()));
    }
    return origins;
}

AccessType fallthrough_type(const LogEntry &e, const CurationConfig &config) {
    const std::string_view path = raw_path_of(e.resource_raw);
    for (const auto &p : config.sparql_endpoints) {
        if (!p.empty() && starts_with(path, p)) return AccessType::Sparql;
    }
    for (const auto &p : config.search_paths) {
        if (!p.empty() && starts_with(path, p)) return AccessType::Search;
    }
    return AccessType::PlainHtml;
}

}  // namespace

ClassifyResult classify_access(std::span<const LogEntry> entries, const CurationConfig &config) {
    ClassifyResult result;
    result.types.assign(entries.size(), AccessType::PlainHtml);
    std::vector<bool> semantic(entries.size(), false);

    struct Pending {
        ResourceKey key;
        std::size_t index;
        EpochSeconds time;
    };
    std::unordered_map<std::string, std::vector<Pending>> pending_by_host;
    const auto horizon = static_cast<EpochSeconds>(config.semantic_pair_horizon_s);

    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto &e = entries[i];
        const auto norm = normalize_resource(e.resource_raw, config.site_host);
        if (e.status == 303) {
            if (!norm.external())
                pending_by_host[e.host_hash].push_back(Pending{*norm.key, i, e.timestamp.epoch});
            continue;
        }
        if (e.status != 200 || norm.external()) continue;

        auto it = pending_by_host.find(e.host_hash);
        if (it == pending_by_host.end()) continue;
        auto &pendings = it->second;
        std::erase_if(pendings,
                      [&](const Pending &p) { return e.timestamp.epoch - p.time > horizon; });
        if (pendings.empty()) continue;

        const auto origins = representation_origins(*norm.key, config);
        // Oldest matching 303 wins.
        for (auto pit = pendings.begin(); pit != pendings.end(); ++pit) {
            const bool match = std::any_of(origins.begin(), origins.end(),
                                           [&](const ResourceKey &o) { return o == pit->key; });
            if (match) {
                semantic[pit->index] = true;
                semantic[i] = true;
                result.semantic_pairs.emplace_back(pit->index, i);
                pendings.erase(pit);
                break;
            }
        }
    }

    for (std::size_t i = 0; i < entries.size(); ++i) {
        result.types[i] = semantic[i] ? AccessType::Semantic : fallthrough_type(entries[i], config);
    }
    return result;
}

}  // namespace relmine
