#include "relmine/synth.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "relmine/calendar.hpp"

namespace relmine {

namespace {

constexpr const char *kIndex = "/index.html";
constexpr const char *kPapers = "/papers";
constexpr const char *kPerson = "/person";
constexpr const char *kIswc = "/conference/iswc/2009";

constexpr const char *kPlainUa =
    "Mozilla/5.0 (X11; Linux x86_64; rv:78.0) Gecko/20100101 Firefox/78.0";
constexpr const char *kCrawlerUa = "SuperCrawler/9.9 (+http://example.com/fetcher)";

const char *const kCountries[] = {"US", "DE", "SG", "GB", "--"};

std::string host_token(std::uint64_t id) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%08llx", static_cast<unsigned long long>(id));
    return buf;
}

struct Event {
    EpochSeconds t = 0;
    std::string host;
    std::string country;
    std::string target;
    int status = 200;
    std::uint64_t bytes = 0;
    std::string referrer;  // node path; empty = absent
    std::string ua;
};

bool exceeds_rate(std::vector<EpochSeconds> times, std::uint32_t n, std::uint32_t s) {
    std::sort(times.begin(), times.end());
    std::size_t lo = 0;
    for (std::size_t hi = 0; hi < times.size(); ++hi) {
        while (times[hi] - times[lo] >= static_cast<EpochSeconds>(s)) ++lo;
        if (hi - lo + 1 > n) return true;
    }
    return false;
}

class Generator {
  public:
    explicit Generator(const Scenario &sc) : sc_(sc), rng_(sc.seed) {}

    SynthResult run();

  private:
    EpochSeconds spread(const TimeWindow &w, std::uint64_t i, std::uint64_t n) const {
        const EpochSeconds dur = w.end - w.start;
        return w.start + static_cast<EpochSeconds>((i + 1) * static_cast<std::uint64_t>(dur) /
                                                   (n + 2));
    }

    EpochSeconds clamp(const TimeWindow &w, EpochSeconds t) const {
        return std::min(t, w.end - 1);
    }

    std::string pick_country() { return kCountries[rng_() % 5]; }
    std::uint64_t pick_bytes() { return 256 + rng_() % 4096; }

    // Emission plus bookkeeping. Edges of non-bot hosts are tallied per
    // window by construction, not re-derived from the lines.
    void emit(const TimeWindow &w, Event ev, bool bot_host, bool count_edge) {
        ev.t = clamp(w, ev.t);
        ev.country = pick_country();
        ev.bytes = pick_bytes();
        if (ev.ua.empty()) ev.ua = kPlainUa;
        host_times_[ev.host].push_back(ev.t);
        ++truth_.window_entries[w.label];
        ++truth_.per_day[utc_day_of(ev.t)];
        if (ev.target == sc_.bot_target) {
            ++truth_.target_hits_with_bots;
            if (!bot_host) ++truth_.target_hits_without_bots;
        }
        if (count_edge && !bot_host && !ev.referrer.empty() && ev.referrer != ev.target)
            ++truth_.edges[w.label][{ev.referrer, ev.target}];
        events_.push_back(std::move(ev));
    }

    void emit_background(const TimeWindow &w);
    void emit_semantic(const TimeWindow &w);
    void emit_sparql(const TimeWindow &w);
    void emit_trails(const TimeWindow &w);
    void emit_bots(const TimeWindow &w);
    void finish(SynthResult &out);

    const Scenario &sc_;
    std::mt19937_64 rng_;
    std::vector<Event> events_;
    GroundTruth truth_;
    std::map<std::string, std::vector<EpochSeconds>> host_times_;
    std::set<std::string> bot_host_names_;
};

void Generator::emit_background(const TimeWindow &w) {
    const bool is_event = w.label == sc_.event_window;
    const bool is_final = !sc_.final_window.empty() && w.label == sc_.final_window;
    for (unsigned h = 0; h < sc_.background_hosts; ++h) {
        const std::string host = host_token(0x100000 + h);
        EpochSeconds t = spread(w, h, sc_.background_hosts);
        auto hit = [&](const std::string &target, const std::string &ref) {
            emit(w, Event{t, host, "", target, 200, 0, ref, ""}, false, true);
            t += 3;
        };
        hit(kIndex, "");
        hit(kPapers, kIndex);
        hit(kPerson, kPapers);
        hit(kIswc, kIndex);
        if (is_event) {
            for (unsigned b = 0; b < sc_.burst_multiplier; ++b) {
                hit(sc_.event_resource, kIndex);
                hit(kPapers, sc_.event_resource);
            }
        } else if (is_final) {
            hit(kIndex, kPapers);
            hit(kIndex, kPapers);
            hit(kPerson, kIndex);
            if (h == 0) hit(sc_.event_resource, "");  // node only, bottom of the ranking
        } else {
            hit(sc_.event_resource, kIndex);
        }
    }
}

void Generator::emit_semantic(const TimeWindow &w) {
    const auto horizon = static_cast<EpochSeconds>(sc_.semantic_pair_horizon_s);
    for (unsigned j = 0; j < sc_.semantic_pairs; ++j) {
        const std::string host = host_token(0x200000 + j);
        const std::string name = "Topic" + std::to_string(j);
        const EpochSeconds t = std::min(spread(w, j, sc_.semantic_pairs), w.end - 4);
        emit(w, Event{t, host, "", "/resource/" + name, 303, 0, "", ""}, false, false);
        emit(w, Event{t + 2, host, "", "/data/" + name, 200, 0, "", ""}, false, false);
    }
    // Decoys: same shape, but the representation fetch arrives past the
    // pairing horizon.
    for (unsigned j = 0; j < sc_.semantic_decoys; ++j) {
        const std::string host = host_token(0x300000 + j);
        const std::string name = "Decoy" + std::to_string(j);
        EpochSeconds t = std::min(spread(w, j, sc_.semantic_decoys), w.end - horizon - 60);
        t = std::max(t, w.start);
        emit(w, Event{t, host, "", "/resource/" + name, 303, 0, "", ""}, false, false);
        emit(w, Event{t + horizon + 50, host, "", "/data/" + name, 200, 0, "", ""}, false,
             false);
    }
    truth_.semantic_entries = 2ull * sc_.semantic_pairs;
}

void Generator::emit_sparql(const TimeWindow &w) {
    for (unsigned j = 0; j < sc_.sparql_hits; ++j) {
        const std::string host = host_token(0x400000 + j % 17);
        emit(w,
             Event{spread(w, j, sc_.sparql_hits), host, "",
                   "/sparql?query=SELECT+%3Fs+WHERE+%7B%3Fs+%3Fp+%3Fo%7D", 200, 0, "", ""},
             false, false);
    }
}

void Generator::emit_trails(const TimeWindow &w) {
    std::uint64_t instance = 0, total = 0;
    for (const auto &spec : sc_.trails) total += spec.repetitions;
    for (std::size_t i = 0; i < sc_.trails.size(); ++i) {
        const auto &spec = sc_.trails[i];
        truth_.planted_trails.emplace_back(spec.nodes.front(), spec.nodes.size());
        for (unsigned r = 0; r < spec.repetitions; ++r) {
            const std::string host = host_token(0x500000 + i * 1024 + r);
            EpochSeconds t = spread(w, instance++, total);
            for (std::size_t k = 0; k < spec.nodes.size(); ++k) {
                emit(w,
                     Event{t, host, "", spec.nodes[k], 200, 0,
                           k == 0 ? std::string{} : spec.nodes[k - 1], ""},
                     false, true);
                t += 5;
            }
        }
    }
}

void Generator::emit_bots(const TimeWindow &w) {
    const unsigned kinds = std::min<unsigned>(sc_.bot_hosts, 3);
    if (kinds >= 1 && sc_.ua_bot_hits > 0) {
        const std::string host = host_token(0xb00001);
        bot_host_names_.insert(host);
        for (unsigned j = 0; j < sc_.ua_bot_hits; ++j)
            emit(w, Event{spread(w, j, sc_.ua_bot_hits), host, "", sc_.bot_target, 200, 0, "",
                          kCrawlerUa},
                 true, false);
        truth_.bots[host] = {BotReason::UserAgentPattern};
    }
    if (kinds >= 2) {
        const std::string host = host_token(0xb00002);
        bot_host_names_.insert(host);
        emit(w, Event{w.start + 5, host, "", "/robots.txt", 200, 0, "", ""}, true, false);
        for (unsigned j = 0; j < sc_.robots_bot_hits; ++j)
            emit(w, Event{spread(w, j, sc_.robots_bot_hits), host, "", sc_.bot_target, 200, 0,
                          "", ""},
                 true, false);
        truth_.bots[host] = {BotReason::RobotsTxtFetch};
    }
    if (kinds >= 3 && sc_.rate_bot_hits > 0) {
        const std::string host = host_token(0xb00003);
        bot_host_names_.insert(host);
        const EpochSeconds burst_start = w.start + 3600;
        for (unsigned j = 0; j < sc_.rate_bot_hits; ++j) {
            const EpochSeconds t =
                burst_start + static_cast<EpochSeconds>(j) * sc_.rate_burst_span_s /
                                  sc_.rate_bot_hits;
            emit(w, Event{t, host, "", sc_.bot_target, 200, 0, "", ""}, true, false);
        }
        truth_.bots[host] = {};  // reasons filled by the rate check below
    }
}

void Generator::finish(SynthResult &out) {
    // Predict RateThreshold from the planted timetable; refuse scenarios
    // where an unplanned host would trip the limit.
    for (const auto &[host, times] : host_times_) {
        const bool over = exceeds_rate(times, sc_.rate_limit_hits, sc_.rate_limit_span_s);
        if (bot_host_names_.contains(host)) {
            if (over) truth_.bots[host].push_back(BotReason::RateThreshold);
            if (truth_.bots[host].empty())
                throw std::runtime_error("bot host " + host + " would not be flagged");
        } else if (over) {
            throw std::runtime_error("scenario plants an accidental rate bot: " + host);
        }
    }
    for (auto it = truth_.bots.begin(); it != truth_.bots.end();) {
        if (it->second.empty())
            it = truth_.bots.erase(it);
        else
            ++it;
    }

    // Rank-1 per window from the tally: weight desc, fan desc, key asc.
    for (const auto &[label, tally] : truth_.edges) {
        std::map<ResourceKey, std::uint64_t> node_weight;
        std::map<ResourceKey, std::set<ResourceKey>> fan_of;
        for (const auto &[edge, wgt] : tally) {
            node_weight[edge.first] += wgt;
            node_weight[edge.second] += wgt;
            fan_of[edge.first].insert(edge.second);
        }
        const ResourceKey *best = nullptr;
        for (const auto &[node, wgt] : node_weight) {
            if (!best) {
                best = &node;
                continue;
            }
            const std::uint64_t bw = node_weight[*best];
            if (wgt > bw || (wgt == bw && fan_of[node].size() > fan_of[*best].size())) best = &node;
        }
        if (best) truth_.rank1[label] = *best;
    }

    // Stable time order; ties keep emission order so per-host sequences
    // survive.
    std::stable_sort(events_.begin(), events_.end(),
                     [](const Event &a, const Event &b) { return a.t < b.t; });

    out.lines.reserve(events_.size() + sc_.malformed_lines);
    for (const auto &ev : events_) {
        std::string line = "0.0.0.0 - - [";
        line += format_clf_timestamp(Timestamp{ev.t, 0});
        line += "] \"GET " + ev.target + " HTTP/1.1\" " + std::to_string(ev.status) + " " +
                std::to_string(ev.bytes) + " \"";
        line += ev.referrer.empty() ? std::string("-")
                                    : "http://" + sc_.site_host + ev.referrer;
        line += "\" \"" + ev.ua + "\" \"" + ev.country + "\" \"" + ev.host + "\"";
        out.lines.push_back(std::move(line));
    }
    for (unsigned j = 0; j < sc_.malformed_lines; ++j)
        out.lines.push_back("### malformed line " + std::to_string(j) + " ###");

    truth_.malformed_lines = sc_.malformed_lines;
    truth_.total_lines = out.lines.size();
    out.truth = std::move(truth_);
}

SynthResult Generator::run() {
    sc_.validate();
    for (std::size_t wi = 0; wi < sc_.windows.size(); ++wi) {
        const auto &w = sc_.windows[wi];
        emit_background(w);
        if (wi == 0) {
            emit_semantic(w);
            emit_sparql(w);
            emit_trails(w);
            emit_bots(w);
        }
    }
    SynthResult out;
    finish(out);
    return out;
}

}  // namespace

void Scenario::validate() const {
    if (windows.empty()) throw std::runtime_error("scenario needs at least one window");
    std::set<std::string> labels;
    for (const auto &w : windows) {
        if (w.label.empty()) throw std::runtime_error("scenario window without a label");
        if (w.start >= w.end) throw std::runtime_error("scenario window empty: " + w.label);
        if (!labels.insert(w.label).second)
            throw std::runtime_error("duplicate window label: " + w.label);
    }
    auto known = [&](const std::string &l) { return l.empty() || labels.contains(l); };
    if (!known(event_window)) throw std::runtime_error("unknown event_window: " + event_window);
    if (!known(final_window)) throw std::runtime_error("unknown final_window: " + final_window);
    if (burst_multiplier < 1) throw std::runtime_error("burst_multiplier must be >= 1");
    if (semantic_pair_horizon_s < 1) throw std::runtime_error("horizon must be >= 1");
    for (const auto &t : trails) {
        if (t.nodes.empty() || t.repetitions < 1)
            throw std::runtime_error("trail spec needs nodes and repetitions");
        for (const auto &n : t.nodes) {
            if (n.empty() || n[0] != '/')
                throw std::runtime_error("trail node must start with '/': " + n);
        }
    }
    if (event_resource.empty() || event_resource[0] != '/')
        throw std::runtime_error("event_resource must start with '/'");
}

Scenario Scenario::from(const KeyValueFile &kv) {
    Scenario sc;
    if (const auto v = kv.get_int("seed")) sc.seed = static_cast<std::uint64_t>(*v);
    sc.site_host = kv.get_or("site_host", sc.site_host);
    sc.windows = windows_from(kv);
    sc.event_resource = kv.get_or("event_resource", sc.event_resource);
    sc.event_window = kv.get_or("event_window", sc.event_window);
    sc.final_window = kv.get_or("final_window", sc.final_window);
    auto set_uint = [&](const char *key, unsigned &field) {
        if (const auto v = kv.get_int(key)) field = static_cast<unsigned>(*v);
    };
    set_uint("burst_multiplier", sc.burst_multiplier);
    set_uint("background_hosts", sc.background_hosts);
    set_uint("bot_hosts", sc.bot_hosts);
    set_uint("semantic_pairs", sc.semantic_pairs);
    set_uint("semantic_decoys", sc.semantic_decoys);
    set_uint("sparql_hits", sc.sparql_hits);
    set_uint("malformed_lines", sc.malformed_lines);
    set_uint("ua_bot_hits", sc.ua_bot_hits);
    set_uint("robots_bot_hits", sc.robots_bot_hits);
    set_uint("rate_bot_hits", sc.rate_bot_hits);
    set_uint("rate_burst_span", sc.rate_burst_span_s);
    sc.bot_target = kv.get_or("bot_target", sc.bot_target);
    if (const auto v = kv.get_int("rate_limit_hits"))
        sc.rate_limit_hits = static_cast<std::uint32_t>(*v);
    if (const auto v = kv.get_int("rate_limit_span"))
        sc.rate_limit_span_s = static_cast<std::uint32_t>(*v);
    if (const auto v = kv.get_int("semantic_pair_horizon"))
        sc.semantic_pair_horizon_s = static_cast<std::uint32_t>(*v);
    // trail.<i> = /a > /b > /c x 3
    for (const auto &[_, value] : kv.prefixed("trail")) {
        TrailSpec spec;
        std::string nodes_part = value;
        if (const auto x = value.rfind(" x "); x != std::string::npos) {
            spec.repetitions = static_cast<unsigned>(std::stoul(value.substr(x + 3)));
            nodes_part = value.substr(0, x);
        }
        std::size_t start = 0;
        while (start <= nodes_part.size()) {
            auto gt = nodes_part.find('>', start);
            std::string node =
                nodes_part.substr(start, gt == std::string::npos ? gt : gt - start);
            while (!node.empty() && (node.front() == ' ')) node.erase(node.begin());
            while (!node.empty() && (node.back() == ' ')) node.pop_back();
            if (!node.empty()) spec.nodes.push_back(std::move(node));
            if (gt == std::string::npos) break;
            start = gt + 1;
        }
        sc.trails.push_back(std::move(spec));
    }
    return sc;
}

SynthResult generate(const Scenario &scenario) { return Generator(scenario).run(); }

std::string GroundTruth::to_json() const {
    nlohmann::json j;
    for (const auto &[label, tally] : edges) {
        auto &arr = j["edges"][label];
        for (const auto &[edge, w] : tally)
            arr.push_back({edge.first, edge.second, w});
    }
    for (const auto &[label, node] : rank1) j["rank1"][label] = node;
    for (const auto &[label, n] : window_entries) j["window_entries"][label] = n;
    for (const auto &[day, n] : per_day) j["per_day"][std::to_string(day)] = n;
    for (const auto &[host, reasons] : bots) {
        auto &arr = j["bots"][host];
        for (const auto r : reasons) arr.push_back(bot_reason_name(r));
    }
    j["semantic_entries"] = semantic_entries;
    j["total_lines"] = total_lines;
    j["malformed_lines"] = malformed_lines;
    for (const auto &[node, len] : planted_trails)
        j["planted_trails"].push_back({node, len});
    j["target_hits_with_bots"] = target_hits_with_bots;
    j["target_hits_without_bots"] = target_hits_without_bots;
    return j.dump(2) + "\n";
}

}  // namespace relmine
