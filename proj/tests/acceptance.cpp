// Acceptance suite: one PASS/FAIL line per criterion, exit 0 iff all pass.
// C9 needs the real USEWOD 2011 logs and is skipped unless
// RELMINE_USEWOD_DIR points at them.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <vector>

#include "relmine/clf_parser.hpp"
#include "relmine/config.hpp"
#include "relmine/curation.hpp"
#include "relmine/event_store.hpp"
#include "relmine/footprint.hpp"
#include "relmine/io.hpp"
#include "relmine/kandinsky.hpp"
#include "relmine/pipeline.hpp"
#include "relmine/relevance.hpp"
#include "relmine/synth.hpp"

using namespace relmine;

namespace {

struct Failure {
    std::string what;
};

void require(bool ok, const std::string &what) {
    if (!ok) throw Failure{what};
}

// Shared 4-window case-study corpus, ~100k lines, no bots, no malformed
// lines. Window 1 ("before") through 3 ("after") carry background
// traffic only; everything planted lands in window 0.
Scenario case_study() {
    Scenario sc;
    constexpr EpochSeconds kWeek = 7 * 86400;
    sc.windows = {{0 * kWeek, 1 * kWeek, "before-submission"},
                  {1 * kWeek, 2 * kWeek, "before"},
                  {2 * kWeek, 3 * kWeek, "during"},
                  {3 * kWeek, 4 * kWeek, "after"}};
    sc.event_window = "during";
    sc.final_window = "after";
    sc.background_hosts = 2400;
    sc.semantic_pairs = 500;
    sc.semantic_decoys = 500;
    sc.sparql_hits = 100;
    return sc;
}

CurationConfig config_for(const Scenario &sc) {
    CurationConfig cfg;
    cfg.site_host = sc.site_host;
    cfg.rate_limit_hits = sc.rate_limit_hits;
    cfg.rate_limit_span_s = sc.rate_limit_span_s;
    cfg.semantic_pair_horizon_s = sc.semantic_pair_horizon_s;
    return cfg;
}

const SynthResult &case_corpus() {
    static const SynthResult corpus = generate(case_study());
    return corpus;
}

std::vector<LogEntry> clean_entries(const PipelineResult &res) {
    std::vector<LogEntry> out;
    for (const auto &s : res.stored)
        if (!s.bot && !s.dropped) out.push_back(s.entry);
    return out;
}

// ---- C1 ----------------------------------------------------------------

void c1_parser_totality() {
    const auto &corpus = case_corpus();
    require(corpus.lines.size() >= 100000, "corpus under 100k lines");

    const auto t0 = std::chrono::steady_clock::now();
    const auto res = parse_stream(corpus.lines);
    require(res.report.rejected == 0, "synthetic lines were rejected");
    require(res.entries.size() == corpus.lines.size(), "entry count mismatch");
    for (std::size_t i = 0; i < res.entries.size(); ++i) {
        if (serialize_entry(res.entries[i]) != corpus.lines[i])
            throw Failure{"round trip diverged at line " + std::to_string(i + 1)};
    }

    // 1000 mutations that each break the grammar; every one must come
    // back as a typed error, never as a crash or an accepted entry.
    std::mt19937_64 rng(99);
    for (int i = 0; i < 1000; ++i) {
        std::string line = corpus.lines[rng() % corpus.lines.size()];
        switch (rng() % 5) {
            case 0: line.resize(rng() % 20); break;                    // truncate the head
            case 1: line[line.find('[')] = ' '; break;                 // break the timestamp
            case 2: line.insert(rng() % line.size(), 1, '\xC0'); break;  // invalid UTF-8
            case 3: {                                                  // non-numeric status
                const auto pos = line.find("\" ", line.find("HTTP/1.1")) + 2;
                line[pos] = 'x';
                break;
            }
            default: line = "### noise " + std::to_string(rng()) + " ###"; break;
        }
        const auto r = parse_line(line, 1);
        require(std::holds_alternative<ParseError>(r), "mutated line was accepted: " + line);
    }

    const auto secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    require(secs < 10.0, "ran " + std::to_string(secs) + " s, budget 10 s");
}

// ---- C2 ----------------------------------------------------------------

void c2_color_boundaries() {
    const auto kg = ColorScheme::kg();
    const std::vector<std::pair<std::uint64_t, std::string>> kg_cases = {
        {1, "gray"},  {2, "gray"},   {3, "black"}, {4, "black"}, {5, "indigo"},
        {10, "indigo"}, {11, "green"}, {20, "green"}, {21, "red"}};
    for (const auto &[w, want] : kg_cases)
        require(color_for_weight(w, kg) == want,
                "KG weight " + std::to_string(w) + " expected " + want);

    const auto dk = ColorScheme::diff_kg();
    const std::vector<std::pair<std::uint64_t, std::string>> dk_cases = {
        {1, "gray"}, {2, "black"}, {3, "indigo"}, {5, "indigo"},
        {6, "green"}, {10, "green"}, {11, "red"}};
    for (const auto &[w, want] : dk_cases)
        require(color_for_weight(w, dk) == want,
                "DiffKG weight " + std::to_string(w) + " expected " + want);
}

// ---- C3 ----------------------------------------------------------------

UsageGraph random_graph(std::mt19937_64 &rng, std::size_t max_nodes) {
    UsageGraph g;
    g.window = {0, 1000, "w"};
    const std::size_t n = 1 + rng() % max_nodes;
    std::vector<ResourceKey> keys;
    for (std::size_t i = 0; i < n; ++i) {
        keys.push_back("/n" + std::to_string(i));
        g.nodes.insert(keys.back());
    }
    const std::size_t m = rng() % (3 * n);
    for (std::size_t i = 0; i < m; ++i) {
        const auto &a = keys[rng() % n];
        const auto &b = keys[rng() % n];
        if (a != b) g.edges[{a, b}] = 1 + rng() % 30;
    }
    return g;
}

std::vector<Path> random_paths(std::mt19937_64 &rng, const UsageGraph &g) {
    std::vector<ResourceKey> keys(g.nodes.begin(), g.nodes.end());
    std::vector<Path> paths;
    const std::size_t count = rng() % 6;
    for (std::size_t p = 0; p < count; ++p) {
        Path path;
        path.host_hash = "h";
        const std::size_t len = 1 + rng() % 8;
        for (std::size_t i = 0; i < len; ++i) path.nodes.push_back(keys[rng() % keys.size()]);
        paths.push_back(std::move(path));
    }
    return paths;
}

void c3_metric_oracles() {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto g = random_graph(rng, 50);
        const auto paths = random_paths(rng, g);
        for (const auto &node : g.nodes) {
            std::set<ResourceKey> out_neighbors;
            std::uint64_t incident = 0;
            for (const auto &[edge, w] : g.edges) {
                if (edge.first == node) {
                    out_neighbors.insert(edge.second);
                    incident += w;
                }
                if (edge.second == node) incident += w;
            }
            std::size_t depth = 1;
            for (const auto &p : paths)
                for (const auto &n : p.nodes)
                    if (n == node) depth = std::max(depth, p.nodes.size());

            require(fan(g, node) == out_neighbors.size(), "fan mismatch at " + node);
            require(weight(g, node) == incident, "weight mismatch at " + node);
            const auto s = score(g, paths, node);
            require(s.weight_total == incident && s.fan == out_neighbors.size() &&
                        s.depth_max == depth,
                    "score mismatch at " + node);
        }
    }
}

// ---- C4 ----------------------------------------------------------------

void c4_conservation() {
    const auto &corpus = case_corpus();
    const auto sc = case_study();
    const auto res = run_pipeline(corpus.lines, config_for(sc));
    const auto clean = clean_entries(res);

    const TimeWindow all{sc.windows.front().start, sc.windows.back().end, "all"};
    const auto whole = build_site_graph(clean, all, sc.site_host);

    // Independent transition count straight off the entries.
    std::uint64_t transitions = 0;
    for (const auto &e : clean) {
        if (!e.referrer) continue;
        const auto from = normalize_resource(*e.referrer, sc.site_host);
        const auto to = normalize_resource(e.resource_raw, sc.site_host);
        if (from.external() || to.external() || *from.key == *to.key) continue;
        ++transitions;
    }
    require(whole.total_edge_weight() == transitions,
            "edge weight " + std::to_string(whole.total_edge_weight()) + " vs " +
                std::to_string(transitions) + " transitions");

    // Disjoint windows sum to the union window, and each window equals
    // the generator's independent tally.
    UsageGraph merged;
    merged.window = all;
    for (const auto &w : sc.windows) {
        const auto g = build_site_graph(clean, w, sc.site_host);
        require(g.edges == corpus.truth.edges.at(w.label), "window tally mismatch: " + w.label);
        merge_graph(merged, g);
    }
    require(merged.edges == whole.edges && merged.nodes == whole.nodes,
            "window graphs do not sum to the union graph");
}

// ---- C5 ----------------------------------------------------------------

void c5_diff_properties() {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = random_graph(rng, 20);
        const auto self = diff(g, g);
        require(self.edges.size() == g.edges.size(), "diff(G,G) lost or gained edges");
        for (const auto &[_, w] : self.edges)
            require(w == 1, "diff(G,G) edge weight != 1");

        const auto old_g = random_graph(rng, 12);
        const auto new_g = random_graph(rng, 12);
        const auto d = diff(old_g, new_g);
        for (const auto &[edge, w2] : new_g.edges) {
            const auto it = old_g.edges.find(edge);
            const std::uint64_t w1 = it == old_g.edges.end() ? 0 : it->second;
            const std::uint64_t q = w2 / std::max<std::uint64_t>(w1, 1);
            if (q == 0)
                require(!d.edges.contains(edge), "sharp-drop edge survived");
            else
                require(d.edges.contains(edge) && d.edges.at(edge) == q,
                        "diff quotient mismatch");
        }
        for (const auto &[edge, _] : d.edges)
            require(new_g.edges.contains(edge), "diff edge not present in the new window");
    }
}

// ---- C6 ----------------------------------------------------------------

void c6_planted_event() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto &corpus = case_corpus();
    const auto sc = case_study();
    const auto res = run_pipeline(corpus.lines, config_for(sc));
    const auto clean = clean_entries(res);

    const auto window_of = [&](const std::string &label) {
        for (const auto &w : sc.windows)
            if (w.label == label) return w;
        throw Failure{"unknown window " + label};
    };

    const auto during = build_site_graph(clean, window_of("during"), sc.site_host);
    const auto during_rank = rank(during, {}, 1);
    require(!during_rank.empty() && during_rank[0].resource == sc.event_resource,
            "event resource is not rank 1 during the event");

    const auto after = build_site_graph(clean, window_of("after"), sc.site_host);
    const auto after_rank = rank(after, {}, after.nodes.size());
    std::size_t position = 0;
    for (std::size_t i = 0; i < after_rank.size(); ++i)
        if (after_rank[i].resource == sc.event_resource) position = i + 1;
    require(position > 3, "event resource still in the top 3 after the event (rank " +
                              std::to_string(position) + ")");

    const auto before = build_site_graph(clean, window_of("before"), sc.site_host);
    const auto d = diff(before, during);
    const auto d_rank = rank_diff(d, 1);
    require(!d_rank.empty() && d_rank[0].resource == sc.event_resource,
            "event resource is not rank 1 in the before->during diff");

    // Same seed, same answers.
    require(generate(case_study()).lines == corpus.lines, "corpus not reproducible");

    const auto secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    require(secs < 30.0, "ran " + std::to_string(secs) + " s, budget 30 s");
}

// ---- C7 ----------------------------------------------------------------

void c7_bot_impact() {
    Scenario sc;
    sc.windows = {{0, 86400, "w"}};
    sc.event_window = "";
    sc.background_hosts = 100;  // 100 clean hits on the target
    sc.bot_hosts = 3;
    sc.ua_bot_hits = 250;
    sc.robots_bot_hits = 250;
    sc.rate_bot_hits = 400;  // 400 hits inside rate_burst_span seconds
    sc.rate_burst_span_s = 600;
    sc.rate_limit_hits = 300;
    sc.rate_limit_span_s = 3600;

    const auto corpus = generate(sc);
    require(corpus.truth.target_hits_with_bots == 1000 &&
                corpus.truth.target_hits_without_bots == 100,
            "scenario did not plant the 90/10 split");

    const auto res = run_pipeline(corpus.lines, config_for(sc));

    std::uint64_t pre = 0, post = 0;
    for (const auto &s : res.stored) {
        const auto n = normalize_resource(s.entry.resource_raw, sc.site_host);
        if (n.external() || *n.key != sc.bot_target) continue;
        ++pre;
        if (!s.bot) ++post;
    }
    require(pre == corpus.truth.target_hits_with_bots, "pre-filter count off");
    require(post == corpus.truth.target_hits_without_bots, "post-filter count off");
    require(post * 10 == pre, "post-filter count is not exactly 10% of pre-filter");

    require(res.verdicts.size() == corpus.truth.bots.size(), "bot host count mismatch");
    for (const auto &v : res.verdicts) {
        const auto it = corpus.truth.bots.find(v.host_hash);
        require(it != corpus.truth.bots.end(), "unplanned host flagged: " + v.host_hash);
        std::set<BotReason> got;
        for (const auto &[r, _] : v.reasons) got.insert(r);
        require(got == std::set<BotReason>(it->second.begin(), it->second.end()),
                "wrong reason set for " + v.host_hash);
    }
}

// ---- C8 ----------------------------------------------------------------

void c8_semantic_pairing() {
    const auto &corpus = case_corpus();
    const auto sc = case_study();
    const auto cfg = config_for(sc);

    const auto parsed = parse_stream(corpus.lines);
    const auto kept = filter_status(parsed.entries);
    const auto classified = classify_access(kept, cfg);

    std::uint64_t semantic = 0;
    for (const auto &t : classified.types)
        if (t == AccessType::Semantic) ++semantic;
    require(semantic == 1000, "expected exactly 1000 Semantic entries, got " +
                                  std::to_string(semantic));
    require(classified.semantic_pairs.size() == 500, "expected exactly 500 pairs");

    std::set<std::size_t> used;
    for (const auto &[a, b] : classified.semantic_pairs) {
        require(used.insert(a).second && used.insert(b).second, "pairing is not injective");
        require(kept[a].status == 303, "pair does not start with a 303");
        require(kept[b].status == 200, "pair does not end with a 200");
        require(kept[a].host_hash == kept[b].host_hash, "pair crosses hosts");
    }
}

// ---- C9 (optional, dataset-gated) --------------------------------------

struct TableRow {
    const char *subdir;
    std::uint64_t hits, successful, semantic, sparql;
};

bool c9_available() { return std::getenv("RELMINE_USEWOD_DIR") != nullptr; }

void c9_usewod_table() {
    const std::filesystem::path root = std::getenv("RELMINE_USEWOD_DIR");
    const TableRow rows[] = {
        {"swdf", 8092552, 7098705, 384163, 1557893},
        {"dbpedia", 19770157, 18862220, 55640, 4500604},
    };
    for (const auto &row : rows) {
        std::vector<std::string> lines;
        std::vector<std::filesystem::path> files;
        for (const auto &e : std::filesystem::recursive_directory_iterator(root / row.subdir))
            if (e.is_regular_file()) files.push_back(e.path());
        std::sort(files.begin(), files.end());
        require(!files.empty(), std::string("no log files under ") + row.subdir);
        for (const auto &f : files) {
            auto part = read_lines(f.string());
            lines.insert(lines.end(), std::make_move_iterator(part.begin()),
                         std::make_move_iterator(part.end()));
        }
        CurationConfig cfg;
        if (std::string_view(row.subdir) == "dbpedia") cfg.site_host = "dbpedia.org";
        const auto res = run_pipeline(lines, cfg, /*keep_bots=*/true);

        const auto tmp = std::filesystem::temp_directory_path() /
                         ("relmine_usewod_" + std::string(row.subdir));
        std::filesystem::remove_all(tmp);
        auto store = Store::open(tmp, cfg.site_host);
        store.ingest("usewod", res.stored);
        const auto s = store.stats();
        std::filesystem::remove_all(tmp);

        const auto check = [&](const char *what, std::uint64_t got, std::uint64_t want) {
            require(got == want, std::string(row.subdir) + " " + what + ": got " +
                                     std::to_string(got) + ", want " + std::to_string(want));
        };
        check("hits", s.hits, row.hits);
        check("successful", s.successful_hits, row.successful);
        check("semantic", s.semantic_requests, row.semantic);
        check("sparql", s.sparql_requests, row.sparql);
    }
}

// ---- C10 ---------------------------------------------------------------

void c10_dot_determinism() {
    const auto &corpus = case_corpus();
    const auto sc = case_study();
    const auto res = run_pipeline(corpus.lines, config_for(sc));
    const auto clean = clean_entries(res);
    const auto during = build_site_graph(clean, sc.windows[2], sc.site_host);

    std::mt19937_64 rng(71);
    std::vector<UsageGraph> fixtures = {during};
    for (int i = 0; i < 5; ++i) fixtures.push_back(random_graph(rng, 30));

    for (const auto &g : fixtures) {
        const auto golden = emit_dot(g, ColorScheme::kg());
        for (int run = 1; run < 10; ++run)
            require(emit_dot(g, ColorScheme::kg()) == golden, "repeated emission diverged");

        for (unsigned threads : {2u, 4u, 8u}) {
            std::vector<std::string> outputs(threads);
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < threads; ++t)
                pool.emplace_back(
                    [&, t] { outputs[t] = emit_dot(g, ColorScheme::kg()); });
            for (auto &th : pool) th.join();
            for (const auto &out : outputs)
                require(out == golden, "emission diverged across threads");
        }

        const auto d = diff(g, g);
        const auto diff_golden = emit_dot(d, ColorScheme::diff_kg());
        require(emit_dot(d, ColorScheme::diff_kg()) == diff_golden,
                "diff emission diverged");
    }
}

int run_all() {
    struct Criterion {
        const char *label;
        std::function<void()> body;
        bool skipped = false;
    };
    std::vector<Criterion> criteria = {
        {"C1 parser totality and round-trip", c1_parser_totality},
        {"C2 color coding exactness", c2_color_boundaries},
        {"C3 metric oracle equivalence", c3_metric_oracles},
        {"C4 conservation and additivity", c4_conservation},
        {"C5 diff properties", c5_diff_properties},
        {"C6 planted-event case study", c6_planted_event},
        {"C7 bot-filter impact", c7_bot_impact},
        {"C8 semantic pairing", c8_semantic_pairing},
        {"C9 usage statistics on the real dataset", c9_usewod_table, !c9_available()},
        {"C10 DOT determinism", c10_dot_determinism},
    };

    int failures = 0;
    for (auto &c : criteria) {
        if (c.skipped) {
            std::cout << "SKIP " << c.label << " (set RELMINE_USEWOD_DIR to enable)\n";
            continue;
        }
        try {
            c.body();
            std::cout << "PASS " << c.label << "\n";
        } catch (const Failure &f) {
            std::cout << "FAIL " << c.label << ": " << f.what << "\n";
            ++failures;
        } catch (const std::exception &e) {
            std::cout << "FAIL " << c.label << ": unexpected error: " << e.what() << "\n";
            ++failures;
        }
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main() { return run_all(); }
