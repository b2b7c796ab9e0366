#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "relmine/config.hpp"
#include "relmine/event_store.hpp"
#include "relmine/footprint.hpp"
#include "relmine/io.hpp"
#include "relmine/kandinsky.hpp"
#include "relmine/pipeline.hpp"
#include "relmine/relevance.hpp"
#include "relmine/synth.hpp"

namespace {

using namespace relmine;

struct Common {
    std::string store_path;
    std::string config_path;
};

KeyValueFile load_config(const Common &c) {
    if (c.config_path.empty()) return KeyValueFile::parse_text("");
    return KeyValueFile::load(c.config_path);
}

TimeWindow resolve_window(const std::string &spec, const KeyValueFile &kv) {
    const auto defined = windows_from(kv);
    return parse_window_spec(spec, defined);
}

// Entries feeding graph construction: successful, bot-free (unless
// requested otherwise), optionally restricted to one access type.
std::vector<LogEntry> graph_entries(const Store &store, const TimeWindow &window,
                                    const std::optional<AccessType> &access, bool keep_bots) {
    QueryFilter f;
    f.access = access;
    f.include_bots = keep_bots;
    std::vector<LogEntry> out;
    for (auto &r : store.query(window, f)) out.push_back(std::move(r.entry));
    return out;
}

std::optional<AccessType> parse_access_type(const std::string &name) {
    if (name.empty()) return std::nullopt;
    if (name == "plain") return AccessType::PlainHtml;
    if (name == "semantic") return AccessType::Semantic;
    if (name == "search") return AccessType::Search;
    if (name == "sparql") return AccessType::Sparql;
    throw std::runtime_error("unknown access type: " + name +
                             " (expected plain|semantic|search|sparql)");
}

int cmd_ingest(const Common &common, const std::vector<std::string> &inputs, bool keep_bots) {
    const auto kv = load_config(common);
    const auto cfg = curation_config_from(kv);
    auto store = Store::open(common.store_path, cfg.site_host);
    for (const auto &input : inputs) {
        const auto lines = read_lines(input);
        const auto result = run_pipeline(lines, cfg, keep_bots);
        const auto summary = store.ingest(input, result.stored);
        std::cout << input << ": accepted=" << result.report.accepted
                  << " rejected=" << result.report.rejected
                  << " bots=" << result.verdicts.size()
                  << " semantic_pairs=" << result.semantic_pairs
                  << " stored=" << summary.count << "\n";
        for (const auto &[line_no, reason] : result.report.rejects)
            std::cerr << input << ":" << line_no << ": " << parse_error_name(reason) << "\n";
    }
    return 0;
}

int cmd_stats(const Common &common, const std::string &window_spec, bool as_json) {
    const auto kv = load_config(common);
    auto store = Store::open(common.store_path);
    std::optional<TimeWindow> window;
    if (!window_spec.empty()) window = resolve_window(window_spec, kv);
    const auto s = store.stats(window);
    if (as_json) {
        std::printf("{\"accessed_resources\":%llu,\"days\":%llu,\"hits\":%llu,"
                    "\"successful_hits\":%llu,\"semantic_requests\":%llu,"
                    "\"sparql_requests\":%llu,\"distinct_hosts\":%llu}\n",
                    (unsigned long long)s.accessed_resources, (unsigned long long)s.days,
                    (unsigned long long)s.hits, (unsigned long long)s.successful_hits,
                    (unsigned long long)s.semantic_requests,
                    (unsigned long long)s.sparql_requests, (unsigned long long)s.distinct_hosts);
    } else {
        std::printf("%-20s %llu\n", "accessed resources", (unsigned long long)s.accessed_resources);
        std::printf("%-20s %llu\n", "days", (unsigned long long)s.days);
        std::printf("%-20s %llu\n", "hits", (unsigned long long)s.hits);
        std::printf("%-20s %llu\n", "successful hits", (unsigned long long)s.successful_hits);
        std::printf("%-20s %llu\n", "semantic requests", (unsigned long long)s.semantic_requests);
        std::printf("%-20s %llu\n", "sparql requests", (unsigned long long)s.sparql_requests);
        std::printf("%-20s %llu\n", "distinct hosts", (unsigned long long)s.distinct_hosts);
    }
    return 0;
}

int cmd_rank(const Common &common, const std::string &window_spec, std::size_t top,
             const std::string &access_name, bool keep_bots, const std::string &out_path) {
    const auto kv = load_config(common);
    const auto cfg = curation_config_from(kv);
    auto store = Store::open(common.store_path);
    const auto window = resolve_window(window_spec, kv);
    const auto site_host = store.site_host();
    const auto entries = graph_entries(store, window, parse_access_type(access_name), keep_bots);
    const auto graph = build_site_graph(entries, window, site_host);

    std::map<std::string, std::vector<LogEntry>> by_host;
    for (const auto &e : entries) by_host[e.host_hash].push_back(e);
    std::vector<Path> paths;
    for (const auto &[host, host_entries] : by_host) {
        auto p = extract_paths(host_entries, window, site_host, cfg.session_gap_s);
        paths.insert(paths.end(), std::make_move_iterator(p.begin()),
                     std::make_move_iterator(p.end()));
    }

    const auto ranking = rank(graph, paths, top);
    const auto table = ranking_tsv(ranking);
    if (out_path.empty())
        std::cout << table;
    else
        write_text(out_path, table);
    return 0;
}

int cmd_kg(const Common &common, const std::string &window_spec, const std::string &out_path,
           const std::string &access_name, bool keep_bots) {
    const auto kv = load_config(common);
    auto store = Store::open(common.store_path);
    const auto window = resolve_window(window_spec, kv);
    const auto entries = graph_entries(store, window, parse_access_type(access_name), keep_bots);
    const auto graph = build_site_graph(entries, window, store.site_host());
    write_text(out_path, emit_dot(graph, ColorScheme::kg()));
    return 0;
}

int cmd_diffkg(const Common &common, const std::vector<std::string> &window_specs,
               const std::string &out_path) {
    const auto kv = load_config(common);
    auto store = Store::open(common.store_path);
    const auto old_window = resolve_window(window_specs.at(0), kv);
    const auto new_window = resolve_window(window_specs.at(1), kv);
    const auto old_graph = build_site_graph(
        graph_entries(store, old_window, std::nullopt, false), old_window, store.site_host());
    const auto new_graph = build_site_graph(
        graph_entries(store, new_window, std::nullopt, false), new_window, store.site_host());
    write_text(out_path, emit_dot(diff(old_graph, new_graph), ColorScheme::diff_kg()));
    return 0;
}

int cmd_synth(const std::string &scenario_path, const std::string &out_path,
              const std::string &truth_path, std::optional<long long> seed) {
    Scenario sc = scenario_path.empty() ? Scenario{}
                                        : Scenario::from(KeyValueFile::load(scenario_path));
    if (sc.windows.empty()) {
        // Minimal built-in scenario so `synth` works out of the box.
        sc.windows = {
            TimeWindow{*parse_utc_instant("2010-04-18"), *parse_utc_instant("2010-04-25"),
                       "before"},
            TimeWindow{*parse_utc_instant("2010-04-25"), *parse_utc_instant("2010-05-02"),
                       "during"}};
    }
    if (seed) sc.seed = static_cast<std::uint64_t>(*seed);
    const auto result = generate(sc);
    std::string corpus;
    for (const auto &line : result.lines) {
        corpus += line;
        corpus += '\n';
    }
    write_text(out_path, corpus);
    if (!truth_path.empty()) write_text(truth_path, result.truth.to_json());
    std::cout << "lines=" << result.truth.total_lines << " out=" << out_path << "\n";
    return 0;
}

int cmd_export(const Common &common, const std::string &window_spec,
               const std::string &out_path) {
    const auto kv = load_config(common);
    auto store = Store::open(common.store_path);
    std::optional<TimeWindow> window;
    if (!window_spec.empty()) window = resolve_window(window_spec, kv);
    const auto tsv = store.export_tsv(window);
    if (out_path.empty())
        std::cout << tsv;
    else
        write_text(out_path, tsv);
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Time-windowed relevance mining over web usage logs"};
    app.require_subcommand(1);

    Common common;
    std::vector<std::string> inputs, window_specs;
    std::string window_spec, access_name, out_path, scenario_path, truth_path;
    std::size_t top = 10;
    bool keep_bots = false, as_json = false;
    std::optional<long long> seed;

    auto add_common = [&](CLI::App *cmd, bool need_store = true) {
        auto *opt = cmd->add_option("--store", common.store_path, "store directory");
        if (need_store) opt->required();
        cmd->add_option("--config", common.config_path, "configuration file");
    };

    auto *ingest = app.add_subcommand("ingest", "parse, curate and store log files");
    add_common(ingest);
    ingest->add_option("inputs", inputs, "log files (plain or .gz)")->required();
    ingest->add_flag("--keep-bots", keep_bots, "skip bot detection");

    auto *stats = app.add_subcommand("stats", "hit statistics");
    add_common(stats);
    stats->add_option("--window", window_spec, "LABEL or START..END");
    stats->add_flag("--json", as_json, "machine-readable output");

    auto *rank_cmd = app.add_subcommand("rank", "relevance ranking for a window");
    add_common(rank_cmd);
    rank_cmd->add_option("--window", window_spec)->required();
    rank_cmd->add_option("--top", top, "number of resources");
    rank_cmd->add_option("--access-type", access_name, "plain|semantic|search|sparql");
    rank_cmd->add_flag("--keep-bots", keep_bots);
    rank_cmd->add_option("--out", out_path, "write TSV here instead of stdout");

    auto *kg = app.add_subcommand("kg", "emit a Kandinsky graph as DOT");
    add_common(kg);
    kg->add_option("--window", window_spec)->required();
    kg->add_option("--out", out_path)->required();
    kg->add_option("--access-type", access_name);
    kg->add_flag("--keep-bots", keep_bots);

    auto *diffkg = app.add_subcommand("diffkg", "emit a DIFF Kandinsky graph as DOT");
    add_common(diffkg);
    diffkg->add_option("--window", window_specs, "old window, then new window")
        ->expected(2)
        ->required();
    diffkg->add_option("--out", out_path)->required();

    auto *synth = app.add_subcommand("synth", "generate a synthetic corpus");
    synth->add_option("--scenario", scenario_path, "scenario configuration file");
    synth->add_option("--out", out_path, "corpus output path")->required();
    synth->add_option("--truth", truth_path, "ground-truth JSON output path");
    synth->add_option("--seed", seed, "override the scenario seed");

    auto *exp = app.add_subcommand("export", "dump store records as TSV");
    add_common(exp);
    exp->add_option("--window", window_spec);
    exp->add_option("--out", out_path);

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) return cmd_ingest(common, inputs, keep_bots);
        if (stats->parsed()) return cmd_stats(common, window_spec, as_json);
        if (rank_cmd->parsed())
            return cmd_rank(common, window_spec, top, access_name, keep_bots, out_path);
        if (kg->parsed()) return cmd_kg(common, window_spec, out_path, access_name, keep_bots);
        if (diffkg->parsed()) return cmd_diffkg(common, window_specs, out_path);
        if (synth->parsed()) return cmd_synth(scenario_path, out_path, truth_path, seed);
        if (exp->parsed()) return cmd_export(common, window_spec, out_path);
    } catch (const std::exception &ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
