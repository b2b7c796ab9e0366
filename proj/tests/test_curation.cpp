#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "relmine/curation.hpp"
#include "test_util.hpp"

using namespace relmine;
using relmine::test::make_entry;

namespace {

CurationConfig default_config() {
    CurationConfig cfg;
    cfg.site_host = "data.semanticweb.org";
    return cfg;
}

// O(n^2) reference for the sliding-window rate rule.
bool brute_force_rate(const std::vector<EpochSeconds> &times, std::uint32_t n, std::uint32_t s) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        std::uint32_t count = 0;
        for (std::size_t j = 0; j < times.size(); ++j) {
            if (times[j] >= times[i] && times[j] < times[i] + static_cast<EpochSeconds>(s))
                ++count;
        }
        if (count > n) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("filter_status keeps exactly [200,399] and is idempotent") {
    std::vector<LogEntry> entries = {
        make_entry("h1", 0, "/a", 200), make_entry("h1", 1, "/b", 303),
        make_entry("h1", 2, "/c", 404), make_entry("h1", 3, "/d", 500),
        make_entry("h1", 4, "/e", 301), make_entry("h1", 5, "/f", 199)};
    const auto kept = filter_status(entries);
    REQUIRE(kept.size() == 3);
    CHECK(kept[0].resource_raw == "/a");
    CHECK(kept[1].resource_raw == "/b");
    CHECK(kept[2].resource_raw == "/e");
    CHECK(filter_status(kept) == kept);
}

TEST_CASE("user agent pattern flags a host") {
    const auto cfg = default_config();
    std::vector<LogEntry> entries = {
        make_entry("bot1", 0, "/a", 200, std::nullopt, "Googlebot/2.1"),
        make_entry("human", 1, "/a", 200, std::nullopt, "Mozilla/5.0")};
    const auto verdicts = detect_bots(entries, cfg);
    REQUIRE(verdicts.size() == 1);
    CHECK(verdicts[0].host_hash == "bot1");
    CHECK(verdicts[0].has(BotReason::UserAgentPattern));
    CHECK(!verdicts[0].has(BotReason::RobotsTxtFetch));
}

TEST_CASE("robots.txt fetch flags a host") {
    const auto cfg = default_config();
    std::vector<LogEntry> entries = {make_entry("h1", 0, "/robots.txt", 200),
                                     make_entry("h1", 1, "/robots.txt?x=1", 200),
                                     make_entry("h2", 2, "/robots.txt.html", 200)};
    const auto verdicts = detect_bots(entries, cfg);
    REQUIRE(verdicts.size() == 1);
    CHECK(verdicts[0].host_hash == "h1");
    CHECK(verdicts[0].has(BotReason::RobotsTxtFetch));
}

TEST_CASE("5000 hits in 10 minutes trips the default rate threshold") {
    const auto cfg = default_config();
    std::vector<LogEntry> entries;
    for (int i = 0; i < 5000; ++i)
        entries.push_back(make_entry("burst", i * 600 / 5000, "/a", 200));
    const auto verdicts = detect_bots(entries, cfg);
    REQUIRE(verdicts.size() == 1);
    CHECK(verdicts[0].has(BotReason::RateThreshold));
    CHECK(verdicts[0].reasons.size() == 1);
}

TEST_CASE("rate detection matches the brute-force oracle") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        CurationConfig cfg = default_config();
        cfg.rate_limit_hits = 5 + rng() % 20;
        cfg.rate_limit_span_s = 10 + rng() % 100;
        std::vector<EpochSeconds> times;
        std::vector<LogEntry> entries;
        const int n = 1 + static_cast<int>(rng() % 60);
        EpochSeconds t = 0;
        for (int i = 0; i < n; ++i) {
            t += rng() % 30;
            times.push_back(t);
            entries.push_back(make_entry("h", t, "/a", 200));
        }
        const bool flagged = !detect_bots(entries, cfg).empty();
        CHECK(flagged == brute_force_rate(times, cfg.rate_limit_hits, cfg.rate_limit_span_s));
    }
}

TEST_CASE("adding a pattern never unflags a host") {
    std::mt19937_64 rng(5);
    std::vector<LogEntry> entries;
    for (int i = 0; i < 40; ++i) entries.push_back(test::random_entry(rng));
    CurationConfig small = default_config();
    small.ua_patterns = {"bot"};
    CurationConfig big = small;
    big.ua_patterns.push_back("agent");
    const auto flagged_small = detect_bots(entries, small);
    const auto flagged_big = detect_bots(entries, big);
    for (const auto &v : flagged_small) {
        const bool still = std::any_of(flagged_big.begin(), flagged_big.end(),
                                       [&](const BotVerdict &w) { return w.host_hash == v.host_hash; });
        CHECK(still);
    }
}

TEST_CASE("strip_hosts removes exactly the flagged hosts") {
    std::vector<LogEntry> entries = {make_entry("a", 0, "/x"), make_entry("b", 1, "/y"),
                                     make_entry("a", 2, "/z")};
    CHECK(strip_hosts(entries, {}) == entries);
    std::vector<BotVerdict> verdicts = {
        BotVerdict{"a", {{BotReason::UserAgentPattern, ""}}},
        BotVerdict{"b", {{BotReason::RobotsTxtFetch, ""}}}};
    CHECK(strip_hosts(entries, verdicts).empty());
    verdicts.pop_back();
    const auto left = strip_hosts(entries, verdicts);
    REQUIRE(left.size() == 1);
    CHECK(left[0].host_hash == "b");
}

TEST_CASE("303 then matching representation within the horizon is Semantic") {
    const auto cfg = default_config();
    std::vector<LogEntry> entries = {
        make_entry("h", 0, "/resource/Haiti", 303),
        make_entry("h", 2, "/data/Haiti", 200),
    };
    const auto res = classify_access(entries, cfg);
    CHECK(res.types[0] == AccessType::Semantic);
    CHECK(res.types[1] == AccessType::Semantic);
    REQUIRE(res.semantic_pairs.size() == 1);
    CHECK(res.semantic_pairs[0] == std::pair<std::size_t, std::size_t>{0, 1});
}

TEST_CASE("format-extension representations pair too") {
    const auto cfg = default_config();
    std::vector<LogEntry> entries = {make_entry("h", 0, "/papers", 303),
                                     make_entry("h", 1, "/papers.rdf", 200)};
    const auto res = classify_access(entries, cfg);
    CHECK(res.types[0] == AccessType::Semantic);
    CHECK(res.types[1] == AccessType::Semantic);
}

TEST_CASE("pairing expires past the horizon") {
    const auto cfg = default_config();  // horizon 10s
    std::vector<LogEntry> entries = {make_entry("h", 0, "/resource/Haiti", 303),
                                     make_entry("h", 11, "/data/Haiti", 200)};
    const auto res = classify_access(entries, cfg);
    CHECK(res.types[0] == AccessType::PlainHtml);
    CHECK(res.types[1] == AccessType::PlainHtml);
    CHECK(res.semantic_pairs.empty());
}

TEST_CASE("pairing does not cross hosts") {
    const auto cfg = default_config();
    std::vector<LogEntry> entries = {make_entry("h1", 0, "/resource/Haiti", 303),
                                     make_entry("h2", 2, "/data/Haiti", 200)};
    const auto res = classify_access(entries, cfg);
    CHECK(res.semantic_pairs.empty());
}

TEST_CASE("the older pending 303 wins and pairing is injective") {
    const auto cfg = default_config();
    std::vector<LogEntry> entries = {
        make_entry("h", 0, "/resource/Haiti", 303),
        make_entry("h", 1, "/resource/Haiti", 303),
        make_entry("h", 2, "/data/Haiti", 200),
        make_entry("h", 3, "/data/Haiti", 200),
    };
    const auto res = classify_access(entries, cfg);
    REQUIRE(res.semantic_pairs.size() == 2);
    CHECK(res.semantic_pairs[0] == std::pair<std::size_t, std::size_t>{0, 2});
    CHECK(res.semantic_pairs[1] == std::pair<std::size_t, std::size_t>{1, 3});
    for (const auto &t : res.types) CHECK(t == AccessType::Semantic);
}

TEST_CASE("unpaired hits fall through by path prefix") {
    auto cfg = default_config();
    cfg.search_paths = {"/search"};
    std::vector<LogEntry> entries = {
        make_entry("h", 0, "/sparql?query=SELECT+*", 200),
        make_entry("h", 1, "/search?q=www", 200),
        make_entry("h", 2, "/index.html", 200),
    };
    const auto res = classify_access(entries, cfg);
    CHECK(res.types[0] == AccessType::Sparql);
    CHECK(res.types[1] == AccessType::Search);
    CHECK(res.types[2] == AccessType::PlainHtml);
}

TEST_CASE("search is disabled when no search paths are configured") {
    const auto cfg = default_config();
    std::vector<LogEntry> entries = {make_entry("h", 0, "/search?q=www", 200)};
    const auto res = classify_access(entries, cfg);
    CHECK(res.types[0] == AccessType::PlainHtml);
}

TEST_CASE("classification is total and exclusive") {
    std::mt19937_64 rng(17);
    const auto cfg = default_config();
    std::vector<LogEntry> entries;
    EpochSeconds t = 0;
    for (int i = 0; i < 200; ++i) {
        auto e = test::random_entry(rng);
        e.timestamp.epoch = t += rng() % 5;
        entries.push_back(std::move(e));
    }
    const auto res = classify_access(entries, cfg);
    CHECK(res.types.size() == entries.size());
    std::vector<bool> seen(entries.size(), false);
    for (const auto &[a, b] : res.semantic_pairs) {
        CHECK(!seen[a]);
        CHECK(!seen[b]);
        seen[a] = seen[b] = true;
        CHECK(res.types[a] == AccessType::Semantic);
        CHECK(res.types[b] == AccessType::Semantic);
    }
}
