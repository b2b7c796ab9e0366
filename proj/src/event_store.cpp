#include "relmine/event_store.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

namespace relmine {

namespace fs = std::filesystem;

namespace {

std::string escape_field(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string unescape_field(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && i + 1 < s.size()) {
            switch (s[i + 1]) {
                case '\\': out.push_back('\\'); ++i; continue;
                case 't': out.push_back('\t'); ++i; continue;
                case 'n': out.push_back('\n'); ++i; continue;
                case 'r': out.push_back('\r'); ++i; continue;
            }
        }
        out.push_back(s[i]);
    }
    return out;
}

std::vector<std::string> split_tabs(const std::string &line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        fields.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
    }
    return fields;
}

char access_code(const std::optional<AccessType> &a) {
    if (!a) return '-';
    switch (*a) {
        case AccessType::PlainHtml: return 'H';
        case AccessType::Semantic: return 'M';
        case AccessType::Search: return 'S';
        case AccessType::Sparql: return 'Q';
    }
    return '-';
}

std::optional<AccessType> access_from_code(char c) {
    switch (c) {
        case 'H': return AccessType::PlainHtml;
        case 'M': return AccessType::Semantic;
        case 'S': return AccessType::Search;
        case 'Q': return AccessType::Sparql;
    }
    return std::nullopt;
}

std::string encode_record(const StoredEntry &r) {
    const auto &e = r.entry;
    std::ostringstream out;
    out << e.timestamp.epoch << '\t' << e.timestamp.offset_minutes << '\t'
        << escape_field(e.host_hash) << '\t' << escape_field(e.country_code) << '\t'
        << escape_field(e.method) << '\t' << escape_field(e.resource_raw) << '\t'
        << escape_field(e.protocol) << '\t' << e.status << '\t'
        << (e.bytes ? std::to_string(*e.bytes) : "-") << '\t' << (e.referrer ? 1 : 0) << '\t'
        << (e.referrer ? escape_field(*e.referrer) : "") << '\t' << escape_field(e.user_agent)
        << '\t' << e.line_no << '\t' << (r.dropped ? 1 : 0) << '\t' << (r.bot ? 1 : 0) << '\t'
        << access_code(r.access);
    return out.str();
}

StoredEntry decode_record(const std::string &line) {
    const auto f = split_tabs(line);
    if (f.size() != 16) throw StoreError("corrupt record: " + line);
    StoredEntry r;
    auto &e = r.entry;
    e.timestamp.epoch = std::stoll(f[0]);
    e.timestamp.offset_minutes = static_cast<std::int16_t>(std::stoi(f[1]));
    e.host_hash = unescape_field(f[2]);
    e.country_code = unescape_field(f[3]);
    e.method = unescape_field(f[4]);
    e.resource_raw = unescape_field(f[5]);
    e.protocol = unescape_field(f[6]);
    e.status = std::stoi(f[7]);
    if (f[8] != "-") e.bytes = std::stoull(f[8]);
    if (f[9] == "1") e.referrer = unescape_field(f[10]);
    e.user_agent = unescape_field(f[11]);
    e.line_no = std::stoull(f[12]);
    r.dropped = f[13] == "1";
    r.bot = f[14] == "1";
    r.access = access_from_code(f[15].empty() ? '-' : f[15][0]);
    return r;
}

}  // namespace

Store::Store(fs::path dir, std::string site_host)
    : dir_(std::move(dir)), site_host_(std::move(site_host)) {}

Store Store::open(const fs::path &dir, const std::string &site_host) {
    std::error_code ec;
    fs::create_directories(dir / "batches", ec);
    if (ec) throw StoreError("cannot create store at " + dir.string() + ": " + ec.message());

    const auto meta_path = dir / "meta.txt";
    if (fs::exists(meta_path)) {
        std::ifstream meta(meta_path);
        std::string line, stored_host;
        while (std::getline(meta, line)) {
            if (line.rfind("site_host\t", 0) == 0) stored_host = line.substr(10);
        }
        return Store(dir, stored_host.empty() ? site_host : stored_host);
    }
    std::ofstream meta(meta_path);
    if (!meta) throw StoreError("store unwritable: " + dir.string());
    meta << "format\trelmine-store-v1\n";
    meta << "site_host\t" << site_host << "\n";
    return Store(dir, site_host);
}

std::vector<Store::BatchInfo> Store::load_manifest() const {
    std::vector<BatchInfo> batches;
    std::ifstream in(dir_ / "manifest.tsv");
    if (!in) return batches;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_tabs(line);
        if (f.size() != 5) throw StoreError("corrupt manifest line: " + line);
        batches.push_back(BatchInfo{unescape_field(f[0]), f[1], std::stoull(f[2]),
                                    std::stoll(f[3]), std::stoll(f[4])});
    }
    return batches;
}

std::vector<StoredEntry> Store::load_batch(const BatchInfo &b) const {
    std::ifstream in(dir_ / "batches" / b.file);
    if (!in) throw StoreError("missing batch file: " + b.file);
    std::vector<StoredEntry> out;
    out.reserve(b.count);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) out.push_back(decode_record(line));
    }
    if (out.size() != b.count)
        throw StoreError("batch " + b.file + " has " + std::to_string(out.size()) +
                         " records, manifest says " + std::to_string(b.count));
    return out;
}

IngestSummary Store::ingest(const std::string &source_id, std::span<const StoredEntry> entries) {
    auto batches = load_manifest();
    for (const auto &b : batches) {
        if (b.source_id == source_id)
            throw DuplicateBatchError("batch already ingested: " + source_id);
    }

    EpochSeconds min_e = 0, max_e = 0;
    if (!entries.empty()) {
        min_e = max_e = entries.front().entry.timestamp.epoch;
        for (const auto &r : entries) {
            min_e = std::min(min_e, r.entry.timestamp.epoch);
            max_e = std::max(max_e, r.entry.timestamp.epoch);
        }
    }

    const std::string file = "b" + std::to_string(batches.size()) + ".tsv";
    {
        std::ofstream out(dir_ / "batches" / file, std::ios::binary);
        if (!out) throw StoreError("store unwritable: " + (dir_ / "batches" / file).string());
        // Per-day index alongside the records.
        std::map<std::int64_t, std::uint64_t> day_counts;
        for (const auto &r : entries) {
            out << encode_record(r) << '\n';
            ++day_counts[utc_day_of(r.entry.timestamp.epoch)];
        }
        if (!out) throw StoreError("write failed for batch " + file);
        std::ofstream idx(dir_ / "batches" / (file + ".days"), std::ios::binary);
        for (const auto &[day, n] : day_counts) idx << day << '\t' << n << '\n';
    }
    // Committing = appending the manifest line; readers never see a batch
    // before this point.
    {
        std::ofstream out(dir_ / "manifest.tsv", std::ios::app | std::ios::binary);
        if (!out) throw StoreError("store unwritable: manifest");
        out << escape_field(source_id) << '\t' << file << '\t' << entries.size() << '\t' << min_e
            << '\t' << max_e << '\n';
        if (!out) throw StoreError("manifest write failed");
    }
    return IngestSummary{entries.size(), file};
}

std::vector<StoredEntry> Store::query(const std::optional<TimeWindow> &window,
                                      const QueryFilter &filter) const {
    std::vector<StoredEntry> out;
    for (const auto &b : load_manifest()) {
        if (window && b.count > 0 && (b.max_epoch < window->start || b.min_epoch >= window->end))
            continue;
        for (auto &r : load_batch(b)) {
            if (window && !window->contains(r.entry.timestamp.epoch)) continue;
            if (!filter.include_dropped && r.dropped) continue;
            if (!filter.include_bots && r.bot) continue;
            if (filter.access && r.access != filter.access) continue;
            if (filter.host && r.entry.host_hash != *filter.host) continue;
            out.push_back(std::move(r));
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const StoredEntry &a, const StoredEntry &b) {
        return a.entry.timestamp.epoch < b.entry.timestamp.epoch;
    });
    return out;
}

HitStats Store::stats(const std::optional<TimeWindow> &window) const {
    HitStats s;
    std::set<ResourceKey> resources;
    std::set<std::int64_t> days;
    std::unordered_set<std::string> hosts;
    for (const auto &b : load_manifest()) {
        if (window && b.count > 0 && (b.max_epoch < window->start || b.min_epoch >= window->end))
            continue;
        for (const auto &r : load_batch(b)) {
            const auto &e = r.entry;
            if (window && !window->contains(e.timestamp.epoch)) continue;
            ++s.hits;
            days.insert(utc_day_of(e.timestamp.epoch));
            hosts.insert(e.host_hash);
            if (e.status >= 200 && e.status <= 399) {
                ++s.successful_hits;
                const auto norm = normalize_resource(e.resource_raw, site_host_);
                if (!norm.external()) resources.insert(*norm.key);
            }
            if (r.access == AccessType::Semantic) ++s.semantic_requests;
            if (r.access == AccessType::Sparql) ++s.sparql_requests;
        }
    }
    s.accessed_resources = resources.size();
    s.days = days.size();
    s.distinct_hosts = hosts.size();
    return s;
}

std::string Store::export_tsv(const std::optional<TimeWindow> &window) const {
    std::ostringstream out;
    out << "timestamp\toffset_min\thost_hash\tcountry\tmethod\tresource\tprotocol\tstatus\t"
           "bytes\treferrer\tuser_agent\tline_no\tdropped\tbot\taccess\n";
    QueryFilter all;
    all.include_dropped = true;
    all.include_bots = true;
    for (const auto &r : query(window, all)) {
        const auto &e = r.entry;
        out << e.timestamp.epoch << '\t' << e.timestamp.offset_minutes << '\t'
            << escape_field(e.host_hash) << '\t' << escape_field(e.country_code) << '\t'
            << escape_field(e.method) << '\t' << escape_field(e.resource_raw) << '\t'
            << escape_field(e.protocol) << '\t' << e.status << '\t'
            << (e.bytes ? std::to_string(*e.bytes) : "-") << '\t'
            << (e.referrer ? escape_field(*e.referrer) : "-") << '\t'
            << escape_field(e.user_agent) << '\t' << e.line_no << '\t' << (r.dropped ? 1 : 0)
            << '\t' << (r.bot ? 1 : 0) << '\t'
            << (r.access ? access_type_name(*r.access) : "-") << '\n';
    }
    return out.str();
}

}  // namespace relmine
