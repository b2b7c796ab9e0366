#include "relmine/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace relmine {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

}  // namespace

KeyValueFile KeyValueFile::parse_text(const std::string &text) {
    KeyValueFile kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (!trim(line).empty())
                throw std::runtime_error("config line without '=': " + line);
            continue;
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw std::runtime_error("config line with empty key: " + line);
        kv.values_[key] = value;
        kv.ordered_.emplace_back(std::move(key), std::move(value));
    }
    return kv;
}

KeyValueFile KeyValueFile::load(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_text(text);
}

std::optional<std::string> KeyValueFile::get(const std::string &key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::string KeyValueFile::get_or(const std::string &key, const std::string &fallback) const {
    return get(key).value_or(fallback);
}

std::optional<long long> KeyValueFile::get_int(const std::string &key) const {
    const auto v = get(key);
    if (!v) return std::nullopt;
    try {
        std::size_t used = 0;
        const long long n = std::stoll(*v, &used);
        if (used != v->size()) throw std::invalid_argument(*v);
        return n;
    } catch (const std::exception &) {
        throw std::runtime_error("config key '" + key + "' is not an integer: " + *v);
    }
}

std::vector<std::string> KeyValueFile::get_list(const std::string &key) const {
    std::vector<std::string> out;
    const auto v = get(key);
    if (!v || trim(*v).empty()) return out;
    std::size_t start = 0;
    while (start <= v->size()) {
        const auto comma = v->find(',', start);
        out.push_back(trim(v->substr(start, comma == std::string::npos ? comma : comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> KeyValueFile::prefixed(
    const std::string &prefix) const {
    std::vector<std::pair<std::string, std::string>> out;
    const std::string full = prefix + ".";
    for (const auto &[key, value] : ordered_) {
        if (key.rfind(full, 0) == 0) out.emplace_back(key.substr(full.size()), value);
    }
    return out;
}

CurationConfig curation_config_from(const KeyValueFile &kv) {
    CurationConfig cfg;
    if (kv.has("ua_patterns")) cfg.ua_patterns = kv.get_list("ua_patterns");
    if (const auto n = kv.get_int("rate_limit_hits"))
        cfg.rate_limit_hits = static_cast<std::uint32_t>(*n);
    if (const auto s = kv.get_int("rate_limit_span"))
        cfg.rate_limit_span_s = static_cast<std::uint32_t>(*s);
    if (const auto h = kv.get_int("semantic_pair_horizon"))
        cfg.semantic_pair_horizon_s = static_cast<std::uint32_t>(*h);
    if (kv.has("sparql_endpoints")) cfg.sparql_endpoints = kv.get_list("sparql_endpoints");
    if (kv.has("search_paths")) cfg.search_paths = kv.get_list("search_paths");
    cfg.site_host = kv.get_or("site_host", "");
    if (kv.has("representation_rewrites")) {
        cfg.representation_rewrites.clear();
        for (const auto &rule : kv.get_list("representation_rewrites")) {
            const auto arrow = rule.find("->");
            if (arrow == std::string::npos)
                throw std::runtime_error("rewrite rule without '->': " + rule);
            cfg.representation_rewrites.emplace_back(trim(rule.substr(0, arrow)),
                                                     trim(rule.substr(arrow + 2)));
        }
    }
    if (kv.has("representation_extensions"))
        cfg.representation_extensions = kv.get_list("representation_extensions");
    if (const auto g = kv.get_int("session_gap"))
        cfg.session_gap_s = static_cast<std::uint32_t>(*g);
    if (cfg.rate_limit_hits < 1 || cfg.rate_limit_span_s < 1 || cfg.semantic_pair_horizon_s < 1)
        throw std::runtime_error("rate limit and horizon settings must be >= 1");
    return cfg;
}

namespace {

TimeWindow parse_range(const std::string &label, const std::string &range) {
    const auto dots = range.find("..");
    if (dots == std::string::npos)
        throw std::runtime_error("window '" + label + "' is not START..END: " + range);
    const std::string start_text = trim(range.substr(0, dots));
    const std::string end_text = trim(range.substr(dots + 2));
    const auto start = parse_utc_instant(start_text);
    const auto end = parse_utc_instant(end_text);
    if (!start || !end)
        throw std::runtime_error("window '" + label + "' has an unparseable bound: " + range);
    TimeWindow w;
    w.label = label;
    w.start = *start;
    // Date-only end bounds are inclusive calendar days.
    w.end = end_text.size() == 10 ? *end + 86400 : *end;
    if (w.start >= w.end)
        throw std::runtime_error("window '" + label + "' is empty or inverted: " + range);
    return w;
}

}  // namespace

std::vector<TimeWindow> windows_from(const KeyValueFile &kv) {
    std::vector<TimeWindow> windows;
    for (const auto &[label, range] : kv.prefixed("window"))
        windows.push_back(parse_range(label, range));
    return windows;
}

TimeWindow parse_window_spec(const std::string &spec, std::span<const TimeWindow> defined) {
    const auto dots = spec.find("..");
    if (dots == std::string::npos) {
        for (const auto &w : defined) {
            if (w.label == spec) return w;
        }
        throw std::runtime_error("unknown window label: " + spec);
    }
    const auto eq = spec.find('=');
    if (eq != std::string::npos && eq < dots)
        return parse_range(spec.substr(0, eq), spec.substr(eq + 1));
    return parse_range(spec, spec);
}

}  // namespace relmine
