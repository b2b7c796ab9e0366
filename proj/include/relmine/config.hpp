#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relmine/curation.hpp"
#include "relmine/model.hpp"

namespace relmine {

// Flat `key = value` configuration file. '#' starts a comment; keys may
// repeat (last one wins, except windows which accumulate in file order).
class KeyValueFile {
  public:
    static KeyValueFile parse_text(const std::string &text);
    static KeyValueFile load(const std::string &path);

    std::optional<std::string> get(const std::string &key) const;
    std::string get_or(const std::string &key, const std::string &fallback) const;
    std::optional<long long> get_int(const std::string &key) const;

    // Comma-separated list; empty value -> empty list.
    std::vector<std::string> get_list(const std::string &key) const;

    // All (suffix, value) pairs for keys of the form "<prefix>.<suffix>",
    // in file order.
    std::vector<std::pair<std::string, std::string>> prefixed(const std::string &prefix) const;

    bool has(const std::string &key) const { return values_.contains(key); }

  private:
    std::map<std::string, std::string> values_;
    std::vector<std::pair<std::string, std::string>> ordered_;
};

// Throws std::runtime_error on malformed values.
CurationConfig curation_config_from(const KeyValueFile &kv);

// "window.<label> = START..END" entries, file order preserved.
// Date-only bounds use the calendar shorthand: [start 00:00 UTC,
// day-after-end 00:00 UTC).
std::vector<TimeWindow> windows_from(const KeyValueFile &kv);

// "START..END", "LABEL=START..END", or a bare label looked up in
// `defined`.
TimeWindow parse_window_spec(const std::string &spec, std::span<const TimeWindow> defined);

}  // namespace relmine
