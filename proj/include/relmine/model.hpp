#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "relmine/calendar.hpp"

namespace relmine {

// Normalized site-local path; canonical node identity for usage graphs.
// Always begins with "/", carries no query string or fragment, is
// percent-decoded once and has no trailing slash (except the root).
using ResourceKey = std::string;

enum class AccessType { PlainHtml, Semantic, Search, Sparql };

const char *access_type_name(AccessType t);

// One hit from the extended Combined Log Format: standard combined
// fields plus the appended country code and IP hash.
struct LogEntry {
    std::string host_hash;     // appended hash of the original IP
    std::string country_code;  // two-letter code or "--"
    Timestamp timestamp;
    std::string method;
    std::string resource_raw;  // request target exactly as logged
    std::string protocol;
    int status = 0;  // [100, 599]
    std::optional<std::uint64_t> bytes;
    std::optional<std::string> referrer;
    std::string user_agent;
    std::uint64_t line_no = 0;  // 1-based position in the source file

    bool operator==(const LogEntry &) const = default;
};

// Half-open UTC interval [start, end).
struct TimeWindow {
    EpochSeconds start = 0;
    EpochSeconds end = 0;
    std::string label;

    bool contains(EpochSeconds t) const { return t >= start && t < end; }
    bool operator==(const TimeWindow &) const = default;
};

// Result of resource normalization: either a site-local key or the
// marker for a target on a foreign host.
struct Normalized {
    std::optional<ResourceKey> key;  // nullopt = external

    bool external() const { return !key.has_value(); }
};

// Reduces a request target or referrer to its canonical ResourceKey.
// Absolute URIs on site_host reduce to their path; other hosts are
// external. Malformed percent-escapes are kept verbatim.
Normalized normalize_resource(std::string_view raw, std::string_view site_host);

// Path component of a raw request target (query/fragment stripped,
// no decoding); used for prefix classification against the raw log form.
std::string_view raw_path_of(std::string_view raw);

}  // namespace relmine
