#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "relmine/model.hpp"

namespace relmine {

enum class ParseErrorKind { NotUtf8, Malformed, BadTimestamp, BadStatus };

const char *parse_error_name(ParseErrorKind k);

struct ParseError {
    ParseErrorKind kind;
    std::string detail;
};

using ParseResult = std::variant<LogEntry, ParseError>;

struct ParseReport {
    std::uint64_t accepted = 0;
    std::uint64_t rejected = 0;
    std::vector<std::pair<std::uint64_t, ParseErrorKind>> rejects;  // (line_no, reason)

    std::uint64_t total() const { return accepted + rejected; }
};

struct StreamResult {
    std::vector<LogEntry> entries;  // in input order
    ParseReport report;
};

// Parses one extended-CLF line:
//   host ident authuser [timestamp] "request" status bytes "referrer"
//   "user-agent" "country" "ip-hash"
// The two appended fields are normally quoted; bare trailing tokens are
// tolerated. Never throws on arbitrary bytes.
ParseResult parse_line(std::string_view raw, std::uint64_t line_no);

StreamResult parse_stream(std::span<const std::string> lines);

// Canonical line form: parse_line(serialize_entry(e)) == e, and lines
// produced here round-trip byte-identically.
std::string serialize_entry(const LogEntry &entry);

}  // namespace relmine
