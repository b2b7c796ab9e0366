#include "relmine/clf_parser.hpp"

#include <charconv>

namespace relmine {

namespace {

bool valid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        const unsigned char c = static_cast<unsigned char>(s[i]);
        std::size_t need;
        unsigned cp_min;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            need = 1;
            cp_min = 0x80;
        } else if ((c & 0xF0) == 0xE0) {
            need = 2;
            cp_min = 0x800;
        } else if ((c & 0xF8) == 0xF0) {
            need = 3;
            cp_min = 0x10000;
        } else {
            return false;
        }
        if (i + need >= s.size()) return false;
        unsigned cp = c & (0x3F >> need);
        for (std::size_t k = 1; k <= need; ++k) {
            const unsigned char cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (cc & 0x3F);
        }
        if (cp < cp_min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
        i += need + 1;
    }
    return true;
}

struct Cursor {
    std::string_view s;
    std::size_t pos = 0;

    bool done() const { return pos >= s.size(); }
    char peek() const { return s[pos]; }

    bool expect_space() {
        if (done() || s[pos] != ' ') return false;
        ++pos;
        return true;
    }

    // Non-empty run of non-space characters.
    bool token(std::string_view &out) {
        const std::size_t start = pos;
        while (!done() && s[pos] != ' ') ++pos;
        if (pos == start) return false;
        out = s.substr(start, pos - start);
        return true;
    }

    // Quoted field; backslash escapes " and \. The closing quote must be
    // followed by a space or end of line.
    bool quoted(std::string &out) {
        if (done() || s[pos] != '"') return false;
        ++pos;
        out.clear();
        while (!done()) {
            const char c = s[pos];
            if (c == '"') {
                ++pos;
                if (!done() && s[pos] != ' ') return false;
                return true;
            }
            if (c == '\\' && pos + 1 < s.size() &&
                (s[pos + 1] == '"' || s[pos + 1] == '\\')) {
                out.push_back(s[pos + 1]);
                pos += 2;
                continue;
            }
            out.push_back(c);
            ++pos;
        }
        return false;  // unterminated
    }

    // Quoted field, or a bare token (tolerated form of the two appended
    // USEWOD fields).
    bool quoted_or_bare(std::string &out) {
        if (!done() && s[pos] == '"') return quoted(out);
        std::string_view tok;
        if (!token(tok)) return false;
        out.assign(tok);
        return true;
    }
};

ParseError err(ParseErrorKind k, std::string detail) { return ParseError{k, std::move(detail)}; }

}  // namespace

const char *parse_error_name(ParseErrorKind k) {
    switch (k) {
        case ParseErrorKind::NotUtf8: return "NotUtf8";
        case ParseErrorKind::Malformed: return "Malformed";
        case ParseErrorKind::BadTimestamp: return "BadTimestamp";
        case ParseErrorKind::BadStatus: return "BadStatus";
    }
    return "?";
}

ParseResult parse_line(std::string_view raw, std::uint64_t line_no) {
    if (!valid_utf8(raw)) return err(ParseErrorKind::NotUtf8, "invalid UTF-8");

    Cursor cur{raw};
    std::string_view host, ident, authuser;
    if (!cur.token(host) || !cur.expect_space()) return err(ParseErrorKind::Malformed, "host");
    if (!cur.token(ident) || !cur.expect_space()) return err(ParseErrorKind::Malformed, "ident");
    if (!cur.token(authuser) || !cur.expect_space())
        return err(ParseErrorKind::Malformed, "authuser");

    if (cur.done() || cur.peek() != '[') return err(ParseErrorKind::Malformed, "timestamp open");
    ++cur.pos;
    const auto close = cur.s.find(']', cur.pos);
    if (close == std::string_view::npos) return err(ParseErrorKind::Malformed, "timestamp close");
    const auto ts = parse_clf_timestamp(cur.s.substr(cur.pos, close - cur.pos));
    if (!ts) return err(ParseErrorKind::BadTimestamp, std::string(cur.s.substr(cur.pos, close - cur.pos)));
    cur.pos = close + 1;
    if (!cur.expect_space()) return err(ParseErrorKind::Malformed, "after timestamp");

    std::string request;
    if (!cur.quoted(request)) return err(ParseErrorKind::Malformed, "request");
    if (!cur.expect_space()) return err(ParseErrorKind::Malformed, "after request");

    // Single-space split; first token is the method, last the protocol.
    std::vector<std::string_view> req_tokens;
    {
        std::string_view rv = request;
        std::size_t start = 0;
        while (true) {
            const auto sp = rv.find(' ', start);
            const auto part = rv.substr(start, sp == std::string_view::npos ? sp : sp - start);
            if (part.empty()) return err(ParseErrorKind::Malformed, "request tokens");
            req_tokens.push_back(part);
            if (sp == std::string_view::npos) break;
            start = sp + 1;
        }
    }
    if (req_tokens.size() < 3) return err(ParseErrorKind::Malformed, "request tokens");

    std::string_view status_tok;
    if (!cur.token(status_tok) || !cur.expect_space())
        return err(ParseErrorKind::Malformed, "status field");
    int status = 0;
    {
        const auto [p, ec] =
            std::from_chars(status_tok.data(), status_tok.data() + status_tok.size(), status);
        if (ec != std::errc{} || p != status_tok.data() + status_tok.size() || status < 100 ||
            status > 599)
            return err(ParseErrorKind::BadStatus, std::string(status_tok));
    }

    std::string_view bytes_tok;
    if (!cur.token(bytes_tok) || !cur.expect_space())
        return err(ParseErrorKind::Malformed, "bytes field");
    std::optional<std::uint64_t> bytes;
    if (bytes_tok != "-") {
        std::uint64_t b = 0;
        const auto [p, ec] =
            std::from_chars(bytes_tok.data(), bytes_tok.data() + bytes_tok.size(), b);
        if (ec != std::errc{} || p != bytes_tok.data() + bytes_tok.size())
            return err(ParseErrorKind::Malformed, "bytes value");
        bytes = b;
    }

    std::string referrer_text, user_agent, country, hash;
    if (!cur.quoted(referrer_text)) return err(ParseErrorKind::Malformed, "referrer");
    if (!cur.expect_space()) return err(ParseErrorKind::Malformed, "after referrer");
    if (!cur.quoted(user_agent)) return err(ParseErrorKind::Malformed, "user agent");
    if (!cur.expect_space()) return err(ParseErrorKind::Malformed, "after user agent");
    if (!cur.quoted_or_bare(country)) return err(ParseErrorKind::Malformed, "country");
    if (!cur.expect_space()) return err(ParseErrorKind::Malformed, "after country");
    if (!cur.quoted_or_bare(hash)) return err(ParseErrorKind::Malformed, "ip hash");
    if (!cur.done()) return err(ParseErrorKind::Malformed, "trailing data");

    if (country.empty()) return err(ParseErrorKind::Malformed, "empty country");
    if (hash.empty()) return err(ParseErrorKind::Malformed, "empty ip hash");

    LogEntry e;
    e.host_hash = std::move(hash);
    e.country_code = std::move(country);
    e.timestamp = *ts;
    e.method = std::string(req_tokens.front());
    e.protocol = std::string(req_tokens.back());
    {
        std::string target;
        for (std::size_t i = 1; i + 1 < req_tokens.size(); ++i) {
            if (i > 1) target.push_back(' ');
            target.append(req_tokens[i]);
        }
        e.resource_raw = std::move(target);
    }
    e.status = status;
    e.bytes = bytes;
    if (referrer_text != "-") e.referrer = std::move(referrer_text);
    e.user_agent = std::move(user_agent);
    e.line_no = line_no;
    return e;
}

StreamResult parse_stream(std::span<const std::string> lines) {
    StreamResult out;
    out.entries.reserve(lines.size());
    std::uint64_t line_no = 0;
    for (const auto &line : lines) {
        ++line_no;
        auto res = parse_line(line, line_no);
        if (auto *entry = std::get_if<LogEntry>(&res)) {
            out.entries.push_back(std::move(*entry));
            ++out.report.accepted;
        } else {
            ++out.report.rejected;
            out.report.rejects.emplace_back(line_no, std::get<ParseError>(res).kind);
        }
    }
    return out;
}

namespace {

std::string quote(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 2);
    out.push_back('"');
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

std::string serialize_entry(const LogEntry &e) {
    std::string out = "0.0.0.0 - - [";
    out += format_clf_timestamp(e.timestamp);
    out += "] ";
    out += quote(e.method + " " + e.resource_raw + " " + e.protocol);
    out += " " + std::to_string(e.status) + " ";
    out += e.bytes ? std::to_string(*e.bytes) : "-";
    out += " " + quote(e.referrer ? std::string_view(*e.referrer) : std::string_view("-"));
    out += " " + quote(e.user_agent);
    out += " " + quote(e.country_code);
    out += " " + quote(e.host_hash);
    return out;
}

}  // namespace relmine
