#include "relmine/model.hpp"

#include <cctype>

namespace relmine {

namespace {

int hex_val(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

// Decodes %XX escapes once. Escapes that would re-introduce a URI
// delimiter (%25, %23, %3F) and malformed escapes stay verbatim, so a
// normalized key normalizes to itself.
std::string percent_decode_once(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        if (s[i] == '%' && i + 2 < s.size()) {
            const int hi = hex_val(s[i + 1]);
            const int lo = hex_val(s[i + 2]);
            if (hi >= 0 && lo >= 0) {
                const char decoded = static_cast<char>(hi * 16 + lo);
                if (decoded != '%' && decoded != '#' && decoded != '?') {
                    out.push_back(decoded);
                    i += 3;
                    continue;
                }
            }
        }
        out.push_back(s[i]);
        ++i;
    }
    return out;
}

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    }
    return true;
}

bool is_scheme(std::string_view s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.')
            return false;
    }
    return true;
}

}  // namespace

const char *access_type_name(AccessType t) {
    switch (t) {
        case AccessType::PlainHtml: return "plain";
        case AccessType::Semantic: return "semantic";
        case AccessType::Search: return "search";
        case AccessType::Sparql: return "sparql";
    }
    return "?";
}

std::string_view raw_path_of(std::string_view raw) {
    const auto cut = raw.find_first_of("?#");
    return cut == std::string_view::npos ? raw : raw.substr(0, cut);
}

Normalized normalize_resource(std::string_view raw, std::string_view site_host) {
    std::string_view rest = raw;

    const auto sep = raw.find("://");
    if (sep != std::string_view::npos && is_scheme(raw.substr(0, sep))) {
        std::string_view after = raw.substr(sep + 3);
        const auto path_pos = after.find_first_of("/?#");
        std::string_view host =
            path_pos == std::string_view::npos ? after : after.substr(0, path_pos);
        if (const auto at = host.rfind('@'); at != std::string_view::npos)
            host = host.substr(at + 1);
        if (const auto colon = host.find(':'); colon != std::string_view::npos)
            host = host.substr(0, colon);
        if (!site_host.empty() && !iequals(host, site_host)) return Normalized{std::nullopt};
        rest = path_pos == std::string_view::npos ? std::string_view{} : after.substr(path_pos);
    }

    if (const auto frag = rest.find('#'); frag != std::string_view::npos)
        rest = rest.substr(0, frag);
    if (const auto query = rest.find('?'); query != std::string_view::npos)
        rest = rest.substr(0, query);

    std::string path = percent_decode_once(rest);
    if (path.empty() || path[0] != '/') path.insert(path.begin(), '/');
    while (path.size() > 1 && path.back() == '/') path.pop_back();
    return Normalized{std::move(path)};
}

}  // namespace relmine
