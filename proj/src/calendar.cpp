#include "relmine/calendar.hpp"

#include <array>
#include <cstdio>

namespace relmine {

namespace {

constexpr std::array<const char *, 12> kMonthNames = {
    "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

unsigned days_in_month(int y, unsigned m) {
    static constexpr std::array<unsigned, 12> d = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return d[m - 1];
}

int month_from_name(std::string_view name) {
    for (int i = 0; i < 12; ++i) {
        if (name == kMonthNames[i]) return i + 1;
    }
    return 0;
}

bool take_digits(std::string_view s, std::size_t pos, std::size_t n, int &out) {
    if (pos + n > s.size()) return false;
    int v = 0;
    for (std::size_t i = 0; i < n; ++i) {
        char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

}  // namespace

// Howard Hinnant's civil-date algorithm.
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int &year, unsigned &month, unsigned &day) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    day = doy - (153 * mp + 2) / 5 + 1;
    month = mp + (mp < 10 ? 3 : -9);
    year = static_cast<int>(y + (month <= 2));
}

bool is_valid_civil(int year, unsigned month, unsigned day) {
    if (month < 1 || month > 12) return false;
    return day >= 1 && day <= days_in_month(year, month);
}

std::optional<Timestamp> parse_clf_timestamp(std::string_view s) {
    // dd/Mon/yyyy:HH:MM:SS +zzzz  (26 chars)
    if (s.size() != 26) return std::nullopt;
    int day = 0, year = 0, hh = 0, mm = 0, ss = 0, off = 0;
    if (!take_digits(s, 0, 2, day) || s[2] != '/') return std::nullopt;
    const int month = month_from_name(s.substr(3, 3));
    if (month == 0 || s[6] != '/') return std::nullopt;
    if (!take_digits(s, 7, 4, year) || s[11] != ':') return std::nullopt;
    if (!take_digits(s, 12, 2, hh) || s[14] != ':') return std::nullopt;
    if (!take_digits(s, 15, 2, mm) || s[17] != ':') return std::nullopt;
    if (!take_digits(s, 18, 2, ss) || s[20] != ' ') return std::nullopt;
    const char sign = s[21];
    if (sign != '+' && sign != '-') return std::nullopt;
    if (!take_digits(s, 22, 4, off)) return std::nullopt;
    const int off_h = off / 100, off_m = off % 100;
    if (hh > 23 || mm > 59 || ss > 59 || off_h > 23 || off_m > 59) return std::nullopt;
    if (!is_valid_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day)))
        return std::nullopt;

    const std::int64_t local =
        days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day)) * 86400 +
        hh * 3600 + mm * 60 + ss;
    const int offset_min = (sign == '-' ? -1 : 1) * (off_h * 60 + off_m);
    Timestamp ts;
    ts.offset_minutes = static_cast<std::int16_t>(offset_min);
    ts.epoch = local - static_cast<std::int64_t>(offset_min) * 60;
    return ts;
}

std::string format_clf_timestamp(const Timestamp &ts) {
    const std::int64_t local = ts.epoch + static_cast<std::int64_t>(ts.offset_minutes) * 60;
    std::int64_t days = local / 86400;
    std::int64_t sod = local % 86400;
    if (sod < 0) {
        sod += 86400;
        days -= 1;
    }
    int year;
    unsigned month, day;
    civil_from_days(days, year, month, day);
    const int hh = static_cast<int>(sod / 3600);
    const int mm = static_cast<int>(sod % 3600 / 60);
    const int ss = static_cast<int>(sod % 60);
    const int off = ts.offset_minutes;
    const char sign = off < 0 ? '-' : '+';
    const int aoff = off < 0 ? -off : off;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%02u/%s/%04d:%02d:%02d:%02d %c%02d%02d", day,
                  kMonthNames[month - 1], year, hh, mm, ss, sign, aoff / 60, aoff % 60);
    return buf;
}

std::optional<EpochSeconds> parse_utc_instant(std::string_view s) {
    int year = 0, month = 0, day = 0, hh = 0, mm = 0, ss = 0;
    if (s.size() != 10 && s.size() != 19) return std::nullopt;
    if (!take_digits(s, 0, 4, year) || s[4] != '-') return std::nullopt;
    if (!take_digits(s, 5, 2, month) || s[7] != '-') return std::nullopt;
    if (!take_digits(s, 8, 2, day)) return std::nullopt;
    if (s.size() == 19) {
        if (s[10] != 'T' && s[10] != ' ') return std::nullopt;
        if (!take_digits(s, 11, 2, hh) || s[13] != ':') return std::nullopt;
        if (!take_digits(s, 14, 2, mm) || s[16] != ':') return std::nullopt;
        if (!take_digits(s, 17, 2, ss)) return std::nullopt;
        if (hh > 23 || mm > 59 || ss > 59) return std::nullopt;
    }
    if (!is_valid_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day)))
        return std::nullopt;
    return days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day)) * 86400 +
           hh * 3600 + mm * 60 + ss;
}

std::int64_t utc_day_of(EpochSeconds epoch) {
    std::int64_t d = epoch / 86400;
    if (epoch % 86400 < 0) d -= 1;
    return d;
}

}  // namespace relmine
