#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace relmine {

// Seconds since the Unix epoch, UTC.
using EpochSeconds = std::int64_t;

// An instant plus the zone offset it was logged with. Comparisons and
// window membership use the UTC epoch only.
struct Timestamp {
    EpochSeconds epoch = 0;
    std::int16_t offset_minutes = 0;

    friend bool operator==(const Timestamp &a, const Timestamp &b) {
        return a.epoch == b.epoch && a.offset_minutes == b.offset_minutes;
    }
    friend bool operator<(const Timestamp &a, const Timestamp &b) { return a.epoch < b.epoch; }
};

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(int year, unsigned month, unsigned day);
void civil_from_days(std::int64_t days, int &year, unsigned &month, unsigned &day);

bool is_valid_civil(int year, unsigned month, unsigned day);

// Strict CLF timestamp: dd/Mon/yyyy:HH:MM:SS +zzzz
std::optional<Timestamp> parse_clf_timestamp(std::string_view text);
std::string format_clf_timestamp(const Timestamp &ts);

// "YYYY-MM-DD" (midnight UTC) or "YYYY-MM-DDTHH:MM:SS" (UTC).
std::optional<EpochSeconds> parse_utc_instant(std::string_view text);

// UTC calendar day index of an instant (floor division by 86400).
std::int64_t utc_day_of(EpochSeconds epoch);

}  // namespace relmine
