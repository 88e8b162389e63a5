#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace loadshift {

inline constexpr const char* kVersion = "0.1.0";

/// Raised on invalid user input (bad files, bad flags, out-of-range requests).
/// The CLI maps it to exit code 1; anything else is an internal error (exit 2).
class UserError : public std::runtime_error {
public:
    explicit UserError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Time. Everything is UTC; hours are the only resolution the pipeline uses,
// so the working unit is "hours since the Unix epoch".
// ---------------------------------------------------------------------------

using HourStamp = std::int64_t;

struct CivilDate {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31
    bool operator==(const CivilDate&) const = default;
};

struct CivilDateTime {
    CivilDate date;
    int hour = 0;  // 0..23
};

std::int64_t days_from_civil(const CivilDate& d);
CivilDate civil_from_days(std::int64_t days);
bool is_leap_year(int year);
int days_in_month(int year, int month);

/// 0 = Monday .. 6 = Sunday.
int day_of_week(const CivilDate& d);

HourStamp hour_floor(std::int64_t unix_seconds);
std::int64_t unix_seconds(HourStamp hour);
CivilDateTime civil_from_hour(HourStamp hour);
HourStamp hour_from_civil(const CivilDate& date, int hour_of_day);

/// Parses "YYYY-MM-DD". Throws UserError on malformed input.
CivilDate parse_date(const std::string& text);

/// Parses "YYYY-MM-DD[ T]HH[:MM[:SS]]", a bare date (midnight), or a plain
/// integer of Unix seconds. Returns Unix seconds; false if unparseable.
bool try_parse_datetime(const std::string& text, std::int64_t& out_unix_seconds);

std::string format_date(const CivilDate& d);
std::string format_hour(HourStamp hour);  // "YYYY-MM-DDTHH:00"

// ---------------------------------------------------------------------------
// Hashing (FNV-1a, 64 bit) for run manifests and test-set fingerprints.
// ---------------------------------------------------------------------------

struct Fnv1a {
    std::uint64_t state = 0xcbf29ce484222325ULL;
    void update(const void* data, std::size_t n);
    void update(const std::string& s) { update(s.data(), s.size()); }
    template <typename T>
    void update_pod(const T& v) { update(&v, sizeof(T)); }
    std::uint64_t digest() const { return state; }
};

std::uint64_t hash_file(const std::string& path);  // throws UserError if unreadable
std::string hex64(std::uint64_t v);

/// Splitmix-style mixer; derives stable per-task seeds from a base seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt);

}  // namespace loadshift
