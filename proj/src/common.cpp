#include "loadshift/common.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

namespace loadshift {

// Civil-date conversions follow the well-known era-based algorithm
// (shifts the year so the leap day is the last day of the cycle).
std::int64_t days_from_civil(const CivilDate& d) {
    std::int64_t y = d.year;
    const int m = d.month;
    const int day = d.day;
    y -= m <= 2 ? 1 : 0;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 +
                         static_cast<unsigned>(day) - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return CivilDate{static_cast<int>(y + (m <= 2 ? 1 : 0)), static_cast<int>(m),
                     static_cast<int>(d)};
}

bool is_leap_year(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
    static const int lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap_year(year)) return 29;
    return lengths[month - 1];
}

int day_of_week(const CivilDate& d) {
    // 1970-01-01 was a Thursday; 0 = Monday.
    const std::int64_t days = days_from_civil(d);
    return static_cast<int>(((days + 3) % 7 + 7) % 7);
}

HourStamp hour_floor(std::int64_t s) {
    // Truncation toward minus infinity so pre-1970 stamps bucket correctly.
    return s >= 0 ? s / 3600 : (s - 3599) / 3600;
}

std::int64_t unix_seconds(HourStamp hour) { return hour * 3600; }

CivilDateTime civil_from_hour(HourStamp hour) {
    std::int64_t days = hour >= 0 ? hour / 24 : (hour - 23) / 24;
    int hod = static_cast<int>(hour - days * 24);
    return CivilDateTime{civil_from_days(days), hod};
}

HourStamp hour_from_civil(const CivilDate& date, int hour_of_day) {
    return days_from_civil(date) * 24 + hour_of_day;
}

CivilDate parse_date(const std::string& text) {
    int y = 0, m = 0, d = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%d-%d-%d%c", &y, &m, &d, &tail) != 3)
        throw UserError("invalid date '" + text + "', expected YYYY-MM-DD");
    if (m < 1 || m > 12 || d < 1 || d > days_in_month(y, m))
        throw UserError("invalid date '" + text + "'");
    return CivilDate{y, m, d};
}

bool try_parse_datetime(const std::string& text, std::int64_t& out) {
    if (text.empty()) return false;
    // Plain integer => Unix seconds.
    bool all_digits = true;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (i == 0 && (text[i] == '-' || text[i] == '+')) continue;
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) { all_digits = false; break; }
    }
    if (all_digits) {
        try {
            out = std::stoll(text);
            return true;
        } catch (...) {
            return false;
        }
    }
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    char sep = 0;
    int n = std::sscanf(text.c_str(), "%d-%d-%d%c%d:%d:%d", &y, &mo, &d, &sep, &h, &mi, &s);
    if (n < 3) return false;
    if (n >= 4 && sep != ' ' && sep != 'T') return false;
    if (mo < 1 || mo > 12 || d < 1 || d > days_in_month(y, mo)) return false;
    if (h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 60) return false;
    out = (days_from_civil(CivilDate{y, mo, d}) * 24 + h) * 3600 + mi * 60 + s;
    return true;
}

std::string format_date(const CivilDate& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

std::string format_hour(HourStamp hour) {
    const CivilDateTime c = civil_from_hour(hour);
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:00", c.date.year, c.date.month,
                  c.date.day, c.hour);
    return buf;
}

void Fnv1a::update(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        state ^= p[i];
        state *= 0x100000001b3ULL;
    }
}

std::uint64_t hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UserError("cannot read file: " + path);
    Fnv1a h;
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    return h.digest();
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace loadshift
