#include "ponzi/types.hpp"

#include <cstdio>

namespace ponzi {

std::string to_string(u128 v) {
    if (v == 0) return "0";
    char buf[40];
    char* p = buf + sizeof(buf);
    while (v > 0) {
        *--p = static_cast<char>('0' + static_cast<unsigned>(v % 10));
        v /= 10;
    }
    return std::string(p, buf + sizeof(buf));
}

std::string to_string_signed(i128 v) {
    if (v < 0) return "-" + to_string(static_cast<u128>(-v));
    return to_string(static_cast<u128>(v));
}

u128 parse_u128(std::string_view text) {
    if (text.empty()) throw Error("empty integer");
    constexpr u128 kMax = ~u128{0};
    u128 v = 0;
    for (char c : text) {
        if (c < '0' || c > '9') throw Error("bad integer '" + std::string(text) + "'");
        unsigned digit = static_cast<unsigned>(c - '0');
        if (v > (kMax - digit) / 10) throw Error("integer overflow '" + std::string(text) + "'");
        v = v * 10 + digit;
    }
    return v;
}

namespace {

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace

std::optional<Address> Address::try_parse(std::string_view text) {
    if (text.size() != 42 || text[0] != '0' || (text[1] != 'x' && text[1] != 'X'))
        return std::nullopt;
    Address a;
    for (std::size_t i = 0; i < 20; ++i) {
        int hi = hex_digit(text[2 + 2 * i]);
        int lo = hex_digit(text[3 + 2 * i]);
        if (hi < 0 || lo < 0) return std::nullopt;
        a.bytes[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return a;
}

Address Address::parse(std::string_view text) {
    auto a = try_parse(text);
    if (!a) throw Error("bad address '" + std::string(text) + "'");
    return *a;
}

std::string Address::str() const {
    static const char* digits = "0123456789abcdef";
    std::string s = "0x";
    s.reserve(42);
    for (auto b : bytes) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xf]);
    }
    return s;
}

// Howard Hinnant's civil-date algorithms.
EpochDay days_from_civil(const CivilDate& d) {
    int y = d.year;
    unsigned m = d.month;
    unsigned day = d.day;
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + day - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<EpochDay>(era * 146097 + static_cast<int>(doe) - 719468);
}

CivilDate civil_from_days(EpochDay day) {
    int z = day + 719468;
    const int era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int y = static_cast<int>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return CivilDate{y + (m <= 2), m, d};
}

namespace {

bool parse_fixed_uint(std::string_view s, std::size_t pos, std::size_t len, unsigned& out) {
    unsigned v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        if (i >= s.size() || s[i] < '0' || s[i] > '9') return false;
        v = v * 10 + static_cast<unsigned>(s[i] - '0');
    }
    out = v;
    return true;
}

bool valid_ymd(unsigned y, unsigned mo, unsigned d) {
    if (mo < 1 || mo > 12 || d < 1) return false;
    static const unsigned len[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    unsigned max = len[mo - 1];
    if (mo == 2 && (y % 4 == 0 && (y % 100 != 0 || y % 400 == 0))) max = 29;
    return d <= max;
}

} // namespace

EpochDay parse_date(std::string_view text) {
    unsigned y, mo, d;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
        !parse_fixed_uint(text, 0, 4, y) || !parse_fixed_uint(text, 5, 2, mo) ||
        !parse_fixed_uint(text, 8, 2, d) || !valid_ymd(y, mo, d))
        throw Error("bad date '" + std::string(text) + "' (want YYYY-MM-DD)");
    return days_from_civil({static_cast<int>(y), mo, d});
}

UnixSeconds parse_datetime(std::string_view text) {
    // YYYY-MM-DDTHH:MM:SSZ
    unsigned h, mi, s;
    if (text.size() != 20 || text[10] != 'T' || text[13] != ':' || text[16] != ':' ||
        text[19] != 'Z' || !parse_fixed_uint(text, 11, 2, h) ||
        !parse_fixed_uint(text, 14, 2, mi) || !parse_fixed_uint(text, 17, 2, s) ||
        h > 23 || mi > 59 || s > 59)
        throw Error("bad timestamp '" + std::string(text) + "' (want YYYY-MM-DDTHH:MM:SSZ)");
    EpochDay day = parse_date(text.substr(0, 10));
    return static_cast<UnixSeconds>(day) * 86400 + h * 3600 + mi * 60 + s;
}

std::string format_date(EpochDay day) {
    CivilDate c = civil_from_days(day);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", c.year, c.month, c.day);
    return buf;
}

std::string format_year_month(EpochDay day) {
    CivilDate c = civil_from_days(day);
    char buf[12];
    std::snprintf(buf, sizeof(buf), "%04d-%02u", c.year, c.month);
    return buf;
}

std::string format_datetime(UnixSeconds t) {
    EpochDay day = day_of(t);
    std::int64_t rem = t - static_cast<std::int64_t>(day) * 86400;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "T%02d:%02d:%02dZ", static_cast<int>(rem / 3600),
                  static_cast<int>(rem / 60 % 60), static_cast<int>(rem % 60));
    return format_date(day) + buf;
}

} // namespace ponzi
