#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ponzi {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// All on-chain value is integer wei; 128 bits covers any plausible ledger
// (10^26 wei summed over millions of rows stays far below 2^128).
using u128 = unsigned __int128;
using i128 = __int128;
using Wei = u128;

inline constexpr Wei kWeiPerEth = 1'000'000'000'000'000'000ULL;

std::string to_string(u128 v);
std::string to_string_signed(i128 v);
u128 parse_u128(std::string_view text);

inline Wei eth_to_wei(std::uint64_t eth) { return Wei(eth) * kWeiPerEth; }

// A 160-bit account identifier. Canonical text form is "0x" followed by
// 40 lowercase hex digits; parsing accepts any case.
struct Address {
    std::array<std::uint8_t, 20> bytes{};

    static Address parse(std::string_view text);
    static std::optional<Address> try_parse(std::string_view text);
    std::string str() const;

    auto operator<=>(const Address&) const = default;
    bool is_null() const { return *this == Address{}; }
};

inline const Address kNullAddress{};

// Seconds since the Unix epoch, UTC. Only the fixed "YYYY-MM-DDTHH:MM:SSZ"
// form is accepted on input.
using UnixSeconds = std::int64_t;
// Days since 1970-01-01, UTC.
using EpochDay = std::int32_t;

struct CivilDate {
    int year;
    unsigned month;
    unsigned day;
};

EpochDay days_from_civil(const CivilDate& d);
CivilDate civil_from_days(EpochDay day);

UnixSeconds parse_datetime(std::string_view text);
std::string format_datetime(UnixSeconds t);
EpochDay parse_date(std::string_view text);
std::string format_date(EpochDay day);
std::string format_year_month(EpochDay day);

inline EpochDay day_of(UnixSeconds t) {
    // floor division; pre-epoch timestamps round toward -inf
    std::int64_t d = t / 86400;
    if (t % 86400 < 0) --d;
    return static_cast<EpochDay>(d);
}

} // namespace ponzi

template <>
struct std::hash<ponzi::Address> {
    std::size_t operator()(const ponzi::Address& a) const noexcept {
        std::size_t h = 14695981039346656037ULL;
        for (auto b : a.bytes) {
            h ^= b;
            h *= 1099511628211ULL;
        }
        return h;
    }
};
