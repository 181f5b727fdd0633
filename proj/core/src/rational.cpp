#include "ponzi/rational.hpp"

namespace ponzi {

BigInt bigint_from_u128(u128 v) {
    BigInt hi = static_cast<std::uint64_t>(v >> 64);
    BigInt lo = static_cast<std::uint64_t>(v);
    return (hi << 64) | lo;
}

Rat parse_decimal(std::string_view text) {
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        negative = s[0] == '-';
        s.remove_prefix(1);
    }
    if (s.empty()) throw Error("bad decimal '" + std::string(text) + "'");

    BigInt num = 0;
    BigInt den = 1;
    bool seen_dot = false;
    bool seen_digit = false;
    for (char c : s) {
        if (c == '.') {
            if (seen_dot) throw Error("bad decimal '" + std::string(text) + "'");
            seen_dot = true;
            continue;
        }
        if (c < '0' || c > '9') throw Error("bad decimal '" + std::string(text) + "'");
        seen_digit = true;
        num = num * 10 + (c - '0');
        if (seen_dot) den *= 10;
    }
    if (!seen_digit) throw Error("bad decimal '" + std::string(text) + "'");
    if (negative) num = -num;
    return Rat(num, den);
}

BigInt round_half_even_scaled(const Rat& value, unsigned places) {
    BigInt scale = 1;
    for (unsigned i = 0; i < places; ++i) scale *= 10;
    BigInt num = numerator(value) * scale;
    BigInt den = denominator(value); // cpp_rational keeps den > 0
    BigInt q = num / den;
    BigInt r = num - q * den; // same sign as num
    if (r < 0) {
        q -= 1;
        r += den;
    }
    // now 0 <= r < den and q = floor(num/den)
    BigInt twice = r * 2;
    if (twice > den || (twice == den && (q & 1) != 0)) q += 1;
    return q;
}

std::string format_decimal(const Rat& value, unsigned places) {
    BigInt scaled = round_half_even_scaled(value, places);
    bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    std::string digits = scaled.str();
    if (places == 0) return (negative ? "-" : "") + digits;
    if (digits.size() <= places) digits.insert(0, places + 1 - digits.size(), '0');
    digits.insert(digits.size() - places, 1, '.');
    return (negative ? "-" : "") + digits;
}

double to_double(const Rat& value) {
    return value.convert_to<double>();
}

} // namespace ponzi
