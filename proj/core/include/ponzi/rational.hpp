#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

#include "ponzi/types.hpp"

namespace ponzi {

// Exact arithmetic for USD accounting: all aggregation happens on
// rationals, rounding only when a value is serialized.
using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

BigInt bigint_from_u128(u128 v);

// "10.5" -> 21/2. Accepts an optional sign, digits, optional '.' + digits.
Rat parse_decimal(std::string_view text);

// Nearest integer multiple of 10^-places, ties to even.
BigInt round_half_even_scaled(const Rat& value, unsigned places);

// Fixed-point rendering with half-even rounding, e.g. format_decimal(r, 6)
// -> "5.250000".
std::string format_decimal(const Rat& value, unsigned places);

double to_double(const Rat& value);

} // namespace ponzi
