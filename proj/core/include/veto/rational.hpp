#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace veto {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "a", "a/b" or "-a/b" (decimal integers). The result is canonical.
/// Throws ParseError on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Always "num/den" in lowest terms, "3/1" for integers.
std::string format_rational(const Rational& value);

bool is_integral(const Rational& value);

/// Least common multiple of the denominators; 1 for an empty range.
BigInt denominator_lcm(std::span<const Rational> values);

/// Throws if the value does not fit an unsigned 64-bit integer or is not integral.
std::uint64_t to_u64(const Rational& value);

}  // namespace veto
