#include "veto/rational.hpp"

#include <cstdint>
#include <limits>

#include "veto/errors.hpp"

namespace veto {
namespace {

bool valid_integer(std::string_view s, bool allow_sign) {
  if (!s.empty() && allow_sign && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char ch : s) {
    if (ch < '0' || ch > '9') return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
  if (!valid_integer(num, true) || !valid_integer(den, false)) {
    throw ParseError(0, "malformed rational '" + std::string(text) + "'");
  }
  std::string num_str(num);
  if (num_str.front() == '+') num_str.erase(0, 1);
  BigInt n(num_str, 10);
  BigInt d(std::string(den), 10);
  if (d == 0) throw ParseError(0, "zero denominator in '" + std::string(text) + "'");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string format_rational(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

bool is_integral(const Rational& value) { return value.get_den() == 1; }

BigInt denominator_lcm(std::span<const Rational> values) {
  BigInt result = 1;
  for (const auto& v : values) {
    mpz_lcm(result.get_mpz_t(), result.get_mpz_t(), v.get_den_mpz_t());
  }
  return result;
}

std::uint64_t to_u64(const Rational& value) {
  if (!is_integral(value) || value < 0) throw Error("expected a non-negative integer, got " + format_rational(value));
  const BigInt& n = value.get_num();
  if (mpz_sizeinbase(n.get_mpz_t(), 2) > 64) throw LimitError("integer too large: " + n.get_str());
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, n.get_mpz_t());
  return out;
}

}  // namespace veto
