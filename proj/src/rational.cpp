#include "balance/rational.hpp"

#include <charconv>
#include <limits>

#include "balance/errors.hpp"

namespace balance {
namespace {

std::int64_t parse_int(std::string_view digits, std::string_view whole) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty()) {
    throw Error("malformed number '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw Error("empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::int64_t num = parse_int(text.substr(0, slash), text);
    std::int64_t den = parse_int(text.substr(slash + 1), text);
    if (den == 0) throw Error("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    if (frac_part.empty() || frac_part.size() > 15) {
      throw Error("malformed number '" + std::string(text) + "'");
    }
    bool negative = !int_part.empty() && int_part.front() == '-';
    if (negative || (!int_part.empty() && int_part.front() == '+')) int_part.remove_prefix(1);
    std::int64_t scale = 1;
    for (std::size_t k = 0; k < frac_part.size(); ++k) scale *= 10;
    std::int64_t whole = int_part.empty() ? 0 : parse_int(int_part, text);
    std::int64_t frac = parse_int(frac_part, text);
    if (frac < 0) throw Error("malformed number '" + std::string(text) + "'");
    if (whole > (std::numeric_limits<std::int64_t>::max() - frac) / scale) {
      throw Error("number out of range '" + std::string(text) + "'");
    }
    std::int64_t num = whole * scale + frac;
    return Rational(negative ? -num : num, scale);
  }
  return Rational(parse_int(text, text));
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace balance
