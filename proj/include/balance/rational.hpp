#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace balance {

using Rational = boost::rational<std::int64_t>;

/// Parses "3", "-2", "31/10" or a finite decimal such as "3.1" (read as 31/10).
/// Throws balance::Error on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// "5", "-7", "51/10".
std::string to_string(const Rational& r);

}  // namespace balance
