#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string>
#include <string_view>

namespace nucalab {

using Rat = boost::rational<std::int64_t>;

inline double to_double(const Rat& r) { return boost::rational_cast<double>(r); }

// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rat& r);

// Accepts "p", "p/q"; throws ParseError.
Rat parse_rational(std::string_view text);

}  // namespace nucalab
