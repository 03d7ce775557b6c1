#ifndef SENTPW_NUMFMT_HPP
#define SENTPW_NUMFMT_HPP

#include <string>
#include <string_view>

namespace sentpw {

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

// Throws std::invalid_argument unless the whole string is a number.
double parse_double(std::string_view text);

}  // namespace sentpw

#endif  // SENTPW_NUMFMT_HPP
