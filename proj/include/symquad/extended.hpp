#pragma once

// 113-bit software floating point used for rule storage and refinement.
#include <boost/multiprecision/float128.hpp>

#include <string>

namespace symquad {

using Extended = boost::multiprecision::float128;

/// Scientific notation with `digits` significant digits.
std::string format_extended(const Extended& v, int digits);
Extended parse_extended(const std::string& text);

} // namespace symquad
