#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "symquad/rule.hpp"

namespace symquad {

/// Significant digits: 17 round-trips doubles, 34 keeps extended values.
inline constexpr int kDoubleDigits = 17;
inline constexpr int kExtendedDigits = 34;

/// Rule file text:
///   <domain> <phi> <Np>
///   <orbit_id> <param_1> ... <param_k> <weight>   (one line per orbit)
std::string format_rule(const QuadratureRule& rule, int digits = kDoubleDigits);

/// Expanded text, one `x y [z] w` line per point.
std::string format_expanded(const QuadratureRule& rule, int digits = kDoubleDigits);

/// Throws RuleFormatError carrying the offending line number. `source` only
/// prefixes messages.
QuadratureRule parse_rule(std::string_view text, std::string_view source = "<rule>");

QuadratureRule read_rule_file(const std::filesystem::path& path);
void write_rule_file(const std::filesystem::path& path, const QuadratureRule& rule, int digits = kDoubleDigits);

/// `digits` significant digits in scientific notation; at 17 or fewer the
/// value is first rounded to double.
std::string format_value(const Extended& v, int digits);

} // namespace symquad
