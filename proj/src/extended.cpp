#include "symquad/extended.hpp"

#include <quadmath.h>

#include <cctype>
#include <stdexcept>
#include <vector>

namespace symquad {

std::string format_extended(const Extended& v, int digits) {
  if (digits < 1) digits = 1;
  const __float128 raw = v.backend().value();
  std::vector<char> buf(64 + static_cast<std::size_t>(digits));
  const int n = quadmath_snprintf(buf.data(), buf.size(), "%.*Qe", digits - 1, raw);
  if (n < 0 || static_cast<std::size_t>(n) >= buf.size()) throw std::runtime_error("format_extended failed");
  return std::string(buf.data(), static_cast<std::size_t>(n));
}

Extended parse_extended(const std::string& text) {
  if (text.empty() || std::isspace(static_cast<unsigned char>(text.front()))) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  char* end = nullptr;
  const __float128 v = strtoflt128(text.c_str(), &end);
  if (end != text.c_str() + text.size()) throw std::invalid_argument("not a number: '" + text + "'");
  return Extended(v);
}

} // namespace symquad
