#include "symquad/rule_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace symquad {

std::string format_value(const Extended& v, int digits) {
  if (digits <= kDoubleDigits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", digits - 1, static_cast<double>(v));
    return buf;
  }
  return format_extended(v, digits);
}

std::string format_rule(const QuadratureRule& rule, int digits) {
  std::ostringstream os;
  os << short_name(rule.kind()) << ' ' << rule.strength() << ' ' << rule.point_count() << '\n';
  for (const auto& t : rule.terms()) {
    os << t.orbit_id;
    for (const auto& p : t.params) os << ' ' << format_value(p, digits);
    os << ' ' << format_value(t.weight, digits) << '\n';
  }
  return os.str();
}

std::string format_expanded(const QuadratureRule& rule, int digits) {
  std::ostringstream os;
  const int dim = rule.domain().dimension;
  const auto pts = rule.points<Extended>();
  const auto wts = rule.point_weights<Extended>();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int c = 0; c < dim; ++c) os << format_value(pts[i][static_cast<std::size_t>(c)], digits) << ' ';
    os << format_value(wts[i], digits) << '\n';
  }
  return os.str();
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

bool parse_int(const std::string& s, int& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

} // namespace

QuadratureRule parse_rule(std::string_view text, std::string_view source) {
  const std::string src(source);
  auto fail = [&](std::size_t line, const std::string& msg) -> RuleFormatError {
    return RuleFormatError(src + ":" + std::to_string(line) + ": " + msg, line);
  };

  std::istringstream is{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  std::size_t header_line = 0;
  std::optional<DomainKind> kind;
  int phi = 0, np = 0;
  std::vector<OrbitTerm> terms;
  int orbit_points = 0;

  while (std::getline(is, line)) {
    ++lineno;
    const auto tok = split(line);
    if (tok.empty()) continue;
    if (!kind) {
      header_line = lineno;
      if (tok.size() != 3) throw fail(lineno, "header must be '<domain> <phi> <Np>'");
      kind = parse_domain(tok[0]);
      if (!kind) throw fail(lineno, "unknown domain '" + tok[0] + "'");
      if (!parse_int(tok[1], phi) || phi < 0) throw fail(lineno, "bad strength '" + tok[1] + "'");
      if (!parse_int(tok[2], np) || np < 1) throw fail(lineno, "bad point count '" + tok[2] + "'");
      continue;
    }
    const Domain& d = domain(*kind);
    OrbitTerm t;
    if (!parse_int(tok[0], t.orbit_id)) throw fail(lineno, "bad orbit id '" + tok[0] + "'");
    if (t.orbit_id < 1 || t.orbit_id > static_cast<int>(d.orbits.size())) {
      throw fail(lineno, "orbit id " + tok[0] + " out of range 1.." + std::to_string(d.orbits.size()) + " for " +
                             std::string(short_name(*kind)));
    }
    const auto& orbit = d.orbit(t.orbit_id);
    const std::size_t expected = static_cast<std::size_t>(orbit.param_count) + 1;
    if (tok.size() - 1 != expected) {
      throw fail(lineno, "S" + tok[0] + " needs " + std::to_string(orbit.param_count) +
                             " parameter(s) and a weight, found " + std::to_string(tok.size() - 1) + " value(s)");
    }
    std::vector<Extended> values;
    for (std::size_t k = 1; k < tok.size(); ++k) {
      try {
        values.push_back(parse_extended(tok[k]));
      } catch (const std::invalid_argument&) {
        throw fail(lineno, "bad number '" + tok[k] + "'");
      }
    }
    t.weight = values.back();
    values.pop_back();
    t.params = std::move(values);
    orbit_points += orbit.point_count;
    terms.push_back(std::move(t));
  }
  if (!kind) throw fail(0, "empty rule file");
  if (terms.empty()) throw fail(header_line, "rule has no orbits");
  if (orbit_points != np) {
    throw fail(header_line, "point count mismatch: header says " + std::to_string(np) + " but orbits expand to " +
                                std::to_string(orbit_points));
  }
  return QuadratureRule(*kind, phi, std::move(terms));
}

QuadratureRule read_rule_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw RuleFormatError(path.string() + ": cannot open", 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_rule(buf.str(), path.string());
}

void write_rule_file(const std::filesystem::path& path, const QuadratureRule& rule, int digits) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path.string() + ": cannot write");
  out << format_rule(rule, digits);
  if (!out) throw Error(path.string() + ": write failed");
}

} // namespace symquad
